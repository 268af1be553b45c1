// Copyright 2026 The shapmarl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SHAPMARL_ERRORS_HPP_
#define SHAPMARL_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace shapmarl {

// Error categories surfaced through the C API as status codes.
enum class ErrorKind {
  kDomain = 1,    // argument outside the mathematical domain of an operation
  kCapacity = 2,  // request exceeds a size or evaluation budget
  kContract = 3,  // caller violated an interface contract (shapes, lengths)
  kParse = 4,     // malformed input text (maps, configs)
  kConfig = 5,    // well-formed config failing validation
  kIo = 6,        // filesystem failure
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what)
      : Error(ErrorKind::kDomain, what) {}
};

class CapacityError : public Error {
 public:
  explicit CapacityError(const std::string& what)
      : Error(ErrorKind::kCapacity, what) {}
};

class ContractError : public Error {
 public:
  explicit ContractError(const std::string& what)
      : Error(ErrorKind::kContract, what) {}
};

// Carries a 1-based source location; line 0 means "whole document".
class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line, int column)
      : Error(ErrorKind::kParse, what + " (line " + std::to_string(line) +
                                     ", column " + std::to_string(column) +
                                     ")"),
        detail_(what),
        line_(line),
        column_(column) {}
  const std::string& detail() const noexcept { return detail_; }
  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  std::string detail_;
  int line_;
  int column_;
};

class ConfigError : public Error {
 public:
  ConfigError(const std::string& field, const std::string& what)
      : Error(ErrorKind::kConfig, field + ": " + what), field_(field), detail_(what) {}
  const std::string& field() const noexcept { return field_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  std::string field_;
  std::string detail_;
};

class IoError : public Error {
 public:
  IoError(const std::string& path, const std::string& what)
      : Error(ErrorKind::kIo, path + ": " + what), path_(path) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

}  // namespace shapmarl

#endif  // SHAPMARL_ERRORS_HPP_
