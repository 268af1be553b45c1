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

#include "shapmarl/environment.hpp"

namespace shapmarl {

std::string_view ToString(Role role) {
  switch (role) {
    case Role::kPredator:
      return "predator";
    case Role::kPrey:
      return "prey";
    case Role::kHarvester:
      return "harvester";
  }
  return "unknown";
}

std::string_view ToString(Action action) {
  switch (action) {
    case Action::kNoop:
      return "noop";
    case Action::kUp:
      return "up";
    case Action::kDown:
      return "down";
    case Action::kLeft:
      return "left";
    case Action::kRight:
      return "right";
    case Action::kRotateLeft:
      return "rotate_left";
    case Action::kRotateRight:
      return "rotate_right";
  }
  return "unknown";
}

}  // namespace shapmarl
