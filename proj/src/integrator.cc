// Copyright 2026 The ccfunnel Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ccfunnel/integrator.h"

#include <stdexcept>
#include <string>

namespace ccfunnel {

std::string_view scheme_name(Scheme scheme) {
  return scheme == Scheme::kRk4 ? "rk4" : "euler";
}

Scheme parse_scheme(std::string_view name) {
  if (name == "rk4") return Scheme::kRk4;
  if (name == "euler") return Scheme::kEuler;
  throw std::invalid_argument("unknown integration scheme: " +
                              std::string(name));
}

}  // namespace ccfunnel
