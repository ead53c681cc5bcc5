// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <stdexcept>
#include <string>

namespace starsec {

/// A configuration value violates a model invariant; invariant() names it.
class ConfigError : public std::invalid_argument {
public:
    ConfigError(std::string invariant, const std::string& detail)
        : std::invalid_argument("invariant violated [" + invariant + "]: " + detail),
          invariant_(std::move(invariant)) {}
    const std::string& invariant() const noexcept { return invariant_; }

private:
    std::string invariant_;
};

}  // namespace starsec
