/*
 * Copyright 2026 The coalex Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "coalex/error.hpp"

namespace coalex {

void throw_invalid(const std::string& message) { throw InvalidArgument(message); }
void throw_input(const std::string& message) { throw InputError(message); }
void throw_invariant(const std::string& message) {
  throw InvariantError(message);
}

}  // namespace coalex
