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

#ifndef COALEX_ERROR_HPP_
#define COALEX_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace coalex {

// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A caller passed arguments that violate a documented precondition.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Malformed external input: files, JSON, CSV, model specifications.
class InputError : public Error {
 public:
  using Error::Error;
};

// An external scoring process broke the line protocol.
class ProtocolError : public Error {
 public:
  using Error::Error;
};

// A computed result violated an invariant that should hold by construction.
class InvariantError : public Error {
 public:
  using Error::Error;
};

// The requested operation has no implementation for this combination of
// inputs (for example a closed-form game for a non-polynomial model).
class Unsupported : public Error {
 public:
  using Error::Error;
};

[[noreturn]] void throw_invalid(const std::string& message);
[[noreturn]] void throw_input(const std::string& message);
[[noreturn]] void throw_invariant(const std::string& message);

}  // namespace coalex

#endif  // COALEX_ERROR_HPP_
