// Copyright 2026 The qbackflow Authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace backflow {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated (bad qubit index, wrong
/// length, out-of-range angle or probability, ...).
class InvalidArgument : public Error {
  public:
    using Error::Error;
};

/// A dense representation was requested above the configured qubit cap.
class DimensionTooLarge : public Error {
  public:
    using Error::Error;
};

/// Externally supplied measurement data is malformed or inconsistent.
class DataError : public Error {
  public:
    using Error::Error;
};

/// An internal consistency check failed (for example norm drift after a
/// gate). Indicates a bug rather than bad input.
class InternalError : public Error {
  public:
    using Error::Error;
};

} // namespace backflow
