// Copyright 2026 The posekit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace posekit {

/// Base class for all posekit errors.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Malformed relational graph: cycles, disconnected components, bad root.
class StructureError : public Error {
  public:
    using Error::Error;
};

/// Inputs violate a documented invariant (missing weights, empty groups,
/// mismatched frames, records failing validation, ...).
class DataError : public Error {
  public:
    using Error::Error;
};

/// Caller passed an out-of-domain argument (k = 0, cap = 0, ...).
class ArgumentError : public Error {
  public:
    using Error::Error;
};

/// A required configuration entry is absent or out of range.
class ConfigError : public Error {
  public:
    using Error::Error;
};

/// Input file could not be parsed; messages carry file:line context.
class ParseError : public Error {
  public:
    using Error::Error;
};

/// Filesystem failure while reading or writing.
class IoError : public Error {
  public:
    using Error::Error;
};

} // namespace posekit
