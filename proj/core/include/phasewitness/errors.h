// Copyright 2026 The phasewitness Authors
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

#ifndef PHASEWITNESS_ERRORS_H
#define PHASEWITNESS_ERRORS_H

#include <stdexcept>
#include <string>

namespace phasewitness {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// Inputs outside their domain (bad efficiency, malformed state file, ...).
/// The CLI maps these to exit status 2.
class ConfigError : public Error {
   public:
    using Error::Error;
};

/// A density matrix violated one of its invariants. The message names it.
class InvalidState : public ConfigError {
   public:
    using ConfigError::ConfigError;
};

/// Closed forms exist only for the two built-in model families.
class UnsupportedModel : public ConfigError {
   public:
    using ConfigError::ConfigError;
};

/// Truncation or padding failures. The CLI maps these to exit status 3.
class NumericError : public Error {
   public:
    using Error::Error;
};

class CutoffTooSmall : public NumericError {
   public:
    using NumericError::NumericError;
};

class PaddingInsufficient : public NumericError {
   public:
    using NumericError::NumericError;
};

/// Raised by threshold search when no scanned efficiency violates the bound.
class NoViolation : public Error {
   public:
    using Error::Error;
};

}  // namespace phasewitness

#endif
