// Copyright 2026 The ovlift Authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace ovlift {

// Base class for all errors raised by the library. The CLI maps these to
// process exit codes: ProviderError -> 2, everything else -> 1.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Invalid configuration: out-of-range parameters, degenerate intrinsics,
// incompatible voxel sizes.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(what) {}
};

// Structurally well-formed input that violates a semantic contract:
// mismatched dimensions, unknown categories, inconsistent scores.
class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what) : Error(what) {}
};

// Malformed file or response content. Messages carry "<file>:<line>:" style
// locations where available.
class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what) : Error(what) {}
};

// Remote model-provider failure (transport error or non-success status after
// the retry budget is exhausted).
class ProviderError : public Error {
 public:
  explicit ProviderError(const std::string& what) : Error(what) {}
};

}  // namespace ovlift
