// Copyright 2026 The uavbench Authors
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

#include <cstdint>
#include <stdexcept>
#include <string>

namespace uavbench {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller violated a precondition (bad index, bad size, bad option).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Input data is malformed, missing, or inconsistent with its schema.
class DataError : public Error {
 public:
  using Error::Error;
};

/// The evaluation protocol cannot proceed for a given seed, e.g. the
/// training split holds a single class.
class ProtocolError : public Error {
 public:
  ProtocolError(std::uint64_t seed, const std::string& what)
      : Error("seed " + std::to_string(seed) + ": " + what), seed_(seed) {}

  std::uint64_t seed() const noexcept { return seed_; }

 private:
  std::uint64_t seed_;
};

namespace detail {

inline void require(bool cond, const char* msg) {
  if (!cond) throw InvalidArgument(msg);
}

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw InvalidArgument(msg);
}

}  // namespace detail

}  // namespace uavbench
