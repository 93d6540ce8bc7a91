/*
 * Copyright 2026 The rewa-sketch Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rewa {

// Precondition violations on caller-supplied values.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Witness universe does not fit in the hash field.
class DomainTooLarge : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Monoid element / carrier mismatch.
class TypeError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Encodings built under different headers cannot be compared.
class IncompatibleEncoding : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class DegenerateDesign : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class GenerationFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed serialized encoding. `offset()` is the byte position at which
// decoding stopped.
class FormatError : public std::runtime_error {
 public:
  FormatError(const std::string& what, std::size_t offset)
      : std::runtime_error(what + " at byte offset " + std::to_string(offset)), offset_(offset) {}

  [[nodiscard]] std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

}  // namespace rewa
