// Copyright 2026 The dpapsd Authors
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

#ifndef DPAPSD_ERRORS_HPP_
#define DPAPSD_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace dpapsd {

// Malformed input: bad vertex ids, duplicate edges, unparsable files.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Privacy or algorithm parameters outside their admissible range.
class ParameterError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A separator strategy cannot be applied to the given topology.
class StrategyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A valid separator exists only above the size cap p.
class CapExceededError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// No balanced separator could be found at all.
class NoSeparatorError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Recursive reconstruction called with k > 0 but neither endpoint in the
// parent separator.
class FailError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace dpapsd

#endif  // DPAPSD_ERRORS_HPP_
