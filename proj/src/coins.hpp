// Copyright 2026 the ccdp authors
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

#include "rational.hpp"

namespace ccdp {

// Counter-based coin stream: the draw at (seed, round) is a pure function,
// so replaying an interaction with the same seed reproduces it byte for
// byte and distinct rounds are independent.
class CoinStream {
 public:
  explicit CoinStream(std::uint64_t seed) : seed_(seed) {}

  // Uniform value in [0, n) for n >= 1, derived from (seed, round).
  BigInt uniform(std::uint64_t round, const BigInt& n) const;

 private:
  std::uint64_t seed_;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace ccdp
