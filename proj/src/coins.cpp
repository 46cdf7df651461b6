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

#include "coins.hpp"

#include <stdexcept>

namespace ccdp {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

BigInt CoinStream::uniform(std::uint64_t round, const BigInt& n) const {
  if (n < 1) throw std::invalid_argument("CoinStream::uniform: n < 1");
  if (n == 1) return 0;
  unsigned bits = static_cast<unsigned>(boost::multiprecision::msb(n)) + 1;
  std::uint64_t base = splitmix64(seed_ ^ splitmix64(round));
  // Rejection sampling over the next power of two; each attempt re-keys
  // the stream so the draw stays a pure function of (seed, round).
  for (std::uint64_t attempt = 0;; ++attempt) {
    BigInt value = 0;
    unsigned produced = 0;
    std::uint64_t word_index = 0;
    while (produced < bits) {
      std::uint64_t word =
          splitmix64(base ^ splitmix64(attempt * 0x10001ULL + word_index));
      unsigned take = std::min<unsigned>(64, bits - produced);
      value <<= take;
      value |= BigInt(word >> (64 - take));
      produced += take;
      ++word_index;
    }
    if (value < n) return value;
  }
}

}  // namespace ccdp
