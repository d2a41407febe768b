// Copyright 2026 The OnOff Privacy Authors
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

#ifndef ONOFF_RNG_H_
#define ONOFF_RNG_H_

#include <cstdint>

namespace onoff {

// SplitMix64 (Steele, Lea and Flood 2014). Every draw is defined by integer
// arithmetic only, so traces are bit-identical across platforms and standard
// library implementations. Split(k) derives an independent stream keyed by k
// without advancing the parent, which lets Monte Carlo sessions be seeded by
// index and run in any order.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  uint64_t NextU64() {
    state_ += kGamma;
    return Mix(state_);
  }

  // Uniform on [0, 1) with 53 bits of resolution.
  double NextUniform() {
    return static_cast<double>(NextU64() >> 11) * 0x1.0p-53;
  }

  Rng Split(uint64_t stream) const {
    return Rng(Mix(state_ ^ Mix(stream + kGamma)));
  }

  uint64_t state() const { return state_; }

  static uint64_t Mix(uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  static constexpr uint64_t kGamma = 0x9e3779b97f4a7c15ULL;
  uint64_t state_;
};

}  // namespace onoff

#endif  // ONOFF_RNG_H_
