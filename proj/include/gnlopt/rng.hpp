// Copyright 2026 The gnlopt Authors
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

// Seeded random streams.
//
// The generator is xoshiro256** (Blackman and Vigna). Its state is filled
// from SplitMix64 applied to a mix of the user seed and a stream id, so
// every field family of an instance draws from its own stream and adding a
// family never shifts the draws of another. All conversions to reals and
// integers are written out here, so the output is identical on every
// platform and standard library.

#ifndef GNLOPT_RNG_HPP_
#define GNLOPT_RNG_HPP_

#include <array>
#include <cstdint>

namespace gnlopt {

std::uint64_t splitmix64(std::uint64_t& state);

class Rng {
 public:
  Rng(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next();
  // Uniform on [0, 1) with 53 random bits.
  double uniform();
  // Uniform on [a, b).
  double uniform(double a, double b);
  // Uniform on (0, 1): [0, 1) with exact zeros redrawn.
  double open_unit();
  // Uniform on (0, 1], realized as 1 - uniform().
  double half_open_unit() { return 1.0 - uniform(); }
  // Uniform integer in [0, n); n must be positive.
  std::uint64_t below(std::uint64_t n);

 private:
  std::array<std::uint64_t, 4> s_{};
};

}  // namespace gnlopt

#endif  // GNLOPT_RNG_HPP_
