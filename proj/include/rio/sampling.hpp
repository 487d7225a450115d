// Copyright 2026 the rio-cqed authors
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

#include <numbers>
#include <random>

#include "rio/protocol.hpp"

namespace rio {

/// splitmix64 step, used to spread a base seed over case coordinates so each
/// case draws from an independent stream regardless of iteration order.
inline uint64_t mix_seed(uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

inline uint64_t derive_seed(uint64_t base, uint64_t a, uint64_t b = 0, uint64_t c = 0) {
  return mix_seed(mix_seed(mix_seed(base ^ a) ^ b) ^ c);
}

/// Haar-uniform pure state: normalized vector of standard complex Gaussians.
inline StateVector haar_state(std::vector<int> dims, std::mt19937_64& rng) {
  Eigen::Index total = 1;
  for (int d : dims) total *= d;
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vector amps(total);
  for (Eigen::Index k = 0; k < total; ++k) amps(k) = cxd(gauss(rng), gauss(rng));
  return StateVector(std::move(dims), std::move(amps));
}

/// Four independent phases uniform on the unit circle.
inline DiagonalPhases random_phases(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  std::array<cxd, 4> t;
  for (auto& v : t) v = std::exp(cxd(0.0, angle(rng)));
  return DiagonalPhases(t);
}

}  // namespace rio
