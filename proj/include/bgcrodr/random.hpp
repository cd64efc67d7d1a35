/*
 *   Copyright 2026 The bgcrodr Authors
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

#include <cstdint>
#include <random>

#include "bgcrodr/dense_block.hpp"

namespace bgcrodr {

using Rng = std::mt19937_64;

/// Uniform [0,1) from the top 53 bits; identical across standard libraries,
/// unlike std::uniform_real_distribution.
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

inline DenseBlock random_block(std::size_t rows, std::size_t cols, std::uint64_t seed, double lo = 0.0,
                               double hi = 1.0) {
    Rng rng(seed);
    DenseBlock b(rows, cols);
    for (auto& v : b.values()) v = lo + (hi - lo) * uniform01(rng);
    return b;
}

}  // namespace bgcrodr
