// Copyright (c) 2026 The msraw authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "msraw/rng.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace msraw {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t mix64(std::uint64_t seed, std::initializer_list<std::string_view> labels) {
    std::uint64_t h = splitmix64(seed ^ 0xa0761d6478bd642fULL);
    for (const std::string_view label : labels) {
        for (const unsigned char c : label) h = splitmix64(h ^ c);
        // Separator so the label boundaries contribute to the hash.
        h = splitmix64(h ^ 0xff51afd7ed558ccdULL);
    }
    return h;
}

double Rng::uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) {
    if (!(lo < hi)) throw std::range_error("Rng::uniform: empty interval");
    return lo + (hi - lo) * uniform();
}

std::uint64_t Rng::uniform_int(std::uint64_t n) {
    if (n == 0) throw std::range_error("Rng::uniform_int: n must be positive");
    constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();
    // Largest prefix of [0, 2^64) whose size is a multiple of n.
    const std::uint64_t rem = (kMax % n + 1) % n;
    const std::uint64_t bound = kMax - rem;  // inclusive
    for (;;) {
        const std::uint64_t x = engine_();
        if (x <= bound) return x % n;
    }
}

double Rng::normal() {
    // (0,1] for the log argument; second uniform picks the angle.
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace msraw
