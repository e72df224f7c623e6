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

#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>

namespace msraw {

// splitmix64 finalizer. Bijective on 64-bit words, used for seed derivation.
std::uint64_t splitmix64(std::uint64_t x);

// Derives an independent child seed from a root seed and a list of string
// labels (e.g. image id, sensor name, stream tag). Every byte of every label
// is absorbed through splitmix64, with a separator step between labels so
// ("ab","c") and ("a","bc") hash differently. Deterministic across platforms.
std::uint64_t mix64(std::uint64_t seed, std::initializer_list<std::string_view> labels);

// Deterministic random generator. The engine is std::mt19937_64 (bit-exact by
// specification); all distributions are implemented here rather than taken
// from <random> because the standard leaves distribution algorithms
// unspecified and we require byte-identical streams everywhere.
//
// Not thread-safe: callers own one generator per task and never share it.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform double in [0, 1), 53-bit resolution.
    double uniform();

    // Uniform double in [lo, hi).
    double uniform(double lo, double hi);

    // Uniform integer in [0, n), n > 0. Unbiased (rejection sampling).
    std::uint64_t uniform_int(std::uint64_t n);

    // Standard normal via Box-Muller. Two uniforms per draw, no cached spare,
    // so the stream position is a pure function of the call count.
    double normal();

    double normal(double mean, double stddev) { return mean + stddev * normal(); }

private:
    std::mt19937_64 engine_;
};

}  // namespace msraw
