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
#include <string>

#include "msraw/color.hpp"
#include "msraw/image.hpp"
#include "msraw/noise.hpp"

namespace msraw {

// Parameters sampled for one degradation, prior to attachment to an image.
struct SampledParams {
    GainValue inv_dgain;        // inverse digital gain, in (0, 1.5]
    WhiteBalanceGains awb;      // convex mix of two illuminants' gains
    std::string awb_illum_a;
    std::string awb_illum_b;
    double awb_weight = 1.0;    // weight on illuminant a, in [0,1]
    ColorCorrectionMatrix ccm;  // ccm_mix(day, night, ccm_alpha)
    double ccm_alpha = 1.0;
    int iso = kIsoMin;

    void validate() const;

    static SampledParams identity();  // dgain 1, unit gains, identity CCM
};

// Per-generated-image record: the sampled parameters plus where they came
// from (image id, sensor, seed).
struct MetaRecord {
    std::string image_id;
    std::string sensor_name;
    std::uint64_t seed = 0;  // per-(image, sensor) derived seed
    SampledParams params;
};

// Clean sRGB -> clean raw. Stage order: inverse tone mapping, inverse gamma
// (1/2.2), inverse color correction, highlight-safe inverse white balance,
// inverse digital gain, mosaic, clip to [0,1]. The input must be tagged
// srgb with values in [0,1]. Output storage levels are taken from the
// white/black arguments (defaults match RawImage defaults).
RawImage unprocess(const RgbImage& srgb, const SampledParams& params,
                   std::uint32_t white_level = 1023, std::uint32_t black_level = 0);

// Clean raw -> noisy raw. The signal driving the variance is the clean value
// minus the normalized black level bl_n = black_level / white_level, clamped
// at 0; the sampled noise is added to the original value and the result is
// clipped to [0,1]. Deterministic per seed. ISO outside the supported range
// logs a warning, never fails.
RawImage degrade(const RawImage& clean_raw, const SensorProfile& profile, int iso,
                 std::uint64_t seed);

// Raw -> sRGB: demosaic, digital gain (1 / inv_dgain), white balance, color
// correction, clip to [0,1], gamma (1/2.2), forward tone mapping.
RgbImage process(const RawImage& raw, const SampledParams& params);

}  // namespace msraw
