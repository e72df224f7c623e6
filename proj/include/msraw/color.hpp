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

#include <array>

#include "msraw/image.hpp"

namespace msraw {

// 3x3 color correction matrix, row-major. Maps a pixel column vector
// (r, g, b)^T to the corrected vector via m * p.
struct ColorCorrectionMatrix {
    std::array<std::array<double, 3>, 3> m{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};

    static ColorCorrectionMatrix identity() { return {}; }

    double det() const;
    bool is_identity() const;

    // Throws invertibility_error when |det| <= 1e-8. Logs a warning when a
    // row sum strays far from 1 (non white-preserving), but accepts it.
    void validate() const;

    ColorCorrectionMatrix inverse() const;
};

// Per-channel white balance gains. Green is the reference channel and is
// fixed at 1; construction rejects anything else.
struct WhiteBalanceGains {
    double r_gain = 1.0;
    double g_gain = 1.0;
    double b_gain = 1.0;

    void validate() const;  // r_gain > 0, b_gain > 0, g_gain == 1
};

// Positive multiplicative brightness gain.
struct GainValue {
    double value = 1.0;

    void validate() const;  // value > 0
};

inline constexpr double kDefaultGamma = 1.0 / 2.2;
inline constexpr double kGammaFloor = 1e-8;          // clamp before exponentiation
inline constexpr double kHighlightThreshold = 0.9;   // default t for safe inverse WB

// Inverse tone curve: y in [0,1] -> 1/2 - sin(asin(1 - 2y) / 3).
// Exact analytic inverse of tone_map_forward. Out-of-range input throws
// std::range_error naming the value.
double tone_map_inverse(double y);

// Forward tone curve: smoothstep 3x^2 - 2x^3 on [0,1].
double tone_map_forward(double x);

RgbImage tone_map_inverse(const RgbImage& img);
RgbImage tone_map_forward(const RgbImage& img);

// y = max(x, 1e-8)^gamma. Negative input throws std::range_error.
double gamma_apply(double x, double gamma);
// x = max(y, 1e-8)^(1/gamma).
double gamma_invert(double y, double gamma);

RgbImage gamma_apply(const RgbImage& img, double gamma);
RgbImage gamma_invert(const RgbImage& img, double gamma);

// Convex combination alpha * day + (1 - alpha) * night, alpha in [0,1].
ColorCorrectionMatrix ccm_mix(const ColorCorrectionMatrix& day, const ColorCorrectionMatrix& night,
                              double alpha);

// Per-pixel matrix multiply. Identity CCM is a bit-exact no-op.
RgbImage ccm_apply(const RgbImage& img, const ColorCorrectionMatrix& ccm);
// Multiplies by the inverse matrix; throws invertibility_error when singular.
RgbImage ccm_invert(const RgbImage& img, const ColorCorrectionMatrix& ccm);

// R *= r_gain, B *= b_gain, G untouched.
RgbImage wb_apply(const RgbImage& img, const WhiteBalanceGains& gains);

// Per-pixel rule of the highlight-safe inverse white balance. For an inverse
// gain g < 1: values x <= t scale by g; above t the scale blends from g to 1
// with quadratic weight w = ((x - t) / (1 - t))^2, so x = 1 maps to 1.
// For g >= 1 the scaling is plain.
double wb_safe_inverse_value(double x, double inverse_gain, double threshold);

// Applies wb_safe_inverse_value channelwise with inverse gains 1/r_gain and
// 1/b_gain. Threshold t must lie in (0,1); throws std::range_error otherwise.
RgbImage wb_invert_safe(const RgbImage& img, const WhiteBalanceGains& gains,
                        double threshold = kHighlightThreshold);

// Elementwise multiply by g.value. No clipping; clipping points belong to the
// pipeline composition, not to individual transforms.
RgbImage gain_apply(const RgbImage& img, const GainValue& g);

}  // namespace msraw
