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
#include <map>
#include <string>
#include <vector>

#include "msraw/color.hpp"
#include "msraw/image.hpp"
#include "msraw/rng.hpp"

namespace msraw {

// ISO range the calibration model is intended for. Values outside only warn.
inline constexpr int kIsoMin = 2400;
inline constexpr int kIsoMax = 12800;

// Coefficients of the two-component noise model, in normalized units
// (signal divided by white_level - black_level):
//   sigma2_shot(iso) = k0 * iso + k1
//   sigma2_read(iso) = b0 * iso^2 + b1 * iso + b2
struct NoiseCoefficients {
    double k0 = 0, k1 = 0;
    double b0 = 0, b1 = 0, b2 = 0;
};

// One sensor's calibration bundle. Loaded from a JSON profile file
// (see io.hpp); coefficients are converted to normalized units on load.
struct SensorProfile {
    std::string name;
    NoiseCoefficients noise;
    std::uint32_t black_level = 0;
    std::uint32_t white_level = 1023;
    std::map<std::string, WhiteBalanceGains> awb_table;  // illuminant name -> gains
    ColorCorrectionMatrix ccm_day;
    ColorCorrectionMatrix ccm_night;

    // white > black >= 0, nonnegative variances over [kIsoMin, kIsoMax],
    // nonempty AWB table, invertible CCMs. Throws calibration_error or
    // config_error naming the profile.
    void validate() const;

    double normalization_scale() const {
        return static_cast<double>(white_level) - static_cast<double>(black_level);
    }
};

struct NoiseParams {
    double sigma2_shot = 0;
    double sigma2_read = 0;
    int iso = 0;
};

// Evaluates the calibration polynomials at `iso`. Warns outside the supported
// ISO range; throws calibration_error if either variance comes out negative.
NoiseParams noise_params(const SensorProfile& profile, int iso);

// sigma^2 = sigma2_shot * x + sigma2_read for normalized signal x >= 0.
double total_variance(const NoiseParams& params, double x);

// Zero-mean Gaussian noise, elementwise variance total_variance(params, x).
// x_plane must hold the BLC-subtracted signal; tiny negatives are treated
// as 0. Deterministic for a given generator state.
Plane sample_noise(const NoiseParams& params, const Plane& x_plane, Rng& rng);

// 10 * log10(x^2 / total_variance(params, x)); requires x > 0.
double snr_db(const NoiseParams& params, double x);

struct IsoCurveRow {
    int iso;
    double sigma2_shot;
    double sigma2_read;
};

struct AduCurveRow {
    double adu;      // BLC-subtracted signal in ADU
    double sigma2;   // total variance, normalized units
    double snr_db;
};

struct StatsCurves {
    std::vector<IsoCurveRow> iso_rows;
    std::vector<AduCurveRow> adu_rows;
    int adu_iso = 0;  // ISO at which the ADU sweep was evaluated
};

// Tabulates shot/read variance over `iso_grid` and total variance + SNR over
// `adu_grid` (ADU values, all > 0) evaluated at `adu_iso`. Grids must be
// nonempty; throws std::range_error on a nonpositive ADU value.
StatsCurves stats_curves(const SensorProfile& profile, const std::vector<int>& iso_grid,
                         const std::vector<double>& adu_grid, int adu_iso);

}  // namespace msraw
