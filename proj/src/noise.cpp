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

#include "msraw/noise.hpp"

#include <cmath>
#include <sstream>

#include "msraw/errors.hpp"
#include "msraw/log.hpp"

namespace msraw {
namespace {

double read_variance(const NoiseCoefficients& n, double iso) {
    return n.b0 * iso * iso + n.b1 * iso + n.b2;
}

double shot_variance(const NoiseCoefficients& n, double iso) { return n.k0 * iso + n.k1; }

}  // namespace

void SensorProfile::validate() const {
    if (name.empty()) throw config_error("sensor profile has no name");
    if (!(white_level > black_level)) {
        std::ostringstream os;
        os << "profile '" << name << "': white_level " << white_level
           << " must exceed black_level " << black_level;
        throw calibration_error(os.str());
    }
    // Shot variance is affine in ISO, so range nonnegativity reduces to the
    // endpoints; the read-noise quadratic needs its vertex checked too.
    const double iso_lo = kIsoMin;
    const double iso_hi = kIsoMax;
    auto reject = [&](const char* which, double iso, double value) {
        std::ostringstream os;
        os << "profile '" << name << "': " << which << " variance is negative (" << value
           << ") at iso " << iso;
        throw calibration_error(os.str());
    };
    for (const double iso : {iso_lo, iso_hi}) {
        if (shot_variance(noise, iso) < 0.0) reject("shot", iso, shot_variance(noise, iso));
        if (read_variance(noise, iso) < 0.0) reject("read", iso, read_variance(noise, iso));
    }
    if (noise.b0 > 0.0) {
        const double vertex = -noise.b1 / (2.0 * noise.b0);
        if (vertex > iso_lo && vertex < iso_hi && read_variance(noise, vertex) < 0.0) {
            reject("read", vertex, read_variance(noise, vertex));
        }
    }
    if (awb_table.empty()) {
        throw config_error("profile '" + name + "': awb table is empty");
    }
    for (const auto& [illum, gains] : awb_table) {
        try {
            gains.validate();
        } catch (const config_error& e) {
            throw config_error("profile '" + name + "', illuminant '" + illum + "': " + e.what());
        }
    }
    try {
        ccm_day.validate();
    } catch (const invertibility_error& e) {
        throw calibration_error("profile '" + name + "': ccm_day: " + e.what());
    }
    try {
        ccm_night.validate();
    } catch (const invertibility_error& e) {
        throw calibration_error("profile '" + name + "': ccm_night: " + e.what());
    }
}

NoiseParams noise_params(const SensorProfile& profile, int iso) {
    if (iso < kIsoMin || iso > kIsoMax) {
        std::ostringstream os;
        os << "iso " << iso << " outside the calibrated range [" << kIsoMin << ", " << kIsoMax
           << "] for profile '" << profile.name << "'";
        log_warn(os.str());
    }
    NoiseParams params;
    params.iso = iso;
    params.sigma2_shot = shot_variance(profile.noise, iso);
    params.sigma2_read = read_variance(profile.noise, iso);
    if (params.sigma2_shot < 0.0 || params.sigma2_read < 0.0) {
        std::ostringstream os;
        os << "profile '" << profile.name << "' yields negative variance at iso " << iso
           << " (shot " << params.sigma2_shot << ", read " << params.sigma2_read << ")";
        throw calibration_error(os.str());
    }
    return params;
}

double total_variance(const NoiseParams& params, double x) {
    if (x < 0.0) {
        std::ostringstream os;
        os << "total_variance: signal " << x << " must be nonnegative";
        throw std::range_error(os.str());
    }
    return params.sigma2_shot * x + params.sigma2_read;
}

Plane sample_noise(const NoiseParams& params, const Plane& x_plane, Rng& rng) {
    Plane noise(x_plane.rows, x_plane.cols);
    for (std::size_t i = 0; i < x_plane.v.size(); ++i) {
        const double x = x_plane.v[i] < 0.0 ? 0.0 : x_plane.v[i];
        const double sigma = std::sqrt(params.sigma2_shot * x + params.sigma2_read);
        noise.v[i] = sigma * rng.normal();
    }
    return noise;
}

double snr_db(const NoiseParams& params, double x) {
    if (!(x > 0.0)) {
        std::ostringstream os;
        os << "snr_db: signal " << x << " must be positive";
        throw std::range_error(os.str());
    }
    return 10.0 * std::log10(x * x / total_variance(params, x));
}

StatsCurves stats_curves(const SensorProfile& profile, const std::vector<int>& iso_grid,
                         const std::vector<double>& adu_grid, int adu_iso) {
    if (iso_grid.empty()) throw std::range_error("stats_curves: iso grid is empty");
    if (adu_grid.empty()) throw std::range_error("stats_curves: adu grid is empty");
    StatsCurves curves;
    curves.adu_iso = adu_iso;
    curves.iso_rows.reserve(iso_grid.size());
    for (const int iso : iso_grid) {
        const NoiseParams p = noise_params(profile, iso);
        curves.iso_rows.push_back({iso, p.sigma2_shot, p.sigma2_read});
    }
    const NoiseParams p = noise_params(profile, adu_iso);
    const double scale = profile.normalization_scale();
    curves.adu_rows.reserve(adu_grid.size());
    for (const double adu : adu_grid) {
        if (!(adu > 0.0)) {
            std::ostringstream os;
            os << "stats_curves: adu value " << adu << " must be positive";
            throw std::range_error(os.str());
        }
        const double x = adu / scale;
        curves.adu_rows.push_back({adu, total_variance(p, x), snr_db(p, x)});
    }
    return curves;
}

}  // namespace msraw
