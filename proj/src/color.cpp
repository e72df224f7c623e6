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

#include "msraw/color.hpp"

#include <cmath>
#include <sstream>

#include "msraw/errors.hpp"
#include "msraw/log.hpp"

namespace msraw {
namespace {

constexpr double kDetEpsilon = 1e-8;

[[noreturn]] void throw_range(const char* op, double value) {
    std::ostringstream os;
    os << op << ": input " << value << " outside [0,1]";
    throw std::range_error(os.str());
}

void check_unit_range(const char* op, double x) {
    if (!(x >= 0.0 && x <= 1.0)) throw_range(op, x);
}

RgbImage map_planes(const RgbImage& img, double (*fn)(double)) {
    RgbImage out = img;
    for (Plane& p : out.planes)
        for (double& x : p.v) x = fn(x);
    return out;
}

}  // namespace

double ColorCorrectionMatrix::det() const {
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
           m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

bool ColorCorrectionMatrix::is_identity() const {
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c)
            if (m[r][c] != (r == c ? 1.0 : 0.0)) return false;
    return true;
}

void ColorCorrectionMatrix::validate() const {
    const double d = det();
    if (!(std::abs(d) > kDetEpsilon)) {
        std::ostringstream os;
        os << "color matrix is singular (det " << d << ")";
        throw invertibility_error(os.str());
    }
    for (int r = 0; r < 3; ++r) {
        const double sum = m[r][0] + m[r][1] + m[r][2];
        if (std::abs(sum - 1.0) > 0.1) {
            std::ostringstream os;
            os << "color matrix row " << r << " sums to " << sum
               << "; white-preserving matrices sum to 1";
            log_warn(os.str());
        }
    }
}

ColorCorrectionMatrix ColorCorrectionMatrix::inverse() const {
    const double d = det();
    if (!(std::abs(d) > kDetEpsilon)) {
        std::ostringstream os;
        os << "cannot invert singular color matrix (det " << d << ")";
        throw invertibility_error(os.str());
    }
    ColorCorrectionMatrix inv;
    inv.m[0][0] = (m[1][1] * m[2][2] - m[1][2] * m[2][1]) / d;
    inv.m[0][1] = (m[0][2] * m[2][1] - m[0][1] * m[2][2]) / d;
    inv.m[0][2] = (m[0][1] * m[1][2] - m[0][2] * m[1][1]) / d;
    inv.m[1][0] = (m[1][2] * m[2][0] - m[1][0] * m[2][2]) / d;
    inv.m[1][1] = (m[0][0] * m[2][2] - m[0][2] * m[2][0]) / d;
    inv.m[1][2] = (m[0][2] * m[1][0] - m[0][0] * m[1][2]) / d;
    inv.m[2][0] = (m[1][0] * m[2][1] - m[1][1] * m[2][0]) / d;
    inv.m[2][1] = (m[0][1] * m[2][0] - m[0][0] * m[2][1]) / d;
    inv.m[2][2] = (m[0][0] * m[1][1] - m[0][1] * m[1][0]) / d;
    return inv;
}

void WhiteBalanceGains::validate() const {
    if (!(r_gain > 0.0) || !(b_gain > 0.0)) {
        std::ostringstream os;
        os << "white balance gains must be positive, got r " << r_gain << " b " << b_gain;
        throw config_error(os.str());
    }
    if (g_gain != 1.0) {
        std::ostringstream os;
        os << "green is the reference channel; g_gain must be 1, got " << g_gain;
        throw config_error(os.str());
    }
}

void GainValue::validate() const {
    if (!(value > 0.0)) {
        std::ostringstream os;
        os << "gain must be positive, got " << value;
        throw config_error(os.str());
    }
}

double tone_map_inverse(double y) {
    check_unit_range("tone_map_inverse", y);
    return 0.5 - std::sin(std::asin(1.0 - 2.0 * y) / 3.0);
}

double tone_map_forward(double x) {
    check_unit_range("tone_map_forward", x);
    return x * x * (3.0 - 2.0 * x);
}

RgbImage tone_map_inverse(const RgbImage& img) { return map_planes(img, &tone_map_inverse); }

RgbImage tone_map_forward(const RgbImage& img) { return map_planes(img, &tone_map_forward); }

double gamma_apply(double x, double gamma) {
    if (!(gamma > 0.0)) throw std::range_error("gamma_apply: gamma must be positive");
    if (x < 0.0) throw_range("gamma_apply", x);
    return std::pow(x < kGammaFloor ? kGammaFloor : x, gamma);
}

double gamma_invert(double y, double gamma) {
    if (!(gamma > 0.0)) throw std::range_error("gamma_invert: gamma must be positive");
    if (y < 0.0) throw_range("gamma_invert", y);
    return std::pow(y < kGammaFloor ? kGammaFloor : y, 1.0 / gamma);
}

RgbImage gamma_apply(const RgbImage& img, double gamma) {
    RgbImage out = img;
    for (Plane& p : out.planes)
        for (double& x : p.v) x = gamma_apply(x, gamma);
    return out;
}

RgbImage gamma_invert(const RgbImage& img, double gamma) {
    RgbImage out = img;
    for (Plane& p : out.planes)
        for (double& x : p.v) x = gamma_invert(x, gamma);
    return out;
}

ColorCorrectionMatrix ccm_mix(const ColorCorrectionMatrix& day, const ColorCorrectionMatrix& night,
                              double alpha) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) {
        std::ostringstream os;
        os << "ccm_mix: alpha " << alpha << " outside [0,1]";
        throw std::range_error(os.str());
    }
    ColorCorrectionMatrix out;
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c)
            out.m[r][c] = alpha * day.m[r][c] + (1.0 - alpha) * night.m[r][c];
    return out;
}

RgbImage ccm_apply(const RgbImage& img, const ColorCorrectionMatrix& ccm) {
    validate_rgb_shape(img);
    if (ccm.is_identity()) return img;
    RgbImage out = img;
    const std::size_t n = img.planes[0].size();
    for (std::size_t i = 0; i < n; ++i) {
        const double r = img.planes[0].v[i];
        const double g = img.planes[1].v[i];
        const double b = img.planes[2].v[i];
        out.planes[0].v[i] = ccm.m[0][0] * r + ccm.m[0][1] * g + ccm.m[0][2] * b;
        out.planes[1].v[i] = ccm.m[1][0] * r + ccm.m[1][1] * g + ccm.m[1][2] * b;
        out.planes[2].v[i] = ccm.m[2][0] * r + ccm.m[2][1] * g + ccm.m[2][2] * b;
    }
    return out;
}

RgbImage ccm_invert(const RgbImage& img, const ColorCorrectionMatrix& ccm) {
    return ccm_apply(img, ccm.inverse());
}

RgbImage wb_apply(const RgbImage& img, const WhiteBalanceGains& gains) {
    validate_rgb_shape(img);
    gains.validate();
    RgbImage out = img;
    for (double& x : out.planes[0].v) x *= gains.r_gain;
    for (double& x : out.planes[2].v) x *= gains.b_gain;
    return out;
}

double wb_safe_inverse_value(double x, double inverse_gain, double threshold) {
    if (inverse_gain >= 1.0 || x <= threshold) return x * inverse_gain;
    const double w = (x - threshold) / (1.0 - threshold);
    const double w2 = w * w;
    // inverse_gain < 1 here, so the blend target max(inverse_gain, 1) is 1.
    return x * ((1.0 - w2) * inverse_gain + w2);
}

RgbImage wb_invert_safe(const RgbImage& img, const WhiteBalanceGains& gains, double threshold) {
    validate_rgb_shape(img);
    gains.validate();
    if (!(threshold > 0.0 && threshold < 1.0)) {
        std::ostringstream os;
        os << "wb_invert_safe: threshold " << threshold << " outside (0,1)";
        throw std::range_error(os.str());
    }
    RgbImage out = img;
    const double inv_r = 1.0 / gains.r_gain;
    const double inv_b = 1.0 / gains.b_gain;
    for (double& x : out.planes[0].v) x = wb_safe_inverse_value(x, inv_r, threshold);
    for (double& x : out.planes[2].v) x = wb_safe_inverse_value(x, inv_b, threshold);
    return out;
}

RgbImage gain_apply(const RgbImage& img, const GainValue& g) {
    validate_rgb_shape(img);
    g.validate();
    if (g.value == 1.0) return img;
    RgbImage out = img;
    for (Plane& p : out.planes)
        for (double& x : p.v) x *= g.value;
    return out;
}

}  // namespace msraw
