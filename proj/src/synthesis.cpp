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

#include "msraw/synthesis.hpp"

#include <sstream>

#include "msraw/errors.hpp"
#include "msraw/log.hpp"
#include "msraw/mosaic.hpp"

namespace msraw {

void SampledParams::validate() const {
    inv_dgain.validate();
    if (inv_dgain.value > 1.5) {
        std::ostringstream os;
        os << "inverse digital gain " << inv_dgain.value << " outside (0, 1.5]";
        throw config_error(os.str());
    }
    awb.validate();
    if (!(awb_weight >= 0.0 && awb_weight <= 1.0)) {
        std::ostringstream os;
        os << "awb weight " << awb_weight << " outside [0,1]";
        throw config_error(os.str());
    }
    if (!(ccm_alpha >= 0.0 && ccm_alpha <= 1.0)) {
        std::ostringstream os;
        os << "ccm alpha " << ccm_alpha << " outside [0,1]";
        throw config_error(os.str());
    }
    ccm.validate();
    if (iso < kIsoMin || iso > kIsoMax) {
        std::ostringstream os;
        os << "iso " << iso << " outside the calibrated range [" << kIsoMin << ", " << kIsoMax
           << "]";
        log_warn(os.str());
    }
}

SampledParams SampledParams::identity() {
    SampledParams p;
    p.inv_dgain = GainValue{1.0};
    p.awb = WhiteBalanceGains{};
    p.awb_weight = 1.0;
    p.ccm = ColorCorrectionMatrix::identity();
    p.ccm_alpha = 1.0;
    p.iso = kIsoMin;
    return p;
}

RawImage unprocess(const RgbImage& srgb, const SampledParams& params, std::uint32_t white_level,
                   std::uint32_t black_level) {
    validate_rgb_shape(srgb);
    if (srgb.domain != RgbDomain::srgb) {
        throw config_error("unprocess expects an srgb-domain input image");
    }
    params.validate();
    RgbImage linear = tone_map_inverse(srgb);
    linear = gamma_invert(linear, kDefaultGamma);
    linear.domain = RgbDomain::linear;
    linear = ccm_invert(linear, params.ccm);
    linear = wb_invert_safe(linear, params.awb);
    linear = gain_apply(linear, params.inv_dgain);
    RawImage raw = mosaic(linear);
    raw.white_level = white_level;
    raw.black_level = black_level;
    clip01_inplace(raw);
    return raw;
}

RawImage degrade(const RawImage& clean_raw, const SensorProfile& profile, int iso,
                 std::uint64_t seed) {
    validate_raw_shape(clean_raw);
    const NoiseParams params = noise_params(profile, iso);
    if (clean_raw.white_level != profile.white_level ||
        clean_raw.black_level != profile.black_level) {
        std::ostringstream os;
        os << "degrade: raw storage levels (" << clean_raw.white_level << "/"
           << clean_raw.black_level << ") differ from profile '" << profile.name << "' ("
           << profile.white_level << "/" << profile.black_level << "); using the profile's";
        log_warn(os.str());
    }
    const double bl_n =
        static_cast<double>(profile.black_level) / static_cast<double>(profile.white_level);
    Rng rng(mix64(seed, {"noise"}));
    RawImage out = clean_raw;
    out.white_level = profile.white_level;
    out.black_level = profile.black_level;
    for (Plane& plane : out.planes) {
        // The variance is driven by the BLC-subtracted signal; the noise is
        // added to the stored value itself so a zero-variance profile is a
        // bit-exact identity.
        Plane x(plane.rows, plane.cols);
        for (std::size_t i = 0; i < plane.v.size(); ++i) {
            const double s = plane.v[i] - bl_n;
            x.v[i] = s < 0.0 ? 0.0 : s;
        }
        const Plane noise = sample_noise(params, x, rng);
        for (std::size_t i = 0; i < plane.v.size(); ++i) {
            plane.v[i] = clip01(plane.v[i] + noise.v[i]);
        }
    }
    return out;
}

RgbImage process(const RawImage& raw, const SampledParams& params) {
    validate_raw_shape(raw);
    params.validate();
    RgbImage img = demosaic_bilinear(raw);
    img = gain_apply(img, GainValue{1.0 / params.inv_dgain.value});
    img = wb_apply(img, params.awb);
    img = ccm_apply(img, params.ccm);
    clip01_inplace(img);
    img = gamma_apply(img, kDefaultGamma);
    img = tone_map_forward(img);
    img.domain = RgbDomain::srgb;
    return img;
}

}  // namespace msraw
