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

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "msraw/image.hpp"
#include "msraw/synthesis.hpp"

namespace msraw {

// Fixed raw-domain evaluation post-process: v <- clip(2v, 0, 1) ^ (1/2.2),
// applied before scoring so raw-domain metrics separate methods well.
RawImage raw2raw_postprocess(const RawImage& raw);

// 10 * log10(peak^2 / MSE) over two equal-shape value arrays.
// MSE == 0 yields +infinity. Throws shape_error on mismatch.
double psnr(std::span<const double> a, std::span<const double> b, double peak = 1.0);
double psnr(const RawImage& a, const RawImage& b, double peak = 1.0);
double psnr(const RgbImage& a, const RgbImage& b, double peak = 1.0);

// Standard single-channel SSIM: 11x11 Gaussian window (sigma 1.5),
// C1 = (0.01 peak)^2, C2 = (0.03 peak)^2, averaged over valid window
// positions only. Throws shape_error if the plane is smaller than the window.
double ssim(const Plane& a, const Plane& b, double peak = 1.0);
// Channel-mean SSIM for multi-plane images (per plane, then averaged).
double ssim(const RawImage& a, const RawImage& b, double peak = 1.0);
double ssim(const RgbImage& a, const RgbImage& b, double peak = 1.0);

enum class EvalProtocol { raw2raw, raw2rgb };

struct EvalItem {
    RawImage predicted;
    RawImage target;
    std::string sensor;
    std::optional<SampledParams> params;  // required for raw2rgb
};

struct SensorScore {
    double psnr_db = 0;
    double ssim = 0;
    std::size_t count = 0;
};

struct EvalReport {
    std::map<std::string, SensorScore> per_sensor;
    std::string worst_sensor;  // lowest mean PSNR; ties break to the
    double worst_psnr_db = 0;  // lexicographically smallest name
};

// Scores every item and aggregates per-sensor means.
//   raw2raw: both images pass through raw2raw_postprocess, metrics on the
//            4-plane arrays.
//   raw2rgb: both images are processed to sRGB with the item's parameters,
//            metrics on the RGB images. Missing params -> config_error.
EvalReport evaluate(std::span<const EvalItem> items, EvalProtocol protocol);

// Aligned text table, sensors as columns with "PSNR / SSIM" cells.
std::string eval_report_table(const EvalReport& report, EvalProtocol protocol);

}  // namespace msraw
