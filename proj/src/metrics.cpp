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

#include "msraw/metrics.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <vector>

#include "msraw/errors.hpp"

namespace msraw {
namespace {

constexpr int kSsimWindow = 11;
constexpr double kSsimSigma = 1.5;

double mse_accumulate(std::span<const double> a, std::span<const double> b) {
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        sum += d * d;
    }
    return sum;
}

double psnr_from_mse(double mse, double peak) {
    if (mse == 0.0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(peak * peak / mse);
}

void check_peak(double peak) {
    if (!(peak > 0.0)) {
        std::ostringstream os;
        os << "psnr/ssim peak " << peak << " must be positive";
        throw std::range_error(os.str());
    }
}

const std::array<double, kSsimWindow * kSsimWindow>& ssim_window() {
    static const auto window = [] {
        std::array<double, kSsimWindow * kSsimWindow> w{};
        const int half = kSsimWindow / 2;
        double total = 0.0;
        for (int r = 0; r < kSsimWindow; ++r) {
            for (int c = 0; c < kSsimWindow; ++c) {
                const double dr = r - half;
                const double dc = c - half;
                const double g = std::exp(-(dr * dr + dc * dc) / (2.0 * kSsimSigma * kSsimSigma));
                w[r * kSsimWindow + c] = g;
                total += g;
            }
        }
        for (double& g : w) g /= total;
        return w;
    }();
    return window;
}

std::string format_cell(double psnr_db, double ssim_v) {
    char buf[64];
    if (std::isinf(psnr_db)) {
        std::snprintf(buf, sizeof(buf), "inf / %.4f", ssim_v);
    } else {
        std::snprintf(buf, sizeof(buf), "%.2f / %.4f", psnr_db, ssim_v);
    }
    return buf;
}

}  // namespace

RawImage raw2raw_postprocess(const RawImage& raw) {
    validate_raw_shape(raw);
    RawImage out = raw;
    for (Plane& p : out.planes) {
        for (double& v : p.v) v = std::pow(clip01(2.0 * v), 1.0 / 2.2);
    }
    return out;
}

double psnr(std::span<const double> a, std::span<const double> b, double peak) {
    check_peak(peak);
    if (a.size() != b.size()) {
        std::ostringstream os;
        os << "psnr: array sizes differ (" << a.size() << " vs " << b.size() << ")";
        throw shape_error(os.str());
    }
    if (a.empty()) throw shape_error("psnr: empty arrays");
    return psnr_from_mse(mse_accumulate(a, b) / static_cast<double>(a.size()), peak);
}

double psnr(const RawImage& a, const RawImage& b, double peak) {
    check_peak(peak);
    validate_raw_shape(a);
    validate_raw_shape(b);
    if (!a.planes[0].same_shape(b.planes[0])) {
        throw shape_error("psnr: raw image shapes differ");
    }
    double sum = 0.0;
    std::size_t n = 0;
    for (int p = 0; p < 4; ++p) {
        sum += mse_accumulate(a.planes[p].v, b.planes[p].v);
        n += a.planes[p].size();
    }
    return psnr_from_mse(sum / static_cast<double>(n), peak);
}

double psnr(const RgbImage& a, const RgbImage& b, double peak) {
    check_peak(peak);
    validate_rgb_shape(a);
    validate_rgb_shape(b);
    if (!a.planes[0].same_shape(b.planes[0])) {
        throw shape_error("psnr: rgb image shapes differ");
    }
    double sum = 0.0;
    std::size_t n = 0;
    for (int p = 0; p < 3; ++p) {
        sum += mse_accumulate(a.planes[p].v, b.planes[p].v);
        n += a.planes[p].size();
    }
    return psnr_from_mse(sum / static_cast<double>(n), peak);
}

double ssim(const Plane& a, const Plane& b, double peak) {
    check_peak(peak);
    if (!a.same_shape(b)) throw shape_error("ssim: plane shapes differ");
    if (a.rows < kSsimWindow || a.cols < kSsimWindow) {
        std::ostringstream os;
        os << "ssim: plane " << a.rows << "x" << a.cols << " is smaller than the " << kSsimWindow
           << "x" << kSsimWindow << " window";
        throw shape_error(os.str());
    }
    const auto& w = ssim_window();
    const double c1 = (0.01 * peak) * (0.01 * peak);
    const double c2 = (0.03 * peak) * (0.03 * peak);
    const std::size_t out_rows = a.rows - kSsimWindow + 1;
    const std::size_t out_cols = a.cols - kSsimWindow + 1;
    double total = 0.0;
    for (std::size_t r0 = 0; r0 < out_rows; ++r0) {
        for (std::size_t c0 = 0; c0 < out_cols; ++c0) {
            double mu_a = 0.0, mu_b = 0.0, ea2 = 0.0, eb2 = 0.0, eab = 0.0;
            for (int r = 0; r < kSsimWindow; ++r) {
                for (int c = 0; c < kSsimWindow; ++c) {
                    const double wv = w[r * kSsimWindow + c];
                    const double av = a.at(r0 + r, c0 + c);
                    const double bv = b.at(r0 + r, c0 + c);
                    mu_a += wv * av;
                    mu_b += wv * bv;
                    ea2 += wv * av * av;
                    eb2 += wv * bv * bv;
                    eab += wv * av * bv;
                }
            }
            const double var_a = ea2 - mu_a * mu_a;
            const double var_b = eb2 - mu_b * mu_b;
            const double cov = eab - mu_a * mu_b;
            const double num = (2.0 * mu_a * mu_b + c1) * (2.0 * cov + c2);
            const double den = (mu_a * mu_a + mu_b * mu_b + c1) * (var_a + var_b + c2);
            total += num / den;
        }
    }
    return total / static_cast<double>(out_rows * out_cols);
}

double ssim(const RawImage& a, const RawImage& b, double peak) {
    validate_raw_shape(a);
    validate_raw_shape(b);
    double total = 0.0;
    for (int p = 0; p < 4; ++p) total += ssim(a.planes[p], b.planes[p], peak);
    return total / 4.0;
}

double ssim(const RgbImage& a, const RgbImage& b, double peak) {
    validate_rgb_shape(a);
    validate_rgb_shape(b);
    double total = 0.0;
    for (int p = 0; p < 3; ++p) total += ssim(a.planes[p], b.planes[p], peak);
    return total / 3.0;
}

EvalReport evaluate(std::span<const EvalItem> items, EvalProtocol protocol) {
    struct Acc {
        double psnr_sum = 0.0;
        double ssim_sum = 0.0;
        std::size_t n = 0;
    };
    std::map<std::string, Acc> accs;
    for (const EvalItem& item : items) {
        double p = 0.0;
        double s = 0.0;
        if (protocol == EvalProtocol::raw2raw) {
            const RawImage pred = raw2raw_postprocess(item.predicted);
            const RawImage target = raw2raw_postprocess(item.target);
            p = psnr(pred, target);
            s = ssim(pred, target);
        } else {
            if (!item.params.has_value()) {
                throw config_error("raw2rgb evaluation requires sampled parameters per item");
            }
            const RgbImage pred = process(item.predicted, *item.params);
            const RgbImage target = process(item.target, *item.params);
            p = psnr(pred, target);
            s = ssim(pred, target);
        }
        Acc& acc = accs[item.sensor];
        acc.psnr_sum += p;
        acc.ssim_sum += s;
        acc.n += 1;
    }
    EvalReport report;
    for (const auto& [sensor, acc] : accs) {
        report.per_sensor[sensor] = {acc.psnr_sum / static_cast<double>(acc.n),
                                     acc.ssim_sum / static_cast<double>(acc.n), acc.n};
    }
    report.worst_psnr_db = std::numeric_limits<double>::infinity();
    // Map order is lexicographic, so strict < keeps the smallest name on ties.
    for (const auto& [sensor, score] : report.per_sensor) {
        if (score.psnr_db < report.worst_psnr_db) {
            report.worst_psnr_db = score.psnr_db;
            report.worst_sensor = sensor;
        }
    }
    if (report.per_sensor.empty()) report.worst_psnr_db = 0.0;
    else if (report.worst_sensor.empty()) {
        // All sensors tied at +inf; take the lexicographically smallest.
        report.worst_sensor = report.per_sensor.begin()->first;
    }
    return report;
}

std::string eval_report_table(const EvalReport& report, EvalProtocol protocol) {
    std::vector<std::string> headers;
    std::vector<std::string> cells;
    std::vector<std::string> counts;
    for (const auto& [sensor, score] : report.per_sensor) {
        headers.push_back(sensor);
        cells.push_back(format_cell(score.psnr_db, score.ssim));
        counts.push_back(std::to_string(score.count));
    }
    const std::string row0 = protocol == EvalProtocol::raw2raw ? "raw2raw" : "raw2rgb";
    const std::string label1 = "PSNR / SSIM";
    const std::string label2 = "images";
    std::size_t label_w = row0.size();
    label_w = std::max(label_w, label1.size());
    label_w = std::max(label_w, label2.size());
    std::vector<std::size_t> widths(headers.size());
    for (std::size_t i = 0; i < headers.size(); ++i) {
        widths[i] = std::max(headers[i].size(), std::max(cells[i].size(), counts[i].size()));
    }
    auto pad = [](const std::string& s, std::size_t w) {
        return s + std::string(w - s.size(), ' ');
    };
    std::ostringstream os;
    os << pad(row0, label_w);
    for (std::size_t i = 0; i < headers.size(); ++i) os << "  " << pad(headers[i], widths[i]);
    os << "\n" << pad(label1, label_w);
    for (std::size_t i = 0; i < cells.size(); ++i) os << "  " << pad(cells[i], widths[i]);
    os << "\n" << pad(label2, label_w);
    for (std::size_t i = 0; i < counts.size(); ++i) os << "  " << pad(counts[i], widths[i]);
    os << "\n";
    if (!report.worst_sensor.empty()) {
        os << "worst sensor: " << report.worst_sensor << " (";
        if (std::isinf(report.worst_psnr_db)) {
            os << "inf";
        } else {
            char buf[32];
            std::snprintf(buf, sizeof(buf), "%.2f", report.worst_psnr_db);
            os << buf;
        }
        os << " dB)\n";
    }
    return os.str();
}

}  // namespace msraw
