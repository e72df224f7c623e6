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

// Acceptance suite. Each criterion prints one [PASS]/[FAIL] line with its
// runtime; the process exits nonzero if any criterion fails. Tolerances and
// time budgets are pinned in this file.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "msraw/color.hpp"
#include "msraw/consistency_check.hpp"
#include "msraw/dataset.hpp"
#include "msraw/image.hpp"
#include "msraw/io.hpp"
#include "msraw/metrics.hpp"
#include "msraw/mosaic.hpp"
#include "msraw/noise.hpp"
#include "msraw/rng.hpp"
#include "msraw/synthesis.hpp"
#include "test_util.hpp"

#ifndef MSRAW_CLI_PATH
#error "MSRAW_CLI_PATH must point at the command line binary"
#endif

using namespace msraw;
namespace fs = std::filesystem;

namespace {

std::string fmt(const char* format, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, format, v);
    return buf;
}

ColorCorrectionMatrix make_ccm(const std::array<std::array<double, 3>, 3>& m) {
    ColorCorrectionMatrix ccm;
    ccm.m = m;
    return ccm;
}

// A minimal valid profile with two illuminants so parameters can be sampled.
SensorProfile make_profile(const std::string& name, const NoiseCoefficients& noise,
                           std::uint32_t black, std::uint32_t white) {
    SensorProfile p;
    p.name = name;
    p.noise = noise;
    p.black_level = black;
    p.white_level = white;
    p.awb_table["D65"] = WhiteBalanceGains{2.0, 1.0, 1.5};
    p.awb_table["TL84"] = WhiteBalanceGains{1.6, 1.0, 1.9};
    p.ccm_day = make_ccm({{{1.5, -0.3, -0.2}, {-0.25, 1.45, -0.2}, {-0.1, -0.4, 1.5}}});
    p.ccm_night = make_ccm({{{1.3, -0.2, -0.1}, {-0.15, 1.3, -0.15}, {-0.05, -0.25, 1.3}}});
    p.validate();
    return p;
}

std::vector<SensorProfile> study_profiles() {
    return {
        make_profile("alpha", {5e-6, 1e-5, 1e-10, 1e-8, 1e-6}, 64, 1023),
        make_profile("bravo", {3e-6, 2e-5, 5e-11, 2e-8, 2e-6}, 256, 4095),
        make_profile("gamma", {8e-6, 5e-6, 2e-10, 5e-9, 5e-7}, 0, 16383),
    };
}

// Criterion 1: unprocess followed by process restores constant non-saturated
// scenes within 1e-3 per channel, over randomly sampled parameters.
bool criterion_round_trip(std::string& detail) {
    const std::vector<SensorProfile> profiles = study_profiles();
    Rng gray_rng(101);
    double max_err = 0;
    for (int i = 0; i < 100; ++i) {
        const SensorProfile& p = profiles[static_cast<std::size_t>(i) % profiles.size()];
        Rng rng(mix64(1000 + static_cast<std::uint64_t>(i), {"params"}));
        const SampledParams params = sample_params(p, rng);
        const double x = 0.05 + 0.85 * gray_rng.uniform();
        const RgbImage scene = RgbImage::constant(16, 16, x, x, x, RgbDomain::srgb);
        const RawImage raw = unprocess(scene, params, p.white_level, p.black_level);
        const RgbImage back = process(raw, params);
        for (const Plane& plane : back.planes) {
            for (double v : plane.v) max_err = std::max(max_err, std::abs(v - x));
        }
    }
    detail = "max abs error " + fmt("%.2e", max_err);
    return max_err <= 1e-3;
}

// Criterion 2: tone curve fixed points and the forward/inverse identity.
bool criterion_tone_curves(std::string& detail) {
    double max_fixed = 0;
    max_fixed = std::max(max_fixed, std::abs(tone_map_inverse(0.0) - 0.0));
    max_fixed = std::max(max_fixed, std::abs(tone_map_inverse(0.5) - 0.5));
    max_fixed = std::max(max_fixed, std::abs(tone_map_inverse(1.0) - 1.0));
    double max_round = 0;
    for (int i = 0; i < 10000; ++i) {
        const double y = static_cast<double>(i) / 9999.0;
        max_round = std::max(max_round, std::abs(tone_map_forward(tone_map_inverse(y)) - y));
    }
    detail = "fixed points " + fmt("%.2e", max_fixed) + ", round trip " + fmt("%.2e", max_round);
    return max_fixed <= 1e-12 && max_round <= 1e-9;
}

// Criterion 3: the degradation's empirical moments match the variance model.
// Signal levels sit many standard deviations away from the clip boundaries,
// so clipping cannot bias the estimate.
bool criterion_noise_statistics(std::string& detail) {
    const std::vector<SensorProfile> profiles = {
        make_profile("n_alpha", {2e-7, 1e-6, 1e-12, 1e-9, 1e-7}, 0, 1023),
        make_profile("n_bravo", {1e-7, 5e-7, 5e-13, 5e-10, 5e-8}, 0, 1023),
        make_profile("n_gamma", {4e-7, 2e-6, 2e-12, 2e-9, 2e-7}, 0, 1023),
    };
    const std::vector<std::pair<double, int>> points = {
        {0.35, 2400}, {0.5, 4800}, {0.65, 9600}, {0.45, 12800}, {0.55, 6400}};
    double worst_var_rel = 0;
    double worst_mean_sigmas = 0;
    std::uint64_t seed = 8800;
    for (const SensorProfile& p : profiles) {
        for (const auto& [v, iso] : points) {
            const RawImage clean = RawImage::constant(1416, 1416, v, p.white_level,
                                                      p.black_level);
            const RawImage noisy = degrade(clean, p, iso, seed++);
            const double expected = total_variance(noise_params(p, iso), v);
            double sum = 0, sum_sq = 0;
            std::size_t n = 0;
            for (const Plane& plane : noisy.planes) {
                for (double s : plane.v) {
                    const double d = s - v;
                    sum += d;
                    sum_sq += d * d;
                    ++n;
                }
            }
            const double mean = sum / static_cast<double>(n);
            const double var =
                (sum_sq - static_cast<double>(n) * mean * mean) / static_cast<double>(n - 1);
            const double mean_sigmas =
                std::abs(mean) / (std::sqrt(expected) / std::sqrt(static_cast<double>(n)));
            worst_var_rel = std::max(worst_var_rel, std::abs(var - expected) / expected);
            worst_mean_sigmas = std::max(worst_mean_sigmas, mean_sigmas);
        }
    }
    detail = "worst variance error " + fmt("%.2f", worst_var_rel * 100) + "%, worst mean " +
             fmt("%.2f", worst_mean_sigmas) + " sigma";
    return worst_var_rel <= 0.02 && worst_mean_sigmas <= 4.0;
}

// Criterion 4: remosaicing a demosaiced raw returns the original samples.
bool criterion_mosaic_round_trip(std::string& detail) {
    Rng rng(2024);
    for (int i = 0; i < 500; ++i) {
        const std::size_t h = 2 * (1 + rng.uniform_int(32));
        const std::size_t w = 2 * (1 + rng.uniform_int(32));
        const RawImage raw = test::random_raw(h, w, rng);
        const RawImage round = mosaic(demosaic_bilinear(raw));
        for (std::size_t k = 0; k < raw.planes.size(); ++k) {
            if (raw.planes[k].v != round.planes[k].v) {
                detail = "mismatch at image " + std::to_string(i);
                return false;
            }
        }
    }
    detail = "500 raws bit-exact";
    return true;
}

// Criterion 5: the loss kernels agree with brute-force enumeration and
// central finite differences; gradient reversal scales by -alpha.
bool criterion_consistency_oracles(std::string& detail) {
    const CheckReport report = run_consistency_checks(3, 5);
    if (report.all_pass()) {
        detail = std::to_string(report.lines.size()) + " checks passed";
        return true;
    }
    std::ostringstream oss;
    for (const CheckLine& line : report.lines) {
        if (!line.pass) oss << " [" << line.name << "]";
    }
    detail = "failing checks:" + oss.str();
    return false;
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(MSRAW_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::map<std::string, fs::path> collect_tree(const fs::path& root) {
    std::map<std::string, fs::path> files;
    for (const auto& entry : fs::recursive_directory_iterator(root)) {
        if (entry.is_regular_file()) {
            files[entry.path().lexically_relative(root).generic_string()] = entry.path();
        }
    }
    return files;
}

std::string profile_json(const std::string& name, const std::string& noise,
                         const std::string& levels) {
    return "{\n  \"name\": \"" + name + "\",\n  \"units\": \"normalized\",\n  " + noise +
           ",\n  " + levels + R"(,
  "awb": {
    "D65": {"r_gain": 2.0, "b_gain": 1.5},
    "TL84": {"r_gain": 1.6, "b_gain": 1.9}
  },
  "ccm_day": [[1.5, -0.3, -0.2], [-0.25, 1.45, -0.2], [-0.1, -0.4, 1.5]],
  "ccm_night": [[1.3, -0.2, -0.1], [-0.15, 1.3, -0.15], [-0.05, -0.25, 1.3]]
})";
}

// Criterion 6: two generation runs over the same corpus and seed produce
// byte-identical trees, independent of the worker count.
bool criterion_dataset_determinism(std::string& detail) {
    test::TempDir tmp;
    write_file_bytes(tmp / "cam_x.json",
                     profile_json("cam_x",
                                  R"("noise": {"k0": 5e-06, "k1": 1e-05, "b0": 1e-10, "b1": 1e-08, "b2": 1e-06})",
                                  R"("black_level": 64, "white_level": 1023)"));
    write_file_bytes(tmp / "cam_y.json",
                     profile_json("cam_y",
                                  R"("noise": {"k0": 3e-06, "k1": 2e-05, "b0": 5e-11, "b1": 2e-08, "b2": 2e-06})",
                                  R"("black_level": 256, "white_level": 4095)"));
    write_file_bytes(tmp / "cam_z.json",
                     profile_json("cam_z",
                                  R"("noise": {"k0": 8e-06, "k1": 5e-06, "b0": 2e-10, "b1": 5e-09, "b2": 5e-07})",
                                  R"("black_level": 0, "white_level": 16383)"));
    fs::create_directories(tmp / "sources" / "train");
    fs::create_directories(tmp / "sources" / "val");
    Rng rng(4096);
    write_ppm16(tmp / "sources" / "train" / "im1.ppm", test::random_rgb(32, 32, rng));
    write_ppm16(tmp / "sources" / "train" / "im2.ppm", test::random_rgb(24, 24, rng));
    write_ppm16(tmp / "sources" / "train" / "im3.ppm", test::random_rgb(40, 40, rng));
    write_ppm16(tmp / "sources" / "val" / "im4.ppm", test::random_rgb(20, 20, rng));
    write_file_bytes(tmp / "gen.json", R"({
  "source_dir": "sources",
  "out_dir": "unused",
  "sensor_profiles": ["cam_x.json", "cam_y.json", "cam_z.json"],
  "global_seed": 20260818,
  "train": {"crop": 8, "crops_per_image": 2},
  "val": {"crop": 0, "crops_per_image": 1}
})");
    const std::string config = (tmp / "gen.json").string();
    if (run_cli("generate " + config + " --out " + (tmp / "runA").string()) != 0) {
        detail = "first run failed";
        return false;
    }
    if (run_cli("generate " + config + " --out " + (tmp / "runB").string() + " --jobs 3") != 0) {
        detail = "second run failed";
        return false;
    }
    const auto tree_a = collect_tree(tmp / "runA");
    const auto tree_b = collect_tree(tmp / "runB");
    if (tree_a.size() != tree_b.size() || tree_a.empty()) {
        detail = "tree sizes differ: " + std::to_string(tree_a.size()) + " vs " +
                 std::to_string(tree_b.size());
        return false;
    }
    for (const auto& [rel, path] : tree_a) {
        const auto it = tree_b.find(rel);
        if (it == tree_b.end()) {
            detail = "missing in second run: " + rel;
            return false;
        }
        if (read_file_bytes(path) != read_file_bytes(it->second)) {
            detail = "bytes differ: " + rel;
            return false;
        }
    }
    detail = std::to_string(tree_a.size()) + " files byte-identical";
    return true;
}

// Criterion 7: metric closed forms and the worst-sensor selection.
bool criterion_metrics(std::string& detail) {
    const RawImage a = RawImage::constant(16, 16, 0.4);
    const RawImage b = RawImage::constant(16, 16, 0.5);
    const double p = psnr(a, b);
    if (std::abs(p - 20.0) > 1e-6) {
        detail = "offset psnr " + fmt("%.8f", p);
        return false;
    }
    Rng rng(606);
    const RawImage r = test::random_raw(26, 30, rng);
    if (ssim(r, r) != 1.0) {
        detail = "self ssim is not exactly 1";
        return false;
    }
    std::vector<EvalItem> items;
    items.push_back({RawImage::constant(24, 24, 0.2), RawImage::constant(24, 24, 0.25), "near",
                     std::nullopt});
    items.push_back({RawImage::constant(24, 24, 0.2), RawImage::constant(24, 24, 0.35), "far",
                     std::nullopt});
    const EvalReport report = evaluate(items, EvalProtocol::raw2raw);
    const bool worst_ok = report.worst_sensor == "far" &&
                          report.per_sensor.at("far").psnr_db <
                              report.per_sensor.at("near").psnr_db &&
                          report.worst_psnr_db == report.per_sensor.at("far").psnr_db;
    if (!worst_ok) {
        detail = "worst sensor selection picked " + report.worst_sensor;
        return false;
    }
    detail = "offset psnr " + fmt("%.6f", p) + " dB, self ssim exact, worst sensor correct";
    return true;
}

// Criterion 8: sampled inverse digital gains center on 0.65 and sampled ISO
// values are uniform over the calibrated range (chi-square, p > 0.01).
bool criterion_sampling(std::string& detail) {
    const SensorProfile profile = study_profiles()[0];
    Rng rng(77);
    const int n = 100000;
    const int bins = 16;
    const int range = kIsoMax - kIsoMin + 1;
    std::vector<double> expected_share(bins, 0.0);
    for (int v = 0; v < range; ++v) {
        expected_share[static_cast<std::size_t>((static_cast<long>(v) * bins) / range)] += 1.0;
    }
    std::vector<double> observed(bins, 0.0);
    double dgain_sum = 0;
    for (int i = 0; i < n; ++i) {
        const SampledParams params = sample_params(profile, rng);
        dgain_sum += params.inv_dgain.value;
        const long v = params.iso - kIsoMin;
        observed[static_cast<std::size_t>((v * bins) / range)] += 1.0;
    }
    const double mean = dgain_sum / n;
    double chi2 = 0;
    for (int b = 0; b < bins; ++b) {
        const double exp_count = expected_share[static_cast<std::size_t>(b)] / range * n;
        const double d = observed[static_cast<std::size_t>(b)] - exp_count;
        chi2 += d * d / exp_count;
    }
    // 0.99 quantile of chi-square with 15 degrees of freedom.
    const double chi2_crit = 30.57791416689249;
    detail = "dgain mean " + fmt("%.4f", mean) + ", iso chi2 " + fmt("%.2f", chi2) + " (crit " +
             fmt("%.2f", chi2_crit) + ")";
    return std::abs(mean - 0.65) <= 0.02 && chi2 < chi2_crit;
}

// Criterion 9: tabulated curves have the calibrated shapes: shot variance
// affine in ISO, read variance quadratic in ISO, SNR monotone in ADU.
bool criterion_curve_shapes(std::string& detail) {
    const SensorProfile profile = study_profiles()[0];
    const std::vector<int> iso_grid = {2400, 5000, 7600, 10200, 12800};
    std::vector<double> adu_grid;
    for (int k = 0; k < 16; ++k) {
        adu_grid.push_back(8.0 + (950.0 - 8.0) * k / 15.0);
    }
    const StatsCurves curves = stats_curves(profile, iso_grid, adu_grid, 6400);

    const auto& rows = curves.iso_rows;
    const double slope =
        (rows[1].sigma2_shot - rows[0].sigma2_shot) / (rows[1].iso - rows[0].iso);
    const double intercept = rows[0].sigma2_shot - slope * rows[0].iso;
    double shot_residual = 0;
    for (std::size_t i = 2; i < rows.size(); ++i) {
        shot_residual = std::max(
            shot_residual, std::abs(slope * rows[i].iso + intercept - rows[i].sigma2_shot));
    }

    // Quadratic through the first three points, evaluated on the rest.
    const double x0 = rows[0].iso, x1 = rows[1].iso, x2 = rows[2].iso;
    const double y0 = rows[0].sigma2_read, y1 = rows[1].sigma2_read, y2 = rows[2].sigma2_read;
    const auto quad = [&](double x) {
        return y0 * (x - x1) * (x - x2) / ((x0 - x1) * (x0 - x2)) +
               y1 * (x - x0) * (x - x2) / ((x1 - x0) * (x1 - x2)) +
               y2 * (x - x0) * (x - x1) / ((x2 - x0) * (x2 - x1));
    };
    double read_residual = 0;
    for (std::size_t i = 3; i < rows.size(); ++i) {
        read_residual = std::max(read_residual, std::abs(quad(rows[i].iso) - rows[i].sigma2_read));
    }

    bool monotone = true;
    for (std::size_t i = 1; i < curves.adu_rows.size(); ++i) {
        if (!(curves.adu_rows[i].snr_db > curves.adu_rows[i - 1].snr_db)) monotone = false;
    }
    detail = "shot residual " + fmt("%.2e", shot_residual) + ", read residual " +
             fmt("%.2e", read_residual) + ", snr " + (monotone ? "monotone" : "NOT monotone");
    return shot_residual < 1e-12 && read_residual < 1e-12 && monotone;
}

struct Criterion {
    int number;
    const char* name;
    double budget_s;  // 0 means no enforced budget
    std::function<bool(std::string&)> fn;
};

}  // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {1, "isp round trip on constant scenes", 5.0, criterion_round_trip},
        {2, "tone curve identities", 0.0, criterion_tone_curves},
        {3, "degradation noise statistics", 30.0, criterion_noise_statistics},
        {4, "mosaic of demosaic is bit-exact", 2.0, criterion_mosaic_round_trip},
        {5, "consistency loss oracles", 10.0, criterion_consistency_oracles},
        {6, "dataset generation determinism", 30.0, criterion_dataset_determinism},
        {7, "metric closed forms and worst sensor", 0.0, criterion_metrics},
        {8, "parameter sampling distributions", 0.0, criterion_sampling},
        {9, "noise curve shapes", 0.0, criterion_curve_shapes},
    };
    int failures = 0;
    for (const Criterion& c : criteria) {
        std::string detail;
        bool ok = false;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            ok = c.fn(detail);
        } catch (const std::exception& e) {
            ok = false;
            detail = std::string("exception: ") + e.what();
        }
        const double dt =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (ok && c.budget_s > 0 && dt >= c.budget_s) {
            ok = false;
            detail += "; over the " + fmt("%.0f", c.budget_s) + " s budget";
        }
        if (!ok) ++failures;
        std::printf("[%s] criterion %d: %s; %s (%.2f s)\n", ok ? "PASS" : "FAIL", c.number,
                    c.name, detail.c_str(), dt);
    }
    if (failures > 0) {
        std::printf("%d of %zu criteria failed\n", failures, criteria.size());
        return 1;
    }
    std::printf("all %zu criteria passed\n", criteria.size());
    return 0;
}
