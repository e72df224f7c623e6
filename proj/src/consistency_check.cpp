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

#include "msraw/consistency_check.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <vector>

#include "msraw/consistency.hpp"
#include "msraw/rng.hpp"

namespace msraw {
namespace {

// The brute-force oracles below recompute the losses by materializing every
// pair term in a flat list, deliberately avoiding the kernels' loop shapes.

struct TermList {
    std::vector<double> terms;

    double mean() const {
        if (terms.empty()) return 0.0;
        double s = 0.0;
        for (const double t : terms) s += t;
        return s / static_cast<double>(terms.size());
    }
};

double mean_abs(const Tensor& a) {
    double s = 0.0;
    for (const double x : a.data) s += std::abs(x);
    return s / static_cast<double>(a.data.size());
}

Tensor residual(const Tensor& vi, const Tensor& vj, const Tensor& ui, const Tensor& uj) {
    Tensor d = vi;
    for (std::size_t e = 0; e < d.data.size(); ++e) {
        d.data[e] = (vi.data[e] - vj.data[e]) - (ui.data[e] - uj.data[e]);
    }
    return d;
}

double brute_intra(std::span<const ImageFeatures> images) {
    TermList list;
    for (const ImageFeatures& img : images) {
        for (const auto& scale : img) {
            for (std::size_t i = 0; i < scale.size(); ++i) {
                for (std::size_t j = 0; j < scale.size(); ++j) {
                    if (i >= j) continue;
                    list.terms.push_back(
                        mean_abs(residual(scale[i].v, scale[j].v, scale[i].u, scale[j].u)));
                }
            }
        }
    }
    return list.mean();
}

double brute_inter(std::span<const ImageFeatures> batch) {
    if (batch.size() < 2) return 0.0;
    TermList list;
    if (batch.empty()) return 0.0;
    const std::size_t scales = batch[0].size();
    for (std::size_t l = 0; l < scales; ++l) {
        const std::size_t n = batch[0][l].size();
        for (std::size_t m = 0; m < batch.size(); ++m) {
            for (std::size_t q = 0; q < batch.size(); ++q) {
                if (m >= q) continue;
                for (std::size_t i = 0; i < n; ++i) {
                    for (std::size_t j = 0; j < n; ++j) {
                        if (i == j) continue;
                        list.terms.push_back(mean_abs(residual(batch[m][l][i].v, batch[q][l][j].v,
                                                               batch[m][l][i].u,
                                                               batch[q][l][j].u)));
                    }
                }
            }
        }
    }
    return list.mean();
}

std::string fmt(double x) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.3e", x);
    return buf;
}

Tensor random_tensor(const std::vector<std::size_t>& shape, Rng& rng) {
    Tensor t = Tensor::zeros(shape);
    for (double& x : t.data) x = rng.uniform(-1.0, 1.0);
    return t;
}

std::vector<ImageFeatures> random_features(Rng& rng, std::size_t images, std::size_t scales,
                                           std::size_t sensors) {
    std::vector<std::size_t> shape{1 + rng.uniform_int(4), 1 + rng.uniform_int(4)};
    std::vector<ImageFeatures> feats(images);
    for (ImageFeatures& img : feats) {
        img.resize(scales);
        for (auto& scale : img) {
            scale.resize(sensors);
            for (FeaturePair& pair : scale) {
                pair.u = random_tensor(shape, rng);
                pair.v = random_tensor(shape, rng);
            }
        }
    }
    return feats;
}

// Smallest |residual entry| over every pair term of both losses; finite
// difference checks are skipped near the subgradient kinks.
double min_kink_distance(std::span<const ImageFeatures> feats) {
    double best = 1e300;
    const std::size_t scales = feats.empty() ? 0 : feats[0].size();
    for (std::size_t l = 0; l < scales; ++l) {
        const std::size_t n = feats[0][l].size();
        for (std::size_t m = 0; m < feats.size(); ++m) {
            for (std::size_t q = m; q < feats.size(); ++q) {
                for (std::size_t i = 0; i < n; ++i) {
                    for (std::size_t j = 0; j < n; ++j) {
                        if (i == j) continue;
                        if (m == q && i > j) continue;
                        const Tensor d = residual(feats[m][l][i].v, feats[q][l][j].v,
                                                  feats[m][l][i].u, feats[q][l][j].u);
                        for (const double x : d.data) best = std::min(best, std::abs(x));
                    }
                }
            }
        }
    }
    return best;
}

using LossFn = ConsistencyLoss (*)(std::span<const ImageFeatures>);

bool fd_gradient_check(LossFn fn, std::vector<ImageFeatures> feats, double& worst_rel) {
    const ConsistencyLoss base = fn(feats);
    if (base.v_grads.empty()) return true;
    const double h = 1e-5;
    bool ok = true;
    for (std::size_t b = 0; b < feats.size(); ++b) {
        for (std::size_t l = 0; l < feats[b].size(); ++l) {
            for (std::size_t i = 0; i < feats[b][l].size(); ++i) {
                for (std::size_t e = 0; e < feats[b][l][i].v.data.size(); ++e) {
                    double& slot = feats[b][l][i].v.data[e];
                    const double saved = slot;
                    slot = saved + h;
                    const double up = fn(feats).value;
                    slot = saved - h;
                    const double dn = fn(feats).value;
                    slot = saved;
                    const double numeric = (up - dn) / (2.0 * h);
                    const double analytic = base.v_grads[b][l][i].data[e];
                    const double diff = std::abs(numeric - analytic);
                    // Exactly-zero gradients (cancelling sign terms) leave
                    // only rounding noise in the finite difference, so an
                    // absolute floor accompanies the relative tolerance.
                    if (diff <= 1e-8) continue;
                    const double scale = std::max(std::abs(numeric), std::abs(analytic));
                    const double rel = diff / scale;
                    worst_rel = std::max(worst_rel, rel);
                    if (rel > 1e-4) ok = false;
                }
            }
        }
    }
    return ok;
}

std::vector<ImageFeatures> permute_sensors(const std::vector<ImageFeatures>& feats,
                                           const std::vector<std::size_t>& perm) {
    std::vector<ImageFeatures> out = feats;
    for (ImageFeatures& img : out) {
        for (auto& scale : img) {
            auto original = scale;
            for (std::size_t i = 0; i < perm.size(); ++i) scale[i] = original[perm[i]];
        }
    }
    return out;
}

}  // namespace

bool CheckReport::all_pass() const {
    for (const CheckLine& line : lines) {
        if (!line.pass) return false;
    }
    return true;
}

std::string CheckReport::to_string() const {
    std::string out;
    for (const CheckLine& line : lines) {
        out += line.pass ? "PASS " : "FAIL ";
        out += line.name;
        if (!line.detail.empty()) {
            out += ": ";
            out += line.detail;
        }
        out += "\n";
    }
    return out;
}

CheckReport run_consistency_checks(std::uint64_t seed, int trials) {
    CheckReport report;
    auto add = [&report](const std::string& name, bool pass, const std::string& detail) {
        report.lines.push_back({name, pass, detail});
    };
    if (trials < 1) trials = 1;

    {
        // Worked example: one image, one scale, two sensors.
        ImageFeatures img(1);
        img[0].resize(2);
        img[0][0].u = Tensor({2}, {1.0, 2.0});
        img[0][0].v = Tensor({2}, {1.0, 1.0});
        img[0][1].u = Tensor({2}, {0.0, 0.0});
        img[0][1].v = Tensor({2}, {0.0, 0.0});
        const std::vector<ImageFeatures> feats{img};
        const ConsistencyLoss loss = intra_loss(feats);
        const bool pass = std::abs(loss.value - 0.5) <= 1e-12;
        add("intra worked example", pass, "loss " + fmt(loss.value) + " expected 5.000e-01");
    }
    {
        // Worked example: two scalar-feature images, two sensors, V == U
        // except V of sensor 0 in image 0 is raised by 0.2.
        std::vector<ImageFeatures> batch(2);
        const double u[2][2] = {{1.0, 0.0}, {2.0, 1.0}};
        for (std::size_t m = 0; m < 2; ++m) {
            batch[m].resize(1);
            batch[m][0].resize(2);
            for (std::size_t i = 0; i < 2; ++i) {
                batch[m][0][i].u = Tensor::scalar(u[m][i]);
                batch[m][0][i].v = Tensor::scalar(u[m][i]);
            }
        }
        const ConsistencyLoss zero = inter_loss(batch);
        batch[0][0][0].v.data[0] += 0.2;
        const ConsistencyLoss loss = inter_loss(batch);
        const bool pass = std::abs(zero.value) <= 1e-12 && std::abs(loss.value - 0.1) <= 1e-12 &&
                          std::abs(loss.v_grads[0][0][0].data[0] - 0.5) <= 1e-12;
        add("inter worked example", pass,
            "loss " + fmt(loss.value) + " expected 1.000e-01, grad " +
                fmt(loss.v_grads.empty() ? 0.0 : loss.v_grads[0][0][0].data[0]) +
                " expected 5.000e-01");
    }

    Rng rng(mix64(seed, {"loss-check"}));
    {
        double worst = 0.0;
        bool pass = true;
        for (int t = 0; t < trials; ++t) {
            const auto feats = random_features(rng, 1 + rng.uniform_int(3), 1 + rng.uniform_int(2),
                                               2 + rng.uniform_int(3));
            const double got = intra_loss(feats).value;
            const double want = brute_intra(feats);
            worst = std::max(worst, std::abs(got - want));
            if (std::abs(got - want) > 1e-12) pass = false;
        }
        add("intra brute-force oracle", pass, "worst |diff| " + fmt(worst));
    }
    {
        double worst = 0.0;
        bool pass = true;
        for (int t = 0; t < trials; ++t) {
            const auto feats = random_features(rng, 2 + rng.uniform_int(2), 1 + rng.uniform_int(2),
                                               2 + rng.uniform_int(2));
            const double got = inter_loss(feats).value;
            const double want = brute_inter(feats);
            worst = std::max(worst, std::abs(got - want));
            if (std::abs(got - want) > 1e-12) pass = false;
        }
        add("inter brute-force oracle", pass, "worst |diff| " + fmt(worst));
    }
    {
        double worst = 0.0;
        bool pass = true;
        int done = 0;
        int attempts = 0;
        while (done < trials && attempts < trials * 50) {
            ++attempts;
            const auto feats = random_features(rng, 1 + rng.uniform_int(3), 1, 2);
            if (min_kink_distance(feats) < 1e-3) continue;
            if (!fd_gradient_check(&intra_loss, feats, worst)) pass = false;
            ++done;
        }
        if (done < trials) pass = false;
        add("intra finite-difference gradients", pass, "worst rel err " + fmt(worst));
    }
    {
        double worst = 0.0;
        bool pass = true;
        int done = 0;
        int attempts = 0;
        while (done < trials && attempts < trials * 50) {
            ++attempts;
            const auto feats = random_features(rng, 2 + rng.uniform_int(2), 1, 2);
            if (min_kink_distance(feats) < 1e-3) continue;
            if (!fd_gradient_check(&inter_loss, feats, worst)) pass = false;
            ++done;
        }
        if (done < trials) pass = false;
        add("inter finite-difference gradients", pass, "worst rel err " + fmt(worst));
    }
    {
        // Sensor permutation and image swap invariance.
        bool pass = true;
        double worst = 0.0;
        for (int t = 0; t < trials; ++t) {
            const std::size_t sensors = 3;
            auto feats = random_features(rng, 2, 2, sensors);
            std::vector<std::size_t> perm{2, 0, 1};
            const auto permuted = permute_sensors(feats, perm);
            const double d1 = std::abs(intra_loss(feats).value - intra_loss(permuted).value);
            const double d2 = std::abs(inter_loss(feats).value - inter_loss(permuted).value);
            auto swapped = feats;
            std::swap(swapped[0], swapped[1]);
            const double d3 = std::abs(inter_loss(feats).value - inter_loss(swapped).value);
            worst = std::max({worst, d1, d2, d3});
            if (d1 > 1e-12 || d2 > 1e-12 || d3 > 1e-12) pass = false;
        }
        add("permutation and swap invariance", pass, "worst |diff| " + fmt(worst));
    }
    {
        // Adding one constant tensor to every U and V leaves both losses
        // unchanged.
        bool pass = true;
        double worst = 0.0;
        for (int t = 0; t < trials; ++t) {
            auto feats = random_features(rng, 2, 1, 2);
            const double intra0 = intra_loss(feats).value;
            const double inter0 = inter_loss(feats).value;
            const Tensor shift = random_tensor(feats[0][0][0].u.shape, rng);
            for (auto& img : feats) {
                for (auto& scale : img) {
                    for (FeaturePair& pair : scale) {
                        for (std::size_t e = 0; e < shift.data.size(); ++e) {
                            pair.u.data[e] += shift.data[e];
                            pair.v.data[e] += shift.data[e];
                        }
                    }
                }
            }
            const double d1 = std::abs(intra_loss(feats).value - intra0);
            const double d2 = std::abs(inter_loss(feats).value - inter0);
            worst = std::max({worst, d1, d2});
            if (d1 > 1e-9 || d2 > 1e-9) pass = false;
        }
        add("translation invariance", pass, "worst |diff| " + fmt(worst));
    }
    {
        // Gradient reversal: forward copies bitwise, backward scales by
        // -alpha. A finite difference of the forward value of sum(x) is +1
        // while the contracted backward gradient is -alpha.
        bool pass = true;
        const Tensor x = random_tensor({3, 3}, rng);
        const Tensor fwd = grad_reverse_forward(x);
        if (fwd.data != x.data || fwd.shape != x.shape) pass = false;
        const double alpha = 0.7;
        Tensor upstream = Tensor::zeros(x.shape);
        for (double& g : upstream.data) g = 1.0;  // d(sum)/dx
        const Tensor back = grad_reverse_backward(upstream, alpha);
        for (const double g : back.data) {
            if (g != -alpha) pass = false;
        }
        const Tensor zero_back = grad_reverse_backward(upstream, 0.0);
        for (const double g : zero_back.data) {
            if (g != 0.0) pass = false;
        }
        add("gradient reversal contract", pass, "");
    }
    {
        // Degenerate inputs collapse to zero losses with no gradients.
        const auto one_sensor = random_features(rng, 2, 1, 1);
        const auto one_image = random_features(rng, 1, 1, 3);
        const ConsistencyLoss a = intra_loss(one_sensor);
        const ConsistencyLoss b = inter_loss(one_image);
        const bool pass =
            a.value == 0.0 && a.v_grads.empty() && b.value == 0.0 && b.v_grads.empty();
        add("degenerate inputs", pass, "");
    }
    return report;
}

}  // namespace msraw
