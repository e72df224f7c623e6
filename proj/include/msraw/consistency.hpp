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
#include <span>
#include <vector>

namespace msraw {

// Dense N-dimensional numeric array, row-major doubles. Just enough tensor
// for the loss kernels; no broadcasting, no views.
struct Tensor {
    std::vector<std::size_t> shape;
    std::vector<double> data;

    Tensor() = default;
    Tensor(std::vector<std::size_t> s, std::vector<double> d)
        : shape(std::move(s)), data(std::move(d)) {}

    static Tensor zeros(const std::vector<std::size_t>& shape);
    static Tensor scalar(double v) { return Tensor({}, {v}); }

    std::size_t numel() const { return data.size(); }
    bool same_shape(const Tensor& o) const { return shape == o.shape; }
};

// Scale-consistent input/output feature pair at one stage of a network.
// U is the reference (gradient-stopped); V carries gradient.
struct FeaturePair {
    Tensor u;
    Tensor v;
};

// Features for one image: [scale][sensor] -> (U, V).
using ImageFeatures = std::vector<std::vector<FeaturePair>>;

// Loss value plus analytic gradients w.r.t. every V tensor, indexed
// [image][scale][sensor] with the same shapes as the inputs. Degenerate
// inputs (too few sensors or images) give value 0 and empty gradients.
struct ConsistencyLoss {
    double value = 0.0;
    std::vector<std::vector<std::vector<Tensor>>> v_grads;
};

// Relation-preservation loss within each image: mean over scales, images and
// unordered sensor pairs (i < j) of the mean absolute entry of
//   (V_i - V_j) - (U_i - U_j).
// Gradients are the sign-based subgradient (0 at exact zeros), scaled by the
// same mean normalization. Shape mismatches across sensors/scales/images
// throw shape_error.
ConsistencyLoss intra_loss(std::span<const ImageFeatures> images);

// Cross-image form over a batch: mean over scales, unordered image pairs
// {m, n} and ordered sensor pairs (i != j) of the mean absolute entry of
//   (V_i(I_m) - V_j(I_n)) - (U_i(I_m) - U_j(I_n)).
// Both sensor orientations of each image pair are counted, which makes the
// loss invariant under swapping images and permuting sensors.
ConsistencyLoss inter_loss(std::span<const ImageFeatures> batch);

// Gradient reversal operator. Forward is a bit-exact copy; the backward
// contract multiplies the upstream gradient by -alpha.
Tensor grad_reverse_forward(const Tensor& x);
Tensor grad_reverse_backward(const Tensor& upstream_grad, double alpha);

struct AdvLossInputs {
    double recon_loss = 0;  // reconstruction loss
    double class_loss = 0;  // sensor classification loss
    double alpha = 0;       // in [0,1]

    void validate() const;
};

// recon_loss - alpha * class_loss (per-sample form).
double adv_loss(const AdvLossInputs& inputs);

// Linear ramp t / T in [0,1]; t > T clamps to 1. Requires T > 0 and t >= 0.
double alpha_schedule(std::uint64_t t, std::uint64_t T);

// Balance weights of the combined supervision. Defaults 0.1 / 0.1 / 1.0.
struct LossWeights {
    double lambda_inter = 0.1;
    double lambda_intra = 0.1;
    double lambda_adv = 1.0;

    void validate() const;  // all >= 0
};

// lambda_inter * inter + lambda_intra * intra + lambda_adv * adv.
double ms_loss(double intra, double inter, double adv, const LossWeights& weights = {});

}  // namespace msraw
