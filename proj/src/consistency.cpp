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

#include "msraw/consistency.hpp"

#include <sstream>

#include "msraw/errors.hpp"

namespace msraw {
namespace {

double sign(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

std::size_t shape_numel(const std::vector<std::size_t>& shape) {
    std::size_t n = 1;
    for (const std::size_t d : shape) n *= d;
    return n;
}

// Checks that every image has the same scale count, every scale the same
// sensor count, and that all tensors within one scale share one shape.
void validate_features(std::span<const ImageFeatures> images) {
    if (images.empty()) return;
    const std::size_t scales = images[0].size();
    for (const ImageFeatures& img : images) {
        if (img.size() != scales) {
            throw shape_error("feature scale counts differ across images");
        }
    }
    for (std::size_t l = 0; l < scales; ++l) {
        const std::size_t sensors = images[0][l].size();
        for (const ImageFeatures& img : images) {
            if (img[l].size() != sensors) {
                std::ostringstream os;
                os << "sensor counts differ at scale " << l;
                throw shape_error(os.str());
            }
        }
        if (sensors == 0) continue;
        const Tensor& ref = images[0][l][0].u;
        for (const ImageFeatures& img : images) {
            for (const FeaturePair& pair : img[l]) {
                if (!pair.u.same_shape(pair.v) || !pair.u.same_shape(ref)) {
                    std::ostringstream os;
                    os << "tensor shapes differ at scale " << l;
                    throw shape_error(os.str());
                }
                if (pair.u.data.size() != shape_numel(pair.u.shape) ||
                    pair.v.data.size() != shape_numel(pair.v.shape)) {
                    throw shape_error("tensor buffer size does not match its shape");
                }
            }
        }
    }
}

std::vector<std::vector<std::vector<Tensor>>> zero_grads(std::span<const ImageFeatures> images) {
    std::vector<std::vector<std::vector<Tensor>>> grads(images.size());
    for (std::size_t b = 0; b < images.size(); ++b) {
        grads[b].resize(images[b].size());
        for (std::size_t l = 0; l < images[b].size(); ++l) {
            grads[b][l].reserve(images[b][l].size());
            for (const FeaturePair& pair : images[b][l]) {
                grads[b][l].push_back(Tensor::zeros(pair.v.shape));
            }
        }
    }
    return grads;
}

}  // namespace

Tensor Tensor::zeros(const std::vector<std::size_t>& shape) {
    Tensor t;
    t.shape = shape;
    t.data.assign(shape_numel(shape), 0.0);
    return t;
}

ConsistencyLoss intra_loss(std::span<const ImageFeatures> images) {
    validate_features(images);
    // Total number of (image, scale, sensor-pair) terms.
    std::size_t terms = 0;
    for (const ImageFeatures& img : images) {
        for (const auto& scale : img) {
            const std::size_t n = scale.size();
            terms += n * (n - 1) / 2;
        }
    }
    if (terms == 0) return {};

    ConsistencyLoss result;
    result.v_grads = zero_grads(images);
    double loss_sum = 0.0;
    for (std::size_t b = 0; b < images.size(); ++b) {
        const ImageFeatures& img = images[b];
        for (std::size_t l = 0; l < img.size(); ++l) {
            const auto& scale = img[l];
            for (std::size_t i = 0; i + 1 < scale.size(); ++i) {
                for (std::size_t j = i + 1; j < scale.size(); ++j) {
                    const std::size_t numel = scale[i].v.numel();
                    const double w = 1.0 / (static_cast<double>(numel) *
                                            static_cast<double>(terms));
                    double term = 0.0;
                    for (std::size_t e = 0; e < numel; ++e) {
                        const double d = (scale[i].v.data[e] - scale[j].v.data[e]) -
                                         (scale[i].u.data[e] - scale[j].u.data[e]);
                        term += d > 0.0 ? d : -d;
                        const double s = sign(d);
                        result.v_grads[b][l][i].data[e] += s * w;
                        result.v_grads[b][l][j].data[e] -= s * w;
                    }
                    loss_sum += term / static_cast<double>(numel);
                }
            }
        }
    }
    result.value = loss_sum / static_cast<double>(terms);
    return result;
}

ConsistencyLoss inter_loss(std::span<const ImageFeatures> batch) {
    validate_features(batch);
    if (batch.size() < 2) return {};
    const std::size_t pairs_mn = batch.size() * (batch.size() - 1) / 2;
    std::size_t terms = 0;
    for (const auto& scale : batch[0]) {
        const std::size_t n = scale.size();
        terms += pairs_mn * n * (n - 1);
    }
    if (terms == 0) return {};

    ConsistencyLoss result;
    result.v_grads = zero_grads(batch);
    double loss_sum = 0.0;
    for (std::size_t l = 0; l < batch[0].size(); ++l) {
        const std::size_t n = batch[0][l].size();
        for (std::size_t m = 0; m + 1 < batch.size(); ++m) {
            for (std::size_t q = m + 1; q < batch.size(); ++q) {
                // Both sensor orientations of the unordered image pair {m, q}
                // are enumerated, which keeps the loss symmetric in the
                // images and in the sensors.
                for (std::size_t i = 0; i < n; ++i) {
                    for (std::size_t j = 0; j < n; ++j) {
                        if (i == j) continue;
                        const Tensor& vm = batch[m][l][i].v;
                        const Tensor& vq = batch[q][l][j].v;
                        const Tensor& um = batch[m][l][i].u;
                        const Tensor& uq = batch[q][l][j].u;
                        const std::size_t numel = vm.numel();
                        const double w = 1.0 / (static_cast<double>(numel) *
                                                static_cast<double>(terms));
                        double term = 0.0;
                        for (std::size_t e = 0; e < numel; ++e) {
                            const double d =
                                (vm.data[e] - vq.data[e]) - (um.data[e] - uq.data[e]);
                            term += d > 0.0 ? d : -d;
                            const double s = sign(d);
                            result.v_grads[m][l][i].data[e] += s * w;
                            result.v_grads[q][l][j].data[e] -= s * w;
                        }
                        loss_sum += term / static_cast<double>(numel);
                    }
                }
            }
        }
    }
    result.value = loss_sum / static_cast<double>(terms);
    return result;
}

Tensor grad_reverse_forward(const Tensor& x) { return x; }

Tensor grad_reverse_backward(const Tensor& upstream_grad, double alpha) {
    if (!(alpha >= 0.0)) {
        std::ostringstream os;
        os << "grad_reverse: alpha " << alpha << " must be nonnegative";
        throw std::range_error(os.str());
    }
    Tensor out = upstream_grad;
    for (double& g : out.data) g *= -alpha;
    return out;
}

void AdvLossInputs::validate() const {
    if (!(alpha >= 0.0 && alpha <= 1.0)) {
        std::ostringstream os;
        os << "adversarial alpha " << alpha << " outside [0,1]";
        throw std::range_error(os.str());
    }
}

double adv_loss(const AdvLossInputs& inputs) {
    inputs.validate();
    return inputs.recon_loss - inputs.alpha * inputs.class_loss;
}

double alpha_schedule(std::uint64_t t, std::uint64_t T) {
    if (T == 0) throw std::range_error("alpha_schedule: total iterations must be positive");
    if (t >= T) return 1.0;
    return static_cast<double>(t) / static_cast<double>(T);
}

void LossWeights::validate() const {
    if (lambda_inter < 0.0 || lambda_intra < 0.0 || lambda_adv < 0.0) {
        throw std::range_error("loss weights must be nonnegative");
    }
}

double ms_loss(double intra, double inter, double adv, const LossWeights& weights) {
    weights.validate();
    return weights.lambda_inter * inter + weights.lambda_intra * intra + weights.lambda_adv * adv;
}

}  // namespace msraw
