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

#include <doctest.h>

#include <stdexcept>
#include <vector>

#include "msraw/consistency.hpp"
#include "msraw/consistency_check.hpp"
#include "msraw/errors.hpp"

using namespace msraw;

namespace {

ImageFeatures one_scale(std::vector<FeaturePair> sensors) {
    ImageFeatures f;
    f.push_back(std::move(sensors));
    return f;
}

Tensor vec(std::vector<double> d) {
    const std::size_t n = d.size();  // read before the move below
    return Tensor({n}, std::move(d));
}

}  // namespace

TEST_SUITE_BEGIN("consistency");

TEST_CASE("intra loss worked example") {
    // Two sensors, one image, one scale:
    //   D = (V1 - V2) - (U1 - U2) = [0, -1], mean |D| = 0.5.
    std::vector<ImageFeatures> images;
    images.push_back(one_scale({{vec({1, 2}), vec({1, 1})}, {vec({0, 0}), vec({0, 0})}}));
    const ConsistencyLoss loss = intra_loss(images);
    CHECK(loss.value == 0.5);
    REQUIRE(loss.v_grads.size() == 1);
    REQUIRE(loss.v_grads[0].size() == 1);
    REQUIRE(loss.v_grads[0][0].size() == 2);
    CHECK(loss.v_grads[0][0][0].data == std::vector<double>{0.0, -0.5});
    CHECK(loss.v_grads[0][0][1].data == std::vector<double>{0.0, 0.5});
}

TEST_CASE("inter loss worked example") {
    // Two scalar sensors, two images. Everything cancels except the term
    // that pairs the perturbed V of sensor 0 on image 0 against image 1:
    // term (0,1) gives |0.2|, term (1,0) gives 0, mean over the two ordered
    // sensor pairs is 0.1.
    std::vector<ImageFeatures> batch;
    batch.push_back(one_scale({{Tensor::scalar(0.4), Tensor::scalar(0.6)},
                               {Tensor::scalar(0.4), Tensor::scalar(0.4)}}));
    batch.push_back(one_scale({{Tensor::scalar(0.4), Tensor::scalar(0.4)},
                               {Tensor::scalar(0.4), Tensor::scalar(0.4)}}));
    const ConsistencyLoss loss = inter_loss(batch);
    CHECK(loss.value == doctest::Approx(0.1).epsilon(1e-15));
    REQUIRE(loss.v_grads.size() == 2);
    CHECK(loss.v_grads[0][0][0].data == std::vector<double>{0.5});
    CHECK(loss.v_grads[1][0][1].data == std::vector<double>{-0.5});
    CHECK(loss.v_grads[0][0][1].data == std::vector<double>{0.0});
    CHECK(loss.v_grads[1][0][0].data == std::vector<double>{0.0});
}

TEST_CASE("degenerate inputs give zero loss and no gradients") {
    std::vector<ImageFeatures> single_sensor;
    single_sensor.push_back(one_scale({{vec({1, 2}), vec({3, 4})}}));
    const ConsistencyLoss intra = intra_loss(single_sensor);
    CHECK(intra.value == 0.0);
    CHECK(intra.v_grads.empty());

    std::vector<ImageFeatures> single_image;
    single_image.push_back(one_scale({{vec({1}), vec({2})}, {vec({3}), vec({4})}}));
    const ConsistencyLoss inter = inter_loss(single_image);
    CHECK(inter.value == 0.0);
    CHECK(inter.v_grads.empty());

    CHECK(intra_loss({}).value == 0.0);
    CHECK(inter_loss({}).value == 0.0);
}

TEST_CASE("mismatched feature shapes are rejected") {
    std::vector<ImageFeatures> bad;
    bad.push_back(one_scale({{vec({1, 2}), vec({1, 2})}, {vec({1}), vec({1})}}));
    CHECK_THROWS_AS(intra_loss(bad), shape_error);

    std::vector<ImageFeatures> uneven;
    uneven.push_back(one_scale({{vec({1}), vec({1})}, {vec({1}), vec({1})}}));
    uneven.push_back(ImageFeatures{});  // different scale count
    CHECK_THROWS_AS(inter_loss(uneven), shape_error);

    std::vector<ImageFeatures> torn;
    torn.push_back(one_scale({{vec({1, 2}), vec({1})}, {vec({1, 2}), vec({1, 2})}}));
    CHECK_THROWS_AS(intra_loss(torn), shape_error);
}

TEST_CASE("gradient reversal is a copy forward and a scaled negation backward") {
    const Tensor x({2, 2}, {0.25, -0.5, 1.0, 0.0});
    const Tensor fwd = grad_reverse_forward(x);
    CHECK(fwd.shape == x.shape);
    CHECK(fwd.data == x.data);

    const Tensor back = grad_reverse_backward(x, 0.5);
    CHECK(back.data == std::vector<double>{-0.125, 0.25, -0.5, 0.0});

    const Tensor frozen = grad_reverse_backward(x, 0.0);
    for (const double g : frozen.data) CHECK(g == 0.0);

    CHECK_THROWS_AS(grad_reverse_backward(x, -0.1), std::range_error);
}

TEST_CASE("adversarial loss and its schedule") {
    CHECK(adv_loss({1.0, 0.5, 0.8}) == 0.6);
    CHECK(adv_loss({1.0, 0.5, 0.0}) == 1.0);
    CHECK_THROWS_AS(adv_loss({1.0, 0.5, 1.5}), std::range_error);
    CHECK_THROWS_AS(adv_loss({1.0, 0.5, -0.1}), std::range_error);

    CHECK(alpha_schedule(0, 10) == 0.0);
    CHECK(alpha_schedule(5, 10) == 0.5);
    CHECK(alpha_schedule(10, 10) == 1.0);
    CHECK(alpha_schedule(15, 10) == 1.0);
    CHECK_THROWS_AS(alpha_schedule(1, 0), std::range_error);
}

TEST_CASE("combined loss applies the balance weights") {
    CHECK(ms_loss(1.0, 1.0, 1.0) == doctest::Approx(1.2).epsilon(1e-15));
    CHECK(ms_loss(2.0, 3.0, 4.0, {0.5, 0.25, 1.0}) == 6.0);
    CHECK(ms_loss(0.0, 0.0, 0.0) == 0.0);
    LossWeights negative{-0.1, 0.1, 1.0};
    CHECK_THROWS_AS(ms_loss(1.0, 1.0, 1.0, negative), std::range_error);
}

TEST_CASE("self-check harness passes end to end") {
    const CheckReport report = run_consistency_checks(3, 5);
    CHECK(report.all_pass());
    CHECK(report.lines.size() >= 8);
    const std::string text = report.to_string();
    CHECK(text.find("PASS") != std::string::npos);
    CHECK(text.find("FAIL") == std::string::npos);
}

TEST_SUITE_END();
