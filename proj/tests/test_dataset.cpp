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

#include <algorithm>
#include <filesystem>
#include <string>
#include <vector>

#include "msraw/dataset.hpp"
#include "msraw/errors.hpp"
#include "msraw/io.hpp"
#include "msraw/rng.hpp"
#include "test_util.hpp"

using namespace msraw;
namespace fs = std::filesystem;

namespace {

SensorProfile two_illuminant_profile() {
    SensorProfile p;
    p.name = "sp";
    p.noise = {2e-6, 1e-5, 1e-11, 1e-8, 1e-6};
    p.black_level = 64;
    p.white_level = 1023;
    p.awb_table["D65"] = {2.0, 1.0, 1.5};
    p.awb_table["TL84"] = {1.6, 1.0, 1.9};
    p.ccm_day.m = {{{1.5, -0.3, -0.2}, {-0.25, 1.45, -0.2}, {-0.1, -0.4, 1.5}}};
    p.ccm_night.m = {{{1.3, -0.2, -0.1}, {-0.15, 1.3, -0.15}, {-0.05, -0.25, 1.3}}};
    return p;
}

const char* kProfileA = R"({
  "name": "cam_a",
  "units": "normalized",
  "noise": {"k0": 2e-06, "k1": 1e-05, "b0": 1e-11, "b1": 1e-08, "b2": 1e-06},
  "black_level": 64,
  "white_level": 1023,
  "awb": {
    "D65": {"r_gain": 2.0, "b_gain": 1.5},
    "TL84": {"r_gain": 1.6, "b_gain": 1.9}
  },
  "ccm_day": [[1.5, -0.3, -0.2], [-0.25, 1.45, -0.2], [-0.1, -0.4, 1.5]],
  "ccm_night": [[1.3, -0.2, -0.1], [-0.15, 1.3, -0.15], [-0.05, -0.25, 1.3]]
})";

const char* kProfileB = R"({
  "name": "cam_b",
  "units": "normalized",
  "noise": {"k0": 4e-06, "k1": 2e-05, "b0": 2e-11, "b1": 2e-08, "b2": 2e-06},
  "black_level": 256,
  "white_level": 4095,
  "awb": {
    "D65": {"r_gain": 2.2, "b_gain": 1.4},
    "CWF": {"r_gain": 1.5, "b_gain": 2.0}
  },
  "ccm_day": [[1.7, -0.5, -0.2], [-0.3, 1.6, -0.3], [-0.15, -0.45, 1.6]],
  "ccm_night": [[1.45, -0.3, -0.15], [-0.2, 1.4, -0.2], [-0.1, -0.3, 1.4]]
})";

struct Corpus {
    fs::path sources;
    std::vector<fs::path> profiles;
};

Corpus build_corpus(const test::TempDir& tmp) {
    Corpus c;
    c.sources = tmp / "sources";
    fs::create_directories(c.sources / "train" / "nested");
    fs::create_directories(c.sources / "val");
    Rng rng(2024);
    write_ppm16(c.sources / "train" / "img_a.ppm", test::random_rgb(32, 32, rng));
    write_ppm16(c.sources / "train" / "nested" / "img_b.ppm", test::random_rgb(32, 32, rng));
    write_ppm16(c.sources / "val" / "img_c.ppm", test::random_rgb(19, 17, rng));
    write_ppm16(c.sources / "train" / "tiny.ppm", test::random_rgb(8, 8, rng));
    write_file_bytes(c.sources / "train" / "broken.ppm", "not a ppm at all");
    c.profiles = {tmp / "cam_a.json", tmp / "cam_b.json"};
    write_file_bytes(c.profiles[0], kProfileA);
    write_file_bytes(c.profiles[1], kProfileB);
    return c;
}

GenerationConfig toy_config(const Corpus& corpus, const fs::path& out) {
    GenerationConfig config;
    config.source_dir = corpus.sources;
    config.out_dir = out;
    config.sensor_profiles = corpus.profiles;
    config.global_seed = 991;
    config.train = {8, 2};  // 16x16 srgb crops, two per image
    config.val = {0, 1};    // full frame, trimmed to even
    return config;
}

}  // namespace

TEST_SUITE_BEGIN("dataset");

TEST_CASE("sample_params draws within the documented ranges") {
    const SensorProfile profile = two_illuminant_profile();
    Rng rng(314);
    for (int t = 0; t < 100; ++t) {
        const SampledParams p = sample_params(profile, rng);
        CHECK(p.inv_dgain.value >= 0.1);
        CHECK(p.inv_dgain.value <= 1.0);
        CHECK(p.awb_weight >= 0.0);
        CHECK(p.awb_weight <= 1.0);
        CHECK(p.ccm_alpha >= 0.0);
        CHECK(p.ccm_alpha <= 1.0);
        CHECK(p.iso >= kIsoMin);
        CHECK(p.iso <= kIsoMax);
        CHECK(p.awb_illum_a != p.awb_illum_b);
        CHECK(profile.awb_table.count(p.awb_illum_a) == 1);
        CHECK(profile.awb_table.count(p.awb_illum_b) == 1);

        // The gains are the convex mix of the two drawn illuminants and the
        // CCM is the drawn blend of day and night.
        const WhiteBalanceGains& ga = profile.awb_table.at(p.awb_illum_a);
        const WhiteBalanceGains& gb = profile.awb_table.at(p.awb_illum_b);
        const double w = p.awb_weight;
        CHECK(p.awb.r_gain ==
              doctest::Approx(w * ga.r_gain + (1 - w) * gb.r_gain).epsilon(1e-15));
        CHECK(p.awb.b_gain ==
              doctest::Approx(w * ga.b_gain + (1 - w) * gb.b_gain).epsilon(1e-15));
        CHECK(p.awb.b_gain >= std::min(ga.b_gain, gb.b_gain));
        CHECK(p.awb.b_gain <= std::max(ga.b_gain, gb.b_gain));
        CHECK(p.awb.g_gain == 1.0);
        CHECK(p.ccm.m == ccm_mix(profile.ccm_day, profile.ccm_night, p.ccm_alpha).m);
    }
}

TEST_CASE("sample_params is deterministic and honors custom models") {
    const SensorProfile profile = two_illuminant_profile();
    Rng a(55), b(55);
    const SampledParams pa = sample_params(profile, a);
    const SampledParams pb = sample_params(profile, b);
    CHECK(pa.inv_dgain.value == pb.inv_dgain.value);
    CHECK(pa.awb_weight == pb.awb_weight);
    CHECK(pa.ccm_alpha == pb.ccm_alpha);
    CHECK(pa.iso == pb.iso);
    CHECK(pa.awb_illum_a == pb.awb_illum_a);
    CHECK(pa.awb_illum_b == pb.awb_illum_b);

    Rng c(56);
    const DgainModel pinned{0.9, 0.0, 0.5, 1.0};  // sd 0 pins the draw
    const IsoRange point{5000, 5000};
    const SampledParams pc = sample_params(profile, c, pinned, point);
    CHECK(pc.inv_dgain.value == 0.9);
    CHECK(pc.iso == 5000);
}

TEST_CASE("sample_params with identical illuminants keeps their gains") {
    SensorProfile profile = two_illuminant_profile();
    profile.awb_table.clear();
    profile.awb_table["A"] = {1.7, 1.0, 1.35};
    profile.awb_table["B"] = {1.7, 1.0, 1.35};
    Rng rng(77);
    for (int t = 0; t < 20; ++t) {
        const SampledParams p = sample_params(profile, rng);
        CHECK(p.awb.r_gain == doctest::Approx(1.7).epsilon(1e-12));
        CHECK(p.awb.b_gain == doctest::Approx(1.35).epsilon(1e-12));
    }
}

TEST_CASE("sample_params needs two illuminants") {
    SensorProfile profile = two_illuminant_profile();
    profile.awb_table.clear();
    profile.awb_table["D65"] = {2.0, 1.0, 1.5};
    Rng rng(1);
    CHECK_THROWS_AS(sample_params(profile, rng), config_error);
}

TEST_CASE("leave_one_out_splits enumerates every holdout") {
    const std::vector<std::string> sensors{"a", "b", "c"};
    const auto splits = leave_one_out_splits(sensors);
    REQUIRE(splits.size() == 3);
    CHECK(splits[0].first == std::vector<std::string>{"b", "c"});
    CHECK(splits[0].second == "a");
    CHECK(splits[1].first == std::vector<std::string>{"a", "c"});
    CHECK(splits[1].second == "b");
    CHECK(splits[2].first == std::vector<std::string>{"a", "b"});
    CHECK(splits[2].second == "c");

    const auto pair = leave_one_out_splits({"x", "y"});
    REQUIRE(pair.size() == 2);
    CHECK(pair[0].first == std::vector<std::string>{"y"});
    CHECK(pair[1].second == "y");

    CHECK_THROWS_AS(leave_one_out_splits({"solo"}), config_error);
    CHECK_THROWS_AS(leave_one_out_splits({}), config_error);
}

TEST_CASE("sanitize_image_id maps path characters to underscores") {
    CHECK(sanitize_image_id("train/img_01#2") == "train_img_01_2");
    CHECK(sanitize_image_id("Az09._-") == "Az09._-");
    CHECK(sanitize_image_id("a b\tc") == "a_b_c");
    CHECK(sanitize_image_id("") == "");
}

TEST_CASE("generation config validation") {
    GenerationConfig config;
    config.sensor_profiles = {"p.json"};
    CHECK_NOTHROW(config.validate());

    GenerationConfig none = config;
    none.sensor_profiles.clear();
    CHECK_THROWS_AS(none.validate(), config_error);

    GenerationConfig iso = config;
    iso.iso_range = {0, 6400};
    CHECK_THROWS_AS(iso.validate(), config_error);
    iso.iso_range = {6400, 2400};
    CHECK_THROWS_AS(iso.validate(), config_error);

    GenerationConfig crops = config;
    crops.train.crops_per_image = 0;
    CHECK_THROWS_AS(crops.validate(), config_error);

    GenerationConfig dgain = config;
    dgain.inv_dgain.lo = 0.0;
    CHECK_THROWS_AS(dgain.validate(), config_error);
    dgain.inv_dgain = {0.65, -0.1, 0.1, 1.0};
    CHECK_THROWS_AS(dgain.validate(), config_error);

    GenerationConfig jobs = config;
    jobs.jobs = 0;
    CHECK_THROWS_AS(jobs.validate(), config_error);
}

TEST_CASE("generate builds a deterministic dataset tree") {
    const test::TempDir tmp;
    const Corpus corpus = build_corpus(tmp);

    GenerationConfig config = toy_config(corpus, tmp / "out1");
    const Manifest manifest = generate(config);

    // 2 train images x 2 crops + 1 val image, times 2 sensors.
    REQUIRE(manifest.entries.size() == 10);
    CHECK(manifest.valid);
    REQUIRE(manifest.errors.size() == 2);
    CHECK(manifest.errors[0].image_id == "train/broken");
    CHECK(manifest.errors[1].image_id == "train/tiny");

    const bool sorted = std::is_sorted(
        manifest.entries.begin(), manifest.entries.end(),
        [](const ManifestEntry& a, const ManifestEntry& b) {
            return std::tie(a.image_id, a.sensor) < std::tie(b.image_id, b.sensor);
        });
    CHECK(sorted);
    CHECK(manifest.entries[0].image_id == "train/img_a#0");
    CHECK(manifest.entries[0].sensor == "cam_a");
    CHECK(manifest.entries[0].clean_path == "cam_a/train/train_img_a_0.clean.msraw");

    for (const ManifestEntry& e : manifest.entries) {
        CAPTURE(e.clean_path);
        CHECK(fs::exists(config.out_dir / e.clean_path));
        CHECK(fs::exists(config.out_dir / e.noisy_path));
        CHECK(sha256_file_hex(config.out_dir / e.clean_path) == e.clean_sha256);
        CHECK(sha256_file_hex(config.out_dir / e.noisy_path) == e.noisy_sha256);
        CHECK(e.iso >= kIsoMin);
        CHECK(e.iso <= kIsoMax);
        CHECK(e.seed == mix64(config.global_seed, {e.image_id, e.sensor}));
    }

    // Train crops are 8x8 raw planes; the val image trims 19x17 to 18x16.
    const RawImage crop = read_msraw(config.out_dir / manifest.entries[0].clean_path);
    CHECK(crop.height() == 16);
    CHECK(crop.width() == 16);
    CHECK(crop.white_level == 1023);
    CHECK(crop.black_level == 64);
    const ManifestEntry& val = manifest.entries.back();
    CHECK(val.image_id == "val/img_c");
    CHECK(val.split == "val");
    const RawImage full = read_msraw(config.out_dir / val.noisy_path);
    CHECK(full.height() == 18);
    CHECK(full.width() == 16);

    // The same config into another directory with another thread count
    // reproduces every byte, including the manifest and metadata.
    GenerationConfig again = toy_config(corpus, tmp / "out2");
    again.jobs = 3;
    const Manifest manifest2 = generate(again);
    REQUIRE(manifest2.entries.size() == manifest.entries.size());
    CHECK(read_file_bytes(config.out_dir / "manifest.json") ==
          read_file_bytes(again.out_dir / "manifest.json"));
    CHECK(read_file_bytes(config.out_dir / "meta_data.json") ==
          read_file_bytes(again.out_dir / "meta_data.json"));
    for (const ManifestEntry& e : manifest.entries) {
        CHECK(read_file_bytes(config.out_dir / e.clean_path) ==
              read_file_bytes(again.out_dir / e.clean_path));
        CHECK(read_file_bytes(config.out_dir / e.noisy_path) ==
              read_file_bytes(again.out_dir / e.noisy_path));
    }

    // Metadata is keyed image_id/sensor and parses back into records.
    const std::string meta_text = read_file_bytes(config.out_dir / "meta_data.json");
    CHECK(meta_text.find("\"train/img_a#0/cam_a\"") != std::string::npos);
    CHECK(meta_text.find("\"val/img_c/cam_b\"") != std::string::npos);
}

TEST_CASE("generate rejects broken configurations") {
    const test::TempDir tmp;
    const Corpus corpus = build_corpus(tmp);

    GenerationConfig missing = toy_config(corpus, tmp / "out");
    missing.source_dir = tmp / "no_such_dir";
    CHECK_THROWS_AS(generate(missing), config_error);

    GenerationConfig dup = toy_config(corpus, tmp / "out");
    dup.sensor_profiles = {corpus.profiles[0], corpus.profiles[0]};
    CHECK_THROWS_AS(generate(dup), config_error);
}

TEST_SUITE_END();
