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
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "msraw/noise.hpp"
#include "msraw/rng.hpp"
#include "msraw/synthesis.hpp"

namespace msraw {

// Inverse digital gain distribution: Normal(mean, sd) clamped to [lo, hi].
struct DgainModel {
    double mean = 0.65;
    double sd = 0.2;
    double lo = 0.1;
    double hi = 1.0;
};

struct IsoRange {
    int lo = kIsoMin;
    int hi = kIsoMax;
};

// Per-split generation settings. `crop` is the side of the square raw-plane
// crop (the source sRGB crop is 2*crop pixels); 0 means use the full image,
// trimmed to even dimensions. `crops_per_image` independent crops are taken
// from each source image.
struct SplitSpec {
    std::size_t crop = 0;
    std::size_t crops_per_image = 1;
};

struct GenerationConfig {
    std::filesystem::path source_dir;  // sRGB corpus; optional train/ and val/ subdirs
    std::filesystem::path out_dir;
    std::vector<std::filesystem::path> sensor_profiles;
    std::uint64_t global_seed = 0;
    SplitSpec train{256, 1};
    SplitSpec val{128, 1};
    IsoRange iso_range;
    DgainModel inv_dgain;
    unsigned jobs = 1;

    void validate() const;  // nonempty sensors, ordered ISO range, even crops
};

// Draws one parameter set from `profile`: two distinct illuminants chosen
// uniformly without replacement and averaged with Uniform[0,1] weight, CCM
// mixing alpha Uniform[0,1], inverse dgain from the clamped normal model,
// ISO uniform over the integer range. The draw order is fixed (illuminant
// pair, weight, alpha, dgain, iso) and is part of the determinism contract.
// Throws config_error when the profile has fewer than two illuminants.
SampledParams sample_params(const SensorProfile& profile, Rng& rng,
                            const DgainModel& dgain = {}, const IsoRange& iso = {});

struct ManifestEntry {
    std::string image_id;
    std::string sensor;
    std::string split;
    std::string clean_path;  // relative to out_dir
    std::string noisy_path;
    std::string clean_sha256;
    std::string noisy_sha256;
    int iso = 0;
    std::uint64_t seed = 0;
};

struct ManifestError {
    std::string image_id;
    std::string message;
};

struct Manifest {
    int schema_version = 1;
    std::vector<ManifestEntry> entries;  // sorted by (image_id, sensor)
    std::vector<ManifestError> errors;   // per unusable source image
    bool valid = true;                   // false when generation aborted midway
};

// Runs the full generation: for every (source image, crop, sensor) the
// parameters are sampled with a seed derived as mix64(global_seed, image_id,
// sensor_name), the image is unprocessed to a clean raw and degraded to a
// noisy raw, and both are written under out_dir/<sensor>/<split>/ along with
// manifest.json and meta_data.json. Crop placement is derived from the image
// id alone so all sensors see the same content. Unreadable or undersized
// source images are recorded in the error list and skipped; configuration
// and output-directory failures throw. Re-running with the same config
// produces byte-identical files.
Manifest generate(const GenerationConfig& config);

// One (known sensors, held-out sensor) split per sensor. Requires >= 2
// sensors; throws config_error otherwise.
std::vector<std::pair<std::vector<std::string>, std::string>> leave_one_out_splits(
    const std::vector<std::string>& sensors);

// Output filename stem for an image id (slashes are not legal in filenames).
std::string sanitize_image_id(const std::string& image_id);

}  // namespace msraw
