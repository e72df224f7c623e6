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

#include "msraw/dataset.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <mutex>
#include <thread>

#include <json.hpp>

#include "json_detail.hpp"
#include "msraw/errors.hpp"
#include "msraw/io.hpp"
#include "msraw/log.hpp"

namespace msraw {
namespace {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

struct SourceTask {
    std::string base_id;  // relative path without extension
    fs::path path;
    std::string split;  // "train" or "val"
};

// Everything one worker produces for one source image.
struct TaskResult {
    std::vector<ManifestEntry> entries;
    std::vector<MetaRecord> meta;
    std::vector<ManifestError> errors;
    bool write_failed = false;
    std::string fail_message;
};

std::string relative_id(const fs::path& file, const fs::path& root) {
    fs::path rel = file.lexically_relative(root);
    rel.replace_extension();
    return rel.generic_string();
}

void collect_sources(const fs::path& dir, const fs::path& id_root, const std::string& split,
                     std::vector<SourceTask>& out) {
    for (const auto& entry : fs::recursive_directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        if (entry.path().extension() != ".ppm") continue;
        out.push_back({relative_id(entry.path(), id_root), entry.path(), split});
    }
}

RgbImage crop_rgb(const RgbImage& src, std::size_t r0, std::size_t c0, std::size_t h,
                  std::size_t w) {
    RgbImage out;
    out.domain = src.domain;
    for (int ch = 0; ch < 3; ++ch) {
        out.planes[ch] = Plane(h, w);
        for (std::size_t r = 0; r < h; ++r) {
            for (std::size_t c = 0; c < w; ++c) {
                out.planes[ch].at(r, c) = src.planes[ch].at(r0 + r, c0 + c);
            }
        }
    }
    return out;
}

// Echo of the generation inputs that determine the output bytes. Execution
// details that do not (out_dir, jobs) are omitted so re-runs into another
// directory or with another thread count produce identical manifests.
ordered_json config_echo(const GenerationConfig& config) {
    ordered_json j;
    j["source_dir"] = config.source_dir.generic_string();
    ordered_json profiles = ordered_json::array();
    for (const fs::path& p : config.sensor_profiles) profiles.push_back(p.generic_string());
    j["sensor_profiles"] = std::move(profiles);
    j["global_seed"] = config.global_seed;
    j["train"] = {{"crop", config.train.crop}, {"crops_per_image", config.train.crops_per_image}};
    j["val"] = {{"crop", config.val.crop}, {"crops_per_image", config.val.crops_per_image}};
    j["iso_range"] = {{"lo", config.iso_range.lo}, {"hi", config.iso_range.hi}};
    j["inv_dgain"] = {{"mean", config.inv_dgain.mean},
                      {"sd", config.inv_dgain.sd},
                      {"lo", config.inv_dgain.lo},
                      {"hi", config.inv_dgain.hi}};
    return j;
}

// Generates every crop and sensor variant of one source image.
void run_task(const SourceTask& task, const GenerationConfig& config,
              const std::vector<SensorProfile>& profiles, TaskResult& result) {
    const SplitSpec& split = task.split == "val" ? config.val : config.train;
    RgbImage source;
    try {
        source = read_ppm(task.path);
    } catch (const std::exception& e) {
        result.errors.push_back({task.base_id, e.what()});
        return;
    }
    const std::size_t crop_side = 2 * split.crop;  // sRGB pixels
    if (crop_side != 0 && (source.height() < crop_side || source.width() < crop_side)) {
        result.errors.push_back(
            {task.base_id, "image " + std::to_string(source.height()) + "x" +
                               std::to_string(source.width()) + " smaller than crop " +
                               std::to_string(crop_side) + "x" + std::to_string(crop_side)});
        return;
    }
    if (crop_side == 0 && (source.height() < 2 || source.width() < 2)) {
        result.errors.push_back({task.base_id, "image too small to mosaic"});
        return;
    }
    for (std::size_t k = 0; k < split.crops_per_image; ++k) {
        std::string image_id = task.base_id;
        if (split.crops_per_image > 1) image_id += "#" + std::to_string(k);
        RgbImage view;
        if (crop_side == 0) {
            // full image, trimmed to even dimensions
            view = crop_rgb(source, 0, 0, source.height() & ~std::size_t{1},
                            source.width() & ~std::size_t{1});
        } else {
            Rng crop_rng(mix64(config.global_seed, {image_id, "crop"}));
            const std::size_t r0 = crop_rng.uniform_int(source.height() - crop_side + 1);
            const std::size_t c0 = crop_rng.uniform_int(source.width() - crop_side + 1);
            view = crop_rgb(source, r0, c0, crop_side, crop_side);
        }
        for (const SensorProfile& profile : profiles) {
            const std::uint64_t seed = mix64(config.global_seed, {image_id, profile.name});
            Rng param_rng(mix64(seed, {"params"}));
            const SampledParams params =
                sample_params(profile, param_rng, config.inv_dgain, config.iso_range);
            const RawImage clean =
                unprocess(view, params, profile.white_level, profile.black_level);
            const RawImage noisy = degrade(clean, profile, params.iso, seed);
            const std::string stem = sanitize_image_id(image_id);
            const std::string rel_clean =
                profile.name + "/" + task.split + "/" + stem + ".clean.msraw";
            const std::string rel_noisy =
                profile.name + "/" + task.split + "/" + stem + ".noisy.msraw";
            const std::string clean_bytes = msraw_to_bytes(clean);
            const std::string noisy_bytes = msraw_to_bytes(noisy);
            try {
                write_file_bytes(config.out_dir / rel_clean, clean_bytes);
                write_file_bytes(config.out_dir / rel_noisy, noisy_bytes);
            } catch (const std::exception& e) {
                result.write_failed = true;
                result.fail_message = e.what();
                return;
            }
            ManifestEntry entry;
            entry.image_id = image_id;
            entry.sensor = profile.name;
            entry.split = task.split;
            entry.clean_path = rel_clean;
            entry.noisy_path = rel_noisy;
            entry.clean_sha256 = sha256_hex(clean_bytes);
            entry.noisy_sha256 = sha256_hex(noisy_bytes);
            entry.iso = params.iso;
            entry.seed = seed;
            result.entries.push_back(std::move(entry));
            result.meta.push_back({image_id, profile.name, seed, params});
        }
    }
}

}  // namespace

void GenerationConfig::validate() const {
    if (sensor_profiles.empty()) throw config_error("generation config: no sensor profiles");
    if (iso_range.lo <= 0 || iso_range.lo > iso_range.hi) {
        throw config_error("generation config: iso range [" + std::to_string(iso_range.lo) +
                           ", " + std::to_string(iso_range.hi) + "] is not ordered and positive");
    }
    if (train.crops_per_image == 0 || val.crops_per_image == 0) {
        throw config_error("generation config: crops_per_image must be at least 1");
    }
    if (inv_dgain.lo <= 0 || inv_dgain.lo > inv_dgain.hi || inv_dgain.sd < 0) {
        throw config_error("generation config: bad inverse dgain model");
    }
    if (jobs == 0) throw config_error("generation config: jobs must be at least 1");
}

SampledParams sample_params(const SensorProfile& profile, Rng& rng, const DgainModel& dgain,
                            const IsoRange& iso) {
    std::vector<std::string> illums;
    illums.reserve(profile.awb_table.size());
    for (const auto& [name, gains] : profile.awb_table) illums.push_back(name);
    if (illums.size() < 2) {
        throw config_error("profile " + profile.name + ": at least two illuminants required");
    }
    // fixed draw order: illuminant pair, weight, alpha, dgain, iso
    const std::uint64_t n = illums.size();
    const std::uint64_t ia = rng.uniform_int(n);
    std::uint64_t ib = rng.uniform_int(n - 1);
    if (ib >= ia) ++ib;
    const double weight = rng.uniform();
    const double alpha = rng.uniform();
    const double g = std::clamp(rng.normal(dgain.mean, dgain.sd), dgain.lo, dgain.hi);
    const int iso_value = iso.lo + static_cast<int>(rng.uniform_int(
                                       static_cast<std::uint64_t>(iso.hi - iso.lo) + 1));

    SampledParams params;
    params.awb_illum_a = illums[ia];
    params.awb_illum_b = illums[ib];
    params.awb_weight = weight;
    const WhiteBalanceGains& ga = profile.awb_table.at(params.awb_illum_a);
    const WhiteBalanceGains& gb = profile.awb_table.at(params.awb_illum_b);
    params.awb.r_gain = weight * ga.r_gain + (1.0 - weight) * gb.r_gain;
    params.awb.b_gain = weight * ga.b_gain + (1.0 - weight) * gb.b_gain;
    params.awb.g_gain = 1.0;
    params.ccm_alpha = alpha;
    params.ccm = ccm_mix(profile.ccm_day, profile.ccm_night, alpha);
    params.inv_dgain.value = g;
    params.iso = iso_value;
    params.validate();
    return params;
}

Manifest generate(const GenerationConfig& config) {
    config.validate();

    std::vector<SensorProfile> profiles;
    profiles.reserve(config.sensor_profiles.size());
    for (const fs::path& p : config.sensor_profiles) {
        profiles.push_back(load_sensor_profile(p));
        for (std::size_t i = 0; i + 1 < profiles.size(); ++i) {
            if (profiles[i].name == profiles.back().name) {
                throw config_error("duplicate sensor profile name '" + profiles.back().name +
                                   "'");
            }
        }
    }

    if (!fs::is_directory(config.source_dir)) {
        throw config_error("source directory " + config.source_dir.string() + " does not exist");
    }
    std::vector<SourceTask> tasks;
    const fs::path train_dir = config.source_dir / "train";
    const fs::path val_dir = config.source_dir / "val";
    if (fs::is_directory(train_dir) || fs::is_directory(val_dir)) {
        if (fs::is_directory(train_dir)) collect_sources(train_dir, config.source_dir, "train", tasks);
        if (fs::is_directory(val_dir)) collect_sources(val_dir, config.source_dir, "val", tasks);
    } else {
        collect_sources(config.source_dir, config.source_dir, "train", tasks);
    }
    std::sort(tasks.begin(), tasks.end(),
              [](const SourceTask& a, const SourceTask& b) { return a.base_id < b.base_id; });
    if (tasks.empty()) {
        log_warn("no .ppm source images found under " + config.source_dir.string());
    }

    fs::create_directories(config.out_dir);
    bool has_train = false;
    bool has_val = false;
    for (const SourceTask& t : tasks) (t.split == "val" ? has_val : has_train) = true;
    for (const SensorProfile& profile : profiles) {
        if (has_train) fs::create_directories(config.out_dir / profile.name / "train");
        if (has_val) fs::create_directories(config.out_dir / profile.name / "val");
    }

    std::vector<TaskResult> results(tasks.size());
    std::atomic<std::size_t> next{0};
    std::atomic<bool> abort{false};
    const unsigned workers =
        static_cast<unsigned>(std::min<std::size_t>(config.jobs, std::max<std::size_t>(tasks.size(), 1)));
    auto worker = [&] {
        while (!abort.load()) {
            const std::size_t i = next.fetch_add(1);
            if (i >= tasks.size()) break;
            run_task(tasks[i], config, profiles, results[i]);
            if (results[i].write_failed) abort.store(true);
        }
    };
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned t = 0; t < workers; ++t) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    }

    Manifest manifest;
    std::map<std::pair<std::string, std::string>, MetaRecord> meta;
    for (TaskResult& result : results) {
        for (ManifestEntry& e : result.entries) manifest.entries.push_back(std::move(e));
        for (MetaRecord& m : result.meta) meta[{m.image_id, m.sensor_name}] = std::move(m);
        for (ManifestError& e : result.errors) manifest.errors.push_back(std::move(e));
        if (result.write_failed) {
            manifest.valid = false;
            log_error("generation aborted: " + result.fail_message);
        }
    }
    std::sort(manifest.entries.begin(), manifest.entries.end(),
              [](const ManifestEntry& a, const ManifestEntry& b) {
                  return std::tie(a.image_id, a.sensor) < std::tie(b.image_id, b.sensor);
              });

    ordered_json jman;
    jman["schema_version"] = manifest.schema_version;
    jman["config"] = config_echo(config);
    ordered_json jentries = ordered_json::array();
    for (const ManifestEntry& e : manifest.entries) {
        ordered_json je;
        je["image_id"] = e.image_id;
        je["sensor"] = e.sensor;
        je["split"] = e.split;
        je["clean_path"] = e.clean_path;
        je["noisy_path"] = e.noisy_path;
        je["clean_sha256"] = e.clean_sha256;
        je["noisy_sha256"] = e.noisy_sha256;
        je["iso"] = e.iso;
        je["seed"] = e.seed;
        jentries.push_back(std::move(je));
    }
    jman["entries"] = std::move(jentries);
    ordered_json jerrors = ordered_json::array();
    for (const ManifestError& e : manifest.errors) {
        jerrors.push_back(ordered_json{{"image_id", e.image_id}, {"message", e.message}});
    }
    jman["errors"] = std::move(jerrors);
    jman["valid"] = manifest.valid;
    write_file_bytes(config.out_dir / "manifest.json", jman.dump(2) + "\n");

    ordered_json jmeta = ordered_json::object();
    for (const ManifestEntry& e : manifest.entries) {
        const MetaRecord& record = meta.at({e.image_id, e.sensor});
        jmeta[e.image_id + "/" + e.sensor] = detail::meta_record_to_ordered_json(record);
    }
    write_file_bytes(config.out_dir / "meta_data.json", jmeta.dump(2) + "\n");

    return manifest;
}

std::vector<std::pair<std::vector<std::string>, std::string>> leave_one_out_splits(
    const std::vector<std::string>& sensors) {
    if (sensors.size() < 2) {
        throw config_error("leave-one-out needs at least two sensors, got " +
                           std::to_string(sensors.size()));
    }
    std::vector<std::pair<std::vector<std::string>, std::string>> splits;
    splits.reserve(sensors.size());
    for (std::size_t i = 0; i < sensors.size(); ++i) {
        std::vector<std::string> known;
        known.reserve(sensors.size() - 1);
        for (std::size_t j = 0; j < sensors.size(); ++j) {
            if (j != i) known.push_back(sensors[j]);
        }
        splits.emplace_back(std::move(known), sensors[i]);
    }
    return splits;
}

std::string sanitize_image_id(const std::string& image_id) {
    std::string out = image_id;
    for (char& c : out) {
        const bool ok = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') ||
                        (c >= '0' && c <= '9') || c == '.' || c == '_' || c == '-';
        if (!ok) c = '_';
    }
    return out;
}

}  // namespace msraw
