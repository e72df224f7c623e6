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

// msraw command line tool. Exit codes: 0 success, 1 operational failure,
// 2 partial success (dataset generated with per-image errors), 64 usage.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "msraw/consistency_check.hpp"
#include "msraw/dataset.hpp"
#include "msraw/errors.hpp"
#include "msraw/io.hpp"
#include "msraw/log.hpp"
#include "msraw/metrics.hpp"
#include "msraw/noise.hpp"
#include "msraw/synthesis.hpp"

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitPartial = 2;
constexpr int kExitUsage = 64;

fs::path resolve_against(const fs::path& base, const fs::path& p) {
    return p.is_absolute() ? p : base / p;
}

// "lo:hi:n" (n linearly spaced points) or a comma-separated list.
std::vector<double> parse_grid(const std::string& text) {
    std::vector<double> values;
    if (text.find(':') != std::string::npos) {
        double lo = 0, hi = 0;
        long n = 0;
        char extra = 0;
        if (std::sscanf(text.c_str(), "%lf:%lf:%ld%c", &lo, &hi, &n, &extra) != 3 || n < 1) {
            throw msraw::config_error("bad grid '" + text + "', expected lo:hi:n");
        }
        if (n == 1) {
            values.push_back(lo);
        } else {
            for (long k = 0; k < n; ++k) {
                values.push_back(lo + static_cast<double>(k) * (hi - lo) /
                                          static_cast<double>(n - 1));
            }
        }
        return values;
    }
    std::string token;
    std::istringstream ss(text);
    while (std::getline(ss, token, ',')) {
        if (token.empty()) continue;
        std::size_t used = 0;
        const double v = std::stod(token, &used);
        if (used != token.size()) {
            throw msraw::config_error("bad grid value '" + token + "'");
        }
        values.push_back(v);
    }
    if (values.empty()) throw msraw::config_error("empty grid '" + text + "'");
    return values;
}

std::vector<int> parse_int_grid(const std::string& text) {
    std::vector<int> out;
    for (const double v : parse_grid(text)) out.push_back(static_cast<int>(std::lround(v)));
    return out;
}

// ---------------------------------------------------------------- generate

msraw::GenerationConfig load_generation_config(const fs::path& path, bool& has_seed) {
    const std::string origin = path.string();
    ordered_json j;
    try {
        j = ordered_json::parse(msraw::read_file_bytes(path));
    } catch (const ordered_json::exception& e) {
        throw msraw::format_error(origin + ": " + e.what());
    }
    const fs::path base = path.has_parent_path() ? path.parent_path() : fs::path(".");
    msraw::GenerationConfig config;
    try {
        if (!j.contains("source_dir") || !j.contains("out_dir") ||
            !j.contains("sensor_profiles")) {
            throw msraw::config_error(origin +
                                      ": source_dir, out_dir and sensor_profiles are required");
        }
        config.source_dir = resolve_against(base, j["source_dir"].get<std::string>());
        config.out_dir = resolve_against(base, j["out_dir"].get<std::string>());
        for (const auto& p : j["sensor_profiles"]) {
            config.sensor_profiles.push_back(resolve_against(base, p.get<std::string>()));
        }
        has_seed = j.contains("global_seed");
        if (has_seed) config.global_seed = j["global_seed"].get<std::uint64_t>();
        auto read_split = [&](const char* key, msraw::SplitSpec& spec) {
            if (!j.contains(key)) return;
            const ordered_json& s = j[key];
            if (s.contains("crop")) spec.crop = s["crop"].get<std::size_t>();
            if (s.contains("crops_per_image")) {
                spec.crops_per_image = s["crops_per_image"].get<std::size_t>();
            }
        };
        read_split("train", config.train);
        read_split("val", config.val);
        if (j.contains("iso_range")) {
            config.iso_range.lo = j["iso_range"]["lo"].get<int>();
            config.iso_range.hi = j["iso_range"]["hi"].get<int>();
        }
        if (j.contains("inv_dgain")) {
            const ordered_json& d = j["inv_dgain"];
            if (d.contains("mean")) config.inv_dgain.mean = d["mean"].get<double>();
            if (d.contains("sd")) config.inv_dgain.sd = d["sd"].get<double>();
            if (d.contains("lo")) config.inv_dgain.lo = d["lo"].get<double>();
            if (d.contains("hi")) config.inv_dgain.hi = d["hi"].get<double>();
        }
        if (j.contains("jobs")) config.jobs = j["jobs"].get<unsigned>();
    } catch (const ordered_json::exception& e) {
        throw msraw::config_error(origin + ": " + e.what());
    }
    return config;
}

// -------------------------------------------------------------------- eval

struct TreeFile {
    fs::path path;
    int rank = 0;  // lower wins when one id has several kinds
};

std::string strip_kind_suffix(std::string stem, int& rank, bool pred_tree) {
    const auto ends_with = [&stem](const char* suffix) {
        const std::size_t n = std::strlen(suffix);
        return stem.size() >= n && stem.compare(stem.size() - n, n, suffix) == 0;
    };
    int kind;  // 0 pred, 1 plain, 2 noisy, 3 clean
    if (ends_with(".pred")) {
        kind = 0;
        stem.resize(stem.size() - 5);
    } else if (ends_with(".noisy")) {
        kind = 2;
        stem.resize(stem.size() - 6);
    } else if (ends_with(".clean")) {
        kind = 3;
        stem.resize(stem.size() - 6);
    } else {
        kind = 1;
    }
    // Prediction trees prefer model outputs, target trees prefer clean
    // references.
    static const int pred_rank[4] = {0, 1, 2, 3};
    static const int target_rank[4] = {3, 1, 2, 0};
    rank = pred_tree ? pred_rank[kind] : target_rank[kind];
    return stem;
}

// Maps "sensor/.../stem" (kind suffix removed) to the preferred file.
std::map<std::string, TreeFile> scan_tree(const fs::path& root, bool pred_tree) {
    if (!fs::is_directory(root)) {
        throw msraw::config_error(root.string() + " is not a directory");
    }
    std::map<std::string, TreeFile> files;
    for (const auto& entry : fs::recursive_directory_iterator(root)) {
        if (!entry.is_regular_file() || entry.path().extension() != ".msraw") continue;
        const fs::path rel = entry.path().lexically_relative(root);
        if (!rel.has_parent_path()) {
            msraw::log_warn("skipping " + entry.path().string() +
                            ": no sensor directory component");
            continue;
        }
        int rank = 0;
        const std::string stem = strip_kind_suffix(rel.stem().string(), rank, pred_tree);
        const std::string key = (rel.parent_path() / stem).generic_string();
        auto it = files.find(key);
        if (it == files.end() || rank < it->second.rank) {
            files[key] = {entry.path(), rank};
        }
    }
    return files;
}

std::string sensor_of_key(const std::string& key) {
    const auto slash = key.find('/');
    return slash == std::string::npos ? key : key.substr(0, slash);
}

std::string stem_of_key(const std::string& key) {
    const auto slash = key.rfind('/');
    return slash == std::string::npos ? key : key.substr(slash + 1);
}

int run_eval(const fs::path& pred_dir, const fs::path& target_dir, const std::string& protocol,
             const std::string& meta_path) {
    const auto pred = scan_tree(pred_dir, true);
    const auto target = scan_tree(target_dir, false);

    std::vector<std::string> only_pred, only_target;
    for (const auto& [key, file] : pred) {
        if (!target.count(key)) only_pred.push_back(key);
    }
    for (const auto& [key, file] : target) {
        if (!pred.count(key)) only_target.push_back(key);
    }
    if (!only_pred.empty() || !only_target.empty()) {
        std::cerr << "msraw error: prediction and target trees do not match ("
                  << pred.size() << " vs " << target.size() << " images)\n";
        for (std::size_t i = 0; i < only_pred.size() && i < 10; ++i) {
            std::cerr << "  only in predictions: " << only_pred[i] << "\n";
        }
        for (std::size_t i = 0; i < only_target.size() && i < 10; ++i) {
            std::cerr << "  only in targets: " << only_target[i] << "\n";
        }
        return kExitFailure;
    }
    if (pred.empty()) {
        std::cerr << "msraw error: no .msraw files found\n";
        return kExitFailure;
    }

    const msraw::EvalProtocol proto = protocol == "raw2rgb" ? msraw::EvalProtocol::raw2rgb
                                                            : msraw::EvalProtocol::raw2raw;
    // (sensor, sanitized id) -> params, from the dataset's meta_data.json
    std::map<std::pair<std::string, std::string>, msraw::SampledParams> meta;
    if (proto == msraw::EvalProtocol::raw2rgb) {
        ordered_json j;
        try {
            j = ordered_json::parse(msraw::read_file_bytes(meta_path));
        } catch (const ordered_json::exception& e) {
            throw msraw::format_error(meta_path + ": " + e.what());
        }
        for (const auto& [key, value] : j.items()) {
            const msraw::MetaRecord record =
                msraw::meta_record_from_json(value.dump(), meta_path + ": " + key);
            meta[{record.sensor_name, msraw::sanitize_image_id(record.image_id)}] =
                record.params;
        }
    }

    std::vector<msraw::EvalItem> items;
    items.reserve(pred.size());
    for (const auto& [key, file] : pred) {
        msraw::EvalItem item;
        item.predicted = msraw::read_msraw(file.path);
        item.target = msraw::read_msraw(target.at(key).path);
        item.sensor = sensor_of_key(key);
        if (proto == msraw::EvalProtocol::raw2rgb) {
            const auto it = meta.find({item.sensor, stem_of_key(key)});
            if (it == meta.end()) {
                throw msraw::config_error("no metadata for " + key + " in " + meta_path);
            }
            item.params = it->second;
        }
        items.push_back(std::move(item));
    }

    const msraw::EvalReport report = msraw::evaluate(items, proto);
    std::cout << msraw::eval_report_table(report, proto);
    ordered_json out;
    out["protocol"] = protocol;
    ordered_json per = ordered_json::object();
    for (const auto& [sensor, score] : report.per_sensor) {
        per[sensor] = {{"psnr_db", score.psnr_db}, {"ssim", score.ssim}, {"count", score.count}};
    }
    out["per_sensor"] = std::move(per);
    out["worst_sensor"] = report.worst_sensor;
    out["worst_psnr_db"] = report.worst_psnr_db;
    std::cout << out.dump(2) << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"multi-sensor raw image synthesis and evaluation toolkit"};
    app.require_subcommand(1);

    // generate
    auto* gen = app.add_subcommand("generate", "generate a synthetic raw dataset");
    std::string gen_config;
    std::string gen_out;
    std::uint64_t gen_seed = 0;
    unsigned gen_jobs = 0;
    gen->add_option("config", gen_config, "generation config JSON")->required();
    auto* gen_seed_opt = gen->add_option("--seed", gen_seed, "global seed (overrides config)");
    auto* gen_out_opt = gen->add_option("--out", gen_out, "output directory (overrides config)");
    auto* gen_jobs_opt = gen->add_option("--jobs", gen_jobs, "worker threads (overrides config)");

    // unprocess
    auto* unp = app.add_subcommand("unprocess", "convert a clean sRGB image to a clean raw");
    std::string unp_in, unp_out, unp_profile, unp_meta, unp_meta_out;
    std::uint64_t unp_seed = 0;
    unp->add_option("input", unp_in, "input .ppm image")->required();
    unp->add_option("output", unp_out, "output .msraw file")->required();
    unp->add_option("--profile", unp_profile, "sensor profile JSON")->required();
    auto* unp_meta_opt = unp->add_option("--meta", unp_meta, "metadata JSON with the parameters");
    auto* unp_seed_opt =
        unp->add_option("--seed", unp_seed, "seed used to sample fresh parameters");
    unp_meta_opt->excludes(unp_seed_opt);
    unp_seed_opt->excludes(unp_meta_opt);
    unp->add_option("--meta-out", unp_meta_out, "write the metadata record to this file");

    // process
    auto* proc = app.add_subcommand("process", "render a raw image back to sRGB");
    std::string proc_in, proc_out, proc_meta;
    proc->add_option("input", proc_in, "input .msraw file")->required();
    proc->add_option("output", proc_out, "output .ppm image")->required();
    proc->add_option("--meta", proc_meta, "metadata JSON with the parameters")->required();

    // degrade
    auto* deg = app.add_subcommand("degrade", "add sensor noise to a clean raw");
    std::string deg_in, deg_out, deg_profile;
    int deg_iso = 0;
    std::uint64_t deg_seed = 0;
    deg->add_option("input", deg_in, "input .msraw file")->required();
    deg->add_option("output", deg_out, "output .msraw file")->required();
    deg->add_option("--profile", deg_profile, "sensor profile JSON")->required();
    deg->add_option("--iso", deg_iso, "ISO level")->required();
    deg->add_option("--seed", deg_seed, "noise seed")->required();

    // stats
    auto* stats = app.add_subcommand("stats", "tabulate noise model curves for a profile");
    std::string stats_profile;
    std::string stats_iso_grid = "2400:12800:5";
    std::string stats_adu_grid = "8:1008:6";
    int stats_adu_iso = 6400;
    std::string stats_csv;
    stats->add_option("profile", stats_profile, "sensor profile JSON")->required();
    stats->add_option("--iso-grid", stats_iso_grid, "ISO grid, lo:hi:n or comma list");
    stats->add_option("--adu-grid", stats_adu_grid, "signal grid in ADU, lo:hi:n or comma list");
    stats->add_option("--adu-iso", stats_adu_iso, "ISO used for the ADU sweep");
    stats->add_option("--csv", stats_csv, "write <prefix>_iso.csv and <prefix>_adu.csv");

    // eval
    auto* eval = app.add_subcommand("eval", "score predictions against targets");
    std::string eval_pred, eval_target, eval_meta;
    std::string eval_protocol = "raw2raw";
    eval->add_option("predictions", eval_pred, "directory of predicted .msraw files")->required();
    eval->add_option("targets", eval_target, "directory of target .msraw files")->required();
    eval->add_option("--protocol", eval_protocol, "raw2raw or raw2rgb")
        ->check(CLI::IsMember({"raw2raw", "raw2rgb"}));
    auto* eval_meta_opt =
        eval->add_option("--meta", eval_meta, "meta_data.json (required for raw2rgb)");

    // loss-check
    auto* check = app.add_subcommand("loss-check", "self-verify the consistency loss kernels");
    std::uint64_t check_seed = 0;
    int check_trials = 20;
    check->add_option("--seed", check_seed, "seed for the randomized checks")->required();
    check->add_option("--trials", check_trials, "randomized trials per check")
        ->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*gen) {
            bool has_seed = false;
            msraw::GenerationConfig config = load_generation_config(gen_config, has_seed);
            if (*gen_seed_opt) {
                config.global_seed = gen_seed;
                has_seed = true;
            }
            if (!has_seed) {
                std::cerr << "msraw error: no global_seed in config and no --seed given\n";
                return kExitUsage;
            }
            if (*gen_out_opt) config.out_dir = gen_out;
            if (*gen_jobs_opt) config.jobs = gen_jobs;
            const msraw::Manifest manifest = msraw::generate(config);
            std::cout << "generated " << manifest.entries.size() << " image pairs, "
                      << manifest.errors.size() << " source errors\n";
            if (!manifest.valid) return kExitFailure;
            return manifest.errors.empty() ? kExitOk : kExitPartial;
        }
        if (*unp) {
            const msraw::SensorProfile profile = msraw::load_sensor_profile(unp_profile);
            msraw::MetaRecord record;
            if (*unp_meta_opt) {
                record = msraw::meta_record_from_json(msraw::read_file_bytes(unp_meta), unp_meta);
            } else if (*unp_seed_opt) {
                msraw::Rng rng(msraw::mix64(unp_seed, {"params"}));
                record.image_id = fs::path(unp_in).stem().string();
                record.sensor_name = profile.name;
                record.seed = unp_seed;
                record.params = msraw::sample_params(profile, rng);
            } else {
                std::cerr << "msraw error: one of --meta or --seed is required\n";
                return kExitUsage;
            }
            const msraw::RgbImage srgb = msraw::read_ppm(unp_in);
            const msraw::RawImage raw =
                msraw::unprocess(srgb, record.params, profile.white_level, profile.black_level);
            msraw::write_msraw(unp_out, raw);
            const std::string meta_json = msraw::meta_record_to_json(record);
            if (!unp_meta_out.empty()) msraw::write_file_bytes(unp_meta_out, meta_json);
            std::cout << meta_json;
            return kExitOk;
        }
        if (*proc) {
            const msraw::MetaRecord record =
                msraw::meta_record_from_json(msraw::read_file_bytes(proc_meta), proc_meta);
            const msraw::RawImage raw = msraw::read_msraw(proc_in);
            msraw::write_ppm16(proc_out, msraw::process(raw, record.params));
            return kExitOk;
        }
        if (*deg) {
            const msraw::SensorProfile profile = msraw::load_sensor_profile(deg_profile);
            const msraw::RawImage raw = msraw::read_msraw(deg_in);
            msraw::write_msraw(deg_out, msraw::degrade(raw, profile, deg_iso, deg_seed));
            return kExitOk;
        }
        if (*stats) {
            const msraw::SensorProfile profile = msraw::load_sensor_profile(stats_profile);
            const msraw::StatsCurves curves =
                msraw::stats_curves(profile, parse_int_grid(stats_iso_grid),
                                    parse_grid(stats_adu_grid), stats_adu_iso);
            const std::string iso_csv = msraw::iso_curves_csv(curves);
            const std::string adu_csv = msraw::adu_curves_csv(curves);
            if (!stats_csv.empty()) {
                msraw::write_file_bytes(stats_csv + "_iso.csv", iso_csv);
                msraw::write_file_bytes(stats_csv + "_adu.csv", adu_csv);
            } else {
                std::cout << iso_csv << adu_csv;
            }
            return kExitOk;
        }
        if (*eval) {
            if (eval_protocol == "raw2rgb" && !*eval_meta_opt) {
                std::cerr << "msraw error: --meta is required for the raw2rgb protocol\n";
                return kExitUsage;
            }
            return run_eval(eval_pred, eval_target, eval_protocol, eval_meta);
        }
        if (*check) {
            const msraw::CheckReport report =
                msraw::run_consistency_checks(check_seed, check_trials);
            std::cout << report.to_string();
            return report.all_pass() ? kExitOk : kExitFailure;
        }
    } catch (const std::exception& e) {
        std::cerr << "msraw error: " << e.what() << "\n";
        return kExitFailure;
    }
    return kExitOk;
}
