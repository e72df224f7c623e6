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

#include "msraw/io.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include <json.hpp>
#include <openssl/evp.h>

#include "json_detail.hpp"
#include "msraw/errors.hpp"

namespace msraw {
namespace {

using ordered_json = nlohmann::ordered_json;

constexpr char kMagic[8] = {'M', 'S', 'R', 'A', 'W', '0', '0', '1'};
constexpr std::size_t kHeaderSize = 40;

void put_u32(std::string& out, std::uint32_t v) {
    out.push_back(static_cast<char>(v & 0xff));
    out.push_back(static_cast<char>((v >> 8) & 0xff));
    out.push_back(static_cast<char>((v >> 16) & 0xff));
    out.push_back(static_cast<char>((v >> 24) & 0xff));
}

void put_u16(std::string& out, std::uint16_t v) {
    out.push_back(static_cast<char>(v & 0xff));
    out.push_back(static_cast<char>((v >> 8) & 0xff));
}

std::uint32_t get_u32(std::string_view bytes, std::size_t off) {
    const auto b = [&](std::size_t i) {
        return static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[off + i]));
    };
    return b(0) | (b(1) << 8) | (b(2) << 16) | (b(3) << 24);
}

std::uint16_t get_u16(std::string_view bytes, std::size_t off) {
    const auto b = [&](std::size_t i) {
        return static_cast<std::uint16_t>(static_cast<unsigned char>(bytes[off + i]));
    };
    return static_cast<std::uint16_t>(b(0) | (b(1) << 8));
}

[[noreturn]] void bad_format(const std::string& origin, const std::string& why) {
    throw format_error(origin + ": " + why);
}

double parse_double(const ordered_json& j, const char* key, const std::string& origin) {
    const ordered_json& f = detail::require_field(j, key, origin);
    if (!f.is_number()) throw config_error(origin + ": field '" + std::string(key) + "' must be a number");
    return f.get<double>();
}

std::array<std::array<double, 3>, 3> parse_matrix(const ordered_json& j, const char* key,
                                                  const std::string& origin) {
    const ordered_json& f = detail::require_field(j, key, origin);
    std::array<std::array<double, 3>, 3> m{};
    if (!f.is_array() || f.size() != 3) {
        throw config_error(origin + ": field '" + std::string(key) + "' must be a 3x3 array");
    }
    for (std::size_t r = 0; r < 3; ++r) {
        const ordered_json& row = f[r];
        if (!row.is_array() || row.size() != 3) {
            throw config_error(origin + ": field '" + std::string(key) + "' must be a 3x3 array");
        }
        for (std::size_t c = 0; c < 3; ++c) {
            if (!row[c].is_number()) {
                throw config_error(origin + ": field '" + std::string(key) +
                                   "' must contain numbers");
            }
            m[r][c] = row[c].get<double>();
        }
    }
    return m;
}

std::string format_g(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

}  // namespace

namespace detail {

const ordered_json& require_field(const ordered_json& j, const char* key,
                                  const std::string& origin) {
    const auto it = j.find(key);
    if (it == j.end()) {
        throw config_error(origin + ": missing field '" + std::string(key) + "'");
    }
    return *it;
}

ordered_json meta_record_to_ordered_json(const MetaRecord& record) {
    const SampledParams& p = record.params;
    ordered_json j;
    j["image_id"] = record.image_id;
    j["sensor"] = record.sensor_name;
    j["seed"] = record.seed;
    ordered_json params;
    params["inv_dgain"] = p.inv_dgain.value;
    params["awb"] = {{"r_gain", p.awb.r_gain}, {"g_gain", p.awb.g_gain}, {"b_gain", p.awb.b_gain}};
    params["awb_illuminants"] = {
        {"a", p.awb_illum_a}, {"b", p.awb_illum_b}, {"weight", p.awb_weight}};
    ordered_json ccm = ordered_json::array();
    for (const auto& row : p.ccm.m) ccm.push_back(ordered_json{row[0], row[1], row[2]});
    params["ccm"] = std::move(ccm);
    params["ccm_alpha"] = p.ccm_alpha;
    params["iso"] = p.iso;
    j["params"] = std::move(params);
    return j;
}

MetaRecord meta_record_from_ordered_json(const ordered_json& j, const std::string& origin) {
    MetaRecord record;
    try {
        record.image_id = require_field(j, "image_id", origin).get<std::string>();
        record.sensor_name = require_field(j, "sensor", origin).get<std::string>();
        record.seed = require_field(j, "seed", origin).get<std::uint64_t>();
        const ordered_json& params = require_field(j, "params", origin);
        SampledParams& p = record.params;
        p.inv_dgain.value = parse_double(params, "inv_dgain", origin);
        const ordered_json& awb = require_field(params, "awb", origin);
        p.awb.r_gain = parse_double(awb, "r_gain", origin);
        p.awb.g_gain = parse_double(awb, "g_gain", origin);
        p.awb.b_gain = parse_double(awb, "b_gain", origin);
        const ordered_json& illum = require_field(params, "awb_illuminants", origin);
        p.awb_illum_a = require_field(illum, "a", origin).get<std::string>();
        p.awb_illum_b = require_field(illum, "b", origin).get<std::string>();
        p.awb_weight = parse_double(illum, "weight", origin);
        p.ccm.m = parse_matrix(params, "ccm", origin);
        p.ccm_alpha = parse_double(params, "ccm_alpha", origin);
        p.iso = static_cast<int>(parse_double(params, "iso", origin));
    } catch (const ordered_json::exception& e) {
        throw config_error(origin + ": " + e.what());
    }
    return record;
}

}  // namespace detail

std::string msraw_to_bytes(const RawImage& raw) {
    validate_raw_shape(raw);
    if (raw.white_level == 0 || raw.white_level > 65535) {
        throw format_error("msraw: white_level " + std::to_string(raw.white_level) +
                           " not representable in uint16 storage");
    }
    if (raw.black_level >= raw.white_level) {
        throw format_error("msraw: black_level " + std::to_string(raw.black_level) +
                           " must be below white_level " + std::to_string(raw.white_level));
    }
    const std::size_t ph = raw.planes[0].rows;
    const std::size_t pw = raw.planes[0].cols;
    std::string out;
    out.reserve(kHeaderSize + 4 * ph * pw * 2);
    out.append(kMagic, sizeof(kMagic));
    put_u32(out, 1);  // version
    put_u32(out, 0);  // reserved
    put_u32(out, 0);  // dtype uint16
    put_u32(out, 4);  // plane count
    put_u32(out, static_cast<std::uint32_t>(ph * 2));
    put_u32(out, static_cast<std::uint32_t>(pw * 2));
    put_u32(out, raw.white_level);
    put_u32(out, raw.black_level);
    const double scale = static_cast<double>(raw.white_level);
    for (const Plane& plane : raw.planes) {
        for (const double v : plane.v) {
            const auto q = static_cast<std::uint16_t>(std::lround(clip01(v) * scale));
            put_u16(out, q);
        }
    }
    return out;
}

RawImage msraw_from_bytes(std::string_view bytes, const std::string& origin) {
    if (bytes.size() < kHeaderSize) bad_format(origin, "truncated msraw header");
    if (bytes.compare(0, sizeof(kMagic), kMagic, sizeof(kMagic)) != 0) {
        bad_format(origin, "bad magic, not an msraw file");
    }
    const std::uint32_t version = get_u32(bytes, 8);
    if (version != 1) bad_format(origin, "unsupported msraw version " + std::to_string(version));
    const std::uint32_t dtype = get_u32(bytes, 16);
    if (dtype != 0) bad_format(origin, "unsupported dtype code " + std::to_string(dtype));
    const std::uint32_t planes = get_u32(bytes, 20);
    if (planes != 4) bad_format(origin, "expected 4 planes, got " + std::to_string(planes));
    const std::uint32_t h = get_u32(bytes, 24);
    const std::uint32_t w = get_u32(bytes, 28);
    if (h == 0 || w == 0 || h % 2 != 0 || w % 2 != 0) {
        bad_format(origin, "dimensions must be even and nonzero, got " + std::to_string(h) + "x" +
                               std::to_string(w));
    }
    const std::uint32_t white = get_u32(bytes, 32);
    const std::uint32_t black = get_u32(bytes, 36);
    if (white == 0 || white > 65535) {
        bad_format(origin, "invalid white_level " + std::to_string(white));
    }
    if (black >= white) {
        bad_format(origin, "black_level " + std::to_string(black) + " not below white_level " +
                               std::to_string(white));
    }
    const std::size_t ph = h / 2;
    const std::size_t pw = w / 2;
    const std::size_t expected = kHeaderSize + 4 * ph * pw * 2;
    if (bytes.size() != expected) {
        bad_format(origin, "size mismatch, expected " + std::to_string(expected) + " bytes, got " +
                               std::to_string(bytes.size()));
    }
    RawImage raw;
    raw.white_level = white;
    raw.black_level = black;
    const double scale = static_cast<double>(white);
    std::size_t off = kHeaderSize;
    for (Plane& plane : raw.planes) {
        plane = Plane(ph, pw);
        for (double& v : plane.v) {
            const std::uint16_t q = get_u16(bytes, off);
            off += 2;
            if (q > white) {
                bad_format(origin, "sample " + std::to_string(q) + " exceeds white_level " +
                                       std::to_string(white));
            }
            v = static_cast<double>(q) / scale;
        }
    }
    return raw;
}

void write_msraw(const std::filesystem::path& path, const RawImage& raw) {
    write_file_bytes(path, msraw_to_bytes(raw));
}

RawImage read_msraw(const std::filesystem::path& path) {
    return msraw_from_bytes(read_file_bytes(path), path.string());
}

namespace {

// Reads one PPM header token, skipping whitespace and '#' comments.
std::string ppm_token(std::string_view bytes, std::size_t& pos, const std::string& origin) {
    while (pos < bytes.size()) {
        const char c = bytes[pos];
        if (c == '#') {
            while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
        } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
            ++pos;
        } else {
            break;
        }
    }
    const std::size_t start = pos;
    while (pos < bytes.size()) {
        const char c = bytes[pos];
        if (c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '#') break;
        ++pos;
    }
    if (start == pos) bad_format(origin, "truncated ppm header");
    return std::string(bytes.substr(start, pos - start));
}

std::size_t ppm_number(std::string_view bytes, std::size_t& pos, const std::string& origin) {
    const std::string tok = ppm_token(bytes, pos, origin);
    std::size_t value = 0;
    for (const char c : tok) {
        if (c < '0' || c > '9') bad_format(origin, "bad ppm header token '" + tok + "'");
        value = value * 10 + static_cast<std::size_t>(c - '0');
        if (value > 1u << 30) bad_format(origin, "ppm header value out of range");
    }
    return value;
}

}  // namespace

RgbImage read_ppm(const std::filesystem::path& path) {
    const std::string origin = path.string();
    const std::string bytes = read_file_bytes(path);
    std::size_t pos = 0;
    if (ppm_token(bytes, pos, origin) != "P6") bad_format(origin, "not a binary ppm (P6)");
    const std::size_t w = ppm_number(bytes, pos, origin);
    const std::size_t h = ppm_number(bytes, pos, origin);
    const std::size_t maxval = ppm_number(bytes, pos, origin);
    if (w == 0 || h == 0) bad_format(origin, "zero image dimensions");
    if (maxval == 0 || maxval > 65535) {
        bad_format(origin, "maxval " + std::to_string(maxval) + " out of range");
    }
    if (pos >= bytes.size()) bad_format(origin, "missing pixel data");
    const char sep = bytes[pos];
    if (sep != ' ' && sep != '\t' && sep != '\r' && sep != '\n') {
        bad_format(origin, "maxval must be followed by one whitespace byte");
    }
    ++pos;
    const std::size_t bytes_per = maxval < 256 ? 1 : 2;
    const std::size_t need = w * h * 3 * bytes_per;
    if (bytes.size() - pos != need) {
        bad_format(origin, "pixel data size mismatch, expected " + std::to_string(need) +
                               " bytes, got " + std::to_string(bytes.size() - pos));
    }
    RgbImage img;
    img.domain = RgbDomain::srgb;
    for (Plane& p : img.planes) p = Plane(h, w);
    const double scale = static_cast<double>(maxval);
    for (std::size_t i = 0; i < h * w; ++i) {
        for (int ch = 0; ch < 3; ++ch) {
            std::size_t raw;
            if (bytes_per == 1) {
                raw = static_cast<unsigned char>(bytes[pos++]);
            } else {
                // 16-bit ppm samples are big-endian
                const auto hi = static_cast<unsigned char>(bytes[pos++]);
                const auto lo = static_cast<unsigned char>(bytes[pos++]);
                raw = (static_cast<std::size_t>(hi) << 8) | lo;
            }
            if (raw > maxval) {
                bad_format(origin, "sample " + std::to_string(raw) + " exceeds maxval " +
                                       std::to_string(maxval));
            }
            img.planes[ch].v[i] = static_cast<double>(raw) / scale;
        }
    }
    return img;
}

void write_ppm16(const std::filesystem::path& path, const RgbImage& img) {
    validate_rgb_shape(img);
    const std::size_t h = img.height();
    const std::size_t w = img.width();
    std::string out = "P6\n" + std::to_string(w) + " " + std::to_string(h) + "\n65535\n";
    out.reserve(out.size() + h * w * 6);
    for (std::size_t i = 0; i < h * w; ++i) {
        for (int ch = 0; ch < 3; ++ch) {
            const auto q =
                static_cast<std::uint16_t>(std::lround(clip01(img.planes[ch].v[i]) * 65535.0));
            out.push_back(static_cast<char>((q >> 8) & 0xff));
            out.push_back(static_cast<char>(q & 0xff));
        }
    }
    write_file_bytes(path, out);
}

SensorProfile load_sensor_profile(const std::filesystem::path& path) {
    const std::string origin = path.string();
    const std::string text = read_file_bytes(path);
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const ordered_json::exception& e) {
        throw format_error(origin + ": " + e.what());
    }
    SensorProfile profile;
    try {
        profile.name = detail::require_field(j, "name", origin).get<std::string>();
        const std::string units = detail::require_field(j, "units", origin).get<std::string>();
        if (units != "normalized" && units != "adu") {
            throw config_error(origin + ": units must be \"normalized\" or \"adu\", got \"" +
                               units + "\"");
        }
        const ordered_json& noise = detail::require_field(j, "noise", origin);
        profile.noise.k0 = parse_double(noise, "k0", origin);
        profile.noise.k1 = parse_double(noise, "k1", origin);
        profile.noise.b0 = parse_double(noise, "b0", origin);
        profile.noise.b1 = parse_double(noise, "b1", origin);
        profile.noise.b2 = parse_double(noise, "b2", origin);
        profile.black_level =
            detail::require_field(j, "black_level", origin).get<std::uint32_t>();
        profile.white_level =
            detail::require_field(j, "white_level", origin).get<std::uint32_t>();
        const ordered_json& awb = detail::require_field(j, "awb", origin);
        if (!awb.is_object() || awb.empty()) {
            throw config_error(origin + ": awb must be a nonempty object");
        }
        for (const auto& [illum, gains] : awb.items()) {
            WhiteBalanceGains g;
            g.r_gain = parse_double(gains, "r_gain", origin + " awb." + illum);
            g.b_gain = parse_double(gains, "b_gain", origin + " awb." + illum);
            if (gains.contains("g_gain")) {
                g.g_gain = parse_double(gains, "g_gain", origin + " awb." + illum);
            }
            profile.awb_table[illum] = g;
        }
        profile.ccm_day.m = parse_matrix(j, "ccm_day", origin);
        profile.ccm_night.m = parse_matrix(j, "ccm_night", origin);
        if (units == "adu") {
            if (profile.white_level <= profile.black_level) {
                throw calibration_error(origin + ": white_level must exceed black_level");
            }
            const double scale = profile.normalization_scale();
            profile.noise.k0 /= scale;
            profile.noise.k1 /= scale;
            profile.noise.b0 /= scale * scale;
            profile.noise.b1 /= scale * scale;
            profile.noise.b2 /= scale * scale;
        }
    } catch (const ordered_json::exception& e) {
        throw config_error(origin + ": " + e.what());
    }
    profile.validate();
    return profile;
}

std::string sha256_hex(std::string_view bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
        throw std::runtime_error("sha256 digest failed");
    }
    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 0xf]);
    }
    return out;
}

std::string sha256_file_hex(const std::filesystem::path& path) {
    return sha256_hex(read_file_bytes(path));
}

std::string read_file_bytes(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw format_error(path.string() + ": cannot open for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw format_error(path.string() + ": read failed");
    return std::move(ss).str();
}

void write_file_bytes(const std::filesystem::path& path, std::string_view bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw format_error(path.string() + ": cannot open for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) throw format_error(path.string() + ": write failed");
}

std::string iso_curves_csv(const StatsCurves& curves) {
    std::string out = "iso,sigma2_shot,sigma2_read\n";
    for (const IsoCurveRow& row : curves.iso_rows) {
        out += std::to_string(row.iso);
        out += ",";
        out += format_g(row.sigma2_shot);
        out += ",";
        out += format_g(row.sigma2_read);
        out += "\n";
    }
    return out;
}

std::string adu_curves_csv(const StatsCurves& curves) {
    std::string out = "adu,sigma2,snr_db\n";
    for (const AduCurveRow& row : curves.adu_rows) {
        out += format_g(row.adu);
        out += ",";
        out += format_g(row.sigma2);
        out += ",";
        out += format_g(row.snr_db);
        out += "\n";
    }
    return out;
}

std::string meta_record_to_json(const MetaRecord& record) {
    return detail::meta_record_to_ordered_json(record).dump(2) + "\n";
}

MetaRecord meta_record_from_json(const std::string& text, const std::string& origin) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const ordered_json::exception& e) {
        throw format_error(origin + ": " + e.what());
    }
    return detail::meta_record_from_ordered_json(j, origin);
}

}  // namespace msraw
