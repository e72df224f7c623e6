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

#include <filesystem>
#include <string>
#include <string_view>

#include "msraw/image.hpp"
#include "msraw/noise.hpp"
#include "msraw/synthesis.hpp"

namespace msraw {

// .msraw container (all integers little-endian):
//   offset  0  8 bytes  magic "MSRAW001"
//   offset  8  u32      container version (1)
//   offset 12  u32      reserved (0)
//   offset 16  u32      dtype code (0 = uint16)
//   offset 20  u32      plane count (4)
//   offset 24  u32      full-resolution height H (even)
//   offset 28  u32      full-resolution width W (even)
//   offset 32  u32      white_level
//   offset 36  u32      black_level
//   offset 40  ...      4 planes of H/2 * W/2 uint16, row-major,
//                       plane order B, G1, G2, R
// Stored sample = round(clip(v, 0, 1) * white_level); reading divides by
// white_level, so write -> read -> write is byte-identical.
std::string msraw_to_bytes(const RawImage& raw);
RawImage msraw_from_bytes(std::string_view bytes, const std::string& origin = "<memory>");

void write_msraw(const std::filesystem::path& path, const RawImage& raw);
RawImage read_msraw(const std::filesystem::path& path);

// Binary PPM (P6), maxval 255 or 65535. Values are normalized to [0,1] on
// read and tagged srgb; writing quantizes to 16-bit.
RgbImage read_ppm(const std::filesystem::path& path);
void write_ppm16(const std::filesystem::path& path, const RgbImage& img);

// Sensor profile JSON. Required fields: name, units ("normalized" | "adu"),
// noise {k0,k1,b0,b1,b2}, black_level, white_level, awb (illuminant ->
// {r_gain, b_gain}), ccm_day, ccm_night (3x3 row-major). ADU-units
// coefficients are converted on load: k /= scale, b /= scale^2 with
// scale = white_level - black_level. The loaded profile is validated.
SensorProfile load_sensor_profile(const std::filesystem::path& path);

// Hex-encoded SHA-256 of a byte buffer / file.
std::string sha256_hex(std::string_view bytes);
std::string sha256_file_hex(const std::filesystem::path& path);

std::string read_file_bytes(const std::filesystem::path& path);
void write_file_bytes(const std::filesystem::path& path, std::string_view bytes);

// Stats tables as CSV with headers "iso,sigma2_shot,sigma2_read" and
// "adu,sigma2,snr_db".
std::string iso_curves_csv(const StatsCurves& curves);
std::string adu_curves_csv(const StatsCurves& curves);

// MetaRecord <-> JSON (single-record documents and the dataset-level
// meta_data.json both use this shape).
std::string meta_record_to_json(const MetaRecord& record);
MetaRecord meta_record_from_json(const std::string& text, const std::string& origin = "<memory>");

}  // namespace msraw
