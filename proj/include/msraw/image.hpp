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

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace msraw {

// Single-channel 2D array, row-major doubles.
struct Plane {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> v;

    Plane() = default;
    Plane(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), v(r * c, fill) {}

    double& at(std::size_t r, std::size_t c) { return v[r * cols + c]; }
    double at(std::size_t r, std::size_t c) const { return v[r * cols + c]; }
    std::size_t size() const { return v.size(); }
    bool same_shape(const Plane& o) const { return rows == o.rows && cols == o.cols; }
};

enum class RgbDomain { linear, srgb };

// Full-resolution 3-plane image, plane order R, G, B.
struct RgbImage {
    std::array<Plane, 3> planes;
    RgbDomain domain = RgbDomain::linear;

    std::size_t height() const { return planes[0].rows; }
    std::size_t width() const { return planes[0].cols; }

    static RgbImage constant(std::size_t h, std::size_t w, double r, double g, double b,
                             RgbDomain domain = RgbDomain::linear);
};

// Plane indices of the BGGR packing used throughout.
inline constexpr int kPlaneB = 0;
inline constexpr int kPlaneG1 = 1;  // green on blue rows (even row, odd col)
inline constexpr int kPlaneG2 = 2;  // green on red rows (odd row, even col)
inline constexpr int kPlaneR = 3;

// 4-plane Bayer image (BGGR). Each plane is H/2 x W/2 where H, W are the
// full-resolution dimensions (both even). Values are normalized floats;
// white_level is the integer storage scale used when quantizing to disk,
// black_level the dark-current offset in the same ADU scale.
struct RawImage {
    std::array<Plane, 4> planes;  // B, G1, G2, R
    std::uint32_t white_level = 1023;
    std::uint32_t black_level = 0;

    std::size_t height() const { return planes[0].rows * 2; }
    std::size_t width() const { return planes[0].cols * 2; }

    static RawImage constant(std::size_t h, std::size_t w, double value,
                             std::uint32_t white_level = 1023, std::uint32_t black_level = 0);
};

// Throws shape_error unless all four planes have identical, nonzero shapes.
void validate_raw_shape(const RawImage& raw);

// Throws shape_error unless all three planes have identical, nonzero shapes.
void validate_rgb_shape(const RgbImage& img);

inline double clip01(double x) { return x < 0.0 ? 0.0 : (x > 1.0 ? 1.0 : x); }

void clip01_inplace(Plane& p);
void clip01_inplace(RgbImage& img);
void clip01_inplace(RawImage& raw);

}  // namespace msraw
