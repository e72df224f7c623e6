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

#include "msraw/image.hpp"

#include <sstream>

#include "msraw/errors.hpp"

namespace msraw {

RgbImage RgbImage::constant(std::size_t h, std::size_t w, double r, double g, double b,
                            RgbDomain domain) {
    if (h == 0 || w == 0) throw shape_error("RgbImage::constant: dimensions must be positive");
    RgbImage img;
    img.planes[0] = Plane(h, w, r);
    img.planes[1] = Plane(h, w, g);
    img.planes[2] = Plane(h, w, b);
    img.domain = domain;
    return img;
}

RawImage RawImage::constant(std::size_t h, std::size_t w, double value, std::uint32_t white_level,
                            std::uint32_t black_level) {
    if (h == 0 || w == 0 || h % 2 != 0 || w % 2 != 0) {
        std::ostringstream os;
        os << "RawImage::constant: dimensions must be positive and even, got " << h << "x" << w;
        throw shape_error(os.str());
    }
    RawImage raw;
    for (auto& p : raw.planes) p = Plane(h / 2, w / 2, value);
    raw.white_level = white_level;
    raw.black_level = black_level;
    return raw;
}

void validate_raw_shape(const RawImage& raw) {
    const Plane& p0 = raw.planes[0];
    if (p0.rows == 0 || p0.cols == 0) throw shape_error("raw image has empty planes");
    for (const Plane& p : raw.planes) {
        if (!p.same_shape(p0)) {
            std::ostringstream os;
            os << "raw plane shapes differ: " << p0.rows << "x" << p0.cols << " vs " << p.rows
               << "x" << p.cols;
            throw shape_error(os.str());
        }
        if (p.v.size() != p.rows * p.cols) {
            throw shape_error("raw plane buffer size does not match its shape");
        }
    }
}

void validate_rgb_shape(const RgbImage& img) {
    const Plane& p0 = img.planes[0];
    if (p0.rows == 0 || p0.cols == 0) throw shape_error("rgb image has empty planes");
    for (const Plane& p : img.planes) {
        if (!p.same_shape(p0)) {
            std::ostringstream os;
            os << "rgb plane shapes differ: " << p0.rows << "x" << p0.cols << " vs " << p.rows
               << "x" << p.cols;
            throw shape_error(os.str());
        }
        if (p.v.size() != p.rows * p.cols) {
            throw shape_error("rgb plane buffer size does not match its shape");
        }
    }
}

void clip01_inplace(Plane& p) {
    for (double& x : p.v) x = clip01(x);
}

void clip01_inplace(RgbImage& img) {
    for (Plane& p : img.planes) clip01_inplace(p);
}

void clip01_inplace(RawImage& raw) {
    for (Plane& p : raw.planes) clip01_inplace(p);
}

}  // namespace msraw
