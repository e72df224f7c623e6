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

#include "msraw/mosaic.hpp"

#include <cstddef>
#include <sstream>

#include "msraw/errors.hpp"

namespace msraw {
namespace {

std::size_t clamp_index(std::ptrdiff_t i, std::size_t n) {
    if (i < 0) return 0;
    if (static_cast<std::size_t>(i) >= n) return n - 1;
    return static_cast<std::size_t>(i);
}

// Pairwise sums keep constants exact: (x+x)+(x+x) == 4x in IEEE arithmetic,
// so averaging a constant neighborhood reproduces the constant bit-exactly.
double avg2(double a, double b) { return (a + b) * 0.5; }
double avg4(double a, double b, double c, double d) { return ((a + b) + (c + d)) * 0.25; }

}  // namespace

RawImage mosaic(const RgbImage& img) {
    validate_rgb_shape(img);
    const std::size_t h = img.height();
    const std::size_t w = img.width();
    if (h % 2 != 0 || w % 2 != 0) {
        std::ostringstream os;
        os << "mosaic requires even dimensions, got " << h << "x" << w;
        throw shape_error(os.str());
    }
    const Plane& r = img.planes[0];
    const Plane& g = img.planes[1];
    const Plane& b = img.planes[2];
    RawImage raw;
    const std::size_t ph = h / 2;
    const std::size_t pw = w / 2;
    for (Plane& p : raw.planes) p = Plane(ph, pw);
    for (std::size_t pr = 0; pr < ph; ++pr) {
        for (std::size_t pc = 0; pc < pw; ++pc) {
            raw.planes[kPlaneB].at(pr, pc) = b.at(2 * pr, 2 * pc);
            raw.planes[kPlaneG1].at(pr, pc) = g.at(2 * pr, 2 * pc + 1);
            raw.planes[kPlaneG2].at(pr, pc) = g.at(2 * pr + 1, 2 * pc);
            raw.planes[kPlaneR].at(pr, pc) = r.at(2 * pr + 1, 2 * pc + 1);
        }
    }
    return raw;
}

RgbImage demosaic_bilinear(const RawImage& raw) {
    validate_raw_shape(raw);
    const Plane& pb = raw.planes[kPlaneB];
    const Plane& pg1 = raw.planes[kPlaneG1];
    const Plane& pg2 = raw.planes[kPlaneG2];
    const Plane& pr = raw.planes[kPlaneR];
    const std::size_t ph = pb.rows;
    const std::size_t pw = pb.cols;
    const std::size_t h = 2 * ph;
    const std::size_t w = 2 * pw;

    RgbImage out;
    for (Plane& p : out.planes) p = Plane(h, w);
    out.domain = RgbDomain::linear;
    Plane& r = out.planes[0];
    Plane& g = out.planes[1];
    Plane& b = out.planes[2];

    for (std::size_t i = 0; i < h; ++i) {
        const bool odd_row = (i % 2) != 0;
        // Plane rows of the nearest samples at/above and at/below row i.
        // B and G1 live on even full-res rows, R and G2 on odd ones.
        const std::ptrdiff_t si = static_cast<std::ptrdiff_t>(i);
        const std::size_t even_up = static_cast<std::size_t>(si / 2);
        const std::size_t even_dn = odd_row ? clamp_index(si / 2 + 1, ph) : even_up;
        const std::size_t odd_up = odd_row ? static_cast<std::size_t>(si / 2)
                                           : clamp_index(si / 2 - 1, ph);
        const std::size_t odd_dn = static_cast<std::size_t>(si / 2);
        for (std::size_t j = 0; j < w; ++j) {
            const bool odd_col = (j % 2) != 0;
            const std::ptrdiff_t sj = static_cast<std::ptrdiff_t>(j);
            // Plane cols of the nearest samples: B and G2 on even full-res
            // cols, R and G1 on odd ones.
            const std::size_t evenc_l = static_cast<std::size_t>(sj / 2);
            const std::size_t evenc_r = odd_col ? clamp_index(sj / 2 + 1, pw) : evenc_l;
            const std::size_t oddc_l = odd_col ? static_cast<std::size_t>(sj / 2)
                                               : clamp_index(sj / 2 - 1, pw);
            const std::size_t oddc_r = static_cast<std::size_t>(sj / 2);

            if (!odd_row && !odd_col) {
                // Blue site.
                b.at(i, j) = pb.at(even_up, evenc_l);
                g.at(i, j) = avg4(pg2.at(odd_up, evenc_l), pg2.at(odd_dn, evenc_l),
                                  pg1.at(even_up, oddc_l), pg1.at(even_up, oddc_r));
                r.at(i, j) = avg4(pr.at(odd_up, oddc_l), pr.at(odd_up, oddc_r),
                                  pr.at(odd_dn, oddc_l), pr.at(odd_dn, oddc_r));
            } else if (!odd_row && odd_col) {
                // G1 site.
                g.at(i, j) = pg1.at(even_up, oddc_l);
                b.at(i, j) = avg2(pb.at(even_up, evenc_l), pb.at(even_up, evenc_r));
                r.at(i, j) = avg2(pr.at(odd_up, oddc_l), pr.at(odd_dn, oddc_l));
            } else if (odd_row && !odd_col) {
                // G2 site.
                g.at(i, j) = pg2.at(odd_up, evenc_l);
                b.at(i, j) = avg2(pb.at(even_up, evenc_l), pb.at(even_dn, evenc_l));
                r.at(i, j) = avg2(pr.at(odd_up, oddc_l), pr.at(odd_up, oddc_r));
            } else {
                // Red site.
                r.at(i, j) = pr.at(odd_up, oddc_l);
                g.at(i, j) = avg4(pg1.at(even_up, oddc_l), pg1.at(even_dn, oddc_l),
                                  pg2.at(odd_up, evenc_l), pg2.at(odd_up, evenc_r));
                b.at(i, j) = avg4(pb.at(even_up, evenc_l), pb.at(even_up, evenc_r),
                                  pb.at(even_dn, evenc_l), pb.at(even_dn, evenc_r));
            }
        }
    }
    return out;
}

}  // namespace msraw
