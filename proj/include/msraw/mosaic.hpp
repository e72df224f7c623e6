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

#include "msraw/image.hpp"

namespace msraw {

// RGB -> 4-plane BGGR raw by site selection (no filtering):
//   B  at (even row, even col)
//   G1 at (even row, odd col)
//   G2 at (odd row, even col)
//   R  at (odd row, odd col)
// Requires even H and W; throws shape_error otherwise. The returned image
// keeps default storage levels; callers set white/black levels as needed.
RawImage mosaic(const RgbImage& img);

// Bilinear demosaic of the BGGR planes back to full resolution. Known Bayer
// sites are copied bit-exactly; missing sites are averages of the nearest
// same-channel neighbors, with clamp-to-edge handling at the borders, so
// mosaic(demosaic_bilinear(raw)) == raw for every raw.
RgbImage demosaic_bilinear(const RawImage& raw);

}  // namespace msraw
