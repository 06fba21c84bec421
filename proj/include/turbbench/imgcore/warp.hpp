#pragma once

#include "turbbench/imgcore/image.hpp"

namespace turbbench {

enum class BorderMode { Clamp, Zero, Reflect };

// Cubic is the Keys kernel (a = -1/2): interpolating, and it keeps far more
// high-frequency content than bilinear when warps are chained.
enum class Interpolation { Bilinear, Cubic };

// Backward warp: out(x, y) = src(x + dx(x, y), y + dy(x, y)).
Image warp_image(const Image& src, const WarpField& field,
                 BorderMode border = BorderMode::Clamp,
                 Interpolation interp = Interpolation::Bilinear);

// Bilinear sample at a real-valued position.
double sample_bilinear(const Image& src, double x, double y,
                       BorderMode border = BorderMode::Clamp);

double sample_cubic(const Image& src, double x, double y,
                    BorderMode border = BorderMode::Clamp);

}  // namespace turbbench
