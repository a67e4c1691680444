#pragma once

#include <string_view>

#include "revfilt/image.hpp"
#include "revfilt/kernel.hpp"

namespace revfilt {

enum class Boundary { Replicate, Circular };

Boundary parse_boundary(std::string_view name);
std::string_view to_string(Boundary boundary);

/// 2D correlation, out(y,x) = sum k(dy,dx) * in(y+dy, x+dx), per channel.
/// Circular boundary requires the kernel to fit inside the image.
Image convolve(const Image& image, const Kernel& kernel, Boundary boundary);

}  // namespace revfilt
