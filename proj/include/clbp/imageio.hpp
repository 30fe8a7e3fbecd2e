#pragma once

#include <filesystem>

#include "clbp/image.hpp"

namespace clbp {

// 8-bit PNG and BMP decode; anything else raises FormatError.
PlanarImage read_image(const std::filesystem::path& path);

// RGB or GRAY input, samples rounded to 8 bits.
void write_png(const PlanarImage& img, const std::filesystem::path& path);
void write_bmp(const PlanarImage& img, const std::filesystem::path& path);

// Dispatch on extension (.png / .bmp).
void write_image(const PlanarImage& img, const std::filesystem::path& path);

}  // namespace clbp
