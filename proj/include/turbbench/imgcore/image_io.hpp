#pragma once

#include <filesystem>

#include "turbbench/imgcore/errors.hpp"
#include "turbbench/imgcore/image.hpp"

namespace turbbench {

class ImageIoError : public Error {
 public:
  using Error::Error;
};

class UnsupportedFormat : public ImageIoError {
 public:
  using ImageIoError::ImageIoError;
};

class TruncatedFile : public ImageIoError {
 public:
  using ImageIoError::ImageIoError;
};

class IoFailure : public ImageIoError {
 public:
  using ImageIoError::ImageIoError;
};

// Reads 8/16-bit PNG (gray, gray+alpha, RGB, RGBA, palette) or binary PGM.
// Colour is folded to gray by channel average; alpha is dropped.
// dyn_range is 2^bitdepth - 1 for PNG and maxval for PGM.
Image load_image(const std::filesystem::path& path);

// Writes by extension (.png or .pgm). Values are rounded and clamped to
// [0, dyn_range]. PNG needs dyn_range 255 or 65535.
void save_image(const Image& img, const std::filesystem::path& path);

}  // namespace turbbench
