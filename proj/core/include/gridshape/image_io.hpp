#pragma once

#include <filesystem>
#include <vector>

#include "gridshape/raster.hpp"

namespace gridshape {

/// Luminance raster with values in [0, 1], row-major.
struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<double> luminance;
};

struct BinarizeOptions {
  double threshold = 0.5;
  /// Default polarity is white shape on black background.
  bool invert = false;
};

/// Decodes PNG (8/16-bit gray or color; alpha ignored), binary PGM (P5) and
/// uncompressed BMP (1/4/8/24/32 bpp). Format is sniffed from the file
/// content, not the extension.
GrayImage decode_image(const std::filesystem::path& path);

/// Pixel is shape iff luminance >= threshold (or < threshold when inverted).
/// Throws kEmptyShape when no pixel qualifies.
BinaryImage binarize(const GrayImage& gray, const BinarizeOptions& opts = {});

BinaryImage load_image(const std::filesystem::path& path,
                       const BinarizeOptions& opts = {});

/// True for the extensions load_image understands (.png, .pgm, .bmp; any case).
bool has_supported_extension(const std::filesystem::path& path);

/// Shape pixels are written white (255) on black.
void write_pgm(const std::filesystem::path& path, const BinaryImage& img);
void write_png(const std::filesystem::path& path, const BinaryImage& img);

}  // namespace gridshape
