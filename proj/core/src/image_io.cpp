#include "gridshape/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "gridshape/error.hpp"

namespace gridshape {

namespace {

std::vector<std::uint8_t> read_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorKind::kIo, "cannot open " + path.string());
  }
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (in.bad()) {
    throw Error(ErrorKind::kIo, "read failed for " + path.string());
  }
  return bytes;
}

[[noreturn]] void format_error(const std::filesystem::path& path,
                               const std::string& what) {
  throw Error(ErrorKind::kFormat, path.string() + ": " + what);
}

// Integer weights keep gray inputs exact: r = g = b gives v / 255.
double rgb_luminance(unsigned r, unsigned g, unsigned b) {
  return static_cast<double>(299u * r + 587u * g + 114u * b) / 255000.0;
}

GrayImage decode_png(const std::filesystem::path& path,
                     const std::vector<std::uint8_t>& bytes) {
  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&image, bytes.data(), bytes.size())) {
    format_error(path, std::string("png: ") + image.message);
  }
  image.format = PNG_FORMAT_RGBA;
  std::vector<std::uint8_t> rgba(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, rgba.data(), 0, nullptr)) {
    std::string msg = image.message;
    png_image_free(&image);
    format_error(path, "png: " + msg);
  }
  GrayImage out;
  out.width = static_cast<int>(image.width);
  out.height = static_cast<int>(image.height);
  out.luminance.resize(static_cast<std::size_t>(out.width) * out.height);
  for (std::size_t i = 0; i < out.luminance.size(); ++i) {
    out.luminance[i] =
        rgb_luminance(rgba[4 * i], rgba[4 * i + 1], rgba[4 * i + 2]);
  }
  return out;
}

GrayImage decode_pgm(const std::filesystem::path& path,
                     const std::vector<std::uint8_t>& bytes) {
  std::size_t pos = 2;
  auto next_token = [&]() -> long {
    while (pos < bytes.size()) {
      if (bytes[pos] == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      } else if (std::isspace(bytes[pos])) {
        ++pos;
      } else {
        break;
      }
    }
    if (pos >= bytes.size() || !std::isdigit(bytes[pos])) {
      format_error(path, "pgm: malformed header");
    }
    long value = 0;
    while (pos < bytes.size() && std::isdigit(bytes[pos])) {
      value = value * 10 + (bytes[pos] - '0');
      if (value > 1'000'000'000) format_error(path, "pgm: header overflow");
      ++pos;
    }
    return value;
  };
  const long width = next_token();
  const long height = next_token();
  const long maxval = next_token();
  if (width < 1 || height < 1 || maxval < 1 || maxval > 65535) {
    format_error(path, "pgm: invalid dimensions or maxval");
  }
  if (pos >= bytes.size() || !std::isspace(bytes[pos])) {
    format_error(path, "pgm: missing separator before raster");
  }
  ++pos;
  const std::size_t bpp = maxval > 255 ? 2 : 1;
  const std::size_t count = static_cast<std::size_t>(width) * height;
  if (bytes.size() - pos < count * bpp) {
    format_error(path, "pgm: truncated raster");
  }
  GrayImage out;
  out.width = static_cast<int>(width);
  out.height = static_cast<int>(height);
  out.luminance.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    unsigned v = bytes[pos + i * bpp];
    if (bpp == 2) v = (v << 8) | bytes[pos + i * bpp + 1];
    out.luminance[i] =
        std::min(1.0, static_cast<double>(v) / static_cast<double>(maxval));
  }
  return out;
}

std::uint32_t le32(const std::vector<std::uint8_t>& b, std::size_t at) {
  return static_cast<std::uint32_t>(b[at]) |
         (static_cast<std::uint32_t>(b[at + 1]) << 8) |
         (static_cast<std::uint32_t>(b[at + 2]) << 16) |
         (static_cast<std::uint32_t>(b[at + 3]) << 24);
}

std::uint16_t le16(const std::vector<std::uint8_t>& b, std::size_t at) {
  return static_cast<std::uint16_t>(b[at] | (b[at + 1] << 8));
}

GrayImage decode_bmp(const std::filesystem::path& path,
                     const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < 54) format_error(path, "bmp: truncated header");
  const std::uint32_t data_offset = le32(bytes, 10);
  const std::uint32_t header_size = le32(bytes, 14);
  if (header_size < 40) format_error(path, "bmp: unsupported header version");
  const auto width = static_cast<std::int32_t>(le32(bytes, 18));
  const auto raw_height = static_cast<std::int32_t>(le32(bytes, 22));
  const std::uint16_t bits = le16(bytes, 28);
  const std::uint32_t compression = le32(bytes, 30);
  std::uint32_t palette_size = le32(bytes, 46);

  const bool top_down = raw_height < 0;
  const std::int64_t height = top_down ? -static_cast<std::int64_t>(raw_height)
                                       : raw_height;
  if (width < 1 || height < 1 || height > (1 << 24) || width > (1 << 24)) {
    format_error(path, "bmp: invalid dimensions");
  }
  // BI_BITFIELDS is accepted for 32 bpp with the default BGRA layout.
  if (compression != 0 && !(compression == 3 && bits == 32)) {
    format_error(path, "bmp: compressed bitmaps are not supported");
  }
  if (bits != 1 && bits != 4 && bits != 8 && bits != 24 && bits != 32) {
    format_error(path, "bmp: unsupported bit depth " + std::to_string(bits));
  }

  std::vector<double> palette;
  if (bits <= 8) {
    if (palette_size == 0) palette_size = 1u << bits;
    const std::size_t pal_at = 14 + header_size;
    if (pal_at + 4ull * palette_size > bytes.size()) {
      format_error(path, "bmp: truncated palette");
    }
    for (std::uint32_t i = 0; i < palette_size; ++i) {
      const std::size_t at = pal_at + 4ull * i;
      palette.push_back(rgb_luminance(bytes[at + 2], bytes[at + 1], bytes[at]));
    }
  }

  const std::size_t row_bytes = ((static_cast<std::size_t>(width) * bits + 31) / 32) * 4;
  if (data_offset + row_bytes * static_cast<std::size_t>(height) > bytes.size()) {
    format_error(path, "bmp: truncated raster");
  }

  GrayImage out;
  out.width = width;
  out.height = static_cast<int>(height);
  out.luminance.resize(static_cast<std::size_t>(width) * out.height);
  for (int row = 0; row < out.height; ++row) {
    const int y = top_down ? row : out.height - 1 - row;
    const std::size_t base = data_offset + row_bytes * row;
    for (int x = 0; x < width; ++x) {
      double lum = 0.0;
      if (bits <= 8) {
        const std::size_t bit = static_cast<std::size_t>(x) * bits;
        const std::uint8_t byte = bytes[base + bit / 8];
        const unsigned shift = 8 - bits - (bit % 8);
        const unsigned index = (byte >> shift) & ((1u << bits) - 1);
        if (index >= palette.size()) format_error(path, "bmp: palette index out of range");
        lum = palette[index];
      } else {
        const std::size_t at = base + static_cast<std::size_t>(x) * (bits / 8);
        lum = rgb_luminance(bytes[at + 2], bytes[at + 1], bytes[at]);
      }
      out.luminance[static_cast<std::size_t>(y) * width + x] = lum;
    }
  }
  return out;
}

}  // namespace

GrayImage decode_image(const std::filesystem::path& path) {
  const auto bytes = read_bytes(path);
  static constexpr std::array<std::uint8_t, 8> kPngMagic = {
      0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
  if (bytes.size() >= 8 && std::equal(kPngMagic.begin(), kPngMagic.end(), bytes.begin())) {
    return decode_png(path, bytes);
  }
  if (bytes.size() >= 2 && bytes[0] == 'P' && bytes[1] == '5') {
    return decode_pgm(path, bytes);
  }
  if (bytes.size() >= 2 && bytes[0] == 'B' && bytes[1] == 'M') {
    return decode_bmp(path, bytes);
  }
  format_error(path, "unsupported image format (expected PNG, P5 PGM or BMP)");
}

BinaryImage binarize(const GrayImage& gray, const BinarizeOptions& opts) {
  if (!(opts.threshold >= 0.0 && opts.threshold <= 1.0)) {
    throw Error(ErrorKind::kInvalidArgument, "threshold must lie in [0, 1]");
  }
  std::vector<std::uint8_t> mask(gray.luminance.size());
  bool any = false;
  for (std::size_t i = 0; i < mask.size(); ++i) {
    const bool bright = gray.luminance[i] >= opts.threshold;
    mask[i] = (bright != opts.invert) ? 1 : 0;
    any = any || mask[i];
  }
  if (!any) {
    throw Error(ErrorKind::kEmptyShape, "empty shape after binarization");
  }
  return BinaryImage(gray.width, gray.height, std::move(mask));
}

BinaryImage load_image(const std::filesystem::path& path,
                       const BinarizeOptions& opts) {
  return binarize(decode_image(path), opts);
}

bool has_supported_extension(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext == ".png" || ext == ".pgm" || ext == ".bmp";
}

void write_pgm(const std::filesystem::path& path, const BinaryImage& img) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::kIo, "cannot write " + path.string());
  out << "P5\n" << img.width() << ' ' << img.height() << "\n255\n";
  for (const auto v : img.mask()) out.put(v ? static_cast<char>(255) : 0);
  if (!out) throw Error(ErrorKind::kIo, "write failed for " + path.string());
}

void write_png(const std::filesystem::path& path, const BinaryImage& img) {
  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(img.width());
  image.height = static_cast<png_uint_32>(img.height());
  image.format = PNG_FORMAT_GRAY;
  std::vector<std::uint8_t> pixels(img.mask().size());
  std::transform(img.mask().begin(), img.mask().end(), pixels.begin(),
                 [](std::uint8_t v) { return static_cast<std::uint8_t>(v ? 255 : 0); });
  if (!png_image_write_to_file(&image, path.string().c_str(), 0, pixels.data(),
                               0, nullptr)) {
    throw Error(ErrorKind::kIo,
                "cannot write " + path.string() + ": " + image.message);
  }
}

}  // namespace gridshape
