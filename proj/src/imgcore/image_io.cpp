#include "turbbench/imgcore/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <csetjmp>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

namespace turbbench {

namespace fs = std::filesystem;

namespace {

std::vector<std::uint8_t> read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoFailure("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const fs::path& path, const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoFailure("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoFailure("failed writing " + path.string());
}

std::string lower_extension(const fs::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext;
}

std::uint32_t quantize(double v, double dyn) {
  return static_cast<std::uint32_t>(std::lround(std::clamp(v, 0.0, dyn)));
}

// ---- PNG -------------------------------------------------------------------

struct PngContext {
  const std::vector<std::uint8_t>* input = nullptr;
  std::size_t offset = 0;
  std::vector<std::uint8_t>* output = nullptr;
  bool truncated = false;
  std::string message;
  std::jmp_buf jump;
};

void png_fail(png_structp png, png_const_charp msg) {
  auto* ctx = static_cast<PngContext*>(png_get_error_ptr(png));
  ctx->message = msg;
  std::longjmp(ctx->jump, 1);
}

void png_warn(png_structp, png_const_charp) {}

void png_read_bytes(png_structp png, png_bytep dst, png_size_t n) {
  auto* ctx = static_cast<PngContext*>(png_get_io_ptr(png));
  if (ctx->offset + n > ctx->input->size()) {
    ctx->truncated = true;
    png_error(png, "unexpected end of file");
  }
  std::memcpy(dst, ctx->input->data() + ctx->offset, n);
  ctx->offset += n;
}

void png_write_bytes(png_structp png, png_bytep src, png_size_t n) {
  auto* ctx = static_cast<PngContext*>(png_get_io_ptr(png));
  ctx->output->insert(ctx->output->end(), src, src + n);
}

void png_flush_noop(png_structp) {}

struct DecodedPng {
  int width = 0;
  int height = 0;
  int bit_depth = 8;
  int channels = 1;
  std::vector<std::uint8_t> rows;  // tightly packed, big-endian samples
};

// No objects with destructors may live in this frame: longjmp skips them.
bool decode_png(PngContext& ctx, DecodedPng& out) {
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &ctx, png_fail, png_warn);
  if (png == nullptr) return false;
  png_infop info = png_create_info_struct(png);
  if (info == nullptr) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    return false;
  }
  png_bytepp row_ptrs = nullptr;
  if (setjmp(ctx.jump)) {
    delete[] row_ptrs;
    png_destroy_read_struct(&png, &info, nullptr);
    return false;
  }
  png_set_read_fn(png, &ctx, png_read_bytes);
  png_read_info(png, info);
  const int color = png_get_color_type(png, info);
  if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color == PNG_COLOR_TYPE_GRAY && png_get_bit_depth(png, info) < 8) {
    png_set_expand_gray_1_2_4_to_8(png);
  }
  png_set_strip_alpha(png);
  png_read_update_info(png, info);

  out.width = static_cast<int>(png_get_image_width(png, info));
  out.height = static_cast<int>(png_get_image_height(png, info));
  out.bit_depth = png_get_bit_depth(png, info);
  out.channels = png_get_channels(png, info);
  const std::size_t stride = png_get_rowbytes(png, info);
  out.rows.resize(stride * static_cast<std::size_t>(out.height));
  row_ptrs = new png_bytep[out.height];
  for (int y = 0; y < out.height; ++y) row_ptrs[y] = out.rows.data() + stride * y;
  png_read_image(png, row_ptrs);
  png_read_end(png, nullptr);
  delete[] row_ptrs;
  png_destroy_read_struct(&png, &info, nullptr);
  return true;
}

Image load_png(const fs::path& path, const std::vector<std::uint8_t>& bytes) {
  PngContext ctx;
  ctx.input = &bytes;
  DecodedPng decoded;
  if (!decode_png(ctx, decoded)) {
    if (ctx.truncated) throw TruncatedFile(path.string() + ": truncated PNG");
    throw IoFailure(path.string() + ": " + ctx.message);
  }
  if (decoded.bit_depth != 8 && decoded.bit_depth != 16) {
    throw UnsupportedFormat(path.string() + ": unsupported PNG bit depth");
  }
  const int bytes_per_sample = decoded.bit_depth / 8;
  const double dyn = decoded.bit_depth == 8 ? 255.0 : 65535.0;
  const std::size_t n = static_cast<std::size_t>(decoded.width) * decoded.height;
  std::vector<double> data(n);
  const std::uint8_t* p = decoded.rows.data();
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (int c = 0; c < decoded.channels; ++c) {
      double v = p[0];
      if (bytes_per_sample == 2) v = static_cast<double>((p[0] << 8) | p[1]);
      acc += v;
      p += bytes_per_sample;
    }
    data[i] = acc / decoded.channels;
  }
  return Image(decoded.width, decoded.height, std::move(data), dyn);
}

bool encode_png(PngContext& ctx, int width, int height, int bit_depth,
                const std::vector<std::uint8_t>& rows) {
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &ctx, png_fail, png_warn);
  if (png == nullptr) return false;
  png_infop info = png_create_info_struct(png);
  if (info == nullptr) {
    png_destroy_write_struct(&png, nullptr);
    return false;
  }
  if (setjmp(ctx.jump)) {
    png_destroy_write_struct(&png, &info);
    return false;
  }
  png_set_write_fn(png, &ctx, png_write_bytes, png_flush_noop);
  png_set_IHDR(png, info, static_cast<png_uint_32>(width), static_cast<png_uint_32>(height),
               bit_depth, PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  const std::size_t stride = static_cast<std::size_t>(width) * (bit_depth / 8);
  for (int y = 0; y < height; ++y) {
    png_write_row(png, const_cast<png_bytep>(rows.data() + stride * y));
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  return true;
}

void save_png(const Image& img, const fs::path& path) {
  int bit_depth = 0;
  if (img.dyn_range() == 255.0) {
    bit_depth = 8;
  } else if (img.dyn_range() == 65535.0) {
    bit_depth = 16;
  } else {
    throw UnsupportedFormat(path.string() + ": PNG output needs dyn_range 255 or 65535");
  }
  std::vector<std::uint8_t> rows;
  rows.reserve(img.size() * (bit_depth / 8));
  for (double v : img.pixels()) {
    const std::uint32_t q = quantize(v, img.dyn_range());
    if (bit_depth == 16) rows.push_back(static_cast<std::uint8_t>(q >> 8));
    rows.push_back(static_cast<std::uint8_t>(q & 0xff));
  }
  std::vector<std::uint8_t> bytes;
  PngContext ctx;
  ctx.output = &bytes;
  if (!encode_png(ctx, img.width(), img.height(), bit_depth, rows)) {
    throw IoFailure(path.string() + ": " + ctx.message);
  }
  write_file(path, bytes);
}

// ---- PGM (P5) ----------------------------------------------------------------

class PgmHeaderReader {
 public:
  PgmHeaderReader(const fs::path& path, const std::vector<std::uint8_t>& bytes)
      : path_(path), bytes_(bytes) {}

  int next_int() {
    skip_space_and_comments();
    if (pos_ >= bytes_.size()) throw TruncatedFile(path_.string() + ": truncated PGM header");
    if (!std::isdigit(bytes_[pos_])) {
      throw UnsupportedFormat(path_.string() + ": malformed PGM header");
    }
    long value = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      value = value * 10 + (bytes_[pos_++] - '0');
      if (value > 1 << 24) throw UnsupportedFormat(path_.string() + ": PGM header value too large");
    }
    return static_cast<int>(value);
  }

  // Exactly one whitespace byte separates maxval from the raster.
  std::size_t raster_offset() {
    if (pos_ >= bytes_.size()) throw TruncatedFile(path_.string() + ": truncated PGM header");
    return pos_ + 1;
  }

 private:
  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else if (std::isspace(bytes_[pos_])) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  const fs::path& path_;
  const std::vector<std::uint8_t>& bytes_;
  std::size_t pos_ = 2;
};

Image load_pgm(const fs::path& path, const std::vector<std::uint8_t>& bytes) {
  PgmHeaderReader header(path, bytes);
  const int width = header.next_int();
  const int height = header.next_int();
  const int maxval = header.next_int();
  if (width <= 0 || height <= 0 || maxval <= 0 || maxval > 65535) {
    throw UnsupportedFormat(path.string() + ": invalid PGM header values");
  }
  const std::size_t offset = header.raster_offset();
  const int bps = maxval < 256 ? 1 : 2;
  const std::size_t n = static_cast<std::size_t>(width) * height;
  if (bytes.size() < offset + n * bps) throw TruncatedFile(path.string() + ": truncated PGM raster");
  std::vector<double> data(n);
  const std::uint8_t* p = bytes.data() + offset;
  for (std::size_t i = 0; i < n; ++i) {
    data[i] = bps == 1 ? p[i] : static_cast<double>((p[2 * i] << 8) | p[2 * i + 1]);
  }
  return Image(width, height, std::move(data), static_cast<double>(maxval));
}

void save_pgm(const Image& img, const fs::path& path) {
  const double dyn = img.dyn_range();
  if (dyn < 1.0 || dyn > 65535.0 || dyn != std::floor(dyn)) {
    throw UnsupportedFormat(path.string() + ": PGM maxval must be an integer in [1, 65535]");
  }
  const std::string header = "P5\n" + std::to_string(img.width()) + " " +
                             std::to_string(img.height()) + "\n" +
                             std::to_string(static_cast<int>(dyn)) + "\n";
  std::vector<std::uint8_t> bytes(header.begin(), header.end());
  for (double v : img.pixels()) {
    const std::uint32_t q = quantize(v, dyn);
    if (dyn >= 256.0) bytes.push_back(static_cast<std::uint8_t>(q >> 8));
    bytes.push_back(static_cast<std::uint8_t>(q & 0xff));
  }
  write_file(path, bytes);
}

}  // namespace

Image load_image(const fs::path& path) {
  const auto bytes = read_file(path);
  static constexpr std::uint8_t kPngMagic[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
  if (bytes.size() >= 8 && std::equal(kPngMagic, kPngMagic + 8, bytes.begin())) {
    return load_png(path, bytes);
  }
  if (bytes.size() >= 2 && bytes[0] == 'P' && bytes[1] == '5') return load_pgm(path, bytes);
  if (bytes.size() < 8 && !bytes.empty() && bytes[0] == 0x89) {
    throw TruncatedFile(path.string() + ": truncated PNG signature");
  }
  throw UnsupportedFormat(path.string() + ": not a PNG or binary PGM file");
}

void save_image(const Image& img, const fs::path& path) {
  const std::string ext = lower_extension(path);
  if (ext == ".png") return save_png(img, path);
  if (ext == ".pgm") return save_pgm(img, path);
  throw UnsupportedFormat(path.string() + ": unsupported output extension '" + ext + "'");
}

}  // namespace turbbench
