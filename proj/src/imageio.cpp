#include "clbp/imageio.hpp"

#include <png.h>

#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <vector>

namespace clbp {

namespace {

struct FileCloser {
  void operator()(FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<FILE, FileCloser>;

PlanarImage from_rgb8(const std::vector<uint8_t>& rgb, int w, int h) {
  PlanarImage img(w, h, Colorspace::RGB);
  for (size_t i = 0; i < static_cast<size_t>(w) * h; ++i) {
    img.planes[0].data[i] = rgb[3 * i];
    img.planes[1].data[i] = rgb[3 * i + 1];
    img.planes[2].data[i] = rgb[3 * i + 2];
  }
  return img;
}

PlanarImage read_png(const std::filesystem::path& path) {
  FilePtr f(std::fopen(path.string().c_str(), "rb"));
  if (!f) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  png_structp png =
      png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw Error(ErrorCode::IoError, "libpng init failed");
  }
  std::vector<uint8_t> rgb;
  int w = 0, h = 0;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw Error(ErrorCode::FormatError, "corrupt PNG: " + path.string());
  }
  png_init_io(png, f.get());
  png_read_info(png, info);
  w = static_cast<int>(png_get_image_width(png, info));
  h = static_cast<int>(png_get_image_height(png, info));
  png_byte color = png_get_color_type(png, info);
  png_byte depth = png_get_bit_depth(png, info);
  if (depth == 16) png_set_strip_16(png);
  if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color == PNG_COLOR_TYPE_GRAY && depth < 8)
    png_set_expand_gray_1_2_4_to_8(png);
  if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
  if (color == PNG_COLOR_TYPE_GRAY || color == PNG_COLOR_TYPE_GRAY_ALPHA)
    png_set_gray_to_rgb(png);
  png_set_strip_alpha(png);
  png_read_update_info(png, info);
  rgb.resize(static_cast<size_t>(w) * h * 3);
  std::vector<png_bytep> rows(h);
  for (int y = 0; y < h; ++y)
    rows[y] = rgb.data() + static_cast<size_t>(y) * w * 3;
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return from_rgb8(rgb, w, h);
}

uint32_t rd32(const uint8_t* p) {
  return p[0] | p[1] << 8 | p[2] << 16 | uint32_t(p[3]) << 24;
}
uint16_t rd16(const uint8_t* p) { return static_cast<uint16_t>(p[0] | p[1] << 8); }

PlanarImage read_bmp(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  std::vector<uint8_t> buf((std::istreambuf_iterator<char>(f)),
                           std::istreambuf_iterator<char>());
  if (buf.size() < 54 || buf[0] != 'B' || buf[1] != 'M')
    throw Error(ErrorCode::FormatError, "not a BMP: " + path.string());
  uint32_t data_off = rd32(&buf[10]);
  uint32_t hdr_size = rd32(&buf[14]);
  if (hdr_size < 40)
    throw Error(ErrorCode::FormatError, "unsupported BMP header");
  int32_t w = static_cast<int32_t>(rd32(&buf[18]));
  int32_t h_raw = static_cast<int32_t>(rd32(&buf[22]));
  bool top_down = h_raw < 0;
  int32_t h = top_down ? -h_raw : h_raw;
  uint16_t bpp = rd16(&buf[28]);
  uint32_t compression = rd32(&buf[30]);
  if (compression != 0 || (bpp != 24 && bpp != 8))
    throw Error(ErrorCode::FormatError, "unsupported BMP variant");
  if (w <= 0 || h <= 0)
    throw Error(ErrorCode::FormatError, "bad BMP dimensions");

  const uint8_t* palette = nullptr;
  if (bpp == 8) {
    uint32_t colors = rd32(&buf[46]);
    if (colors == 0) colors = 256;
    palette = &buf[14 + hdr_size];
    if (14 + hdr_size + colors * 4 > buf.size())
      throw Error(ErrorCode::FormatError, "truncated BMP palette");
  }
  size_t row_bytes = (static_cast<size_t>(w) * bpp / 8 + 3) & ~size_t{3};
  if (data_off + row_bytes * h > buf.size())
    throw Error(ErrorCode::FormatError, "truncated BMP pixel data");

  std::vector<uint8_t> rgb(static_cast<size_t>(w) * h * 3);
  for (int y = 0; y < h; ++y) {
    int src_y = top_down ? y : h - 1 - y;
    const uint8_t* row = &buf[data_off + row_bytes * src_y];
    for (int x = 0; x < w; ++x) {
      uint8_t r, g, b;
      if (bpp == 24) {
        b = row[3 * x];
        g = row[3 * x + 1];
        r = row[3 * x + 2];
      } else {
        const uint8_t* entry = palette + 4 * row[x];
        b = entry[0];
        g = entry[1];
        r = entry[2];
      }
      size_t i = (static_cast<size_t>(y) * w + x) * 3;
      rgb[i] = r;
      rgb[i + 1] = g;
      rgb[i + 2] = b;
    }
  }
  return from_rgb8(rgb, w, h);
}

std::vector<uint8_t> to_rgb8(const PlanarImage& img) {
  std::vector<uint8_t> rgb(static_cast<size_t>(img.width) * img.height * 3);
  const bool gray = img.colorspace == Colorspace::GRAY;
  if (!gray && img.colorspace != Colorspace::RGB)
    throw Error(ErrorCode::WrongColorspace,
                "image write requires RGB or GRAY");
  for (size_t i = 0; i < static_cast<size_t>(img.width) * img.height; ++i) {
    rgb[3 * i] = static_cast<uint8_t>(quantize8(img.planes[0].data[i]));
    rgb[3 * i + 1] = static_cast<uint8_t>(
        quantize8(img.planes[gray ? 0 : 1].data[i]));
    rgb[3 * i + 2] = static_cast<uint8_t>(
        quantize8(img.planes[gray ? 0 : 2].data[i]));
  }
  return rgb;
}

}  // namespace

PlanarImage read_image(const std::filesystem::path& path) {
  std::ifstream probe(path, std::ios::binary);
  if (!probe) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  uint8_t magic[8] = {};
  probe.read(reinterpret_cast<char*>(magic), 8);
  probe.close();
  static const uint8_t png_sig[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a,
                                     '\n'};
  if (std::memcmp(magic, png_sig, 8) == 0) return read_png(path);
  if (magic[0] == 'B' && magic[1] == 'M') return read_bmp(path);
  throw Error(ErrorCode::FormatError,
              "unrecognized image format: " + path.string());
}

void write_png(const PlanarImage& img, const std::filesystem::path& path) {
  std::vector<uint8_t> rgb = to_rgb8(img);
  FilePtr f(std::fopen(path.string().c_str(), "wb"));
  if (!f) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  png_structp png =
      png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_write_struct(&png, &info);
    throw Error(ErrorCode::IoError, "libpng init failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw Error(ErrorCode::IoError, "PNG write failed: " + path.string());
  }
  png_init_io(png, f.get());
  png_set_IHDR(png, info, img.width, img.height, 8, PNG_COLOR_TYPE_RGB,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (int y = 0; y < img.height; ++y)
    png_write_row(png, rgb.data() + static_cast<size_t>(y) * img.width * 3);
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

void write_bmp(const PlanarImage& img, const std::filesystem::path& path) {
  std::vector<uint8_t> rgb = to_rgb8(img);
  const int w = img.width, h = img.height;
  const size_t row_bytes = (static_cast<size_t>(w) * 3 + 3) & ~size_t{3};
  const uint32_t data_size = static_cast<uint32_t>(row_bytes * h);
  const uint32_t file_size = 54 + data_size;
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  auto w16 = [&](uint16_t v) { f.put(char(v)); f.put(char(v >> 8)); };
  auto w32 = [&](uint32_t v) {
    f.put(char(v));
    f.put(char(v >> 8));
    f.put(char(v >> 16));
    f.put(char(v >> 24));
  };
  f.put('B');
  f.put('M');
  w32(file_size);
  w32(0);
  w32(54);
  w32(40);
  w32(static_cast<uint32_t>(w));
  w32(static_cast<uint32_t>(h));
  w16(1);
  w16(24);
  w32(0);
  w32(data_size);
  w32(2835);
  w32(2835);
  w32(0);
  w32(0);
  std::vector<uint8_t> row(row_bytes, 0);
  for (int y = h - 1; y >= 0; --y) {
    for (int x = 0; x < w; ++x) {
      size_t i = (static_cast<size_t>(y) * w + x) * 3;
      row[3 * x] = rgb[i + 2];
      row[3 * x + 1] = rgb[i + 1];
      row[3 * x + 2] = rgb[i];
    }
    f.write(reinterpret_cast<const char*>(row.data()),
            static_cast<std::streamsize>(row_bytes));
  }
  if (!f) throw Error(ErrorCode::IoError, "BMP write failed: " + path.string());
}

void write_image(const PlanarImage& img, const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  for (char& c : ext) c = static_cast<char>(std::tolower(c));
  if (ext == ".png") return write_png(img, path);
  if (ext == ".bmp") return write_bmp(img, path);
  throw Error(ErrorCode::BadArgument,
              "unsupported output extension: " + path.string());
}

}  // namespace clbp
