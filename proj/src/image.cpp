#include "fidget/image.hpp"

#include <cstdio>
#include <memory>

#include <png.h>

#include "fidget/error.hpp"

namespace fidget {

Image Image::filled(int width, int height, int channels, std::uint8_t value) {
  Image img;
  img.width = width;
  img.height = height;
  img.channels = channels;
  img.pixels.assign(
      static_cast<std::size_t>(width) * height * channels, value);
  return img;
}

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

}  // namespace

Image read_png(const std::string& path, int desired_channels) {
  if (desired_channels != 1 && desired_channels != 3) {
    fail(ErrorCode::InvalidArgument, "desired_channels must be 1 or 3");
  }
  FilePtr fp(std::fopen(path.c_str(), "rb"));
  if (!fp) fail(ErrorCode::Io, "cannot open " + path);

  png_structp png =
      png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_read_struct(&png, &info, nullptr);
    fail(ErrorCode::Internal, "libpng allocation failed");
  }

  Image img;
  std::vector<png_bytep> rowptrs;
  bool failed = false;
  // libpng reports errors by longjmp back to this point.
  if (setjmp(png_jmpbuf(png))) {
    failed = true;
  } else {
    png_init_io(png, fp.get());
    png_read_info(png, info);

    png_set_strip_16(png);
    png_set_packing(png);
    const int color_type = png_get_color_type(png, info);
    if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (color_type == PNG_COLOR_TYPE_GRAY &&
        png_get_bit_depth(png, info) < 8) {
      png_set_expand_gray_1_2_4_to_8(png);
    }
    if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
    png_set_strip_alpha(png);
    if (desired_channels == 3) {
      png_set_gray_to_rgb(png);
    } else {
      png_set_rgb_to_gray_fixed(png, 1, -1, -1);
    }
    png_read_update_info(png, info);

    img.width = static_cast<int>(png_get_image_width(png, info));
    img.height = static_cast<int>(png_get_image_height(png, info));
    img.channels = desired_channels;
    const std::size_t rowbytes = png_get_rowbytes(png, info);
    if (rowbytes != static_cast<std::size_t>(img.width) * desired_channels) {
      png_error(png, "unexpected row size after transforms");
    }
    img.pixels.resize(rowbytes * img.height);
    rowptrs.resize(img.height);
    for (int y = 0; y < img.height; ++y) {
      rowptrs[y] = img.pixels.data() + rowbytes * y;
    }
    png_read_image(png, rowptrs.data());
    png_read_end(png, nullptr);
  }
  png_destroy_read_struct(&png, &info, nullptr);
  if (failed) fail(ErrorCode::Parse, "invalid PNG file " + path);
  return img;
}

void write_png(const Image& image, const std::string& path) {
  if (image.channels != 1 && image.channels != 3) {
    fail(ErrorCode::InvalidArgument, "write_png supports 1 or 3 channels");
  }
  if (image.width <= 0 || image.height <= 0 ||
      image.pixels.size() != static_cast<std::size_t>(image.width) *
                                 image.height * image.channels) {
    fail(ErrorCode::InvalidArgument, "image buffer does not match its shape");
  }
  FilePtr fp(std::fopen(path.c_str(), "wb"));
  if (!fp) fail(ErrorCode::Io, "cannot write " + path);

  png_structp png =
      png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_write_struct(&png, &info);
    fail(ErrorCode::Internal, "libpng allocation failed");
  }

  std::vector<png_const_bytep> rowptrs(image.height);
  const std::size_t rowbytes =
      static_cast<std::size_t>(image.width) * image.channels;
  for (int y = 0; y < image.height; ++y) {
    rowptrs[y] = image.pixels.data() + rowbytes * y;
  }

  bool failed = false;
  if (setjmp(png_jmpbuf(png))) {
    failed = true;
  } else {
    png_init_io(png, fp.get());
    png_set_compression_level(png, 6);
    png_set_IHDR(png, info, static_cast<png_uint_32>(image.width),
                 static_cast<png_uint_32>(image.height), 8,
                 image.channels == 1 ? PNG_COLOR_TYPE_GRAY
                                     : PNG_COLOR_TYPE_RGB,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
                 PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    for (int y = 0; y < image.height; ++y) {
      png_write_row(png, rowptrs[y]);
    }
    png_write_end(png, nullptr);
  }
  png_destroy_write_struct(&png, &info);
  if (failed) fail(ErrorCode::Io, "PNG write failed for " + path);
}

}  // namespace fidget
