#include "holodyn/image.hpp"

#include <cstdio>
#include <fstream>

#include "holodyn/errors.hpp"

#ifdef HOLODYN_HAVE_PNG
#include <png.h>
#endif

namespace holodyn {

std::string encode_pgm(const GrayImage& img) {
  std::string out = "P5\n" + std::to_string(img.width) + " " + std::to_string(img.height) + "\n255\n";
  out.append(img.pixels.begin(), img.pixels.end());
  return out;
}

void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw Error("IOError", "cannot open '" + path + "' for writing");
  os.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!os) throw Error("IOError", "write to '" + path + "' failed");
}

void write_pgm(const std::string& path, const GrayImage& img) { write_file(path, encode_pgm(img)); }

bool png_available() {
#ifdef HOLODYN_HAVE_PNG
  return true;
#else
  return false;
#endif
}

void write_png(const std::string& path, const GrayImage& img) {
#ifdef HOLODYN_HAVE_PNG
  FILE* fp = std::fopen(path.c_str(), "wb");
  if (!fp) throw Error("IOError", "cannot open '" + path + "' for writing");
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info || setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    std::fclose(fp);
    throw Error("IOError", "PNG encoding failed for '" + path + "'");
  }
  png_init_io(png, fp);
  png_set_IHDR(png, info, static_cast<png_uint_32>(img.width), static_cast<png_uint_32>(img.height),
               8, PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (int r = 0; r < img.height; ++r) {
    auto* row = const_cast<png_bytep>(img.pixels.data() + static_cast<std::size_t>(r) * img.width);
    png_write_row(png, row);
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  std::fclose(fp);
#else
  (void)img;
  throw Error("Unsupported", "built without PNG support; cannot write '" + path + "'");
#endif
}

}  // namespace holodyn
