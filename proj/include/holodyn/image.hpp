// 8-bit grayscale images: binary PGM always, PNG when built with libpng.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace holodyn {

struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;  // row-major, row 0 at the top
};

/// "P5\n<w> <h>\n255\n" followed by width*height bytes.
std::string encode_pgm(const GrayImage& img);
void write_pgm(const std::string& path, const GrayImage& img);

bool png_available();
/// Throws Error("Unsupported") when built without libpng.
void write_png(const std::string& path, const GrayImage& img);

/// Writes bytes to a file, throwing Error("IOError") on failure.
void write_file(const std::string& path, const std::string& bytes);

}  // namespace holodyn
