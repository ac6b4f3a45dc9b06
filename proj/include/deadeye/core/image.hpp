#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace deadeye {

struct Rgb8 {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;
  bool operator==(const Rgb8&) const = default;
};

/// 8-bit sRGB raster, origin top-left, row-major, 3 bytes per pixel.
struct RgbImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;

  RgbImage() = default;
  RgbImage(int w, int h, Rgb8 fill = {});

  Rgb8 at(int x, int y) const {
    const auto* p = &pixels[(static_cast<std::size_t>(y) * width + x) * 3];
    return {p[0], p[1], p[2]};
  }
  void set(int x, int y, Rgb8 c) {
    auto* p = &pixels[(static_cast<std::size_t>(y) * width + x) * 3];
    p[0] = c.r;
    p[1] = c.g;
    p[2] = c.b;
  }
  bool operator==(const RgbImage&) const = default;
};

std::string encode_ppm(const RgbImage& image);
RgbImage decode_ppm(const std::string& bytes);
void write_ppm(const std::filesystem::path& path, const RgbImage& image);

/// 8-bit RGB PNG via libpng. Decoding converts any PNG to RGB.
std::string encode_png(const RgbImage& image);
void write_png(const std::filesystem::path& path, const RgbImage& image);
RgbImage decode_png(const std::string& bytes);

/// Chooses PNG or PPM from the file extension (.png, anything else is P6).
void write_image(const std::filesystem::path& path, const RgbImage& image);

std::string base64_encode(const std::string& bytes);
std::string base64_decode(const std::string& text);

/// CRC-32 (zlib polynomial) of a byte string.
std::uint32_t crc32_of(const std::string& bytes);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& bytes);

}  // namespace deadeye
