#pragma once

/**
 * @file png.hpp
 * @brief Minimal PNG writer (8-bit grayscale / RGB, no interlace, filter 0,
 *        zlib deflate) plus a binary PPM "P6" fallback writer.
 */

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include <zlib.h>

#include "pollwir/errors.hpp"
#include "pollwir/plane.hpp"
#include "pollwir/polarimetry.hpp"

namespace pollwir::io {

namespace detail {

inline void put_be32(std::vector<unsigned char>& out, std::uint32_t v) {
    out.push_back(static_cast<unsigned char>(v >> 24));
    out.push_back(static_cast<unsigned char>(v >> 16));
    out.push_back(static_cast<unsigned char>(v >> 8));
    out.push_back(static_cast<unsigned char>(v));
}

inline void write_chunk(std::ofstream& out, const char type[4],
                        const std::vector<unsigned char>& data) {
    std::vector<unsigned char> buf;
    put_be32(buf, static_cast<std::uint32_t>(data.size()));
    buf.insert(buf.end(), type, type + 4);
    buf.insert(buf.end(), data.begin(), data.end());
    const auto crc = crc32(0, buf.data() + 4, static_cast<uInt>(buf.size() - 4));
    put_be32(buf, static_cast<std::uint32_t>(crc));
    out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
}

inline void write_png(const std::string& path, const unsigned char* pixels, int width,
                      int height, int channels) {
    // One filter byte (0 = none) per scanline, then raw samples.
    const std::size_t stride = static_cast<std::size_t>(width) * channels;
    std::vector<unsigned char> filtered((stride + 1) * height);
    for (int y = 0; y < height; ++y) {
        filtered[y * (stride + 1)] = 0;
        std::copy(pixels + y * stride, pixels + (y + 1) * stride,
                  filtered.begin() + y * (stride + 1) + 1);
    }
    uLongf comp_len = compressBound(static_cast<uLong>(filtered.size()));
    std::vector<unsigned char> compressed(comp_len);
    if (compress2(compressed.data(), &comp_len, filtered.data(),
                  static_cast<uLong>(filtered.size()), Z_BEST_SPEED) != Z_OK) {
        throw Error("zlib compression failed for " + path);
    }
    compressed.resize(comp_len);

    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    static const unsigned char sig[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1A, '\n'};
    out.write(reinterpret_cast<const char*>(sig), 8);

    std::vector<unsigned char> ihdr;
    put_be32(ihdr, static_cast<std::uint32_t>(width));
    put_be32(ihdr, static_cast<std::uint32_t>(height));
    ihdr.push_back(8);  // bit depth
    ihdr.push_back(channels == 1 ? 0 : 2);  // color type: gray or truecolor
    ihdr.push_back(0);  // compression
    ihdr.push_back(0);  // filter method
    ihdr.push_back(0);  // no interlace
    write_chunk(out, "IHDR", ihdr);
    write_chunk(out, "IDAT", compressed);
    write_chunk(out, "IEND", {});
    if (!out) throw Error("short write to " + path);
}

}  // namespace detail

inline void write_png_rgb(const std::string& path, const Rgb8Image& img) {
    detail::write_png(path, img.rgb.data(), img.width, img.height, 3);
}

inline void write_png_gray(const std::string& path, const PlaneU8& plane) {
    detail::write_png(path, plane.data(), plane.width(), plane.height(), 1);
}

/// ChannelStack export: planes interleaved as R,G,B.
inline Rgb8Image stack_to_rgb(const ChannelStack& stack) {
    Rgb8Image img;
    img.width = stack.width();
    img.height = stack.height();
    img.rgb.resize(static_cast<std::size_t>(img.width) * img.height * 3);
    for (std::size_t i = 0; i < stack.planes[0].size(); ++i) {
        img.rgb[3 * i] = stack.planes[0][i];
        img.rgb[3 * i + 1] = stack.planes[1][i];
        img.rgb[3 * i + 2] = stack.planes[2][i];
    }
    return img;
}

inline void write_ppm_rgb(const std::string& path, const Rgb8Image& img) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    out << "P6\n" << img.width << " " << img.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(img.rgb.data()),
              static_cast<std::streamsize>(img.rgb.size()));
    if (!out) throw Error("short write to " + path);
}

}  // namespace pollwir::io
