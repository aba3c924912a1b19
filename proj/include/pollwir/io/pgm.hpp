#pragma once

/**
 * @file pgm.hpp
 * @brief 16-bit binary PGM ("P5", maxval 65535, big-endian samples) reader
 *        and writer, plus the mosaic/quad on-disk conventions built on it.
 *
 * The canonical header written here is exactly
 *   P5\n<width> <height>\n65535\n
 * followed by width*height big-endian uint16 samples, so write(read(f)) is
 * byte-identical for canonical files. The reader tolerates standard PGM
 * comments and whitespace but insists on the 16-bit maxval.
 */

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "pollwir/errors.hpp"
#include "pollwir/plane.hpp"
#include "pollwir/polarimetry.hpp"

namespace pollwir::io {

struct Pgm16 {
    int width = 0;
    int height = 0;
    std::vector<std::uint16_t> samples;  // row-major
};

namespace detail {

// Reads one PGM header token, skipping whitespace and '#' comments.
inline std::string next_token(std::istream& in, const std::string& path) {
    int c = in.get();
    while (c != EOF) {
        if (c == '#') {
            while (c != EOF && c != '\n') c = in.get();
        } else if (std::isspace(c)) {
            c = in.get();
        } else {
            break;
        }
    }
    if (c == EOF) throw ParseError(path, 1, "truncated PGM header");
    std::string tok;
    while (c != EOF && !std::isspace(c)) {
        tok.push_back(static_cast<char>(c));
        c = in.get();
    }
    return tok;
}

inline int parse_dim(const std::string& tok, const std::string& field, const std::string& path) {
    try {
        std::size_t pos = 0;
        const int v = std::stoi(tok, &pos);
        if (pos != tok.size() || v <= 0) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        throw ParseError(path, 1, "invalid PGM " + field + " \"" + tok + "\"");
    }
}

}  // namespace detail

inline Pgm16 read_pgm16(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(path, 0, "cannot open file");
    const std::string magic = detail::next_token(in, path);
    if (magic != "P5") {
        throw ParseError(path, 1, "bad magic \"" + magic + "\", expected \"P5\"");
    }
    Pgm16 pgm;
    pgm.width = detail::parse_dim(detail::next_token(in, path), "width", path);
    pgm.height = detail::parse_dim(detail::next_token(in, path), "height", path);
    const std::string maxval = detail::next_token(in, path);
    if (maxval != "65535") {
        throw ParseError(path, 1, "maxval is " + maxval + ", this toolkit requires 65535");
    }
    // The single whitespace byte after maxval was consumed by next_token.
    const std::size_t n = static_cast<std::size_t>(pgm.width) * pgm.height;
    std::vector<unsigned char> raw(n * 2);
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (static_cast<std::size_t>(in.gcount()) != raw.size()) {
        throw ParseError(path, 2, "truncated PGM pixel data");
    }
    pgm.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        pgm.samples[i] = static_cast<std::uint16_t>((raw[2 * i] << 8) | raw[2 * i + 1]);
    }
    return pgm;
}

inline void write_pgm16(const std::string& path, const Pgm16& pgm) {
    if (pgm.samples.size() != static_cast<std::size_t>(pgm.width) * pgm.height) {
        throw DimensionError("PGM sample count does not match dimensions");
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    out << "P5\n" << pgm.width << " " << pgm.height << "\n65535\n";
    std::vector<unsigned char> raw(pgm.samples.size() * 2);
    for (std::size_t i = 0; i < pgm.samples.size(); ++i) {
        raw[2 * i] = static_cast<unsigned char>(pgm.samples[i] >> 8);
        raw[2 * i + 1] = static_cast<unsigned char>(pgm.samples[i] & 0xFF);
    }
    out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (!out) throw Error("short write to " + path);
}

inline PlaneF to_plane(const Pgm16& pgm) {
    std::vector<double> data(pgm.samples.begin(), pgm.samples.end());
    return {pgm.width, pgm.height, std::move(data)};
}

/// Quantises a double plane to 16-bit counts (round half up). Values must
/// already lie within [0, 65535].
inline Pgm16 to_pgm16(const PlaneF& plane) {
    Pgm16 pgm;
    pgm.width = plane.width();
    pgm.height = plane.height();
    pgm.samples.resize(plane.size());
    for (std::size_t i = 0; i < plane.size(); ++i) {
        const double v = std::floor(plane[i] + 0.5);
        if (!(v >= 0.0) || v > 65535.0) {
            throw ValidationError("plane value " + std::to_string(plane[i]) +
                                  " out of uint16 range for PGM export");
        }
        pgm.samples[i] = static_cast<std::uint16_t>(v);
    }
    return pgm;
}

// ---------------------------------------------------------------------------
// Mosaic + quad conventions
// ---------------------------------------------------------------------------

/// Sidecar path for a mosaic PGM: same stem, ".json" extension.
inline std::string sidecar_path(const std::string& pgm_path) {
    return std::filesystem::path(pgm_path).replace_extension(".json").string();
}

inline MosaicLayout read_layout_sidecar(const std::string& json_path) {
    std::ifstream in(json_path);
    if (!in) throw ParseError(json_path, 0, "cannot open sidecar");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(json_path, 1, std::string("invalid sidecar JSON: ") + e.what());
    }
    if (!j.contains("layout")) throw ParseError(json_path, 1, "sidecar missing \"layout\"");
    const auto& l = j["layout"];
    MosaicLayout layout;
    try {
        layout.tl = l.at("tl").get<int>();
        layout.tr = l.at("tr").get<int>();
        layout.bl = l.at("bl").get<int>();
        layout.br = l.at("br").get<int>();
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(json_path, 1, std::string("invalid layout: ") + e.what());
    }
    layout.validate();
    return layout;
}

inline void write_layout_sidecar(const std::string& json_path, const MosaicLayout& layout) {
    nlohmann::ordered_json j;
    j["layout"] = {{"tl", layout.tl}, {"tr", layout.tr}, {"bl", layout.bl}, {"br", layout.br}};
    std::ofstream out(json_path);
    if (!out) throw Error("cannot write " + json_path);
    out << j.dump(2) << "\n";
}

/// Reads a mosaic PGM, applying the layout from "<stem>.json" when present.
inline RawMosaicFrame read_mosaic(const std::string& pgm_path) {
    PlaneF plane = to_plane(read_pgm16(pgm_path));
    MosaicLayout layout = MosaicLayout::standard();
    const std::string sidecar = sidecar_path(pgm_path);
    if (std::filesystem::exists(sidecar)) layout = read_layout_sidecar(sidecar);
    return {std::move(plane), layout};
}

inline void write_mosaic(const std::string& pgm_path, const RawMosaicFrame& frame) {
    write_pgm16(pgm_path, to_pgm16(frame.plane));
    write_layout_sidecar(sidecar_path(pgm_path), frame.layout);
}

inline constexpr const char* kQuadSuffixes[4] = {"_i000.pgm", "_i045.pgm", "_i090.pgm",
                                                 "_i135.pgm"};

inline QuadFrame read_quad(const std::string& prefix) {
    PlaneF planes[4] = {
        to_plane(read_pgm16(prefix + kQuadSuffixes[0])),
        to_plane(read_pgm16(prefix + kQuadSuffixes[1])),
        to_plane(read_pgm16(prefix + kQuadSuffixes[2])),
        to_plane(read_pgm16(prefix + kQuadSuffixes[3])),
    };
    return {std::move(planes[0]), std::move(planes[1]), std::move(planes[2]),
            std::move(planes[3])};
}

inline void write_quad(const std::string& prefix, const QuadFrame& quad) {
    write_pgm16(prefix + kQuadSuffixes[0], to_pgm16(quad.i0));
    write_pgm16(prefix + kQuadSuffixes[1], to_pgm16(quad.i45));
    write_pgm16(prefix + kQuadSuffixes[2], to_pgm16(quad.i90));
    write_pgm16(prefix + kQuadSuffixes[3], to_pgm16(quad.i135));
}

}  // namespace pollwir::io
