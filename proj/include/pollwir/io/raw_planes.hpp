#pragma once

/**
 * @file raw_planes.hpp
 * @brief Stokes/polar frames on disk: a JSON descriptor
 *        {width, height, planes:[names], dtype:"f64le"} next to a ".raw"
 *        file of the named planes concatenated as 64-bit little-endian
 *        doubles. Descriptor at <stem>.json, data at <stem>.raw.
 */

#include <bit>
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

struct PlaneSet {
    int width = 0;
    int height = 0;
    std::vector<std::string> plane_names;
    std::vector<PlaneF> planes;
};

namespace detail {

inline std::string raw_path_for(const std::string& json_path) {
    return std::filesystem::path(json_path).replace_extension(".raw").string();
}

static_assert(std::endian::native == std::endian::little,
              "f64le serialization below assumes a little-endian host");

}  // namespace detail

inline void write_plane_set(const std::string& json_path, const PlaneSet& set) {
    nlohmann::ordered_json j;
    j["width"] = set.width;
    j["height"] = set.height;
    j["planes"] = set.plane_names;
    j["dtype"] = "f64le";
    std::ofstream jout(json_path);
    if (!jout) throw Error("cannot write " + json_path);
    jout << j.dump(2) << "\n";

    const std::string raw_path = detail::raw_path_for(json_path);
    std::ofstream rout(raw_path, std::ios::binary);
    if (!rout) throw Error("cannot write " + raw_path);
    for (const PlaneF& p : set.planes) {
        rout.write(reinterpret_cast<const char*>(p.data()),
                   static_cast<std::streamsize>(p.size() * sizeof(double)));
    }
    if (!rout) throw Error("short write to " + raw_path);
}

inline PlaneSet read_plane_set(const std::string& json_path) {
    std::ifstream jin(json_path);
    if (!jin) throw ParseError(json_path, 0, "cannot open descriptor");
    nlohmann::json j;
    try {
        jin >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(json_path, 1, std::string("invalid descriptor JSON: ") + e.what());
    }
    PlaneSet set;
    try {
        set.width = j.at("width").get<int>();
        set.height = j.at("height").get<int>();
        set.plane_names = j.at("planes").get<std::vector<std::string>>();
        if (j.at("dtype").get<std::string>() != "f64le") {
            throw ParseError(json_path, 1, "dtype must be \"f64le\"");
        }
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(json_path, 1, std::string("descriptor field error: ") + e.what());
    }
    if (set.width <= 0 || set.height <= 0 || set.plane_names.empty()) {
        throw ParseError(json_path, 1, "descriptor dimensions/planes invalid");
    }

    const std::string raw_path = detail::raw_path_for(json_path);
    std::ifstream rin(raw_path, std::ios::binary);
    if (!rin) throw ParseError(raw_path, 0, "cannot open raw data");
    const std::size_t plane_px = static_cast<std::size_t>(set.width) * set.height;
    const std::size_t expected = plane_px * set.plane_names.size() * sizeof(double);
    rin.seekg(0, std::ios::end);
    const auto actual = static_cast<std::size_t>(rin.tellg());
    if (actual != expected) {
        throw DimensionError(raw_path + ": raw size " + std::to_string(actual) +
                             " does not match descriptor (" + std::to_string(expected) + ")");
    }
    rin.seekg(0);
    for (std::size_t p = 0; p < set.plane_names.size(); ++p) {
        std::vector<double> data(plane_px);
        rin.read(reinterpret_cast<char*>(data.data()),
                 static_cast<std::streamsize>(plane_px * sizeof(double)));
        if (static_cast<std::size_t>(rin.gcount()) != plane_px * sizeof(double)) {
            throw ParseError(raw_path, 0, "truncated raw data");
        }
        set.planes.emplace_back(set.width, set.height, std::move(data));
    }
    return set;
}

// ---------------------------------------------------------------------------

inline void write_stokes(const std::string& json_path, const StokesFrame& s) {
    PlaneSet set{s.width(), s.height(), {"I", "Q", "U"}, {s.I, s.Q, s.U}};
    write_plane_set(json_path, set);
}

inline StokesFrame read_stokes(const std::string& json_path) {
    PlaneSet set = read_plane_set(json_path);
    if (set.plane_names != std::vector<std::string>{"I", "Q", "U"}) {
        throw ParseError(json_path, 1, "expected planes [\"I\",\"Q\",\"U\"]");
    }
    return {std::move(set.planes[0]), std::move(set.planes[1]), std::move(set.planes[2])};
}

/// The valid mask is stored as a 0.0/1.0 plane; p_overflow_count is derived
/// metadata and not serialized.
inline void write_polar(const std::string& json_path, const PolarFrame& p) {
    PlaneF valid(p.width(), p.height());
    for (std::size_t i = 0; i < valid.size(); ++i) valid[i] = p.valid[i] ? 1.0 : 0.0;
    PlaneSet set{p.width(), p.height(), {"P", "phi", "valid"}, {p.P, p.phi, valid}};
    write_plane_set(json_path, set);
}

inline PolarFrame read_polar(const std::string& json_path) {
    PlaneSet set = read_plane_set(json_path);
    if (set.plane_names != std::vector<std::string>{"P", "phi", "valid"}) {
        throw ParseError(json_path, 1, "expected planes [\"P\",\"phi\",\"valid\"]");
    }
    Plane<std::uint8_t> valid(set.width, set.height);
    for (std::size_t i = 0; i < valid.size(); ++i) valid[i] = set.planes[2][i] != 0.0 ? 1 : 0;
    return {std::move(set.planes[0]), std::move(set.planes[1]), std::move(valid)};
}

}  // namespace pollwir::io
