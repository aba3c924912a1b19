#pragma once

/**
 * @file csv.hpp
 * @brief Annotations / detections interchange CSV.
 *
 * Ground truth: `frame_id,x_min,y_min,x_max,y_max,class`
 * Detections:   `frame_id,x_min,y_min,x_max,y_max,score,class`
 *
 * UTF-8, LF line endings, shortest round-trip decimal formatting. Rows must
 * be grouped by frame (frame_id non-decreasing); writers sort accordingly,
 * so canonical files round-trip byte-identically.
 */

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "pollwir/boxes.hpp"
#include "pollwir/errors.hpp"
#include "pollwir/eval.hpp"

namespace pollwir::io {

/// Shortest decimal string that parses back to exactly the same double.
inline std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return {buf, res.ptr};
}

namespace detail {

inline double parse_double(const std::string& field, const std::string& path, long line,
                           const std::string& what) {
    double v = 0.0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    const auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc{} || res.ptr != last) {
        throw ParseError(path, line, "invalid " + what + " \"" + field + "\"");
    }
    return v;
}

inline std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    fields.push_back(cur);
    return fields;
}

inline std::vector<std::string> read_lines(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path, 0, "cannot open file");
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(line);
    }
    return lines;
}

}  // namespace detail

inline constexpr const char* kAnnotationsHeader = "frame_id,x_min,y_min,x_max,y_max,class";
inline constexpr const char* kDetectionsHeader = "frame_id,x_min,y_min,x_max,y_max,score,class";

inline void write_annotations(const std::string& path, std::vector<GroundTruth> gts) {
    std::stable_sort(gts.begin(), gts.end(), [](const GroundTruth& a, const GroundTruth& b) {
        return a.frame_id < b.frame_id;
    });
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    out << kAnnotationsHeader << "\n";
    for (const GroundTruth& g : gts) {
        out << g.frame_id << ',' << format_double(g.box.x_min) << ',' << format_double(g.box.y_min)
            << ',' << format_double(g.box.x_max) << ',' << format_double(g.box.y_max) << ','
            << g.class_label << "\n";
    }
}

inline std::vector<GroundTruth> read_annotations(const std::string& path) {
    const auto lines = detail::read_lines(path);
    if (lines.empty() || lines[0] != kAnnotationsHeader) {
        throw ParseError(path, 1, std::string("expected header \"") + kAnnotationsHeader + "\"");
    }
    std::vector<GroundTruth> gts;
    std::string prev_frame;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const long line_no = static_cast<long>(i + 1);
        if (lines[i].empty()) continue;
        const auto f = detail::split_fields(lines[i]);
        if (f.size() != 6) {
            throw ParseError(path, line_no,
                             "expected 6 fields, got " + std::to_string(f.size()));
        }
        GroundTruth g;
        g.frame_id = f[0];
        g.box.x_min = detail::parse_double(f[1], path, line_no, "x_min");
        g.box.y_min = detail::parse_double(f[2], path, line_no, "y_min");
        g.box.x_max = detail::parse_double(f[3], path, line_no, "x_max");
        g.box.y_max = detail::parse_double(f[4], path, line_no, "y_max");
        g.class_label = f[5];
        try {
            g.box.validate();
        } catch (const ValidationError& e) {
            throw ParseError(path, line_no, e.what());
        }
        if (!gts.empty() && g.frame_id < prev_frame) {
            throw ParseError(path, line_no,
                             "rows must be grouped by frame_id (\"" + g.frame_id +
                             "\" after \"" + prev_frame + "\")");
        }
        prev_frame = g.frame_id;
        gts.push_back(std::move(g));
    }
    return gts;
}

inline void write_detections(const std::string& path, std::vector<Detection> dets) {
    std::stable_sort(dets.begin(), dets.end(), [](const Detection& a, const Detection& b) {
        return a.frame_id < b.frame_id;
    });
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    out << kDetectionsHeader << "\n";
    for (const Detection& d : dets) {
        out << d.frame_id << ',' << format_double(d.box.x_min) << ',' << format_double(d.box.y_min)
            << ',' << format_double(d.box.x_max) << ',' << format_double(d.box.y_max) << ','
            << format_double(d.score) << ',' << d.class_label << "\n";
    }
}

inline std::vector<Detection> read_detections(const std::string& path) {
    const auto lines = detail::read_lines(path);
    if (lines.empty() || lines[0] != kDetectionsHeader) {
        throw ParseError(path, 1, std::string("expected header \"") + kDetectionsHeader + "\"");
    }
    std::vector<Detection> dets;
    std::string prev_frame;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const long line_no = static_cast<long>(i + 1);
        if (lines[i].empty()) continue;
        const auto f = detail::split_fields(lines[i]);
        if (f.size() != 7) {
            throw ParseError(path, line_no,
                             "expected 7 fields, got " + std::to_string(f.size()));
        }
        Detection d;
        d.frame_id = f[0];
        d.box.x_min = detail::parse_double(f[1], path, line_no, "x_min");
        d.box.y_min = detail::parse_double(f[2], path, line_no, "y_min");
        d.box.x_max = detail::parse_double(f[3], path, line_no, "x_max");
        d.box.y_max = detail::parse_double(f[4], path, line_no, "y_max");
        d.score = detail::parse_double(f[5], path, line_no, "score");
        d.class_label = f[6];
        try {
            d.box.validate();
        } catch (const ValidationError& e) {
            throw ParseError(path, line_no, e.what());
        }
        if (!(d.score >= 0.0) || !(d.score <= 1.0)) {
            throw ParseError(path, line_no, "score must lie in [0, 1]");
        }
        if (!dets.empty() && d.frame_id < prev_frame) {
            throw ParseError(path, line_no,
                             "rows must be grouped by frame_id (\"" + d.frame_id +
                             "\" after \"" + prev_frame + "\")");
        }
        prev_frame = d.frame_id;
        dets.push_back(std::move(d));
    }
    return dets;
}

inline void write_pr_csv(const std::string& path, const std::vector<PRPoint>& pr) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    out << "score_threshold,precision,recall\n";
    for (const PRPoint& p : pr) {
        out << format_double(p.score_threshold) << ',' << format_double(p.precision) << ','
            << format_double(p.recall) << "\n";
    }
}

}  // namespace pollwir::io
