#pragma once

/**
 * @file json_formats.hpp
 * @brief JSON document formats: scene specs, evaluation reports, sequence
 *        manifests, timing reports and pipeline configs. Writers emit a
 *        fixed key order with two-space indentation and a trailing newline
 *        so canonical documents round-trip byte-identically.
 */

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "pollwir/bench.hpp"
#include "pollwir/errors.hpp"
#include "pollwir/eval.hpp"
#include "pollwir/polarimetry.hpp"
#include "pollwir/synth.hpp"

namespace pollwir::io {

namespace detail {

inline nlohmann::json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path, 0, "cannot open file");
    try {
        nlohmann::json j;
        in >> j;
        return j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path, 1, std::string("invalid JSON: ") + e.what());
    }
}

inline void dump_json(const std::string& path, const nlohmann::ordered_json& j) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    out << j.dump(2) << "\n";
}

template <typename T>
T field(const nlohmann::json& j, const std::string& key, const std::string& path) {
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path, 1, "field \"" + key + "\": " + e.what());
    }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// SceneSpec
// ---------------------------------------------------------------------------

inline SceneSpec read_scene_spec(const std::string& path) {
    const nlohmann::json j = detail::load_json(path);
    SceneSpec spec;
    spec.width = detail::field<int>(j, "width", path);
    spec.height = detail::field<int>(j, "height", path);
    const auto& bg = j.contains("background") ? j["background"] : nlohmann::json::object();
    spec.background.i_mean = bg.value("i_mean", 1.0);
    spec.background.i_std = bg.value("i_std", 0.0);
    spec.background.p_max = bg.value("p_max", 0.1);
    if (j.contains("targets")) {
        for (const auto& t : j["targets"]) {
            TargetSpec tg;
            const auto& r = t.at("rect");
            tg.rect = {detail::field<double>(r, "x_min", path),
                       detail::field<double>(r, "y_min", path),
                       detail::field<double>(r, "x_max", path),
                       detail::field<double>(r, "y_max", path)};
            tg.intensity = detail::field<double>(t, "i", path);
            tg.dolp = detail::field<double>(t, "p", path);
            tg.aop = detail::field<double>(t, "phi", path);
            tg.class_label = t.value("class", std::string("vehicle"));
            spec.targets.push_back(std::move(tg));
        }
    }
    spec.noise_std = j.value("noise_std", 0.0);
    spec.seed = j.value("seed", std::uint64_t{0});
    spec.validate();
    return spec;
}

inline void write_scene_spec(const std::string& path, const SceneSpec& spec) {
    nlohmann::ordered_json j;
    j["width"] = spec.width;
    j["height"] = spec.height;
    j["background"] = {{"i_mean", spec.background.i_mean},
                       {"i_std", spec.background.i_std},
                       {"p_max", spec.background.p_max}};
    j["targets"] = nlohmann::ordered_json::array();
    for (const TargetSpec& tg : spec.targets) {
        nlohmann::ordered_json t;
        t["rect"] = {{"x_min", tg.rect.x_min},
                     {"y_min", tg.rect.y_min},
                     {"x_max", tg.rect.x_max},
                     {"y_max", tg.rect.y_max}};
        t["i"] = tg.intensity;
        t["p"] = tg.dolp;
        t["phi"] = tg.aop;
        t["class"] = tg.class_label;
        j["targets"].push_back(std::move(t));
    }
    j["noise_std"] = spec.noise_std;
    j["seed"] = spec.seed;
    detail::dump_json(path, j);
}

// ---------------------------------------------------------------------------
// EvalReport
// ---------------------------------------------------------------------------

inline void write_eval_report(const std::string& path, const EvalReport& report) {
    nlohmann::ordered_json j;
    j["iou_threshold"] = report.iou_threshold;
    j["ap_method"] = to_string(report.ap_method);
    j["map"] = report.map;
    nlohmann::ordered_json per_class = nlohmann::ordered_json::object();
    for (const auto& [cls, ce] : report.per_class) {
        nlohmann::ordered_json c;
        c["ap"] = ce.ap;
        c["n_gt"] = ce.n_gt;
        c["n_det"] = ce.n_det;
        if (ce.recall_undefined) c["recall_undefined"] = true;
        c["pr"] = nlohmann::ordered_json::array();
        for (const PRPoint& p : ce.pr) {
            nlohmann::ordered_json pt;
            pt["score_threshold"] = p.score_threshold;
            pt["precision"] = p.precision;
            if (std::isnan(p.recall)) {
                pt["recall"] = nullptr;  // undefined (n_gt = 0)
            } else {
                pt["recall"] = p.recall;
            }
            pt["tp"] = p.tp;
            pt["fp"] = p.fp;
            pt["fn"] = p.fn;
            c["pr"].push_back(std::move(pt));
        }
        per_class[cls] = std::move(c);
    }
    j["per_class"] = std::move(per_class);
    detail::dump_json(path, j);
}

inline EvalReport read_eval_report(const std::string& path) {
    const nlohmann::json j = detail::load_json(path);
    EvalReport report;
    report.iou_threshold = detail::field<double>(j, "iou_threshold", path);
    const std::string method = detail::field<std::string>(j, "ap_method", path);
    if (method == "ALL_POINT") {
        report.ap_method = ApMethod::ALL_POINT;
    } else if (method == "ELEVEN_POINT") {
        report.ap_method = ApMethod::ELEVEN_POINT;
    } else {
        throw ParseError(path, 1, "unknown ap_method \"" + method + "\"");
    }
    report.map = detail::field<double>(j, "map", path);
    for (const auto& [cls, c] : j.at("per_class").items()) {
        ClassEval ce;
        ce.ap = detail::field<double>(c, "ap", path);
        ce.n_gt = detail::field<long>(c, "n_gt", path);
        ce.n_det = detail::field<long>(c, "n_det", path);
        ce.recall_undefined = c.value("recall_undefined", false);
        for (const auto& p : c.at("pr")) {
            PRPoint pt;
            pt.score_threshold = detail::field<double>(p, "score_threshold", path);
            pt.precision = detail::field<double>(p, "precision", path);
            pt.recall = p.at("recall").is_null()
                            ? std::numeric_limits<double>::quiet_NaN()
                            : detail::field<double>(p, "recall", path);
            pt.tp = detail::field<long>(p, "tp", path);
            pt.fp = detail::field<long>(p, "fp", path);
            pt.fn = detail::field<long>(p, "fn", path);
            ce.pr.push_back(pt);
        }
        report.per_class.emplace(cls, std::move(ce));
    }
    return report;
}

// ---------------------------------------------------------------------------
// SequenceManifest
// ---------------------------------------------------------------------------

enum class Split { TRAIN, TEST };

struct ManifestFrame {
    std::string frame_id;
    std::string mosaic_path;  // exactly one of mosaic_path / quad_prefix set
    std::string quad_prefix;
};

struct SequenceManifest {
    std::string name;
    Split split = Split::TEST;
    std::string annotations_path;  // empty when absent
    std::vector<ManifestFrame> frames;
};

/// Loads a manifest, resolving relative paths against the manifest's
/// directory and checking that every referenced file exists. Frame order is
/// file order.
inline SequenceManifest load_manifest(const std::string& path) {
    const nlohmann::json j = detail::load_json(path);
    const std::filesystem::path base = std::filesystem::path(path).parent_path();
    auto resolve = [&](const std::string& rel) { return (base / rel).string(); };

    SequenceManifest m;
    m.name = detail::field<std::string>(j, "name", path);
    const std::string split = j.value("split", std::string("TEST"));
    if (split == "TRAIN") {
        m.split = Split::TRAIN;
    } else if (split == "TEST") {
        m.split = Split::TEST;
    } else {
        throw ParseError(path, 1, "split must be TRAIN or TEST, got \"" + split + "\"");
    }
    if (j.contains("annotations")) {
        m.annotations_path = resolve(j["annotations"].get<std::string>());
        if (!std::filesystem::exists(m.annotations_path)) {
            throw ValidationError("manifest references missing annotations file " +
                                  m.annotations_path);
        }
    }
    std::map<std::string, bool> seen;
    for (const auto& f : j.at("frames")) {
        ManifestFrame mf;
        mf.frame_id = detail::field<std::string>(f, "id", path);
        if (seen.count(mf.frame_id)) {
            throw ValidationError("duplicate frame_id \"" + mf.frame_id + "\" in manifest");
        }
        seen[mf.frame_id] = true;
        if (f.contains("mosaic")) {
            mf.mosaic_path = resolve(f["mosaic"].get<std::string>());
            if (!std::filesystem::exists(mf.mosaic_path)) {
                throw ValidationError("manifest references missing mosaic " + mf.mosaic_path);
            }
        } else if (f.contains("quad")) {
            mf.quad_prefix = resolve(f["quad"].get<std::string>());
            for (const char* suffix : {"_i000.pgm", "_i045.pgm", "_i090.pgm", "_i135.pgm"}) {
                if (!std::filesystem::exists(mf.quad_prefix + suffix)) {
                    throw ValidationError("manifest references missing quad plane " +
                                          mf.quad_prefix + suffix);
                }
            }
        } else {
            throw ParseError(path, 1,
                             "frame \"" + mf.frame_id + "\" needs a \"mosaic\" or \"quad\" entry");
        }
        m.frames.push_back(std::move(mf));
    }
    return m;
}

inline void write_manifest(const std::string& path, const SequenceManifest& m) {
    nlohmann::ordered_json j;
    j["name"] = m.name;
    j["split"] = m.split == Split::TRAIN ? "TRAIN" : "TEST";
    if (!m.annotations_path.empty()) {
        j["annotations"] = std::filesystem::path(m.annotations_path).filename().string();
    }
    j["frames"] = nlohmann::ordered_json::array();
    for (const ManifestFrame& f : m.frames) {
        nlohmann::ordered_json e;
        e["id"] = f.frame_id;
        if (!f.mosaic_path.empty()) {
            e["mosaic"] = std::filesystem::path(f.mosaic_path).filename().string();
        } else {
            e["quad"] = std::filesystem::path(f.quad_prefix).filename().string();
        }
        j["frames"].push_back(std::move(e));
    }
    detail::dump_json(path, j);
}

// ---------------------------------------------------------------------------
// TimingReport / pipeline config / normalization record
// ---------------------------------------------------------------------------

inline void write_timing_report(const std::string& path, const TimingReport& r) {
    nlohmann::ordered_json j;
    j["stage_name"] = r.stage_name;
    j["n_frames"] = r.n_frames;
    j["total_seconds"] = r.total_seconds;
    j["mean_ms_per_frame"] = r.mean_ms_per_frame;
    j["fps"] = r.fps;
    j["warmup_frames"] = r.warmup_frames;
    j["frames_cycled"] = r.frames_cycled;
    detail::dump_json(path, j);
}

struct StageSpec {
    std::string op;
    nlohmann::json params;  // op-specific, may be empty
};

struct PipelineConfig {
    std::vector<StageSpec> stages;
};

inline PipelineConfig read_pipeline_config(const std::string& path) {
    const nlohmann::json j = detail::load_json(path);
    PipelineConfig cfg;
    for (const auto& s : j.at("stages")) {
        StageSpec spec;
        spec.op = detail::field<std::string>(s, "op", path);
        spec.params = s.contains("params") ? s["params"] : nlohmann::json::object();
        cfg.stages.push_back(std::move(spec));
    }
    if (cfg.stages.empty()) throw ParseError(path, 1, "pipeline has no stages");
    return cfg;
}

inline void write_normalization_record(const std::string& path, const ChannelStack& stack) {
    nlohmann::ordered_json j;
    j["config"] = to_string(stack.config);
    j["planes"] = nlohmann::ordered_json::array();
    for (const PlaneNormalization& n : stack.normalization) {
        j["planes"].push_back({{"name", n.plane}, {"lo", n.lo}, {"hi", n.hi}});
    }
    detail::dump_json(path, j);
}

}  // namespace pollwir::io
