#pragma once

/**
 * @file pipeline.hpp
 * @brief Stage-chain execution over per-frame state. A FrameState starts
 *        from a mosaic or quad and each stage fills in the next
 *        representation; the same machinery backs the `pipeline` CLI
 *        subcommand and named stage chains in the bench harness.
 */

#include <cctype>
#include <optional>
#include <string>
#include <vector>

#include "pollwir/detector.hpp"
#include "pollwir/errors.hpp"
#include "pollwir/io/json_formats.hpp"
#include "pollwir/polarimetry.hpp"

namespace pollwir {

struct FrameState {
    std::string frame_id;
    std::optional<RawMosaicFrame> mosaic;
    std::optional<QuadFrame> quad;
    std::optional<StokesFrame> stokes;
    std::optional<PolarFrame> polar;
    std::optional<ChannelStack> stack;
    std::optional<Rgb8Image> render;
    std::vector<Detection> detections;
};

namespace pipeline {

inline BlobParams blob_params_from(const nlohmann::json& params) {
    BlobParams bp;
    bp.p_threshold = params.value("p_threshold", bp.p_threshold);
    bp.min_area = params.value("min_area", bp.min_area);
    bp.connectivity = params.value("connectivity", bp.connectivity);
    bp.nms_iou = params.value("nms_iou", bp.nms_iou);
    bp.validate();
    return bp;
}

inline ChannelConfig channel_config_from(const std::string& name) {
    if (name == "intensity" || name == "INTENSITY") return ChannelConfig::INTENSITY;
    if (name == "iqu" || name == "IQU") return ChannelConfig::IQU;
    if (name == "ipphi" || name == "IPPHI") return ChannelConfig::IPPHI;
    throw ArgumentError("unknown channel configuration \"" + name + "\"");
}

/// Applies one stage in place. Throws ArgumentError when the stage's input
/// representation has not been produced yet.
inline void apply_stage(FrameState& state, const io::StageSpec& stage) {
    auto need = [&](bool ok, const char* what) {
        if (!ok) {
            throw ArgumentError("stage \"" + stage.op + "\" requires " + what +
                                " (frame " + state.frame_id + ")");
        }
    };
    if (stage.op == "demosaic") {
        need(state.mosaic.has_value(), "a mosaic frame");
        const std::string strat = stage.params.value("strategy", std::string("superpixel"));
        DemosaicStrategy s = DemosaicStrategy::SUPERPIXEL_BIN;
        if (strat == "nearest") s = DemosaicStrategy::NEAREST;
        else if (strat != "superpixel") throw ArgumentError("unknown demosaic strategy " + strat);
        state.quad = demosaic(*state.mosaic, s);
    } else if (stage.op == "stokes") {
        if (!state.quad && state.mosaic) state.quad = demosaic(*state.mosaic);
        need(state.quad.has_value(), "a quad frame");
        state.stokes = compute_stokes(*state.quad);
    } else if (stage.op == "polar") {
        need(state.stokes.has_value(), "a stokes frame");
        state.polar = compute_polar(*state.stokes, stage.params.value("eps_i", 1e-6),
                                    stage.params.value("eps_qu", 1e-6));
    } else if (stage.op == "compose") {
        need(state.stokes.has_value(), "a stokes frame");
        const ChannelConfig cfg =
            channel_config_from(stage.params.value("config", std::string("iqu")));
        const PolarFrame* polar = state.polar ? &*state.polar : nullptr;
        state.stack = compose_channels(*state.stokes, polar, cfg);
    } else if (stage.op == "render") {
        need(state.stokes.has_value() && state.polar.has_value(), "stokes and polar frames");
        state.render = render_pseudocolor(*state.stokes, *state.polar);
    } else if (stage.op == "detect") {
        need(state.polar.has_value(), "a polar frame");
        state.detections = detect_blobs(*state.polar, blob_params_from(stage.params),
                                        state.frame_id,
                                        stage.params.value("class", std::string("vehicle")));
    } else {
        throw ArgumentError("unknown pipeline op \"" + stage.op + "\"");
    }
}

inline void run(FrameState& state, const io::PipelineConfig& config) {
    for (const io::StageSpec& stage : config.stages) apply_stage(state, stage);
}

/// Parses a comma-separated stage list ("stokes,polar,detect") into a
/// config with default parameters; used by the bench CLI.
inline io::PipelineConfig chain_from_names(const std::string& names) {
    io::PipelineConfig cfg;
    std::string cur;
    auto flush = [&]() {
        if (!cur.empty()) {
            cfg.stages.push_back({cur, nlohmann::json::object()});
            cur.clear();
        }
    };
    for (char c : names) {
        if (c == ',') flush();
        else if (!std::isspace(static_cast<unsigned char>(c))) cur.push_back(c);
    }
    flush();
    if (cfg.stages.empty()) throw ArgumentError("empty stage chain");
    return cfg;
}

}  // namespace pipeline
}  // namespace pollwir
