#include <catch2/catch_amalgamated.hpp>

#include "pollwir/pipeline.hpp"
#include "pollwir/synth.hpp"

using namespace pollwir;

TEST_CASE("chain_from_names parses comma lists") {
    const auto cfg = pipeline::chain_from_names("stokes, polar ,detect");
    REQUIRE(cfg.stages.size() == 3);
    CHECK(cfg.stages[0].op == "stokes");
    CHECK(cfg.stages[1].op == "polar");
    CHECK(cfg.stages[2].op == "detect");
    CHECK_THROWS_AS(pipeline::chain_from_names(""), ArgumentError);
}

TEST_CASE("a mosaic-to-detections chain runs end to end") {
    SceneSpec spec;
    spec.width = 64;
    spec.height = 64;
    spec.background = {2.0, 0.0, 0.0};
    spec.targets.push_back({{10, 10, 40, 30}, 4.0, 0.8, 0.0});
    spec.seed = 3;
    const Scene scene = generate_scene(spec, "f0");
    const QuadFrame quad = observe(scene.truth, 0.0, 3);

    FrameState state;
    state.frame_id = "f0";
    state.mosaic = interleave_quad(quad);
    pipeline::run(state, pipeline::chain_from_names("demosaic,stokes,polar,detect"));

    REQUIRE(state.detections.size() == 1);
    CHECK(state.detections[0].box == BoundingBox{10, 10, 40, 30});
    CHECK(state.detections[0].frame_id == "f0");
}

TEST_CASE("stokes stage auto-demosaics a mosaic input") {
    SceneSpec spec;
    spec.width = 16;
    spec.height = 16;
    spec.background = {2.0, 0.1, 0.1};
    spec.seed = 4;
    const QuadFrame quad = observe(generate_scene(spec).truth, 0.0, 4);
    FrameState state;
    state.mosaic = interleave_quad(quad);
    pipeline::run(state, pipeline::chain_from_names("stokes"));
    CHECK(state.stokes.has_value());
    CHECK(state.quad.has_value());
}

TEST_CASE("stage parameter blocks are honoured") {
    SceneSpec spec;
    spec.width = 32;
    spec.height = 32;
    spec.background = {2.0, 0.0, 0.0};
    spec.targets.push_back({{4, 4, 10, 10}, 4.0, 0.6, 0.0});  // 36 px at P = 0.6
    spec.seed = 5;
    FrameState state;
    state.quad = observe(generate_scene(spec).truth, 0.0, 5);

    io::PipelineConfig cfg;
    cfg.stages.push_back({"stokes", nlohmann::json::object()});
    cfg.stages.push_back({"polar", nlohmann::json::object()});
    cfg.stages.push_back({"detect", nlohmann::json{{"p_threshold", 0.7}}});
    pipeline::run(state, cfg);
    CHECK(state.detections.empty());  // target P below the raised threshold

    state.detections.clear();
    cfg.stages.back() = {"detect", nlohmann::json{{"p_threshold", 0.5}}};
    pipeline::run(state, cfg);
    CHECK(state.detections.size() == 1);
}

TEST_CASE("stages demand their inputs and unknown ops are rejected") {
    FrameState empty;
    CHECK_THROWS_AS(pipeline::apply_stage(empty, {"polar", nlohmann::json::object()}),
                    ArgumentError);
    CHECK_THROWS_AS(pipeline::apply_stage(empty, {"warp", nlohmann::json::object()}),
                    ArgumentError);
}
