// pollwir command-line frontend: ties the processing, synthesis, detection,
// evaluation and benchmarking modules into reproducible file-based
// pipelines. Exit codes: 0 success, 2 input/validation error, 1 internal.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "pollwir/bench.hpp"
#include "pollwir/detector.hpp"
#include "pollwir/errors.hpp"
#include "pollwir/eval.hpp"
#include "pollwir/io/csv.hpp"
#include "pollwir/io/json_formats.hpp"
#include "pollwir/io/pgm.hpp"
#include "pollwir/io/png.hpp"
#include "pollwir/io/raw_planes.hpp"
#include "pollwir/io/svg.hpp"
#include "pollwir/pipeline.hpp"
#include "pollwir/polarimetry.hpp"
#include "pollwir/synth.hpp"

namespace fs = std::filesystem;
using namespace pollwir;

namespace {

std::string out_path(const std::string& out_dir, const std::string& name) {
    fs::create_directories(out_dir);
    return (fs::path(out_dir) / name).string();
}

/// "work/f000_stokes.json" with suffix "_stokes" -> "f000".
std::string derive_prefix(const std::string& path, const std::string& suffix) {
    std::string stem = fs::path(path).stem().string();
    if (suffix.size() < stem.size() && stem.ends_with(suffix)) {
        stem.resize(stem.size() - suffix.size());
    }
    return stem;
}

double frame_state_digest(const FrameState& st) {
    double acc = 0.0;
    if (st.quad) acc += st.quad->i0[0];
    if (st.stokes) acc += st.stokes->I[0] + st.stokes->U[st.stokes->U.size() - 1];
    if (st.polar) acc += st.polar->P[0] + st.polar->phi[st.polar->phi.size() - 1];
    if (st.stack && !st.stack->planes[0].empty()) acc += st.stack->planes[0][0];
    if (st.render && !st.render->rgb.empty()) acc += st.render->rgb[0];
    acc += static_cast<double>(st.detections.size());
    for (const Detection& d : st.detections) acc += d.score;
    return acc;
}

void write_image(const std::string& path_base, const Rgb8Image& img, const std::string& format) {
    if (format == "ppm") {
        io::write_ppm_rgb(path_base + ".ppm", img);
        std::cout << "wrote " << path_base << ".ppm\n";
    } else {
        io::write_png_rgb(path_base + ".png", img);
        std::cout << "wrote " << path_base << ".png\n";
    }
}

struct CommonOpts {
    std::string out_dir = ".";
    std::uint64_t seed = 0;
    bool seed_set = false;
};

void add_common(CLI::App* sub, CommonOpts& opts) {
    sub->add_option("--out-dir", opts.out_dir, "Output directory (created if missing)");
    sub->add_option("--seed", opts.seed, "Seed override for any randomised step")
        ->each([&opts](const std::string&) { opts.seed_set = true; });
}

// ---------------------------------------------------------------------------
// Subcommand bodies
// ---------------------------------------------------------------------------

void run_demosaic(const std::string& input, const std::string& strategy,
                  const CommonOpts& common, std::string prefix) {
    const RawMosaicFrame mosaic = io::read_mosaic(input);
    const DemosaicStrategy strat =
        strategy == "nearest" ? DemosaicStrategy::NEAREST : DemosaicStrategy::SUPERPIXEL_BIN;
    const QuadFrame quad = demosaic(mosaic, strat);
    if (prefix.empty()) prefix = derive_prefix(input, "_mosaic");
    io::write_quad(out_path(common.out_dir, prefix), quad);
    std::cout << "wrote " << prefix << "_i{000,045,090,135}.pgm (" << quad.width() << "x"
              << quad.height() << ")\n";
}

void run_stokes(const std::string& quad_prefix, const std::string& mosaic_path,
                const CommonOpts& common, std::string prefix) {
    std::optional<QuadFrame> quad;
    if (!quad_prefix.empty()) {
        quad = io::read_quad(quad_prefix);
        if (prefix.empty()) prefix = fs::path(quad_prefix).filename().string();
    } else {
        quad = demosaic(io::read_mosaic(mosaic_path));
        if (prefix.empty()) prefix = derive_prefix(mosaic_path, "_mosaic");
    }
    const StokesFrame s = compute_stokes(*quad);
    const std::string path = out_path(common.out_dir, prefix + "_stokes.json");
    io::write_stokes(path, s);
    std::cout << "wrote " << path << "\n";
}

void run_polar(const std::string& stokes_path, double eps_i, double eps_qu,
               const CommonOpts& common, std::string prefix) {
    const StokesFrame s = io::read_stokes(stokes_path);
    const PolarFrame p = compute_polar(s, eps_i, eps_qu);
    if (prefix.empty()) prefix = derive_prefix(stokes_path, "_stokes");
    const std::string path = out_path(common.out_dir, prefix + "_polar.json");
    io::write_polar(path, p);
    std::cout << "wrote " << path << "\n";
    std::cout << "p_overflow_count=" << p.p_overflow_count << "\n";
}

void run_compose(const std::string& stokes_path, const std::string& polar_path,
                 const std::string& config, const std::string& format,
                 const CommonOpts& common, std::string prefix) {
    const StokesFrame s = io::read_stokes(stokes_path);
    std::optional<PolarFrame> polar;
    if (!polar_path.empty()) polar = io::read_polar(polar_path);
    const ChannelConfig cfg = pipeline::channel_config_from(config);
    const ChannelStack stack = compose_channels(s, polar ? &*polar : nullptr, cfg);
    if (prefix.empty()) prefix = derive_prefix(stokes_path, "_stokes");
    const std::string base = out_path(common.out_dir, prefix + "_" + config);
    write_image(base, io::stack_to_rgb(stack), format);
    io::write_normalization_record(base + "_norm.json", stack);
    std::cout << "wrote " << base << "_norm.json\n";
}

void run_render(const std::string& stokes_path, const std::string& polar_path,
                const std::string& det_path, const std::string& ann_path,
                double overlay_threshold, const std::string& format, const CommonOpts& common,
                std::string prefix) {
    const StokesFrame s = io::read_stokes(stokes_path);
    const PolarFrame p = io::read_polar(polar_path);
    Rgb8Image img = render_pseudocolor(s, p);
    if (prefix.empty()) prefix = derive_prefix(stokes_path, "_stokes");
    if (!det_path.empty() || !ann_path.empty()) {
        std::vector<Detection> dets;
        std::vector<GroundTruth> gts;
        // Only boxes belonging to this frame end up on the overlay.
        if (!det_path.empty()) {
            for (auto& d : io::read_detections(det_path)) {
                if (d.frame_id == prefix) dets.push_back(std::move(d));
            }
        }
        if (!ann_path.empty()) {
            for (auto& g : io::read_annotations(ann_path)) {
                if (g.frame_id == prefix) gts.push_back(std::move(g));
            }
        }
        img = render_overlay(std::move(img), dets, gts, overlay_threshold);
    }
    write_image(out_path(common.out_dir, prefix + "_render"), img, format);
}

void run_synth(const std::string& spec_path, const std::string& frame_id,
               bool emit_mosaic, const CommonOpts& common) {
    SceneSpec spec = io::read_scene_spec(spec_path);
    if (common.seed_set) spec.seed = common.seed;
    const Scene scene = generate_scene(spec, frame_id);
    const QuadFrame observed =
        observe(scene.truth, spec.noise_std, derive_noise_seed(spec.seed));

    const std::string truth_path = out_path(common.out_dir, frame_id + "_truth.json");
    io::write_stokes(truth_path, scene.truth);
    io::write_quad(out_path(common.out_dir, frame_id), observed);
    const std::string labels_path = out_path(common.out_dir, frame_id + "_labels.csv");
    io::write_annotations(labels_path, scene.labels);
    if (emit_mosaic) {
        io::write_mosaic(out_path(common.out_dir, frame_id + "_mosaic.pgm"),
                         interleave_quad(observed));
    }
    std::cout << "frame=" << frame_id << " targets=" << scene.labels.size() << " noise_std="
              << spec.noise_std << " seed=" << spec.seed << "\n";
}

void run_detect(const std::string& polar_path, std::string frame_id, BlobParams params,
                const std::string& class_label, std::string out_file,
                const CommonOpts& common) {
    const PolarFrame polar = io::read_polar(polar_path);
    if (frame_id.empty()) frame_id = derive_prefix(polar_path, "_polar");
    const auto dets = detect_blobs(polar, params, frame_id, class_label);
    if (out_file.empty()) out_file = out_path(common.out_dir, "detections.csv");
    io::write_detections(out_file, dets);
    std::cout << "frame=" << frame_id << " detections=" << dets.size() << " out=" << out_file
              << "\n";
}

void run_eval(const std::string& det_path, const std::string& ann_path, double iou_threshold,
              const std::string& method, std::string report_path, const std::string& pr_csv,
              const std::string& pr_svg, const CommonOpts& common) {
    const auto dets = io::read_detections(det_path);
    const auto gts = io::read_annotations(ann_path);
    const ApMethod ap_method =
        method == "eleven_point" ? ApMethod::ELEVEN_POINT : ApMethod::ALL_POINT;
    const EvalReport report = evaluate(dets, gts, iou_threshold, ap_method);

    if (report_path.empty()) report_path = out_path(common.out_dir, "report.json");
    io::write_eval_report(report_path, report);

    auto class_suffixed = [&](const std::string& base, const std::string& cls) {
        if (report.per_class.size() == 1) return base;
        const fs::path p(base);
        return (p.parent_path() / (p.stem().string() + "_" + cls + p.extension().string()))
            .string();
    };
    for (const auto& [cls, ce] : report.per_class) {
        if (!pr_csv.empty()) io::write_pr_csv(class_suffixed(pr_csv, cls), ce.pr);
        if (!pr_svg.empty()) {
            io::write_pr_svg(class_suffixed(pr_svg, cls), ce.pr, cls + " precision-recall");
        }
    }

    std::cout << "map=" << io::format_double(report.map) << " method="
              << to_string(report.ap_method) << " iou>" << report.iou_threshold << "\n";
    for (const auto& [cls, ce] : report.per_class) {
        std::cout << "class=" << cls << " ap=" << io::format_double(ce.ap) << " n_gt=" << ce.n_gt
                  << " n_det=" << ce.n_det << (ce.recall_undefined ? " recall=undefined" : "")
                  << "\n";
    }
    std::cout << "report=" << report_path << "\n";
}

void run_bench(const std::string& manifest_path, const std::vector<std::string>& quad_prefixes,
               const std::vector<std::string>& mosaic_paths, const std::string& stages,
               long n, long warmup, bool include_io, bool parallel, std::string report_path,
               const CommonOpts& common) {
    const io::PipelineConfig chain = pipeline::chain_from_names(stages);

    struct Source {
        std::string frame_id;
        std::string mosaic;
        std::string quad;
    };
    std::vector<Source> sources;
    if (!manifest_path.empty()) {
        const auto manifest = io::load_manifest(manifest_path);
        for (const auto& f : manifest.frames) {
            sources.push_back({f.frame_id, f.mosaic_path, f.quad_prefix});
        }
    }
    for (const auto& q : quad_prefixes) {
        sources.push_back({fs::path(q).filename().string(), "", q});
    }
    for (const auto& m : mosaic_paths) {
        sources.push_back({derive_prefix(m, "_mosaic"), m, ""});
    }
    if (sources.empty()) throw ArgumentError("bench needs --manifest, --quad or --mosaic input");

    auto load = [](const Source& src) {
        FrameState st;
        st.frame_id = src.frame_id;
        if (!src.mosaic.empty()) st.mosaic = io::read_mosaic(src.mosaic);
        else st.quad = io::read_quad(src.quad);
        return st;
    };

    TimingReport report;
    if (include_io) {
        auto stage = [&](const Source& src) {
            FrameState st = load(src);
            pipeline::run(st, chain);
            return frame_state_digest(st);
        };
        report = parallel ? time_stage_parallel(stages + "+io", stage, sources, n, warmup)
                          : time_stage(stages + "+io", stage, sources, n, warmup);
    } else {
        std::vector<FrameState> preloaded;
        preloaded.reserve(sources.size());
        for (const Source& src : sources) preloaded.push_back(load(src));
        auto stage = [&](const FrameState& base) {
            FrameState st = base;
            pipeline::run(st, chain);
            return frame_state_digest(st);
        };
        report = parallel ? time_stage_parallel(stages, stage, preloaded, n, warmup)
                          : time_stage(stages, stage, preloaded, n, warmup);
    }

    if (report_path.empty()) report_path = out_path(common.out_dir, "bench.json");
    io::write_timing_report(report_path, report);
    std::cout << summary_line(report) << "\n";
}

void run_pipeline(const std::string& config_path, const std::string& manifest_path,
                  const std::string& format, const CommonOpts& common) {
    const io::PipelineConfig config = io::read_pipeline_config(config_path);
    const auto manifest = io::load_manifest(manifest_path);
    const std::string& last_op = config.stages.back().op;

    std::vector<Detection> all_detections;
    bool ran_detect = false;
    for (const auto& frame : manifest.frames) {
        FrameState st;
        st.frame_id = frame.frame_id;
        if (!frame.mosaic_path.empty()) st.mosaic = io::read_mosaic(frame.mosaic_path);
        else st.quad = io::read_quad(frame.quad_prefix);
        pipeline::run(st, config);

        for (const io::StageSpec& stage : config.stages) {
            if (stage.op == "detect") ran_detect = true;
        }
        all_detections.insert(all_detections.end(), st.detections.begin(),
                              st.detections.end());

        // Per-frame artifact for the terminal stage.
        if (last_op == "demosaic") {
            io::write_quad(out_path(common.out_dir, st.frame_id), *st.quad);
        } else if (last_op == "stokes") {
            io::write_stokes(out_path(common.out_dir, st.frame_id + "_stokes.json"), *st.stokes);
        } else if (last_op == "polar") {
            io::write_polar(out_path(common.out_dir, st.frame_id + "_polar.json"), *st.polar);
        } else if (last_op == "compose") {
            const std::string base =
                out_path(common.out_dir, st.frame_id + "_" + to_string(st.stack->config));
            write_image(base, io::stack_to_rgb(*st.stack), format);
            io::write_normalization_record(base + "_norm.json", *st.stack);
        } else if (last_op == "render") {
            write_image(out_path(common.out_dir, st.frame_id + "_render"), *st.render, format);
        }
    }
    if (ran_detect) {
        const std::string det_path = out_path(common.out_dir, "detections.csv");
        io::write_detections(det_path, all_detections);
        std::cout << "wrote " << det_path << "\n";
    }
    std::cout << "frames=" << manifest.frames.size() << " detections=" << all_detections.size()
              << " out=" << common.out_dir << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"pollwir: polarimetric LWIR processing and detection evaluation"};
    app.require_subcommand(1);

    // demosaic ---------------------------------------------------------------
    auto* demosaic_cmd = app.add_subcommand("demosaic", "Split a mosaic PGM into quad planes");
    CommonOpts demosaic_common;
    std::string demosaic_input, demosaic_strategy = "superpixel", demosaic_prefix;
    demosaic_cmd->add_option("--input", demosaic_input, "Mosaic PGM path")
        ->required()
        ->check(CLI::ExistingFile);
    demosaic_cmd->add_option("--strategy", demosaic_strategy, "superpixel|nearest")
        ->check(CLI::IsMember({"superpixel", "nearest"}));
    demosaic_cmd->add_option("--prefix", demosaic_prefix, "Output filename prefix");
    add_common(demosaic_cmd, demosaic_common);
    demosaic_cmd->callback([&]() {
        run_demosaic(demosaic_input, demosaic_strategy, demosaic_common, demosaic_prefix);
    });

    // stokes -----------------------------------------------------------------
    auto* stokes_cmd = app.add_subcommand("stokes", "Compute Stokes planes from quad or mosaic");
    CommonOpts stokes_common;
    std::string stokes_quad, stokes_mosaic, stokes_prefix;
    auto* sq = stokes_cmd->add_option("--quad", stokes_quad, "Quad PGM prefix");
    auto* sm = stokes_cmd->add_option("--mosaic", stokes_mosaic, "Mosaic PGM path")
                   ->check(CLI::ExistingFile);
    sq->excludes(sm);
    stokes_cmd->add_option("--prefix", stokes_prefix, "Output filename prefix");
    add_common(stokes_cmd, stokes_common);
    stokes_cmd->callback([&]() {
        if (stokes_quad.empty() && stokes_mosaic.empty()) {
            throw ArgumentError("stokes needs --quad or --mosaic");
        }
        run_stokes(stokes_quad, stokes_mosaic, stokes_common, stokes_prefix);
    });

    // polar ------------------------------------------------------------------
    auto* polar_cmd = app.add_subcommand("polar", "Compute degree/angle of linear polarisation");
    CommonOpts polar_common;
    std::string polar_stokes, polar_prefix;
    double polar_eps_i = 1e-6, polar_eps_qu = 1e-6;
    polar_cmd->add_option("--stokes", polar_stokes, "Stokes descriptor JSON")
        ->required()
        ->check(CLI::ExistingFile);
    polar_cmd->add_option("--eps-i", polar_eps_i, "Intensity degeneracy threshold");
    polar_cmd->add_option("--eps-qu", polar_eps_qu, "Q/U degeneracy threshold");
    polar_cmd->add_option("--prefix", polar_prefix, "Output filename prefix");
    add_common(polar_cmd, polar_common);
    polar_cmd->callback([&]() {
        run_polar(polar_stokes, polar_eps_i, polar_eps_qu, polar_common, polar_prefix);
    });

    // compose ----------------------------------------------------------------
    auto* compose_cmd = app.add_subcommand("compose", "Build an 8-bit channel stack");
    CommonOpts compose_common;
    std::string compose_stokes, compose_polar, compose_config = "iqu", compose_format = "png",
                compose_prefix;
    compose_cmd->add_option("--stokes", compose_stokes, "Stokes descriptor JSON")
        ->required()
        ->check(CLI::ExistingFile);
    compose_cmd->add_option("--polar", compose_polar, "Polar descriptor JSON (for ipphi)")
        ->check(CLI::ExistingFile);
    compose_cmd->add_option("--config", compose_config, "intensity|iqu|ipphi")
        ->check(CLI::IsMember({"intensity", "iqu", "ipphi"}));
    compose_cmd->add_option("--format", compose_format, "png|ppm")
        ->check(CLI::IsMember({"png", "ppm"}));
    compose_cmd->add_option("--prefix", compose_prefix, "Output filename prefix");
    add_common(compose_cmd, compose_common);
    compose_cmd->callback([&]() {
        run_compose(compose_stokes, compose_polar, compose_config, compose_format,
                    compose_common, compose_prefix);
    });

    // render -----------------------------------------------------------------
    auto* render_cmd = app.add_subcommand("render", "HSV pseudo-colour render of P and phi");
    CommonOpts render_common;
    std::string render_stokes, render_polar, render_dets, render_anns, render_format = "png",
                render_prefix;
    double render_overlay_threshold = 0.7;
    render_cmd->add_option("--stokes", render_stokes, "Stokes descriptor JSON")
        ->required()
        ->check(CLI::ExistingFile);
    render_cmd->add_option("--polar", render_polar, "Polar descriptor JSON")
        ->required()
        ->check(CLI::ExistingFile);
    render_cmd->add_option("--detections", render_dets, "Overlay boxes from a detections CSV")
        ->check(CLI::ExistingFile);
    render_cmd->add_option("--annotations", render_anns, "Overlay ground truth from a CSV")
        ->check(CLI::ExistingFile);
    render_cmd->add_option("--overlay-threshold", render_overlay_threshold,
                           "Minimum score for overlaid detections");
    render_cmd->add_option("--format", render_format, "png|ppm")
        ->check(CLI::IsMember({"png", "ppm"}));
    render_cmd->add_option("--prefix", render_prefix, "Output filename prefix");
    add_common(render_cmd, render_common);
    render_cmd->callback([&]() {
        run_render(render_stokes, render_polar, render_dets, render_anns,
                   render_overlay_threshold, render_format, render_common, render_prefix);
    });

    // synth ------------------------------------------------------------------
    auto* synth_cmd = app.add_subcommand("synth", "Generate a labelled synthetic scene");
    CommonOpts synth_common;
    std::string synth_spec, synth_frame_id = "f000";
    bool synth_emit_mosaic = false;
    synth_cmd->add_option("--spec", synth_spec, "SceneSpec JSON")
        ->required()
        ->check(CLI::ExistingFile);
    synth_cmd->add_option("--frame-id", synth_frame_id, "Frame identifier for outputs");
    synth_cmd->add_flag("--emit-mosaic", synth_emit_mosaic,
                        "Also write the interleaved sensor mosaic");
    add_common(synth_cmd, synth_common);
    synth_cmd->callback(
        [&]() { run_synth(synth_spec, synth_frame_id, synth_emit_mosaic, synth_common); });

    // detect -----------------------------------------------------------------
    auto* detect_cmd = app.add_subcommand("detect", "Polarisation blob detector");
    CommonOpts detect_common;
    std::string detect_polar, detect_frame_id, detect_class = "vehicle", detect_out,
                detect_params_json;
    BlobParams detect_params;
    detect_cmd->add_option("--polar", detect_polar, "Polar descriptor JSON")
        ->required()
        ->check(CLI::ExistingFile);
    detect_cmd->add_option("--frame-id", detect_frame_id, "Frame id for emitted detections");
    detect_cmd->add_option("--params-json", detect_params_json,
                           "JSON file with a blob-parameter block")
        ->check(CLI::ExistingFile);
    auto* opt_pt =
        detect_cmd->add_option("--p-threshold", detect_params.p_threshold, "DoLP threshold");
    auto* opt_ma = detect_cmd->add_option("--min-area", detect_params.min_area,
                                          "Minimum component area (px)");
    auto* opt_cn =
        detect_cmd->add_option("--connectivity", detect_params.connectivity, "4 or 8");
    auto* opt_nms = detect_cmd->add_option("--nms-iou", detect_params.nms_iou, "NMS IoU");
    detect_cmd->add_option("--class", detect_class, "Class label for detections");
    detect_cmd->add_option("--out", detect_out, "Detections CSV path");
    add_common(detect_cmd, detect_common);
    detect_cmd->callback([&]() {
        if (!detect_params_json.empty()) {
            // JSON block first, explicit flags override.
            const BlobParams flag_values = detect_params;
            detect_params = pipeline::blob_params_from(io::detail::load_json(detect_params_json));
            if (opt_pt->count()) detect_params.p_threshold = flag_values.p_threshold;
            if (opt_ma->count()) detect_params.min_area = flag_values.min_area;
            if (opt_cn->count()) detect_params.connectivity = flag_values.connectivity;
            if (opt_nms->count()) detect_params.nms_iou = flag_values.nms_iou;
        }
        run_detect(detect_polar, detect_frame_id, detect_params, detect_class, detect_out,
                   detect_common);
    });

    // eval -------------------------------------------------------------------
    auto* eval_cmd = app.add_subcommand("eval", "Score detections against ground truth");
    CommonOpts eval_common;
    std::string eval_dets, eval_anns, eval_method = "all_point", eval_report, eval_pr_csv,
                eval_pr_svg;
    double eval_iou = 0.5;
    eval_cmd->add_option("--detections", eval_dets, "Detections CSV")
        ->required()
        ->check(CLI::ExistingFile);
    eval_cmd->add_option("--annotations", eval_anns, "Ground-truth CSV")
        ->required()
        ->check(CLI::ExistingFile);
    eval_cmd->add_option("--iou", eval_iou, "IoU threshold (strict >)");
    eval_cmd->add_option("--method", eval_method, "all_point|eleven_point")
        ->check(CLI::IsMember({"all_point", "eleven_point"}));
    eval_cmd->add_option("--report", eval_report, "EvalReport JSON path");
    eval_cmd->add_option("--pr-csv", eval_pr_csv, "PR curve CSV path");
    eval_cmd->add_option("--pr-svg", eval_pr_svg, "PR curve SVG path");
    add_common(eval_cmd, eval_common);
    eval_cmd->callback([&]() {
        run_eval(eval_dets, eval_anns, eval_iou, eval_method, eval_report, eval_pr_csv,
                 eval_pr_svg, eval_common);
    });

    // bench ------------------------------------------------------------------
    auto* bench_cmd = app.add_subcommand("bench", "Time a stage chain over frames");
    CommonOpts bench_common;
    std::string bench_manifest, bench_stages = "stokes,polar", bench_report;
    std::vector<std::string> bench_quads, bench_mosaics;
    long bench_n = 100, bench_warmup = 5;
    bool bench_include_io = false, bench_parallel = false;
    bench_cmd->add_option("--manifest", bench_manifest, "Sequence manifest JSON")
        ->check(CLI::ExistingFile);
    bench_cmd->add_option("--quad", bench_quads, "Quad PGM prefix (repeatable)");
    bench_cmd->add_option("--mosaic", bench_mosaics, "Mosaic PGM path (repeatable)");
    bench_cmd->add_option("--stages", bench_stages, "Comma-separated stage chain");
    bench_cmd->add_option("--n", bench_n, "Timed frame count");
    bench_cmd->add_option("--warmup", bench_warmup, "Untimed warmup frames");
    bench_cmd->add_flag("--include-io", bench_include_io, "Time disk reads inside the stage");
    bench_cmd->add_flag("--parallel", bench_parallel,
                        "Aggregate throughput over a worker pool");
    bench_cmd->add_option("--report", bench_report, "TimingReport JSON path");
    add_common(bench_cmd, bench_common);
    bench_cmd->callback([&]() {
        run_bench(bench_manifest, bench_quads, bench_mosaics, bench_stages, bench_n,
                  bench_warmup, bench_include_io, bench_parallel, bench_report, bench_common);
    });

    // pipeline ---------------------------------------------------------------
    auto* pipeline_cmd = app.add_subcommand("pipeline", "Run a stage chain over a manifest");
    CommonOpts pipeline_common;
    std::string pipeline_config, pipeline_manifest, pipeline_format = "png";
    pipeline_cmd->add_option("--config", pipeline_config, "Pipeline config JSON")
        ->required()
        ->check(CLI::ExistingFile);
    pipeline_cmd->add_option("--manifest", pipeline_manifest, "Sequence manifest JSON")
        ->required()
        ->check(CLI::ExistingFile);
    pipeline_cmd->add_option("--format", pipeline_format, "png|ppm")
        ->check(CLI::IsMember({"png", "ppm"}));
    add_common(pipeline_cmd, pipeline_common);
    pipeline_cmd->callback([&]() {
        run_pipeline(pipeline_config, pipeline_manifest, pipeline_format, pipeline_common);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;  // usage problems are validation errors
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
