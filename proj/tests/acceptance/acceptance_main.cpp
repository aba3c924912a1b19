// Acceptance suite: one line per criterion, non-zero exit if any fails.
// Each criterion is self-contained and uses independent oracles where the
// contract calls for one.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "pollwir/bench.hpp"
#include "pollwir/detector.hpp"
#include "pollwir/eval.hpp"
#include "pollwir/io/csv.hpp"
#include "pollwir/io/json_formats.hpp"
#include "pollwir/io/pgm.hpp"
#include "pollwir/io/raw_planes.hpp"
#include "pollwir/pipeline.hpp"
#include "pollwir/polarimetry.hpp"
#include "pollwir/rng.hpp"
#include "pollwir/synth.hpp"

using namespace pollwir;
namespace fs = std::filesystem;

namespace {

struct Failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void require(bool ok, const std::string& msg) {
    if (!ok) throw Failure(msg);
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(4);
    os << v;
    return os.str();
}

StokesFrame random_physical_stokes(SeededRng& rng, int w, int h) {
    PlaneF I(w, h), Q(w, h), U(w, h);
    for (std::size_t i = 0; i < I.size(); ++i) {
        const double intensity = rng.uniform(0.1, 10.0);
        const double p = rng.uniform01();
        const double phi = rng.uniform_open_closed(-kHalfPi, kHalfPi);
        I[i] = intensity;
        Q[i] = intensity * p * std::cos(2.0 * phi);
        U[i] = intensity * p * std::sin(2.0 * phi);
    }
    return {std::move(I), std::move(Q), std::move(U)};
}

// ---------------------------------------------------------------------------
// 1. Stokes round trip
// ---------------------------------------------------------------------------

std::string criterion_stokes_round_trip() {
    const auto start = std::chrono::steady_clock::now();
    SeededRng rng(0xC0FFEE);
    double max_rel = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        const StokesFrame s = random_physical_stokes(rng, 64, 64);
        const StokesFrame back = compute_stokes(synthesize_quad(s));
        for (std::size_t i = 0; i < s.I.size(); ++i) {
            const double scale = s.I[i];
            max_rel = std::max(max_rel, std::abs(back.I[i] - s.I[i]) / scale);
            max_rel = std::max(max_rel, std::abs(back.Q[i] - s.Q[i]) / scale);
            max_rel = std::max(max_rel, std::abs(back.U[i] - s.U[i]) / scale);
        }
    }
    const double elapsed = seconds_since(start);
    require(max_rel <= 1e-9, "max relative error " + fmt(max_rel) + " exceeds 1e-9");
    require(elapsed < 5.0, "took " + fmt(elapsed) + " s, budget 5 s");
    return "1000 frames 64x64, max rel err " + fmt(max_rel) + ", " + fmt(elapsed) + " s";
}

// ---------------------------------------------------------------------------
// 2. Polarisation formulas vs scalar oracle
// ---------------------------------------------------------------------------

// Oracle route: hypot for the magnitude and a hand-built four-quadrant
// arctangent from std::atan, independent of the compute_polar code path.
double oracle_dolp(double i, double q, double u) {
    return std::min(1.0, std::hypot(q, u) / i);
}

double oracle_aop(double q, double u) {
    double angle;
    if (q > 0.0) {
        angle = std::atan(u / q);
    } else if (q < 0.0 && u >= 0.0) {
        angle = std::atan(u / q) + kPi;
    } else if (q < 0.0) {
        angle = std::atan(u / q) - kPi;
    } else {
        angle = u >= 0.0 ? kHalfPi : -kHalfPi;
    }
    double phi = 0.5 * angle;
    if (phi <= -kHalfPi) phi += kPi;
    return phi;
}

std::string criterion_polar_formulas() {
    SeededRng rng(0xBEEF);
    const StokesFrame s = random_physical_stokes(rng, 100, 100);  // 10,000 pixels
    const PolarFrame polar = compute_polar(s);
    double max_err = 0.0;
    long checked = 0;
    for (std::size_t i = 0; i < s.I.size(); ++i) {
        if (!polar.valid[i]) continue;
        ++checked;
        max_err = std::max(max_err, std::abs(polar.P[i] - oracle_dolp(s.I[i], s.Q[i], s.U[i])));
        max_err = std::max(max_err, std::abs(polar.phi[i] - oracle_aop(s.Q[i], s.U[i])));
    }
    require(max_err <= 1e-12, "formula deviation " + fmt(max_err) + " exceeds 1e-12");

    // Scale invariance at k = 2^9 (exact in binary floating point).
    const double k = 512.0;
    PlaneF I(100, 100), Q(100, 100), U(100, 100);
    for (std::size_t i = 0; i < I.size(); ++i) {
        I[i] = k * s.I[i];
        Q[i] = k * s.Q[i];
        U[i] = k * s.U[i];
    }
    const PolarFrame scaled = compute_polar(StokesFrame(I, Q, U), k * 1e-6, k * 1e-6);
    for (std::size_t i = 0; i < I.size(); ++i) {
        require(scaled.valid[i] == polar.valid[i], "scale invariance broke the valid mask");
        require(scaled.P[i] == polar.P[i], "P not scale invariant");
        require(scaled.phi[i] == polar.phi[i], "phi not scale invariant");
    }

    // Angle antisymmetry under U -> -U.
    PlaneF negU(100, 100);
    for (std::size_t i = 0; i < negU.size(); ++i) negU[i] = -s.U[i];
    const PolarFrame mirrored = compute_polar(StokesFrame(s.I, s.Q, negU));
    for (std::size_t i = 0; i < negU.size(); ++i) {
        if (!polar.valid[i] || s.U[i] == 0.0) continue;
        require(mirrored.phi[i] == -polar.phi[i], "phi antisymmetry violated");
    }
    return std::to_string(checked) + " valid pixels, max |impl-oracle| " + fmt(max_err);
}

// ---------------------------------------------------------------------------
// 3. IoU worked examples + symmetry
// ---------------------------------------------------------------------------

std::string criterion_iou() {
    const BoundingBox a{0, 0, 10, 10};
    require(std::abs(iou(a, a) - 1.0) <= 1e-12, "identical boxes IoU != 1");
    require(iou(a, {20, 20, 30, 30}) == 0.0, "disjoint boxes IoU != 0");
    require(std::abs(iou(a, {5, 5, 15, 15}) - 1.0 / 7.0) <= 1e-12, "worked IoU != 1/7");

    SeededRng rng(0xAB);
    for (int t = 0; t < 10000; ++t) {
        const double ax = rng.uniform(0, 50), ay = rng.uniform(0, 50);
        const double bx = rng.uniform(0, 50), by = rng.uniform(0, 50);
        const BoundingBox p{ax, ay, ax + rng.uniform(0.5, 30), ay + rng.uniform(0.5, 30)};
        const BoundingBox q{bx, by, bx + rng.uniform(0.5, 30), by + rng.uniform(0.5, 30)};
        require(iou(p, q) == iou(q, p), "IoU asymmetric");
    }
    return "worked values exact, symmetric on 10000 random pairs";
}

// ---------------------------------------------------------------------------
// 4. ALL_POINT AP == threshold-enumeration oracle on exhaustive small cases
// ---------------------------------------------------------------------------

// Independent oracle: recounts TP/FP at every distinct score threshold and
// integrates a brute-force precision envelope.
double ap_oracle(const MatchResult& match, long n_gt) {
    const std::size_t n = match.is_tp.size();
    std::vector<double> precisions, recalls;
    for (std::size_t k = 0; k < n; ++k) {
        if (k + 1 < n && match.scores[k + 1] == match.scores[k]) continue;
        const double threshold = match.scores[k];
        long tp = 0, fp = 0;
        for (std::size_t j = 0; j < n; ++j) {
            if (match.scores[j] >= threshold) {
                if (match.is_tp[j]) ++tp; else ++fp;
            }
        }
        precisions.push_back(static_cast<double>(tp) / static_cast<double>(tp + fp));
        recalls.push_back(n_gt > 0 ? static_cast<double>(tp) / static_cast<double>(n_gt)
                                   : std::numeric_limits<double>::quiet_NaN());
    }
    if (recalls.empty() || std::isnan(recalls.front())) return 0.0;
    double ap = 0.0, prev = 0.0;
    for (std::size_t i = 0; i < recalls.size(); ++i) {
        if (recalls[i] > prev) {
            double env = 0.0;
            for (std::size_t j = 0; j < recalls.size(); ++j) {
                if (recalls[j] >= recalls[i]) env = std::max(env, precisions[j]);
            }
            ap += (recalls[i] - prev) * env;
            prev = recalls[i];
        }
    }
    return ap;
}

std::string criterion_ap_oracle() {
    long cases = 0;

    auto check_case = [&](const std::vector<Detection>& dets,
                          const std::vector<GroundTruth>& gts) {
        const MatchResult m = match_detections(dets, gts, 0.5);
        const auto pr = precision_recall(m, static_cast<long>(gts.size()));
        const double impl = average_precision(pr, ApMethod::ALL_POINT);
        const double oracle = ap_oracle(m, static_cast<long>(gts.size()));
        if (impl != oracle) {
            throw Failure("AP mismatch: impl " + std::to_string(impl) + " vs oracle " +
                          std::to_string(oracle) + " at case " + std::to_string(cases));
        }
        ++cases;
    };

    // Exhaustive core: 1-2 frames, two GT slots per frame, every placement
    // and score combination for up to three detections.
    // Placements against slot boxes (20*slot, 0, 20*slot+10, 10):
    //   0: exact hit on slot 0        1: exact hit on slot 1
    //   2: IoU 2/3 overlap of slot 0  3: IoU exactly 0.5 on slot 0
    //   4: background (matches nothing)
    auto placement_box = [](int placement, int slot0_x) -> BoundingBox {
        const double x = slot0_x;
        switch (placement) {
            case 0: return {x, 0, x + 10, 10};
            case 1: return {x + 20, 0, x + 30, 10};
            case 2: return {x, 2, x + 10, 12};   // inter 80, union 120
            case 3: return {x, 5, x + 10, 10};   // inter 50, union 100
            default: return {x + 100, 50, x + 110, 60};
        }
    };
    const double score_levels[3] = {0.25, 0.5, 0.75};

    for (int n_frames = 1; n_frames <= 2; ++n_frames) {
        std::vector<GroundTruth> gts;
        for (int f = 0; f < n_frames; ++f) {
            const std::string id = "f" + std::to_string(f);
            gts.push_back({id, "vehicle", placement_box(0, 0)});
            gts.push_back({id, "vehicle", placement_box(1, 0)});
        }
        const int options = n_frames * 5 * 3;  // frame x placement x score
        auto det_for = [&](int code) {
            const int f = code % n_frames;
            const int placement = (code / n_frames) % 5;
            const int score_idx = code / (n_frames * 5);
            return Detection{"f" + std::to_string(f), "vehicle",
                             placement_box(placement, 0), score_levels[score_idx]};
        };
        for (int n_det = 0; n_det <= 3; ++n_det) {
            std::vector<int> codes(n_det, 0);
            for (;;) {
                std::vector<Detection> dets;
                for (int c : codes) dets.push_back(det_for(c));
                check_case(dets, gts);
                int pos = n_det - 1;
                while (pos >= 0 && ++codes[pos] == options) {
                    codes[pos] = 0;
                    --pos;
                }
                if (pos < 0) break;
            }
        }
    }

    // Randomised envelope: up to 10 detections over up to 4 frames.
    SeededRng rng(0x5EED);
    for (int t = 0; t < 3000; ++t) {
        const int n_frames = 1 + static_cast<int>(rng.uniform01() * 4);
        const int n_gt = static_cast<int>(rng.uniform01() * 6);
        const int n_det = static_cast<int>(rng.uniform01() * 11);
        std::vector<GroundTruth> gts;
        std::vector<Detection> dets;
        for (int g = 0; g < n_gt; ++g) {
            gts.push_back({"f" + std::to_string(g % n_frames), "vehicle",
                           {30.0 * g, 0, 30.0 * g + 10, 10}});
        }
        for (int d = 0; d < n_det; ++d) {
            const double score = (1 + static_cast<int>(rng.uniform01() * 4)) / 4.0;
            const std::string frame = "f" + std::to_string(static_cast<int>(
                                                rng.uniform01() * n_frames));
            if (n_gt > 0 && rng.uniform01() < 0.6) {
                const int g = static_cast<int>(rng.uniform01() * n_gt);
                dets.push_back({frame, "vehicle", {30.0 * g, 0, 30.0 * g + 10, 10}, score});
            } else {
                dets.push_back({frame, "vehicle", {500.0 + 20 * d, 0, 510.0 + 20 * d, 10}, score});
            }
        }
        check_case(dets, gts);
    }

    require(cases >= 10000, "only " + std::to_string(cases) + " cases generated");

    // Worked example [TP, FP, TP] over two ground truths -> 5/6.
    const std::vector<Detection> dets{
        {"f0", "vehicle", {0, 0, 10, 10}, 0.9},
        {"f0", "vehicle", {50, 50, 60, 60}, 0.8},
        {"f0", "vehicle", {20, 20, 30, 30}, 0.7},
    };
    const std::vector<GroundTruth> gts{
        {"f0", "vehicle", {0, 0, 10, 10}},
        {"f0", "vehicle", {20, 20, 30, 30}},
    };
    const auto m = match_detections(dets, gts, 0.5);
    const double ap = average_precision(precision_recall(m, 2), ApMethod::ALL_POINT);
    require(std::abs(ap - 5.0 / 6.0) <= 1e-12,
            "worked [TP,FP,TP] AP " + std::to_string(ap) + " != 5/6");

    return std::to_string(cases) + " cases bit-exact vs oracle, worked case 5/6";
}

// ---------------------------------------------------------------------------
// 5. Greedy matching properties
// ---------------------------------------------------------------------------

std::string criterion_matching() {
    // Strict boundary: IoU exactly 0.5 is a FP.
    const BoundingBox d{0, 0, 10, 10}, g{0, 0, 10, 5};
    require(iou(d, g) == 0.5, "boundary construction drifted");
    const auto boundary =
        match_detections({{"f0", "vehicle", d, 0.9}}, {{"f0", "vehicle", g}}, 0.5);
    require(boundary.is_tp[0] == 0, "IoU == threshold must be FP (strict >)");

    SeededRng rng(0x600D);
    for (int t = 0; t < 3000; ++t) {
        const int n_frames = 1 + static_cast<int>(rng.uniform01() * 3);
        const int n_gt = static_cast<int>(rng.uniform01() * 8);
        const int n_det = static_cast<int>(rng.uniform01() * 12);
        std::vector<GroundTruth> gts;
        std::vector<Detection> dets;
        for (int i = 0; i < n_gt; ++i) {
            const double x = rng.uniform(0, 80), y = rng.uniform(0, 80);
            gts.push_back({"f" + std::to_string(static_cast<int>(rng.uniform01() * n_frames)),
                           "vehicle", {x, y, x + rng.uniform(2, 25), y + rng.uniform(2, 25)}});
        }
        for (int i = 0; i < n_det; ++i) {
            double x, y, w, h;
            if (n_gt > 0 && rng.uniform01() < 0.5) {
                const auto& base = gts[static_cast<std::size_t>(rng.uniform01() * n_gt)].box;
                x = base.x_min + rng.uniform(-3, 3);
                y = base.y_min + rng.uniform(-3, 3);
                w = base.width() + rng.uniform(-1, 1);
                h = base.height() + rng.uniform(-1, 1);
            } else {
                x = rng.uniform(0, 80);
                y = rng.uniform(0, 80);
                w = rng.uniform(2, 25);
                h = rng.uniform(2, 25);
            }
            dets.push_back({"f" + std::to_string(static_cast<int>(rng.uniform01() * n_frames)),
                            "vehicle", {x, y, x + std::max(1.0, w), y + std::max(1.0, h)},
                            rng.uniform01()});
        }
        const MatchResult m = match_detections(dets, gts, 0.5);
        require(m.is_tp.size() == dets.size(), "detection without a label");
        long tp = 0, matched = 0;
        for (char v : m.is_tp) tp += v;
        for (char v : m.gt_matched) matched += v;
        require(tp == matched, "TP count != matched GT count");
        require(matched <= static_cast<long>(gts.size()), "a GT matched more than once");
    }
    return "3000 random instances + strict-boundary case";
}

// ---------------------------------------------------------------------------
// 6. End-to-end synthetic scenes
// ---------------------------------------------------------------------------

SceneSpec random_scene_spec(int index, double target_intensity) {
    SeededRng meta(9000 + index);
    SceneSpec spec;
    spec.width = 320;
    spec.height = 256;
    spec.background = {100.0, 2.0, 0.1};
    spec.seed = 40000 + index;
    const int n_targets = 3 + static_cast<int>(meta.uniform01() * 6);  // 3..8
    int attempts = 0;
    while (static_cast<int>(spec.targets.size()) < n_targets && attempts < 500) {
        ++attempts;
        const int w = 12 + static_cast<int>(meta.uniform01() * 37);
        const int h = 12 + static_cast<int>(meta.uniform01() * 37);
        const int x = 4 + static_cast<int>(meta.uniform01() * (spec.width - w - 8));
        const int y = 4 + static_cast<int>(meta.uniform01() * (spec.height - h - 8));
        const BoundingBox rect{static_cast<double>(x), static_cast<double>(y),
                               static_cast<double>(x + w), static_cast<double>(y + h)};
        bool clear = true;
        for (const TargetSpec& existing : spec.targets) {
            const BoundingBox inflated{existing.rect.x_min - 4, existing.rect.y_min - 4,
                                       existing.rect.x_max + 4, existing.rect.y_max + 4};
            if (iou(inflated, rect) > 0.0) {
                clear = false;
                break;
            }
        }
        if (!clear) continue;
        TargetSpec target;
        target.rect = rect;
        target.intensity = target_intensity;
        target.dolp = 0.7 + 0.25 * meta.uniform01();
        target.aop = meta.uniform_open_closed(-kHalfPi, kHalfPi);
        spec.targets.push_back(target);
    }
    return spec;
}

double run_synthetic_suite(double noise_std) {
    std::vector<Detection> all_dets;
    std::vector<GroundTruth> all_gts;
    for (int i = 0; i < 20; ++i) {
        const std::string frame_id = "f" + std::to_string(100 + i);
        const SceneSpec spec = random_scene_spec(i, 200.0);
        const Scene scene = generate_scene(spec, frame_id);
        const QuadFrame quad = observe(scene.truth, noise_std, 70000 + i);
        const PolarFrame polar = compute_polar(compute_stokes(quad));
        const auto dets = detect_blobs(polar, BlobParams{}, frame_id);
        all_dets.insert(all_dets.end(), dets.begin(), dets.end());
        all_gts.insert(all_gts.end(), scene.labels.begin(), scene.labels.end());
    }
    const EvalReport report = evaluate(all_dets, all_gts);
    return report.map;
}

std::string criterion_end_to_end() {
    const auto start = std::chrono::steady_clock::now();
    const double clean_ap = run_synthetic_suite(0.0);
    require(std::abs(clean_ap - 1.0) <= 1e-12,
            "noise-free AP " + std::to_string(clean_ap) + " != 1.0");
    const double noisy_ap = run_synthetic_suite(10.0);  // 5% of target I = 200
    require(noisy_ap >= 0.9, "noisy AP " + std::to_string(noisy_ap) + " below 0.9 floor");
    const double elapsed = seconds_since(start);
    require(elapsed < 30.0, "took " + fmt(elapsed) + " s, budget 30 s");
    return "clean AP " + fmt(clean_ap) + ", noisy AP " + fmt(noisy_ap) + ", " + fmt(elapsed) +
           " s";
}

// ---------------------------------------------------------------------------
// 7. NMS properties
// ---------------------------------------------------------------------------

std::string criterion_nms() {
    SeededRng rng(0x4E4D);
    for (int t = 0; t < 10000; ++t) {
        const int n = static_cast<int>(rng.uniform01() * 10);
        std::vector<Detection> dets;
        for (int i = 0; i < n; ++i) {
            const double x = rng.uniform(0, 40), y = rng.uniform(0, 40);
            dets.push_back({"f0", "vehicle",
                            {x, y, x + rng.uniform(2, 15), y + rng.uniform(2, 15)},
                            (1 + static_cast<int>(rng.uniform01() * 8)) / 8.0});
        }
        const double threshold = 0.1 + 0.8 * rng.uniform01();
        const auto kept = nms(dets, threshold);
        require(kept.size() <= dets.size(), "NMS grew the set");
        for (std::size_t i = 0; i < kept.size(); ++i) {
            if (i > 0) require(kept[i].score <= kept[i - 1].score, "NMS order broken");
            for (std::size_t j = i + 1; j < kept.size(); ++j) {
                require(iou(kept[i].box, kept[j].box) <= threshold,
                        "survivors overlap above threshold");
            }
        }
        const auto again = nms(kept, threshold);
        require(again.size() == kept.size(), "NMS not idempotent (size)");
        for (std::size_t i = 0; i < kept.size(); ++i) {
            require(again[i].box == kept[i].box && again[i].score == kept[i].score,
                    "NMS not idempotent (content)");
        }
    }
    return "10000 random sets: subset, pairwise <= threshold, idempotent";
}

// ---------------------------------------------------------------------------
// 8. Bench harness with a known injected delay
// ---------------------------------------------------------------------------

std::string criterion_bench() {
    const std::vector<int> frames(7, 0);
    const TimingReport report = time_stage(
        "busywait10ms",
        [](int frame) {
            spin_for(std::chrono::milliseconds(10));
            return static_cast<double>(frame);
        },
        frames, 100, 5);
    require(report.fps >= 90.0 && report.fps <= 110.0,
            "fps " + fmt(report.fps) + " outside [90, 110]");
    require(report.fps == static_cast<double>(report.n_frames) / report.total_seconds,
            "fps identity violated");
    return "injected 10 ms stage over 100 frames: fps " + fmt(report.fps);
}

// ---------------------------------------------------------------------------
// 9. Format round trips
// ---------------------------------------------------------------------------

std::vector<char> slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Failure("cannot reopen " + path);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string criterion_formats() {
    const fs::path dir = fs::temp_directory_path() / "pollwir_acceptance";
    fs::create_directories(dir);
    auto at = [&](const std::string& name) { return (dir / name).string(); };

    // Canonical fixtures come from the synthetic pipeline.
    SceneSpec spec;
    spec.width = 16;
    spec.height = 12;
    spec.background = {120.0, 4.0, 0.1};
    spec.targets.push_back({{4, 4, 12, 10}, 200.0, 0.8, 0.3});
    spec.seed = 77;
    const Scene scene = generate_scene(spec, "f000");
    const QuadFrame quad = observe(scene.truth, 1.0, 78);

    // PGM.
    io::write_pgm16(at("plane.pgm"), io::to_pgm16(quad.i0));
    io::write_pgm16(at("plane2.pgm"), io::read_pgm16(at("plane.pgm")));
    require(slurp(at("plane.pgm")) == slurp(at("plane2.pgm")), "PGM round trip not byte-equal");

    // Stokes descriptor + raw.
    io::write_stokes(at("s1.json"), scene.truth);
    io::write_stokes(at("s2.json"), io::read_stokes(at("s1.json")));
    require(slurp(at("s1.json")) == slurp(at("s2.json")), "stokes descriptor differs");
    require(slurp(at("s1.raw")) == slurp(at("s2.raw")), "stokes raw differs");

    // Annotations / detections CSV.
    io::write_annotations(at("ann1.csv"), scene.labels);
    io::write_annotations(at("ann2.csv"), io::read_annotations(at("ann1.csv")));
    require(slurp(at("ann1.csv")) == slurp(at("ann2.csv")), "annotations CSV differs");

    const PolarFrame polar = compute_polar(compute_stokes(quad));
    BlobParams params;
    params.min_area = 4;
    const auto dets = detect_blobs(polar, params, "f000");
    require(!dets.empty(), "fixture produced no detections");
    io::write_detections(at("det1.csv"), dets);
    io::write_detections(at("det2.csv"), io::read_detections(at("det1.csv")));
    require(slurp(at("det1.csv")) == slurp(at("det2.csv")), "detections CSV differs");

    // EvalReport JSON.
    const EvalReport report = evaluate(dets, scene.labels);
    io::write_eval_report(at("rep1.json"), report);
    io::write_eval_report(at("rep2.json"), io::read_eval_report(at("rep1.json")));
    require(slurp(at("rep1.json")) == slurp(at("rep2.json")), "eval report JSON differs");

    return "PGM, stokes raw+descriptor, CSVs, report JSON all byte-identical";
}

}  // namespace

int main() {
    struct Criterion {
        std::string name;
        std::function<std::string()> run;
    };
    const std::vector<Criterion> criteria = {
        {"stokes-round-trip", criterion_stokes_round_trip},
        {"polar-formulas", criterion_polar_formulas},
        {"iou", criterion_iou},
        {"ap-oracle-equivalence", criterion_ap_oracle},
        {"greedy-matching", criterion_matching},
        {"end-to-end-synthetic", criterion_end_to_end},
        {"nms-properties", criterion_nms},
        {"bench-harness", criterion_bench},
        {"format-round-trips", criterion_formats},
    };

    int failures = 0;
    for (const Criterion& c : criteria) {
        try {
            const std::string detail = c.run();
            std::printf("PASS %-24s %s\n", c.name.c_str(), detail.c_str());
        } catch (const std::exception& e) {
            std::printf("FAIL %-24s %s\n", c.name.c_str(), e.what());
            ++failures;
        }
        std::fflush(stdout);
    }
    if (failures > 0) {
        std::printf("%d of %zu criteria failed\n", failures, criteria.size());
        return 1;
    }
    std::printf("all %zu criteria passed\n", criteria.size());
    return 0;
}
