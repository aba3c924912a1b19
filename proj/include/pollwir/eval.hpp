#pragma once

/**
 * @file eval.hpp
 * @brief PASCAL-VOC-style detection scoring: greedy IoU matching,
 *        precision-recall curves, average precision and mAP.
 *
 * Matching uses strict IoU > threshold (a detection at exactly the
 * threshold is a false positive). Tie-breaking everywhere is deterministic
 * so repeated runs produce byte-identical reports.
 */

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "pollwir/boxes.hpp"
#include "pollwir/errors.hpp"

namespace pollwir {

enum class ApMethod { ALL_POINT, ELEVEN_POINT };

inline std::string to_string(ApMethod m) {
    return m == ApMethod::ALL_POINT ? "ALL_POINT" : "ELEVEN_POINT";
}

struct PRPoint {
    double score_threshold = 0.0;
    double precision = 1.0;  // defined as 1 when tp+fp = 0
    double recall = 0.0;     // NaN when n_gt = 0 (undefined)
    long tp = 0;
    long fp = 0;
    long fn = 0;
};

/// Output of match_detections. Detections are reported in rank order
/// (descending score, ties by frame_id then input order); order[k] is the
/// input index of the k-th ranked detection and is_tp[k] its label.
struct MatchResult {
    std::vector<std::size_t> order;
    std::vector<char> is_tp;
    std::vector<double> scores;     // rank order, non-increasing
    std::vector<char> gt_matched;   // by ground-truth input index
};

struct ClassEval {
    double ap = 0.0;
    std::vector<PRPoint> pr;
    long n_gt = 0;
    long n_det = 0;
    bool recall_undefined = false;  // n_gt = 0 with detections present
};

struct EvalReport {
    double iou_threshold = 0.5;
    ApMethod ap_method = ApMethod::ALL_POINT;
    double map = 0.0;
    std::map<std::string, ClassEval> per_class;
};

// ---------------------------------------------------------------------------

/// Greedy per-frame matching for a single class. Each ranked detection is a
/// TP iff the best-IoU unmatched ground truth in its frame overlaps it with
/// IoU strictly greater than iou_threshold; the ground truth is then
/// consumed. Every detection receives exactly one label; every ground truth
/// is matched at most once.
inline MatchResult match_detections(const std::vector<Detection>& dets,
                                    const std::vector<GroundTruth>& gts,
                                    double iou_threshold) {
    if (!(iou_threshold > 0.0) || iou_threshold > 1.0) {
        throw ArgumentError("iou_threshold must lie in (0, 1]");
    }
    MatchResult res;
    res.order.resize(dets.size());
    std::iota(res.order.begin(), res.order.end(), std::size_t{0});
    std::sort(res.order.begin(), res.order.end(), [&](std::size_t a, std::size_t b) {
        if (dets[a].score != dets[b].score) return dets[a].score > dets[b].score;
        if (dets[a].frame_id != dets[b].frame_id) return dets[a].frame_id < dets[b].frame_id;
        return a < b;
    });

    // Frame -> ground-truth indices, in input order.
    std::map<std::string, std::vector<std::size_t>> gts_by_frame;
    for (std::size_t g = 0; g < gts.size(); ++g) gts_by_frame[gts[g].frame_id].push_back(g);

    res.gt_matched.assign(gts.size(), 0);
    res.is_tp.reserve(dets.size());
    res.scores.reserve(dets.size());
    for (std::size_t k = 0; k < res.order.size(); ++k) {
        const Detection& det = dets[res.order[k]];
        res.scores.push_back(det.score);
        double best_iou = 0.0;
        std::size_t best_g = gts.size();
        auto it = gts_by_frame.find(det.frame_id);
        if (it != gts_by_frame.end()) {
            for (std::size_t g : it->second) {
                if (res.gt_matched[g]) continue;
                const double ov = iou(det.box, gts[g].box);
                if (ov > best_iou) {
                    best_iou = ov;
                    best_g = g;
                }
            }
        }
        if (best_g < gts.size() && best_iou > iou_threshold) {
            res.is_tp.push_back(1);
            res.gt_matched[best_g] = 1;
        } else {
            res.is_tp.push_back(0);
        }
    }
    return res;
}

/// Cumulative precision/recall swept down through every distinct detection
/// score. Detections tied on score enter the counts together (one PR point
/// per distinct score). Recall is NaN when n_gt = 0.
inline std::vector<PRPoint> precision_recall(const MatchResult& match, long n_gt) {
    if (n_gt < 0) throw ArgumentError("n_gt must be non-negative");
    std::vector<PRPoint> pr;
    long tp = 0, fp = 0;
    const std::size_t n = match.is_tp.size();
    for (std::size_t k = 0; k < n; ++k) {
        if (match.is_tp[k]) ++tp; else ++fp;
        // Flush only at distinct-score boundaries.
        if (k + 1 < n && match.scores[k + 1] == match.scores[k]) continue;
        PRPoint pt;
        pt.score_threshold = match.scores[k];
        pt.tp = tp;
        pt.fp = fp;
        pt.fn = n_gt > 0 ? n_gt - tp : 0;
        pt.precision = (tp + fp) > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fp)
                                     : 1.0;
        pt.recall = n_gt > 0 ? static_cast<double>(tp) / static_cast<double>(n_gt)
                             : std::numeric_limits<double>::quiet_NaN();
        pr.push_back(pt);
    }
    return pr;
}

/// Area under the monotone (right-enveloped) interpolated precision over
/// recall (ALL_POINT), or the VOC 11-point mean of interpolated precision
/// at recalls {0, 0.1, ..., 1.0}.
inline double average_precision(const std::vector<PRPoint>& pr,
                                ApMethod method = ApMethod::ALL_POINT) {
    if (pr.empty()) return 0.0;
    if (std::isnan(pr.front().recall)) return 0.0;  // undefined recall, no mass
    const std::size_t n = pr.size();
    // Right-to-left running max gives the interpolated envelope.
    std::vector<double> env(n);
    double running = 0.0;
    for (std::size_t i = n; i-- > 0;) {
        running = std::max(running, pr[i].precision);
        env[i] = running;
    }
    if (method == ApMethod::ELEVEN_POINT) {
        double sum = 0.0;
        for (int k = 0; k <= 10; ++k) {
            const double r = static_cast<double>(k) / 10.0;
            double p = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                if (pr[i].recall >= r) {
                    p = env[i];
                    break;  // env is non-increasing; first qualifying point is max
                }
            }
            sum += p;
        }
        return sum / 11.0;
    }
    double ap = 0.0;
    double prev_recall = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (pr[i].recall > prev_recall) {
            ap += (pr[i].recall - prev_recall) * env[i];
            prev_recall = pr[i].recall;
        }
    }
    return ap;
}

/// Full protocol: per-class matching -> PR -> AP, aggregated into mAP over
/// the classes present in the ground truth. Classes appearing only in
/// detections are reported (ap 0, recall_undefined) but do not enter the
/// mean. Detections in frames absent from the ground truth match nothing
/// and score as FP.
inline EvalReport evaluate(const std::vector<Detection>& dets,
                           const std::vector<GroundTruth>& gts, double iou_threshold = 0.5,
                           ApMethod method = ApMethod::ALL_POINT) {
    EvalReport report;
    report.iou_threshold = iou_threshold;
    report.ap_method = method;

    std::set<std::string> classes;
    for (const auto& d : dets) classes.insert(d.class_label);
    for (const auto& g : gts) classes.insert(g.class_label);

    double ap_sum = 0.0;
    long gt_classes = 0;
    for (const auto& cls : classes) {
        std::vector<Detection> cls_dets;
        std::vector<GroundTruth> cls_gts;
        for (const auto& d : dets) {
            if (d.class_label == cls) cls_dets.push_back(d);
        }
        for (const auto& g : gts) {
            if (g.class_label == cls) cls_gts.push_back(g);
        }
        ClassEval ce;
        ce.n_gt = static_cast<long>(cls_gts.size());
        ce.n_det = static_cast<long>(cls_dets.size());
        const MatchResult match = match_detections(cls_dets, cls_gts, iou_threshold);
        ce.pr = precision_recall(match, ce.n_gt);
        ce.recall_undefined = (ce.n_gt == 0 && ce.n_det > 0);
        ce.ap = ce.recall_undefined ? 0.0 : average_precision(ce.pr, method);
        if (ce.n_gt > 0) {
            ap_sum += ce.ap;
            ++gt_classes;
        }
        report.per_class.emplace(cls, std::move(ce));
    }
    report.map = gt_classes > 0 ? ap_sum / static_cast<double>(gt_classes) : 0.0;
    return report;
}

}  // namespace pollwir
