#pragma once

/**
 * @file detector.hpp
 * @brief Baseline polarisation-blob detector: thresholds the degree of
 *        linear polarisation, extracts connected components and emits
 *        scored boxes. Man-made surfaces emit more strongly polarised
 *        LWIR radiation than background clutter, which is what this
 *        exploits. Also hosts greedy NMS.
 */

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <tuple>
#include <vector>

#include "pollwir/boxes.hpp"
#include "pollwir/errors.hpp"
#include "pollwir/polarimetry.hpp"

namespace pollwir {

struct BlobParams {
    double p_threshold = 0.5;  // DoLP cut, in (0,1)
    int min_area = 16;         // components smaller than this are dropped
    int connectivity = 8;      // 4 or 8
    double nms_iou = 0.5;      // in (0,1]

    void validate() const {
        if (!(p_threshold > 0.0) || !(p_threshold < 1.0)) {
            throw ArgumentError("p_threshold must lie in (0, 1)");
        }
        if (min_area < 1) throw ArgumentError("min_area must be >= 1");
        if (connectivity != 4 && connectivity != 8) {
            throw ArgumentError("connectivity must be 4 or 8");
        }
        if (!(nms_iou > 0.0) || nms_iou > 1.0) {
            throw ArgumentError("nms_iou must lie in (0, 1]");
        }
    }
};

/// Greedy non-maximum suppression: repeatedly keep the highest-scored
/// remaining detection and discard every remaining detection whose IoU with
/// it exceeds iou_threshold. Ties on score break by frame_id, then
/// lexicographic box coordinates, then input order, so output is
/// deterministic. Survivors pairwise satisfy IoU <= iou_threshold and come
/// back sorted by descending score.
inline std::vector<Detection> nms(const std::vector<Detection>& dets, double iou_threshold) {
    if (!(iou_threshold > 0.0) || iou_threshold > 1.0) {
        throw ArgumentError("iou_threshold must lie in (0, 1]");
    }
    std::vector<std::size_t> order(dets.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const Detection& da = dets[a];
        const Detection& db = dets[b];
        if (da.score != db.score) return da.score > db.score;
        if (da.frame_id != db.frame_id) return da.frame_id < db.frame_id;
        const auto ka = std::tie(da.box.x_min, da.box.y_min, da.box.x_max, da.box.y_max);
        const auto kb = std::tie(db.box.x_min, db.box.y_min, db.box.x_max, db.box.y_max);
        if (ka != kb) return ka < kb;
        return a < b;
    });
    std::vector<Detection> kept;
    for (std::size_t idx : order) {
        if (!std::isfinite(dets[idx].score)) {
            throw ValidationError("nms requires finite scores");
        }
        bool suppressed = false;
        for (const Detection& k : kept) {
            if (iou(dets[idx].box, k.box) > iou_threshold) {
                suppressed = true;
                break;
            }
        }
        if (!suppressed) kept.push_back(dets[idx]);
    }
    return kept;
}

namespace detail {

/// Connected components over a binary mask, 4- or 8-connectivity, BFS with
/// row-major seed order so labelling is deterministic.
struct Component {
    int x_min, y_min, x_max, y_max;  // inclusive pixel bounds
    long area;
    double p_sum;
};

inline std::vector<Component> connected_components(const Plane<std::uint8_t>& mask,
                                                   const PlaneF& weight, int connectivity) {
    const int w = mask.width(), h = mask.height();
    std::vector<char> seen(mask.size(), 0);
    std::vector<Component> comps;
    std::vector<int> stack;
    const bool diag = connectivity == 8;
    for (int sy = 0; sy < h; ++sy) {
        for (int sx = 0; sx < w; ++sx) {
            const int start = sy * w + sx;
            if (!mask[start] || seen[start]) continue;
            Component c{sx, sy, sx, sy, 0, 0.0};
            stack.clear();
            stack.push_back(start);
            seen[start] = 1;
            while (!stack.empty()) {
                const int cur = stack.back();
                stack.pop_back();
                const int cx = cur % w, cy = cur / w;
                c.x_min = std::min(c.x_min, cx);
                c.x_max = std::max(c.x_max, cx);
                c.y_min = std::min(c.y_min, cy);
                c.y_max = std::max(c.y_max, cy);
                ++c.area;
                c.p_sum += weight[cur];
                for (int dy = -1; dy <= 1; ++dy) {
                    for (int dx = -1; dx <= 1; ++dx) {
                        if (dx == 0 && dy == 0) continue;
                        if (!diag && dx != 0 && dy != 0) continue;
                        const int nx = cx + dx, ny = cy + dy;
                        if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
                        const int n = ny * w + nx;
                        if (mask[n] && !seen[n]) {
                            seen[n] = 1;
                            stack.push_back(n);
                        }
                    }
                }
            }
            comps.push_back(c);
        }
    }
    return comps;
}

}  // namespace detail

/// Thresholds P at params.p_threshold over valid pixels, drops components
/// smaller than min_area, and emits each survivor's tight pixel bounding
/// box scored by its mean P (mean is robust to single hot pixels). Boxes
/// use continuous coordinates, so pixel (x, y) spans [x, x+1) x [y, y+1).
/// Results pass through nms and come back sorted by descending score.
inline std::vector<Detection> detect_blobs(const PolarFrame& polar, const BlobParams& params,
                                           const std::string& frame_id = "",
                                           const std::string& class_label = "vehicle") {
    params.validate();
    Plane<std::uint8_t> mask(polar.width(), polar.height());
    for (std::size_t i = 0; i < mask.size(); ++i) {
        mask[i] = (polar.valid[i] && polar.P[i] >= params.p_threshold) ? 1 : 0;
    }
    const auto comps = detail::connected_components(mask, polar.P, params.connectivity);
    std::vector<Detection> dets;
    for (const auto& c : comps) {
        if (c.area < params.min_area) continue;
        Detection d;
        d.frame_id = frame_id;
        d.class_label = class_label;
        d.box = {static_cast<double>(c.x_min), static_cast<double>(c.y_min),
                 static_cast<double>(c.x_max + 1), static_cast<double>(c.y_max + 1)};
        d.score = c.p_sum / static_cast<double>(c.area);
        dets.push_back(d);
    }
    return nms(dets, params.nms_iou);
}

/// Qualitative-results view: detections at or above score_threshold drawn
/// in red over a render, ground truth (when given) in white. The 0.7
/// default mirrors the usual display threshold for this kind of imagery.
inline Rgb8Image render_overlay(Rgb8Image img, const std::vector<Detection>& dets,
                                const std::vector<GroundTruth>& gts = {},
                                double score_threshold = 0.7) {
    for (const GroundTruth& g : gts) {
        draw_box(img, g.box.x_min, g.box.y_min, g.box.x_max, g.box.y_max, 255, 255, 255);
    }
    for (const Detection& d : dets) {
        if (d.score < score_threshold) continue;
        draw_box(img, d.box.x_min, d.box.y_min, d.box.x_max, d.box.y_max, 255, 48, 48);
    }
    return img;
}

}  // namespace pollwir
