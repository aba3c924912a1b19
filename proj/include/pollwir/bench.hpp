#pragma once

/**
 * @file bench.hpp
 * @brief Throughput harness: average per-frame processing time over a frame
 *        batch, reported as fps. Warmup frames run untimed; the timed
 *        region uses a monotonic clock and every stage output is consumed
 *        before the stop timestamp so nothing can be optimised away or
 *        deferred.
 */

#include <atomic>
#include <chrono>
#include <cstdint>
#include <string>
#include <thread>
#include <vector>

#include "pollwir/boxes.hpp"
#include "pollwir/errors.hpp"
#include "pollwir/polarimetry.hpp"

namespace pollwir {

struct TimingReport {
    std::string stage_name;
    long n_frames = 0;
    double total_seconds = 0.0;
    double mean_ms_per_frame = 0.0;  // 1000 * total_seconds / n_frames
    double fps = 0.0;                // n_frames / total_seconds
    long warmup_frames = 0;
    bool frames_cycled = false;      // input shorter than warmup + n
};

namespace detail {

inline std::atomic<std::uint64_t>& bench_sink() {
    static std::atomic<std::uint64_t> sink{0};
    return sink;
}

inline void consume_bits(double v) {
    std::uint64_t bits;
    static_assert(sizeof(bits) == sizeof(v));
    __builtin_memcpy(&bits, &v, sizeof(bits));
    bench_sink().fetch_add(bits, std::memory_order_relaxed);
}

// Digest overloads force materialisation of each stage result type.
inline void bench_digest(double v) { consume_bits(v); }
inline void bench_digest(const PlaneF& p) {
    if (!p.empty()) consume_bits(p[0] + p[p.size() - 1]);
}
inline void bench_digest(const QuadFrame& q) {
    bench_digest(q.i0);
    bench_digest(q.i135);
}
inline void bench_digest(const StokesFrame& s) {
    bench_digest(s.I);
    bench_digest(s.U);
}
inline void bench_digest(const PolarFrame& p) {
    bench_digest(p.P);
    bench_digest(p.phi);
}
inline void bench_digest(const Rgb8Image& img) {
    if (!img.rgb.empty()) consume_bits(static_cast<double>(img.rgb.front() + img.rgb.back()));
}
inline void bench_digest(const ChannelStack& s) {
    if (!s.planes[0].empty()) consume_bits(static_cast<double>(s.planes[0][0]));
}
inline void bench_digest(const std::vector<Detection>& dets) {
    double acc = static_cast<double>(dets.size());
    for (const Detection& d : dets) acc += d.score + d.box.x_min;
    consume_bits(acc);
}

}  // namespace detail

/// Runs `warmup` untimed calls of `stage`, then times `n` calls with a
/// monotonic clock. The frame list is cycled when shorter than warmup + n
/// (recorded in the report). Report arithmetic is derived from
/// (n, total_seconds) so the fps and mean-ms identities hold by
/// construction.
template <typename Frame, typename Stage>
TimingReport time_stage(const std::string& stage_name, Stage&& stage,
                        const std::vector<Frame>& frames, long n = 100, long warmup = 5) {
    if (frames.empty()) throw ArgumentError("time_stage requires at least one frame");
    if (n < 1) throw ArgumentError("time_stage requires n >= 1");
    if (warmup < 0) throw ArgumentError("warmup must be non-negative");

    using clock = std::chrono::steady_clock;
    const std::size_t nframes = frames.size();
    std::size_t cursor = 0;
    auto next = [&]() -> const Frame& {
        const Frame& f = frames[cursor];
        cursor = (cursor + 1) % nframes;
        return f;
    };

    for (long i = 0; i < warmup; ++i) detail::bench_digest(stage(next()));

    const auto start = clock::now();
    for (long i = 0; i < n; ++i) detail::bench_digest(stage(next()));
    const auto stop = clock::now();

    TimingReport report;
    report.stage_name = stage_name;
    report.n_frames = n;
    report.total_seconds = std::chrono::duration<double>(stop - start).count();
    report.mean_ms_per_frame = 1000.0 * report.total_seconds / static_cast<double>(n);
    report.fps = static_cast<double>(n) / report.total_seconds;
    report.warmup_frames = warmup;
    report.frames_cycled = static_cast<std::size_t>(warmup + n) > nframes;
    return report;
}

/// Opt-in parallel mode: aggregate throughput over a worker pool, labelled
/// "(parallel)" in the report so it cannot be confused with single-thread
/// latency. Warmup runs on the calling thread.
template <typename Frame, typename Stage>
TimingReport time_stage_parallel(const std::string& stage_name, Stage&& stage,
                                 const std::vector<Frame>& frames, long n = 100,
                                 long warmup = 5, unsigned threads = 0) {
    if (frames.empty()) throw ArgumentError("time_stage requires at least one frame");
    if (n < 1) throw ArgumentError("time_stage requires n >= 1");
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());

    using clock = std::chrono::steady_clock;
    for (long i = 0; i < warmup; ++i) {
        detail::bench_digest(stage(frames[static_cast<std::size_t>(i) % frames.size()]));
    }
    std::atomic<long> next{0};
    const auto start = clock::now();
    {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (unsigned t = 0; t < threads; ++t) {
            pool.emplace_back([&]() {
                for (;;) {
                    const long i = next.fetch_add(1, std::memory_order_relaxed);
                    if (i >= n) break;
                    detail::bench_digest(stage(frames[static_cast<std::size_t>(i) % frames.size()]));
                }
            });
        }
        for (std::thread& t : pool) t.join();
    }
    const auto stop = clock::now();

    TimingReport report;
    report.stage_name = stage_name + " (parallel)";
    report.n_frames = n;
    report.total_seconds = std::chrono::duration<double>(stop - start).count();
    report.mean_ms_per_frame = 1000.0 * report.total_seconds / static_cast<double>(n);
    report.fps = static_cast<double>(n) / report.total_seconds;
    report.warmup_frames = warmup;
    report.frames_cycled = static_cast<std::size_t>(warmup + n) > frames.size();
    return report;
}

/// Busy-wait on the monotonic clock; used to build stages with a known,
/// injected per-frame cost.
inline void spin_for(std::chrono::nanoseconds d) {
    const auto until = std::chrono::steady_clock::now() + d;
    while (std::chrono::steady_clock::now() < until) {
    }
}

inline std::string summary_line(const TimingReport& r) {
    return "stage=" + r.stage_name + " fps=" + std::to_string(r.fps) +
           " mean_ms=" + std::to_string(r.mean_ms_per_frame);
}

}  // namespace pollwir
