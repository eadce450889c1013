#ifndef FUSEDMM_PERF_HPP
#define FUSEDMM_PERF_HPP

#include <algorithm>
#include <cstdint>
#include <limits>
#include <stdexcept>

namespace fusedmm {

// Analytical model. Byte constants follow the 4-byte value / 8-byte index
// accounting of the estimates; memory_estimate_sized accepts actual widths.
struct PerfEstimate {
    std::int64_t flops = 0;
    std::int64_t bytes_moved = 0;
    double ai_lower_bound = 0.0;  // FLOP/byte; lower bound, not a prediction
    std::int64_t mem_fused_bytes = 0;
    std::int64_t mem_unfused_extra_bytes = 0;
};

// AI > delta / (3*delta/d + 2 + delta)  ==  1 / (3/d + 2/delta + 1).
// Monotone increasing in both arguments, bounded in (0, 1).
inline double arithmetic_intensity(double avg_degree, std::int64_t d) {
    if (avg_degree <= 0.0 || d < 1)
        throw std::invalid_argument("arithmetic_intensity: inputs must be positive");
    return 1.0 / (3.0 / static_cast<double>(d) + 2.0 / avg_degree + 1.0);
}

// 2d for the dot, 2d for the multiply-accumulate, per stored edge.
inline std::int64_t flop_count(std::int64_t nnz, std::int64_t d) {
    return 4 * d * nnz;
}

struct MemoryEstimate {
    std::int64_t fused_bytes = 0;
    std::int64_t unfused_extra_bytes = 0;
};

// Fused: X and Z at 4 bytes (8md), Y (4nd), A streamed once (12nnz).
// Unfused vector messages add 12 bytes per materialized entry: 12*nnz*d.
inline MemoryEstimate memory_estimate(std::int64_t m, std::int64_t n,
                                      std::int64_t d, std::int64_t nnz) {
    MemoryEstimate e;
    e.fused_bytes = 8 * m * d + 4 * n * d + 12 * nnz;
    e.unfused_extra_bytes = 12 * nnz * d;
    return e;
}

// Same estimate with caller-supplied scalar and index widths.
inline MemoryEstimate memory_estimate_sized(std::int64_t m, std::int64_t n,
                                            std::int64_t d, std::int64_t nnz,
                                            std::int64_t value_bytes,
                                            std::int64_t index_bytes) {
    MemoryEstimate e;
    e.fused_bytes = 2 * m * d * value_bytes + n * d * value_bytes +
                    nnz * (value_bytes + index_bytes);
    e.unfused_extra_bytes = nnz * d * (value_bytes + index_bytes);
    return e;
}

inline PerfEstimate perf_estimate(std::int64_t m, std::int64_t n,
                                  std::int64_t d, std::int64_t nnz) {
    PerfEstimate e;
    e.flops = flop_count(nnz, d);
    // denominator of the AI bound: A once, X and Z once, Y per edge
    e.bytes_moved = 12 * nnz + 8 * m * d + 4 * nnz * d;
    if (m > 0 && nnz > 0)
        e.ai_lower_bound =
            arithmetic_intensity(static_cast<double>(nnz) / static_cast<double>(m), d);
    auto mem = memory_estimate(m, n, d, nnz);
    e.mem_fused_bytes = mem.fused_bytes;
    e.mem_unfused_extra_bytes = mem.unfused_extra_bytes;
    return e;
}

struct RooflineReport {
    double achieved_gflops = 0.0;
    double attainable_gflops = 0.0;  // min(peak, AI * bandwidth)
    double efficiency = 0.0;
};

inline RooflineReport roofline(const PerfEstimate& est, double measured_seconds,
                               double bandwidth_gbps,
                               double peak_gflops =
                                   std::numeric_limits<double>::infinity()) {
    if (measured_seconds <= 0.0)
        throw std::invalid_argument("roofline: measured_seconds must be > 0");
    RooflineReport r;
    r.achieved_gflops = static_cast<double>(est.flops) / measured_seconds / 1e9;
    r.attainable_gflops = std::min(peak_gflops, est.ai_lower_bound * bandwidth_gbps);
    r.efficiency = r.attainable_gflops > 0.0
                       ? r.achieved_gflops / r.attainable_gflops
                       : 0.0;
    return r;
}

}  // namespace fusedmm

#endif  // FUSEDMM_PERF_HPP
