#ifndef FUSEDMM_KERNEL_HPP
#define FUSEDMM_KERNEL_HPP

#include <chrono>
#include <cstddef>
#include <stdexcept>
#include <thread>
#include <vector>

#include "fusedmm/matrix.hpp"
#include "fusedmm/ops.hpp"

namespace fusedmm {

// Contiguous 1D row partition: worker i owns rows [boundaries[i], boundaries[i+1]).
struct PartitionPlan {
    std::vector<index_t> boundaries;  // length t+1
    int workers = 0;
};

// Greedy prefix split: boundary i is the smallest row index whose prefix nnz
// reaches i*nnz/t. Single O(m) scan. Guarantees
// nnz(part) <= nnz/t + max_row_nnz. When nnz = 0, rows split evenly.
template <typename T>
PartitionPlan part1d(const CsrMatrix<T>& A, int t) {
    if (t < 1) throw std::invalid_argument("part1d: worker count must be >= 1");
    const index_t m = A.nrows;
    const index_t nnz = A.nnz();
    PartitionPlan plan;
    plan.workers = t;
    plan.boundaries.resize(t + 1);
    plan.boundaries[0] = 0;
    plan.boundaries[t] = m;

    if (nnz == 0) {
        for (int i = 1; i < t; ++i)
            plan.boundaries[i] = m * i / t;
        return plan;
    }
    index_t row = 0;
    for (int i = 1; i < t; ++i) {
        // smallest row with prefix*t >= i*nnz; prefix at row r is row_ptr[r]
        while (row < m && A.row_ptr[row] * static_cast<index_t>(t) <
                              static_cast<index_t>(i) * nnz)
            ++row;
        plan.boundaries[i] = row;
    }
    return plan;
}

struct KernelStats {
    std::size_t aux_bytes = 0;  // peak workspace allocated across workers
    int threads = 0;
    KnownPattern pattern = KnownPattern::GENERIC;
};

namespace detail {

// Fixed workspace panel, in scalars. Workers allocate max(2d, panel) so the
// footprint stays flat over the d range the blocked paths cover.
inline constexpr index_t kWorkspacePanel = 512;

// Dimensions beyond this are streamed rather than held in the accumulator
// panel (large-d fallback).
inline constexpr index_t kBlockedDimLimit = 256;

// Below this the blocked fast paths are not worth their lane bookkeeping;
// fused_mm runs the generic loop, which also keeps small-d reductions in
// plain storage order.
inline constexpr index_t kSpecializeDimMin = 32;

template <typename T>
std::size_t workspace_scalars(index_t d) {
    return static_cast<std::size_t>(std::max<index_t>(2 * d, kWorkspacePanel));
}

}  // namespace detail

// One vertex update, generic path: runs the five slots per stored neighbor in
// storage order. scratch must hold at least 2*d scalars.
template <typename T>
void update_u(std::span<const index_t> cols, std::span<const T> vals,
              std::span<const T> x_u, const DenseMatrix<T>& Y,
              const OpSpec<T>& spec, std::span<T> z_u, std::span<T> scratch) {
    const index_t d = static_cast<index_t>(x_u.size());
    const T identity = aop_identity(spec);
    for (index_t j = 0; j < d; ++j) z_u[j] = identity;

    std::span<T> tmp = scratch.subspan(0, d);
    std::span<T> w = scratch.subspan(d, d);

    for (std::size_t k = 0; k < cols.size(); ++k) {
        const index_t v = cols[k];
        const T a_uv = vals[k];
        std::span<const T> y_v = Y.row(v);
        apply_vop(spec, x_u, y_v, tmp);
        if (spec.scalar_message()) {
            T s = apply_rop(spec, std::span<const T>(tmp));
            T h = apply_sop(spec, s, a_uv);
            apply_mop(spec, h, y_v, a_uv, w);
        } else {
            apply_sop(spec, tmp, a_uv);
            apply_mop(spec, std::span<const T>(tmp), y_v, a_uv, w);
        }
        apply_aop(spec, z_u, std::span<const T>(w));
    }
}

namespace detail {

// Blocked inner loops for the known patterns. The d dimension is tiled in
// lanes of width W; x_u and the z_u accumulator live in the workspace panel
// across the whole neighbor loop and Z is stored once per row. Per-edge
// reductions keep one partial sum per lane across blocks and combine them
// block-major then lane-order, which lets the lane loop vectorize. That
// reassociates the d-dimension relative to the generic path (tolerance, not
// bitwise); the neighbor dimension stays in storage order.
template <int W, typename T>
void row_sigmoid_embed(std::span<const index_t> cols, std::span<const T> vals,
                       std::span<const T> x_u, const DenseMatrix<T>& Y,
                       std::span<T> z_acc) {
    (void)vals;  // scalar-message MUL: edge weight enters via SOP only
    const index_t d = static_cast<index_t>(x_u.size());
    const index_t db = std::min(d, kBlockedDimLimit);
    const index_t full = db - db % W;
    for (index_t j = 0; j < db; ++j) z_acc[j] = T(0);

    const T* xu = x_u.data();
    for (std::size_t k = 0; k < cols.size(); ++k) {
        const T* yv = Y.row(cols[k]).data();
        T acc[W] = {};
        for (index_t b = 0; b < full; b += W)
            for (int l = 0; l < W; ++l) acc[l] += xu[b + l] * yv[b + l];
        T dot = T(0);
        for (int l = 0; l < W; ++l) dot += acc[l];
        for (index_t j = full; j < d; ++j) dot += xu[j] * yv[j];
        const T h = sigmoid(dot);
        std::span<const T> y_v(yv, static_cast<std::size_t>(d));
        for (index_t b = 0; b < full; b += W)
            for (int l = 0; l < W; ++l) z_acc[b + l] += h * y_v[b + l];
        for (index_t j = full; j < db; ++j) z_acc[j] += h * y_v[j];
    }
}

template <int W, typename T>
void row_spmm_gcn(std::span<const index_t> cols, std::span<const T> vals,
                  index_t d, const DenseMatrix<T>& Y, std::span<T> z_acc) {
    const index_t db = std::min(d, kBlockedDimLimit);
    const index_t full = db - db % W;
    for (index_t j = 0; j < db; ++j) z_acc[j] = T(0);
    for (std::size_t k = 0; k < cols.size(); ++k) {
        std::span<const T> y_v = Y.row(cols[k]);
        const T a = vals[k];
        for (index_t b = 0; b < full; b += W)
            for (int l = 0; l < W; ++l) z_acc[b + l] += a * y_v[b + l];
        for (index_t j = full; j < db; ++j) z_acc[j] += a * y_v[j];
    }
}

template <int W, typename T>
void row_fr_layout(std::span<const index_t> cols, std::span<const T> vals,
                   std::span<const T> x_u, const DenseMatrix<T>& Y, T alpha,
                   std::span<T> z_acc) {
    (void)vals;
    const index_t d = static_cast<index_t>(x_u.size());
    const index_t db = std::min(d, kBlockedDimLimit);
    const index_t full = db - db % W;
    for (index_t j = 0; j < db; ++j) z_acc[j] = T(0);
    const T* xu = x_u.data();
    for (std::size_t k = 0; k < cols.size(); ++k) {
        const T* yv = Y.row(cols[k]).data();
        T acc[W] = {};
        for (index_t b = 0; b < full; b += W)
            for (int l = 0; l < W; ++l) {
                const T e = xu[b + l] + yv[b + l];
                acc[l] += e * e;
            }
        T sq = T(0);
        for (int l = 0; l < W; ++l) sq += acc[l];
        for (index_t j = full; j < d; ++j) {
            const T e = xu[j] + yv[j];
            sq += e * e;
        }
        const T h = alpha * std::sqrt(sq);
        std::span<const T> y_v(yv, static_cast<std::size_t>(d));
        for (index_t b = 0; b < full; b += W)
            for (int l = 0; l < W; ++l) z_acc[b + l] += h * y_v[b + l];
        for (index_t j = full; j < db; ++j) z_acc[j] += h * y_v[j];
    }
}

// Streamed handling of dimensions past kBlockedDimLimit: a second sweep over
// the row's neighbors accumulating directly into the stored Z row.
template <typename T>
void row_tail_streamed(KnownPattern pattern, std::span<const index_t> cols,
                       std::span<const T> vals, std::span<const T> x_u,
                       const DenseMatrix<T>& Y, T alpha, std::span<T> z_row) {
    const index_t d = static_cast<index_t>(x_u.size());
    for (index_t j = kBlockedDimLimit; j < d; ++j) z_row[j] = T(0);
    for (std::size_t k = 0; k < cols.size(); ++k) {
        std::span<const T> y_v = Y.row(cols[k]);
        T h;
        switch (pattern) {
            case KnownPattern::SIGMOID_EMBED: {
                T dot = T(0);
                for (index_t j = 0; j < d; ++j) dot += x_u[j] * y_v[j];
                h = sigmoid(dot);
                break;
            }
            case KnownPattern::FR_LAYOUT: {
                T sq = T(0);
                for (index_t j = 0; j < d; ++j) {
                    const T e = x_u[j] + y_v[j];
                    sq += e * e;
                }
                h = alpha * std::sqrt(sq);
                break;
            }
            default:
                h = vals[k];
                break;
        }
        for (index_t j = kBlockedDimLimit; j < d; ++j) z_row[j] += h * y_v[j];
    }
}

template <int W, typename T>
void run_specialized_rows(KnownPattern pattern, const CsrMatrix<T>& A,
                          const DenseMatrix<T>& X, const DenseMatrix<T>& Y,
                          T alpha, index_t row_begin, index_t row_end,
                          DenseMatrix<T>& Z, std::span<T> workspace) {
    const index_t d = X.dim;
    const index_t db = std::min(d, kBlockedDimLimit);
    std::span<T> z_acc = workspace.subspan(0, db);
    for (index_t u = row_begin; u < row_end; ++u) {
        auto cols = A.row_cols(u);
        auto vals = A.row_vals(u);
        std::span<const T> x_u = X.row(u);
        switch (pattern) {
            case KnownPattern::SIGMOID_EMBED:
                row_sigmoid_embed<W>(cols, vals, x_u, Y, z_acc);
                break;
            case KnownPattern::SPMM_GCN:
                row_spmm_gcn<W>(cols, vals, d, Y, z_acc);
                break;
            case KnownPattern::FR_LAYOUT:
                row_fr_layout<W>(cols, vals, x_u, Y, alpha, z_acc);
                break;
            default:
                throw std::logic_error("run_specialized_rows: generic pattern");
        }
        std::span<T> z_row = Z.row(u);
        for (index_t j = 0; j < db; ++j) z_row[j] = z_acc[j];
        if (d > kBlockedDimLimit)
            row_tail_streamed(pattern, cols, vals, x_u, Y, alpha, z_row);
    }
}

template <typename T>
void run_generic_rows(const CsrMatrix<T>& A, const DenseMatrix<T>& X,
                      const DenseMatrix<T>& Y, const OpSpec<T>& spec,
                      index_t row_begin, index_t row_end, DenseMatrix<T>& Z,
                      std::span<T> workspace) {
    for (index_t u = row_begin; u < row_end; ++u)
        update_u(A.row_cols(u), A.row_vals(u), X.row(u), Y, spec, Z.row(u),
                 workspace);
}

template <typename T>
void check_dims(const CsrMatrix<T>& A, const DenseMatrix<T>& X,
                const DenseMatrix<T>& Y) {
    if (X.nrows != A.nrows)
        throw std::invalid_argument("fused_mm: X.nrows != A.nrows");
    if (X.dim != Y.dim)
        throw std::invalid_argument("fused_mm: X.dim != Y.dim");
    if (Y.nrows < A.ncols) {
        index_t max_col = -1;
        for (index_t c : A.col_idx) max_col = std::max(max_col, c);
        if (Y.nrows < max_col + 1)
            throw std::invalid_argument("fused_mm: Y has too few rows");
    }
}

}  // namespace detail

struct KernelOptions {
    int lane_width = 8;  // {4, 8, 16}; see tune_lane_width
};

// One-shot fused SDDMM+SpMM: Z[u,:] = update_u(a_u, x_u, Y, spec) for every
// row, with no per-edge message buffer. Workers own disjoint row ranges of
// A/X/Z and share read-only Y; per-worker auxiliary memory is O(d).
// Per-row accumulation order is storage order regardless of t, so the output
// is bitwise identical for every worker count. Known patterns dispatch to the
// blocked paths once d reaches kSpecializeDimMin; below that the generic loop
// is faster anyway and keeps reductions in plain order.
template <typename T>
DenseMatrix<T> fused_mm(const CsrMatrix<T>& A, const DenseMatrix<T>& X,
                        const DenseMatrix<T>& Y, const OpSpec<T>& spec, int t,
                        KernelStats* stats = nullptr,
                        const KernelOptions& opts = {}) {
    detail::check_dims(A, X, Y);
    if (t < 1) throw std::invalid_argument("fused_mm: t must be >= 1");

    const index_t d = X.dim;
    DenseMatrix<T> Z(A.nrows, d);
    const KnownPattern pattern = pattern_of(spec);
    const PartitionPlan plan = part1d(A, t);
    const std::size_t ws_scalars = detail::workspace_scalars<T>(d);

    auto worker = [&](index_t lo, index_t hi, std::span<T> workspace) {
        if (pattern == KnownPattern::GENERIC || d < detail::kSpecializeDimMin) {
            detail::run_generic_rows(A, X, Y, spec, lo, hi, Z, workspace);
            return;
        }
        switch (opts.lane_width) {
            case 4:
                detail::run_specialized_rows<4>(pattern, A, X, Y, spec.alpha,
                                                lo, hi, Z, workspace);
                break;
            case 16:
                detail::run_specialized_rows<16>(pattern, A, X, Y, spec.alpha,
                                                 lo, hi, Z, workspace);
                break;
            default:
                detail::run_specialized_rows<8>(pattern, A, X, Y, spec.alpha,
                                                lo, hi, Z, workspace);
                break;
        }
    };

    std::vector<std::vector<T>> workspaces(t);
    for (auto& ws : workspaces) ws.resize(ws_scalars);

    if (t == 1) {
        worker(0, A.nrows, workspaces[0]);
    } else {
        std::vector<std::thread> threads;
        threads.reserve(t);
        for (int i = 0; i < t; ++i)
            threads.emplace_back(worker, plan.boundaries[i],
                                 plan.boundaries[i + 1],
                                 std::span<T>(workspaces[i]));
        for (auto& th : threads) th.join();
    }

    if (stats) {
        stats->aux_bytes = static_cast<std::size_t>(t) * ws_scalars * sizeof(T);
        stats->threads = t;
        stats->pattern = pattern;
    }
    return Z;
}

// Direct entry to a blocked fast path; pattern must not be GENERIC.
template <typename T>
DenseMatrix<T> fused_mm_specialized(KnownPattern pattern, const CsrMatrix<T>& A,
                                    const DenseMatrix<T>& X,
                                    const DenseMatrix<T>& Y, T alpha, int t,
                                    const KernelOptions& opts = {}) {
    OpSpec<T> spec;
    switch (pattern) {
        case KnownPattern::SIGMOID_EMBED:
            spec = {Vop::MUL, Rop::RSUM, Sop::SIGMOID, Mop::MUL, Aop::ASUM};
            break;
        case KnownPattern::SPMM_GCN:
            spec = {Vop::SEL2ND, Rop::NOOP, Sop::NOOP, Mop::MUL, Aop::ASUM};
            break;
        case KnownPattern::FR_LAYOUT:
            spec = {Vop::ADD, Rop::NORM, Sop::SCAL, Mop::MUL, Aop::ASUM};
            spec.alpha = alpha;
            break;
        default:
            throw std::invalid_argument(
                "fused_mm_specialized: pattern has no fast path");
    }
    return fused_mm(A, X, Y, spec, t, nullptr, opts);
}

// Micro-benchmark over the compiled lane widths; returns the fastest for the
// given problem shape on this machine.
template <typename T>
int tune_lane_width(const CsrMatrix<T>& A, const DenseMatrix<T>& X,
                    const DenseMatrix<T>& Y, const OpSpec<T>& spec, int t,
                    int repeats = 3) {
    using clock = std::chrono::steady_clock;
    int best_w = 8;
    double best_time = std::numeric_limits<double>::infinity();
    for (int w : {4, 8, 16}) {
        KernelOptions opts{w};
        (void)fused_mm(A, X, Y, spec, t, nullptr, opts);  // warm-up
        auto start = clock::now();
        for (int r = 0; r < repeats; ++r)
            (void)fused_mm(A, X, Y, spec, t, nullptr, opts);
        double secs = std::chrono::duration<double>(clock::now() - start).count();
        if (secs < best_time) {
            best_time = secs;
            best_w = w;
        }
    }
    return best_w;
}

}  // namespace fusedmm

#endif  // FUSEDMM_KERNEL_HPP
