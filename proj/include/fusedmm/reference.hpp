#ifndef FUSEDMM_REFERENCE_HPP
#define FUSEDMM_REFERENCE_HPP

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "fusedmm/matrix.hpp"
#include "fusedmm/ops.hpp"

namespace fusedmm {

enum class MessageShape { SCALAR, VECTOR };

// Materialized per-edge messages H. Same sparsity pattern as the source A;
// payload is one scalar per edge, or a d-vector per edge when ROP is NOOP.
// Edge values travel with H so the SpMM phase never re-reads A.
template <typename T>
struct SparseMessages {
    index_t nrows = 0;
    index_t ncols = 0;
    index_t dim = 1;  // payload vector length per edge (1 when scalar)
    MessageShape shape = MessageShape::SCALAR;
    std::vector<index_t> row_ptr;
    std::vector<index_t> col_idx;
    std::vector<T> payload;      // nnz (scalar) or nnz*dim (vector)
    std::vector<T> edge_values;  // a_uv, length nnz
    // Largest message tensor held at any point while building H, counting
    // payload scalars plus one 8-byte index per materialized entry.
    std::size_t peak_materialized_bytes = 0;

    index_t nnz() const { return row_ptr.empty() ? 0 : row_ptr.back(); }
};

// Unfused SDDMM phase: h_uv = sop(rop(vop(x_u, y_v))) per stored edge, with
// every intermediate materialized. VOP=MUL with ROP=RSUM is the classic
// dot-product SDDMM and produces the scalar H in one sweep; any other
// reduction first materializes the full per-edge VOP tensor (nnz*d values
// plus per-entry indices) the way separate-kernel frameworks do, then
// reduces it. ROP=NOOP yields vector messages.
template <typename T>
SparseMessages<T> sddmm(const CsrMatrix<T>& A, const DenseMatrix<T>& X,
                        const DenseMatrix<T>& Y, const OpSpec<T>& spec) {
    if (X.nrows != A.nrows || X.dim != Y.dim)
        throw std::invalid_argument("sddmm: dimension mismatch");
    const index_t d = X.dim;
    const index_t nnz = A.nnz();

    SparseMessages<T> H;
    H.nrows = A.nrows;
    H.ncols = A.ncols;
    H.row_ptr = A.row_ptr;
    H.col_idx = A.col_idx;
    H.edge_values = A.values;

    auto tensor_bytes = [](std::size_t entries, std::size_t scalars) {
        return scalars * sizeof(T) + entries * sizeof(index_t);
    };

    if (spec.rop == Rop::NOOP) {
        H.shape = MessageShape::VECTOR;
        H.dim = d;
        H.payload.resize(static_cast<std::size_t>(nnz) * d);
        for (index_t u = 0; u < A.nrows; ++u) {
            std::span<const T> x_u = X.row(u);
            for (index_t p = A.row_ptr[u]; p < A.row_ptr[u + 1]; ++p) {
                std::span<T> slot(H.payload.data() + p * d,
                                  static_cast<std::size_t>(d));
                apply_vop(spec, x_u, Y.row(A.col_idx[p]), slot);
                apply_sop(spec, slot, A.values[p]);
            }
        }
        H.peak_materialized_bytes =
            tensor_bytes(static_cast<std::size_t>(nnz), H.payload.size());
        return H;
    }

    H.shape = MessageShape::SCALAR;
    H.dim = 1;
    H.payload.resize(static_cast<std::size_t>(nnz));

    if (spec.vop == Vop::MUL && spec.rop == Rop::RSUM) {
        // fused dot-product SDDMM primitive
        for (index_t u = 0; u < A.nrows; ++u) {
            std::span<const T> x_u = X.row(u);
            for (index_t p = A.row_ptr[u]; p < A.row_ptr[u + 1]; ++p) {
                std::span<const T> y_v = Y.row(A.col_idx[p]);
                T s = T(0);
                for (index_t j = 0; j < d; ++j) s += x_u[j] * y_v[j];
                H.payload[p] = apply_sop(spec, s, A.values[p]);
            }
        }
        H.peak_materialized_bytes =
            tensor_bytes(static_cast<std::size_t>(nnz), H.payload.size());
        return H;
    }

    // General reduction: materialize the VOP output for every edge as a
    // standalone sparse tensor, then reduce edge-by-edge.
    {
        const std::size_t entries = static_cast<std::size_t>(nnz) * d;
        std::vector<T> stage_vals(entries);
        std::vector<index_t> stage_idx(entries);
        for (index_t u = 0; u < A.nrows; ++u) {
            std::span<const T> x_u = X.row(u);
            for (index_t p = A.row_ptr[u]; p < A.row_ptr[u + 1]; ++p) {
                std::span<T> slot(stage_vals.data() + p * d,
                                  static_cast<std::size_t>(d));
                apply_vop(spec, x_u, Y.row(A.col_idx[p]), slot);
                for (index_t j = 0; j < d; ++j)
                    stage_idx[p * d + j] = A.col_idx[p] * d + j;
            }
        }
        H.peak_materialized_bytes = tensor_bytes(entries, entries);
        for (index_t p = 0; p < nnz; ++p) {
            std::span<const T> slot(stage_vals.data() + p * d,
                                    static_cast<std::size_t>(d));
            T s = apply_rop(spec, slot);
            H.payload[p] = apply_sop(spec, s, H.edge_values[p]);
        }
    }
    return H;
}

// Unfused SpMM phase: z_u = aop over stored edges of mop(h_uv, y_v, a_uv).
// Single-threaded by design; this is the oracle / footprint baseline.
template <typename T>
DenseMatrix<T> spmm(const SparseMessages<T>& H, const DenseMatrix<T>& Y,
                    const OpSpec<T>& spec) {
    const bool want_scalar = spec.scalar_message();
    if ((H.shape == MessageShape::SCALAR) != want_scalar)
        throw std::invalid_argument("spmm: message shape does not match spec");
    const index_t d = Y.dim;
    DenseMatrix<T> Z(H.nrows, d);
    std::vector<T> w(static_cast<std::size_t>(d));
    const T identity = aop_identity(spec);

    for (index_t u = 0; u < H.nrows; ++u) {
        std::span<T> z_u = Z.row(u);
        for (index_t j = 0; j < d; ++j) z_u[j] = identity;
        for (index_t p = H.row_ptr[u]; p < H.row_ptr[u + 1]; ++p) {
            std::span<const T> y_v = Y.row(H.col_idx[p]);
            const T a_uv = H.edge_values[p];
            if (want_scalar) {
                apply_mop(spec, H.payload[p], y_v, a_uv, std::span<T>(w));
            } else {
                std::span<const T> h(H.payload.data() + p * d,
                                     static_cast<std::size_t>(d));
                apply_mop(spec, h, y_v, a_uv, std::span<T>(w));
            }
            apply_aop(spec, z_u, std::span<const T>(w));
        }
    }
    return Z;
}

// Brute-force ground truth: dense expansion plus a direct triple loop, with
// the slot semantics spelled out inline so nothing is shared with the kernel
// path. Desk-scale only. Intended for 64-bit scalars.
template <typename T>
DenseMatrix<T> dense_oracle(const CsrMatrix<T>& A, const DenseMatrix<T>& X,
                            const DenseMatrix<T>& Y, const OpSpec<T>& spec) {
    if (A.nrows * A.ncols > 4096)
        throw std::invalid_argument("dense_oracle: instance too large");
    const index_t m = A.nrows, n = A.ncols, d = X.dim;

    // dense expansion that remembers which entries are stored (explicit
    // zeros are still edges)
    std::vector<T> dense(static_cast<std::size_t>(m * n), T(0));
    std::vector<char> stored(static_cast<std::size_t>(m * n), 0);
    for (index_t u = 0; u < m; ++u)
        for (index_t p = A.row_ptr[u]; p < A.row_ptr[u + 1]; ++p) {
            dense[u * n + A.col_idx[p]] = A.values[p];
            stored[u * n + A.col_idx[p]] = 1;
        }

    const T identity =
        spec.aop == Aop::AMAX ? -std::numeric_limits<T>::infinity() : T(0);
    DenseMatrix<T> Z(m, d);
    std::vector<T> t(static_cast<std::size_t>(d)), w(static_cast<std::size_t>(d));

    for (index_t u = 0; u < m; ++u) {
        for (index_t j = 0; j < d; ++j) Z.at(u, j) = identity;
        for (index_t v = 0; v < n; ++v) {
            if (!stored[u * n + v]) continue;
            const T a_uv = dense[u * n + v];
            for (index_t j = 0; j < d; ++j) {
                const T xj = X.at(u, j), yj = Y.at(v, j);
                switch (spec.vop) {
                    case Vop::ADD: t[j] = xj + yj; break;
                    case Vop::MUL: t[j] = xj * yj; break;
                    case Vop::SEL2ND: t[j] = yj; break;
                    case Vop::SUB: t[j] = xj - yj; break;
                    case Vop::USER: break;  // filled below
                }
            }
            if (spec.vop == Vop::USER)
                spec.user_vop(X.row(u), Y.row(v), std::span<T>(t));

            if (spec.rop != Rop::NOOP) {
                T s;
                switch (spec.rop) {
                    case Rop::RSUM: {
                        s = T(0);
                        for (index_t j = 0; j < d; ++j) s += t[j];
                        break;
                    }
                    case Rop::RMUL: {
                        s = T(1);
                        for (index_t j = 0; j < d; ++j) s *= t[j];
                        break;
                    }
                    case Rop::NORM: {
                        s = T(0);
                        for (index_t j = 0; j < d; ++j) s += t[j] * t[j];
                        s = std::sqrt(s);
                        break;
                    }
                    default: s = spec.user_rop(std::span<const T>(t)); break;
                }
                T h;
                switch (spec.sop) {
                    case Sop::NOOP: h = s; break;
                    case Sop::SIGMOID: h = T(1) / (T(1) + std::exp(-s)); break;
                    case Sop::SCAL: h = spec.alpha * s; break;
                    default: h = spec.user_sop(s, a_uv); break;
                }
                switch (spec.mop) {
                    case Mop::MUL:
                        for (index_t j = 0; j < d; ++j) w[j] = h * Y.at(v, j);
                        break;
                    case Mop::SEL2ND:
                        for (index_t j = 0; j < d; ++j) w[j] = Y.at(v, j);
                        break;
                    default:
                        spec.user_mop(std::span<const T>(&h, 1), Y.row(v), a_uv,
                                      std::span<T>(w));
                        break;
                }
            } else {
                for (index_t j = 0; j < d; ++j) {
                    switch (spec.sop) {
                        case Sop::NOOP: break;
                        case Sop::SIGMOID:
                            t[j] = T(1) / (T(1) + std::exp(-t[j]));
                            break;
                        case Sop::SCAL: t[j] = spec.alpha * t[j]; break;
                        default: t[j] = spec.user_sop(t[j], a_uv); break;
                    }
                }
                switch (spec.mop) {
                    case Mop::MUL:
                        for (index_t j = 0; j < d; ++j) w[j] = a_uv * t[j];
                        break;
                    case Mop::SEL2ND:
                        for (index_t j = 0; j < d; ++j) w[j] = Y.at(v, j);
                        break;
                    default:
                        spec.user_mop(std::span<const T>(t), Y.row(v), a_uv,
                                      std::span<T>(w));
                        break;
                }
            }

            switch (spec.aop) {
                case Aop::ASUM:
                    for (index_t j = 0; j < d; ++j) Z.at(u, j) += w[j];
                    break;
                case Aop::AMAX:
                    for (index_t j = 0; j < d; ++j)
                        Z.at(u, j) = std::max(Z.at(u, j), w[j]);
                    break;
                default:
                    spec.user_aop(Z.row(u), std::span<const T>(w));
                    break;
            }
        }
    }
    return Z;
}

}  // namespace fusedmm

#endif  // FUSEDMM_REFERENCE_HPP
