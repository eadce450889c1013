#ifndef FUSEDMM_TEST_UTIL_HPP
#define FUSEDMM_TEST_UTIL_HPP

#include <cmath>
#include <cstring>
#include <random>
#include <vector>

#include "fusedmm/matrix.hpp"
#include "fusedmm/ops.hpp"

namespace testutil {

using fusedmm::index_t;

// Random CSR with rows stored in ascending column order and no explicit
// zeros. density is the expected fraction of stored entries.
template <typename T>
fusedmm::CsrMatrix<T> random_csr(std::mt19937_64& rng, index_t m, index_t n,
                                 double density) {
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    std::uniform_real_distribution<double> val(0.1, 2.0);
    std::vector<fusedmm::CooEntry<T>> entries;
    for (index_t r = 0; r < m; ++r)
        for (index_t c = 0; c < n; ++c)
            if (coin(rng) < density)
                entries.push_back({r, c, static_cast<T>(val(rng))});
    return fusedmm::csr_from_coo(entries, m, n);
}

template <typename T>
fusedmm::DenseMatrix<T> random_dense(std::mt19937_64& rng, index_t rows,
                                     index_t d, double lo = -1.0,
                                     double hi = 1.0) {
    std::uniform_real_distribution<double> dist(lo, hi);
    fusedmm::DenseMatrix<T> M(rows, d);
    for (T& v : M.data) v = static_cast<T>(dist(rng));
    return M;
}

inline fusedmm::CsrMatrix<double> to_double(const fusedmm::CsrMatrix<float>& A) {
    fusedmm::CsrMatrix<double> B;
    B.nrows = A.nrows;
    B.ncols = A.ncols;
    B.row_ptr = A.row_ptr;
    B.col_idx = A.col_idx;
    B.values.assign(A.values.begin(), A.values.end());
    return B;
}

inline fusedmm::DenseMatrix<double> to_double(
    const fusedmm::DenseMatrix<float>& M) {
    fusedmm::DenseMatrix<double> B(M.nrows, M.dim);
    for (std::size_t i = 0; i < M.data.size(); ++i)
        B.data[i] = static_cast<double>(M.data[i]);
    return B;
}

template <typename T, typename U>
double max_rel_err(const fusedmm::DenseMatrix<T>& a,
                   const fusedmm::DenseMatrix<U>& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.data.size(); ++i) {
        const double x = static_cast<double>(a.data[i]);
        const double y = static_cast<double>(b.data[i]);
        if (std::isinf(x) && std::isinf(y) && x == y) continue;
        const double scale = std::max({1.0, std::abs(x), std::abs(y)});
        worst = std::max(worst, std::abs(x - y) / scale);
    }
    return worst;
}

template <typename T>
bool bitwise_equal(const fusedmm::DenseMatrix<T>& a,
                   const fusedmm::DenseMatrix<T>& b) {
    if (a.data.size() != b.data.size()) return false;
    for (std::size_t i = 0; i < a.data.size(); ++i)
        if (std::memcmp(&a.data[i], &b.data[i], sizeof(T)) != 0) return false;
    return true;
}

// Spec with every slot replaced by a user function implementing simple,
// shape-correct arithmetic; exercises the generic path end to end.
template <typename T>
fusedmm::OpSpec<T> user_function_spec(bool scalar_message) {
    using namespace fusedmm;
    OpSpec<T> spec;
    spec.vop = Vop::USER;
    spec.user_vop = [](std::span<const T> x, std::span<const T> y,
                       std::span<T> out) {
        for (std::size_t i = 0; i < x.size(); ++i)
            out[i] = x[i] * y[i] + y[i];
    };
    if (scalar_message) {
        spec.rop = Rop::USER;
        spec.user_rop = [](std::span<const T> z) {
            T s = T(0);
            for (T v : z) s += v;
            return s / static_cast<T>(z.size());
        };
    } else {
        spec.rop = Rop::NOOP;
    }
    spec.sop = Sop::USER;
    spec.user_sop = [](T s, T a_uv) { return s + a_uv; };
    spec.mop = Mop::USER;
    spec.user_mop = [](std::span<const T> h, std::span<const T> y, T a_uv,
                       std::span<T> out) {
        if (h.size() == 1)
            for (std::size_t i = 0; i < y.size(); ++i) out[i] = h[0] * y[i];
        else
            for (std::size_t i = 0; i < h.size(); ++i)
                out[i] = a_uv * h[i] + y[i];
    };
    spec.aop = Aop::USER;
    spec.user_aop = [](std::span<T> acc, std::span<const T> w) {
        for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += w[i];
    };
    return spec;
}

}  // namespace testutil

#endif  // FUSEDMM_TEST_UTIL_HPP
