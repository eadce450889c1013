#ifndef FUSEDMM_MATRIX_HPP
#define FUSEDMM_MATRIX_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace fusedmm {

using index_t = std::int64_t;

// Row-major dense feature matrix. Rows are contiguous slices of length dim.
template <typename T>
struct DenseMatrix {
    index_t nrows = 0;
    index_t dim = 0;
    std::vector<T> data;

    DenseMatrix() = default;
    DenseMatrix(index_t rows, index_t d, T fill = T(0))
        : nrows(rows), dim(d), data(static_cast<std::size_t>(rows * d), fill) {}
    DenseMatrix(index_t rows, index_t d, std::vector<T> values)
        : nrows(rows), dim(d), data(std::move(values)) {
        if (static_cast<index_t>(data.size()) != rows * d)
            throw std::invalid_argument("DenseMatrix: data length != nrows*dim");
        for (T v : data)
            if (!std::isfinite(static_cast<double>(v)))
                throw std::invalid_argument("DenseMatrix: non-finite value");
    }

    std::span<T> row(index_t u) {
        return {data.data() + u * dim, static_cast<std::size_t>(dim)};
    }
    std::span<const T> row(index_t u) const {
        return {data.data() + u * dim, static_cast<std::size_t>(dim)};
    }
    T& at(index_t u, index_t j) { return data[u * dim + j]; }
    T at(index_t u, index_t j) const { return data[u * dim + j]; }
};

// Compressed sparse row adjacency. Column order within a row is the storage
// order fixed at construction; kernels accumulate in this order.
template <typename T>
struct CsrMatrix {
    index_t nrows = 0;
    index_t ncols = 0;
    std::vector<index_t> row_ptr;  // length nrows+1
    std::vector<index_t> col_idx;  // length nnz
    std::vector<T> values;         // length nnz

    CsrMatrix() : row_ptr{0} {}

    index_t nnz() const { return row_ptr.empty() ? 0 : row_ptr.back(); }
    index_t row_nnz(index_t u) const { return row_ptr[u + 1] - row_ptr[u]; }

    std::span<const index_t> row_cols(index_t u) const {
        return {col_idx.data() + row_ptr[u],
                static_cast<std::size_t>(row_nnz(u))};
    }
    std::span<const T> row_vals(index_t u) const {
        return {values.data() + row_ptr[u], static_cast<std::size_t>(row_nnz(u))};
    }
};

struct GraphStats {
    index_t nrows = 0;
    index_t ncols = 0;
    index_t nnz = 0;
    double avg_degree = 0.0;
    index_t max_degree = 0;
};

template <typename T>
struct CooEntry {
    index_t row;
    index_t col;
    T value;
};

// Builds CSR from COO entries. Duplicate (row,col) pairs are summed; per-row
// storage order is the first-occurrence order of the deduplicated entries.
template <typename T>
CsrMatrix<T> csr_from_coo(const std::vector<CooEntry<T>>& entries, index_t m,
                          index_t n) {
    for (const auto& e : entries) {
        if (e.row < 0 || e.row >= m || e.col < 0 || e.col >= n)
            throw std::invalid_argument(
                "csr_from_coo: entry (" + std::to_string(e.row) + "," +
                std::to_string(e.col) + ") out of bounds for " +
                std::to_string(m) + "x" + std::to_string(n));
    }

    // Counting pass, then stable placement; duplicates folded in a second pass.
    std::vector<index_t> counts(m + 1, 0);
    for (const auto& e : entries) counts[e.row + 1]++;
    for (index_t r = 0; r < m; ++r) counts[r + 1] += counts[r];

    std::vector<index_t> cols(entries.size());
    std::vector<T> vals(entries.size());
    {
        std::vector<index_t> cursor(counts.begin(), counts.end() - 1);
        for (const auto& e : entries) {
            index_t p = cursor[e.row]++;
            cols[p] = e.col;
            vals[p] = e.value;
        }
    }

    CsrMatrix<T> A;
    A.nrows = m;
    A.ncols = n;
    A.row_ptr.assign(m + 1, 0);
    A.col_idx.reserve(entries.size());
    A.values.reserve(entries.size());

    std::vector<index_t> seen_at(n, -1);  // column -> position in current row
    for (index_t r = 0; r < m; ++r) {
        index_t row_start = static_cast<index_t>(A.col_idx.size());
        for (index_t p = counts[r]; p < counts[r + 1]; ++p) {
            index_t c = cols[p];
            if (seen_at[c] >= row_start) {
                A.values[seen_at[c]] += vals[p];
            } else {
                seen_at[c] = static_cast<index_t>(A.col_idx.size());
                A.col_idx.push_back(c);
                A.values.push_back(vals[p]);
            }
        }
        // reset only the columns touched in this row
        for (index_t p = row_start; p < static_cast<index_t>(A.col_idx.size()); ++p)
            seen_at[A.col_idx[p]] = -1;
        A.row_ptr[r + 1] = static_cast<index_t>(A.col_idx.size());
    }
    return A;
}

// Checks every CSR invariant; returns the first violation found, or nullopt.
template <typename T>
std::optional<std::string> validate(const CsrMatrix<T>& A) {
    if (static_cast<index_t>(A.row_ptr.size()) != A.nrows + 1)
        return "row_ptr length is not nrows+1";
    if (A.row_ptr.front() != 0) return "row_ptr[0] != 0";
    for (index_t i = 1; i <= A.nrows; ++i)
        if (A.row_ptr[i] < A.row_ptr[i - 1])
            return "row_ptr not monotone at index " + std::to_string(i);
    index_t nnz = A.row_ptr.back();
    if (static_cast<index_t>(A.col_idx.size()) != nnz)
        return "col_idx length != row_ptr[nrows]";
    if (A.values.size() != A.col_idx.size())
        return "values length != col_idx length";
    for (index_t c : A.col_idx)
        if (c < 0 || c >= A.ncols) return "column index out of range";
    for (index_t r = 0; r < A.nrows; ++r) {
        auto cols = A.row_cols(r);
        std::vector<index_t> sorted(cols.begin(), cols.end());
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            return "duplicate column in row " + std::to_string(r);
    }
    return std::nullopt;
}

template <typename T>
GraphStats stats(const CsrMatrix<T>& A) {
    GraphStats s;
    s.nrows = A.nrows;
    s.ncols = A.ncols;
    s.nnz = A.nnz();
    s.avg_degree = A.nrows > 0
                       ? static_cast<double>(s.nnz) / static_cast<double>(A.nrows)
                       : 0.0;
    for (index_t r = 0; r < A.nrows; ++r)
        s.max_degree = std::max(s.max_degree, A.row_nnz(r));
    return s;
}

}  // namespace fusedmm

#endif  // FUSEDMM_MATRIX_HPP
