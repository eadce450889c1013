#ifndef FUSEDMM_MMIO_HPP
#define FUSEDMM_MMIO_HPP

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "fusedmm/matrix.hpp"

namespace fusedmm {

struct MmParseError : std::runtime_error {
    MmParseError(const std::string& path, long line, const std::string& what)
        : std::runtime_error(path + ":" + std::to_string(line) + ": " + what) {}
};

// MatrixMarket coordinate reader. Supported qualifiers:
// real|pattern|integer, general|symmetric. 1-based indices converted to
// 0-based, pattern entries get value 1, symmetric files mirror off-diagonal
// entries, duplicates summed.
template <typename T>
CsrMatrix<T> read_matrix_market(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);

    std::string line;
    long lineno = 0;
    if (!std::getline(in, line)) throw MmParseError(path, 1, "empty file");
    ++lineno;

    std::istringstream hdr(line);
    std::string banner, object, format, field, symmetry;
    hdr >> banner >> object >> format >> field >> symmetry;
    if (banner != "%%MatrixMarket" || object != "matrix" ||
        format != "coordinate")
        throw MmParseError(path, 1, "malformed MatrixMarket header");
    if (field != "real" && field != "pattern" && field != "integer")
        throw MmParseError(path, 1, "unsupported field type '" + field + "'");
    if (symmetry != "general" && symmetry != "symmetric")
        throw MmParseError(path, 1, "unsupported symmetry '" + symmetry + "'");
    const bool pattern = (field == "pattern");
    const bool symmetric = (symmetry == "symmetric");

    index_t m = 0, n = 0, declared_nnz = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '%') continue;
        std::istringstream sz(line);
        if (!(sz >> m >> n >> declared_nnz))
            throw MmParseError(path, lineno, "malformed size line");
        break;
    }
    if (m <= 0 || n < 0)
        throw MmParseError(path, lineno, "invalid matrix dimensions");

    std::vector<CooEntry<T>> entries;
    entries.reserve(static_cast<std::size_t>(declared_nnz) * (symmetric ? 2 : 1));
    index_t seen = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '%') continue;
        std::istringstream es(line);
        index_t r, c;
        if (!(es >> r >> c))
            throw MmParseError(path, lineno, "malformed entry");
        double v = 1.0;
        if (!pattern && !(es >> v))
            throw MmParseError(path, lineno, "non-numeric value");
        if (r < 1 || r > m || c < 1 || c > n)
            throw MmParseError(path, lineno, "index out of declared bounds");
        entries.push_back({r - 1, c - 1, static_cast<T>(v)});
        if (symmetric && r != c)
            entries.push_back({c - 1, r - 1, static_cast<T>(v)});
        ++seen;
    }
    if (seen != declared_nnz)
        throw MmParseError(path, lineno,
                           "entry count " + std::to_string(seen) +
                               " does not match declared " +
                               std::to_string(declared_nnz));
    return csr_from_coo(entries, m, n);
}

// Writes coordinate real general, 1-based.
template <typename T>
void write_matrix_market(const CsrMatrix<T>& A, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "%%MatrixMarket matrix coordinate real general\n";
    out << A.nrows << " " << A.ncols << " " << A.nnz() << "\n";
    out.precision(17);
    for (index_t u = 0; u < A.nrows; ++u)
        for (index_t p = A.row_ptr[u]; p < A.row_ptr[u + 1]; ++p)
            out << (u + 1) << " " << (A.col_idx[p] + 1) << " " << A.values[p]
                << "\n";
    if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace fusedmm

#endif  // FUSEDMM_MMIO_HPP
