#ifndef FUSEDMM_RMAT_HPP
#define FUSEDMM_RMAT_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>

#include "fusedmm/matrix.hpp"

namespace fusedmm {

struct RmatParams {
    int scale = 10;           // vertices = 2^scale
    int edge_factor = 16;     // edge insertions = edge_factor * 2^scale
    double a = 0.57, b = 0.19, c = 0.19, d = 0.05;
    std::uint64_t seed = 1;
};

// Recursive-quadrant generator: each insertion descends `scale` levels,
// picking a quadrant with probabilities (a,b,c,d). Self-loops permitted,
// duplicates summed, unit edge values. Single-threaded and deterministic
// for a fixed seed.
template <typename T>
CsrMatrix<T> rmat_generate(const RmatParams& p) {
    if (p.scale < 1) throw std::invalid_argument("rmat: scale must be >= 1");
    if (std::abs(p.a + p.b + p.c + p.d - 1.0) > 1e-9)
        throw std::invalid_argument("rmat: quadrant probabilities must sum to 1");

    const index_t nverts = index_t(1) << p.scale;
    const index_t nedges = static_cast<index_t>(p.edge_factor) * nverts;
    std::mt19937_64 rng(p.seed);
    auto uniform = [&rng]() {
        return static_cast<double>(rng() >> 11) * 0x1.0p-53;
    };

    std::vector<CooEntry<T>> entries;
    entries.reserve(static_cast<std::size_t>(nedges));
    const double ab = p.a + p.b;
    const double abc = ab + p.c;
    for (index_t e = 0; e < nedges; ++e) {
        index_t row = 0, col = 0;
        for (int level = 0; level < p.scale; ++level) {
            const double u = uniform();
            row <<= 1;
            col <<= 1;
            if (u < p.a) {
                // top-left
            } else if (u < ab) {
                col |= 1;
            } else if (u < abc) {
                row |= 1;
            } else {
                row |= 1;
                col |= 1;
            }
        }
        entries.push_back({row, col, T(1)});
    }
    return csr_from_coo(entries, nverts, nverts);
}

}  // namespace fusedmm

#endif  // FUSEDMM_RMAT_HPP
