#ifndef FUSEDMM_BENCH_HPP
#define FUSEDMM_BENCH_HPP

#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <new>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fusedmm/apps.hpp"
#include "fusedmm/kernel.hpp"
#include "fusedmm/perf.hpp"
#include "fusedmm/reference.hpp"

namespace fusedmm {

enum class BenchMode { FUSED, REFERENCE, BOTH };

struct BenchRecord {
    std::string graph;
    index_t m = 0, n = 0, nnz = 0;
    double avg_degree = 0.0;
    index_t d = 0;
    std::string app;
    int threads = 1;
    int iterations = 0;
    double fused_seconds = 0.0;      // mean over iterations
    double reference_seconds = 0.0;  // mean; 0 when not run
    double speedup = 0.0;            // reference/fused, both mode only
    double achieved_gflops = 0.0;    // fused kernel
    double ai_lower_bound = 0.0;
    std::size_t fused_aux_bytes = 0;
    std::size_t materialized_h_bytes = 0;
    bool reference_oom = false;  // reference allocation failure, the table's "x"
    bool verified = true;        // desk-scale fused-vs-reference check
};

namespace detail {

template <typename T>
bool approx_equal(const DenseMatrix<T>& a, const DenseMatrix<T>& b,
                  double rel_tol) {
    if (a.nrows != b.nrows || a.dim != b.dim) return false;
    for (std::size_t i = 0; i < a.data.size(); ++i) {
        const double x = a.data[i], y = b.data[i];
        if (std::isinf(x) && std::isinf(y) && x == y) continue;
        const double scale = std::max({1.0, std::abs(x), std::abs(y)});
        if (std::abs(x - y) > rel_tol * scale) return false;
    }
    return true;
}

}  // namespace detail

// Times one app on one graph for each (d, t). Warms up once, then reports
// the mean over `iterations` timed runs of the kernel call only (no I/O or
// setup inside the window). In BOTH mode the unfused pipeline is timed too
// and the fused result is checked against it on desk-scale graphs.
template <typename T>
std::vector<BenchRecord> run_bench(const CsrMatrix<T>& A,
                                   const std::string& graph_name,
                                   const OpSpec<T>& spec,
                                   const std::string& app_name,
                                   const std::vector<index_t>& dims,
                                   const std::vector<int>& threads,
                                   int iterations, BenchMode mode,
                                   std::uint64_t seed = 42) {
    using clock = std::chrono::steady_clock;
    const GraphStats gs = stats(A);
    std::vector<BenchRecord> records;

    for (index_t d : dims) {
        std::mt19937_64 rng(seed + static_cast<std::uint64_t>(d));
        std::uniform_real_distribution<double> dist(-1.0, 1.0);
        DenseMatrix<T> X(A.nrows, d), Y(A.ncols, d);
        for (T& v : X.data) v = static_cast<T>(dist(rng));
        for (T& v : Y.data) v = static_cast<T>(dist(rng));

        for (int t : threads) {
            BenchRecord rec;
            rec.graph = graph_name;
            rec.m = gs.nrows;
            rec.n = gs.ncols;
            rec.nnz = gs.nnz;
            rec.avg_degree = gs.avg_degree;
            rec.d = d;
            rec.app = app_name;
            rec.threads = t;
            rec.iterations = iterations;
            rec.ai_lower_bound =
                gs.nnz > 0 ? arithmetic_intensity(gs.avg_degree, d) : 0.0;

            DenseMatrix<T> Z_fused, Z_ref;
            if (mode != BenchMode::REFERENCE) {
                KernelStats ks;
                Z_fused = fused_mm(A, X, Y, spec, t, &ks);  // warm-up
                rec.fused_aux_bytes = ks.aux_bytes;
                auto start = clock::now();
                for (int it = 0; it < iterations; ++it)
                    Z_fused = fused_mm(A, X, Y, spec, t);
                rec.fused_seconds =
                    std::chrono::duration<double>(clock::now() - start).count() /
                    iterations;
                rec.achieved_gflops =
                    static_cast<double>(flop_count(gs.nnz, d)) /
                    rec.fused_seconds / 1e9;
            }
            if (mode != BenchMode::FUSED) {
                try {
                    auto H = sddmm(A, X, Y, spec);
                    rec.materialized_h_bytes = H.peak_materialized_bytes;
                    Z_ref = spmm(H, Y, spec);  // warm-up
                    auto start = clock::now();
                    for (int it = 0; it < iterations; ++it) {
                        auto Hi = sddmm(A, X, Y, spec);
                        Z_ref = spmm(Hi, Y, spec);
                    }
                    rec.reference_seconds =
                        std::chrono::duration<double>(clock::now() - start)
                            .count() /
                        iterations;
                } catch (const std::bad_alloc&) {
                    rec.reference_oom = true;
                }
            }
            if (mode == BenchMode::BOTH && !rec.reference_oom) {
                rec.speedup = rec.reference_seconds / rec.fused_seconds;
                if (gs.nnz <= 100000)
                    rec.verified = detail::approx_equal(Z_fused, Z_ref, 1e-4);
            }
            records.push_back(rec);
        }
    }
    return records;
}

namespace detail {

inline std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

inline std::string csv_num(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

}  // namespace detail

inline void write_csv(const std::vector<BenchRecord>& records,
                      std::ostream& out) {
    out << "graph,m,n,nnz,avg_degree,d,app,threads,iterations,"
           "fused_seconds,reference_seconds,speedup,achieved_gflops,"
           "ai_lower_bound,fused_aux_bytes,materialized_h_bytes,"
           "reference_oom,verified\n";
    for (const auto& r : records) {
        out << detail::csv_quote(r.graph) << ',' << r.m << ',' << r.n << ','
            << r.nnz << ',' << detail::csv_num(r.avg_degree) << ',' << r.d
            << ',' << detail::csv_quote(r.app) << ',' << r.threads << ','
            << r.iterations << ',' << detail::csv_num(r.fused_seconds) << ','
            << detail::csv_num(r.reference_seconds) << ','
            << detail::csv_num(r.speedup) << ','
            << detail::csv_num(r.achieved_gflops) << ','
            << detail::csv_num(r.ai_lower_bound) << ',' << r.fused_aux_bytes
            << ',' << r.materialized_h_bytes << ','
            << (r.reference_oom ? "x" : "") << ','
            << (r.verified ? "yes" : "no") << '\n';
    }
}

inline void write_csv(const std::vector<BenchRecord>& records,
                      const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    write_csv(records, out);
    if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace fusedmm

#endif  // FUSEDMM_BENCH_HPP
