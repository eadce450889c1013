// fusedmm command-line front end: benchmarking, RMAT generation,
// verification, the analytical model, and MatrixMarket conversion.

#include <CLI11.hpp>
#include <cstdio>
#include <iostream>
#include <sstream>

#include "fusedmm/bench.hpp"
#include "fusedmm/mmio.hpp"
#include "fusedmm/reference.hpp"
#include "fusedmm/rmat.hpp"

namespace {

using Scalar = float;  // benchmarks run single precision

struct GraphSource {
    std::string path;
    std::string rmat;  // "scale,ef,a,b,c,d,seed"
};

fusedmm::RmatParams parse_rmat(const std::string& s) {
    fusedmm::RmatParams p;
    char comma;
    std::istringstream is(s);
    if (!(is >> p.scale >> comma >> p.edge_factor >> comma >> p.a >> comma >>
          p.b >> comma >> p.c >> comma >> p.d >> comma >> p.seed))
        throw CLI::ValidationError("--rmat expects scale,ef,a,b,c,d,seed");
    return p;
}

std::string rmat_name(const fusedmm::RmatParams& p) {
    std::ostringstream os;
    os << "rmat(scale=" << p.scale << ",ef=" << p.edge_factor << ",a=" << p.a
       << ",b=" << p.b << ",c=" << p.c << ",d=" << p.d << ",seed=" << p.seed
       << ")";
    return os.str();
}

std::pair<fusedmm::CsrMatrix<Scalar>, std::string> load_graph(
    const GraphSource& src) {
    if (!src.rmat.empty()) {
        auto p = parse_rmat(src.rmat);
        return {fusedmm::rmat_generate<Scalar>(p), rmat_name(p)};
    }
    if (src.path.empty())
        throw CLI::ValidationError("one of --graph or --rmat is required");
    return {fusedmm::read_matrix_market<Scalar>(src.path), src.path};
}

fusedmm::OpSpec<Scalar> spec_for_app(const std::string& app, double alpha) {
    using namespace fusedmm;
    AppParams<Scalar> params;
    params.alpha = static_cast<Scalar>(alpha);
    if (app == "embed") return make_spec<Scalar>(App::NODE_EMBED_SIGMOID);
    if (app == "fr") return make_spec<Scalar>(App::FR_LAYOUT, params);
    if (app == "gcn" || app == "spmm")
        return make_spec<Scalar>(App::GCN_FORWARD);
    if (app == "gnnmlp") {
        params.mlp_vop = make_toy_mlp_vop<Scalar>(0.5f, 0.5f, 0.1f);
        return make_spec<Scalar>(App::GNN_MLP, params);
    }
    throw CLI::ValidationError("unknown app '" + app + "'");
}

void print_graph_summary(const fusedmm::CsrMatrix<Scalar>& A,
                         const std::string& name) {
    auto gs = fusedmm::stats(A);
    std::cout << name << ": " << gs.nrows << " x " << gs.ncols
              << ", nnz=" << gs.nnz << " (directed; ~" << gs.nnz / 2
              << " undirected), avg degree=" << gs.avg_degree
              << ", max degree=" << gs.max_degree << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App cli{"FusedMM: fused SDDMM+SpMM sparse kernels"};
    cli.require_subcommand(1);

    GraphSource src;
    std::string app = "embed";
    std::vector<fusedmm::index_t> dims{128};
    std::vector<int> threads{1};
    int iters = 10;
    std::string mode_str = "fused";
    std::string out_path;
    double alpha = 1.0;

    auto add_graph_flags = [&](CLI::App* sub) {
        sub->add_option("--graph", src.path, "MatrixMarket file");
        sub->add_option("--rmat", src.rmat,
                        "synthetic RMAT graph: scale,ef,a,b,c,d,seed "
                        "(defaults elsewhere: a,b,c,d = 0.57,0.19,0.19,0.05)");
    };

    auto* bench = cli.add_subcommand("bench", "time fused and/or unfused runs");
    add_graph_flags(bench);
    bench->add_option("--app", app, "embed|fr|gcn|spmm|gnnmlp");
    bench->add_option("--dims", dims, "embedding dimensions")->delimiter(',');
    bench->add_option("--threads", threads, "worker counts")->delimiter(',');
    bench->add_option("--iters", iters, "timed iterations per point");
    bench->add_option("--mode", mode_str, "fused|ref|both");
    bench->add_option("--alpha", alpha, "SCAL factor for the fr app");
    bench->add_option("--out", out_path, "CSV output path");

    auto* rmat = cli.add_subcommand("rmat", "generate an RMAT graph");
    int r_scale = 10, r_ef = 16;
    std::vector<double> r_probs{0.57, 0.19, 0.19, 0.05};
    std::uint64_t r_seed = 1;
    std::string r_out;
    rmat->add_option("--scale", r_scale, "vertices = 2^scale")->required();
    rmat->add_option("--ef", r_ef, "edge insertions per vertex");
    rmat->add_option("--probs", r_probs, "quadrant probabilities a,b,c,d")
        ->delimiter(',')
        ->expected(4);
    rmat->add_option("--seed", r_seed, "RNG seed");
    rmat->add_option("--out", r_out, "MatrixMarket output path")->required();

    auto* verify = cli.add_subcommand(
        "verify", "check fused output against the unfused pipeline");
    add_graph_flags(verify);
    int v_d = 16, v_t = 4;
    verify->add_option("--app", app, "embed|fr|gcn|spmm|gnnmlp");
    verify->add_option("--d", v_d, "embedding dimension");
    verify->add_option("--t", v_t, "worker count");
    verify->add_option("--alpha", alpha, "SCAL factor for the fr app");

    auto* model = cli.add_subcommand("model", "print the analytical estimate");
    std::int64_t mm = 0, mn = 0, md = 128, mnnz = 0;
    double m_bw = 100.0, m_secs = 0.0;
    model->add_option("--m", mm, "rows")->required();
    model->add_option("--n", mn, "columns")->required();
    model->add_option("--d", md, "embedding dimension");
    model->add_option("--nnz", mnnz, "stored edges")->required();
    model->add_option("--bandwidth", m_bw, "memory bandwidth, GB/s");
    model->add_option("--seconds", m_secs,
                      "measured kernel time for a roofline comparison");

    auto* convert = cli.add_subcommand(
        "convert", "canonicalize a MatrixMarket file (dedup, symmetrize)");
    std::string c_in, c_out;
    convert->add_option("--in", c_in, "input path")->required();
    convert->add_option("--out", c_out, "output path")->required();

    CLI11_PARSE(cli, argc, argv);

    try {
        if (*bench) {
            fusedmm::BenchMode mode;
            if (mode_str == "fused") mode = fusedmm::BenchMode::FUSED;
            else if (mode_str == "ref") mode = fusedmm::BenchMode::REFERENCE;
            else if (mode_str == "both") mode = fusedmm::BenchMode::BOTH;
            else throw CLI::ValidationError("--mode must be fused|ref|both");

            auto [A, name] = load_graph(src);
            print_graph_summary(A, name);
            auto spec = spec_for_app(app, alpha);
            auto records = fusedmm::run_bench(A, name, spec, app, dims,
                                              threads, iters, mode);
            for (const auto& r : records) {
                if (!r.verified) {
                    std::cerr << "verification FAILED for d=" << r.d
                              << " t=" << r.threads << "\n";
                    return 2;
                }
            }
            if (out_path.empty()) {
                fusedmm::write_csv(records, std::cout);
            } else {
                fusedmm::write_csv(records, out_path);
                std::cout << records.size() << " records -> " << out_path
                          << "\n";
            }
        } else if (*rmat) {
            fusedmm::RmatParams p;
            p.scale = r_scale;
            p.edge_factor = r_ef;
            p.a = r_probs[0];
            p.b = r_probs[1];
            p.c = r_probs[2];
            p.d = r_probs[3];
            p.seed = r_seed;
            auto A = fusedmm::rmat_generate<Scalar>(p);
            print_graph_summary(A, rmat_name(p));
            fusedmm::write_matrix_market(A, r_out);
            std::cout << "wrote " << r_out << "\n";
        } else if (*verify) {
            auto [A, name] = load_graph(src);
            print_graph_summary(A, name);
            auto spec = spec_for_app(app, alpha);
            std::mt19937_64 rng(7);
            std::uniform_real_distribution<double> dist(-1.0, 1.0);
            fusedmm::DenseMatrix<Scalar> X(A.nrows, v_d), Y(A.ncols, v_d);
            for (auto& v : X.data) v = static_cast<Scalar>(dist(rng));
            for (auto& v : Y.data) v = static_cast<Scalar>(dist(rng));
            auto Z = fusedmm::fused_mm(A, X, Y, spec, v_t);
            auto H = fusedmm::sddmm(A, X, Y, spec);
            auto Zr = fusedmm::spmm(H, Y, spec);
            if (!fusedmm::detail::approx_equal(Z, Zr, 1e-4)) {
                std::cerr << "FAIL: fused and unfused outputs differ\n";
                return 2;
            }
            std::cout << "OK: fused matches the unfused pipeline (d=" << v_d
                      << ", t=" << v_t << ")\n";
        } else if (*model) {
            auto est = fusedmm::perf_estimate(mm, mn, md, mnnz);
            std::printf("flops            %lld\n",
                        static_cast<long long>(est.flops));
            std::printf("bytes moved      %lld\n",
                        static_cast<long long>(est.bytes_moved));
            std::printf("AI lower bound   %.4f FLOP/byte\n",
                        est.ai_lower_bound);
            std::printf("fused memory     %lld bytes\n",
                        static_cast<long long>(est.mem_fused_bytes));
            std::printf("unfused extra    %lld bytes\n",
                        static_cast<long long>(est.mem_unfused_extra_bytes));
            if (m_secs > 0.0) {
                auto r = fusedmm::roofline(est, m_secs, m_bw);
                std::printf("achieved         %.2f GFLOP/s\n",
                            r.achieved_gflops);
                std::printf("attainable       %.2f GFLOP/s at %.0f GB/s\n",
                            r.attainable_gflops, m_bw);
                std::printf("efficiency       %.2f\n", r.efficiency);
            }
        } else if (*convert) {
            auto A = fusedmm::read_matrix_market<double>(c_in);
            fusedmm::write_matrix_market(A, c_out);
            print_graph_summary(fusedmm::read_matrix_market<Scalar>(c_out),
                                c_out);
        }
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
