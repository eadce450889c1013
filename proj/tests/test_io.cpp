#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "fusedmm/apps.hpp"
#include "fusedmm/bench.hpp"
#include "fusedmm/mmio.hpp"
#include "fusedmm/rmat.hpp"
#include "test_util.hpp"

using namespace fusedmm;

namespace {

std::string temp_file(const std::string& name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

std::string write_temp(const std::string& name, const std::string& body) {
    std::string path = temp_file(name);
    std::ofstream out(path);
    out << body;
    return path;
}

}  // namespace

TEST_CASE("pattern symmetric file expands to the 2-cycle") {
    auto path = write_temp("mm_sym.mtx",
                           "%%MatrixMarket matrix coordinate pattern symmetric\n"
                           "2 2 1\n"
                           "2 1\n");
    auto A = read_matrix_market<double>(path);
    CHECK(A.nnz() == 2);
    CHECK(A.row_ptr == std::vector<index_t>{0, 1, 2});
    CHECK(A.values == std::vector<double>{1.0, 1.0});
    std::remove(path.c_str());
}

TEST_CASE("real general file preserves weights") {
    auto path = write_temp("mm_real.mtx",
                           "%%MatrixMarket matrix coordinate real general\n"
                           "% a comment\n"
                           "2 2 2\n"
                           "1 2 2.5\n"
                           "2 1 -1.25\n");
    auto A = read_matrix_market<double>(path);
    CHECK(A.values == std::vector<double>{2.5, -1.25});
    std::remove(path.c_str());
}

TEST_CASE("out-of-bounds entry reports its line") {
    auto path = write_temp("mm_oob.mtx",
                           "%%MatrixMarket matrix coordinate real general\n"
                           "2 2 1\n"
                           "3 1 1.0\n");
    try {
        read_matrix_market<double>(path);
        FAIL("expected a parse error");
    } catch (const MmParseError& e) {
        CHECK(std::string(e.what()).find(":3:") != std::string::npos);
    }
    std::remove(path.c_str());
}

TEST_CASE("malformed header is rejected") {
    auto path = write_temp("mm_bad.mtx", "%%NotMatrixMarket nope\n1 1 0\n");
    CHECK_THROWS_AS(read_matrix_market<double>(path), MmParseError);
    std::remove(path.c_str());
}

TEST_CASE("non-numeric value is rejected") {
    auto path = write_temp("mm_nan.mtx",
                           "%%MatrixMarket matrix coordinate real general\n"
                           "1 1 1\n"
                           "1 1 abc\n");
    CHECK_THROWS_AS(read_matrix_market<double>(path), MmParseError);
    std::remove(path.c_str());
}

TEST_CASE("write/read round-trips a generated graph") {
    RmatParams p;
    p.scale = 7;
    p.edge_factor = 4;
    p.seed = 99;
    auto A = rmat_generate<double>(p);
    auto path = temp_file("mm_roundtrip.mtx");
    write_matrix_market(A, path);
    auto B = read_matrix_market<double>(path);
    CHECK(A.nrows == B.nrows);
    CHECK(A.row_ptr == B.row_ptr);
    CHECK(A.col_idx == B.col_idx);
    CHECK(A.values == B.values);
    std::remove(path.c_str());
}

TEST_CASE("rmat size contract and determinism") {
    RmatParams p;
    p.scale = 10;
    p.edge_factor = 8;
    p.seed = 5;
    auto A = rmat_generate<double>(p);
    CHECK(A.nrows == 1024);
    CHECK(A.nnz() <= 8192);
    CHECK(A.nnz() > 0);
    CHECK(!validate(A).has_value());

    auto B = rmat_generate<double>(p);
    CHECK(A.row_ptr == B.row_ptr);
    CHECK(A.col_idx == B.col_idx);
    CHECK(A.values == B.values);
}

TEST_CASE("skewed quadrants concentrate degree") {
    RmatParams uniform;
    uniform.scale = 11;
    uniform.edge_factor = 8;
    uniform.a = uniform.b = uniform.c = uniform.d = 0.25;
    uniform.seed = 7;
    RmatParams skewed;
    skewed.scale = 11;
    skewed.edge_factor = 8;
    skewed.seed = 7;

    auto su = stats(rmat_generate<double>(uniform));
    auto ss = stats(rmat_generate<double>(skewed));
    double ratio_u = su.max_degree / su.avg_degree;
    double ratio_s = ss.max_degree / ss.avg_degree;
    CHECK(ratio_s > 2.0 * ratio_u);
}

TEST_CASE("rmat validates quadrant probabilities") {
    RmatParams p;
    p.a = 0.5;
    p.b = 0.5;
    p.c = 0.5;
    p.d = 0.5;
    CHECK_THROWS_AS(rmat_generate<double>(p), std::invalid_argument);
}

TEST_CASE("write_csv shapes") {
    std::ostringstream empty;
    write_csv({}, empty);
    const std::string header_only = empty.str();
    CHECK(std::count(header_only.begin(), header_only.end(), '\n') == 1);

    BenchRecord r1, r2;
    r1.graph = "plain";
    r2.graph = "with,comma";
    std::ostringstream two;
    write_csv({r1, r2}, two);
    const std::string body = two.str();
    CHECK(std::count(body.begin(), body.end(), '\n') == 3);
    CHECK(body.find("\"with,comma\"") != std::string::npos);
}

TEST_CASE("run_bench smoke on a small graph") {
    RmatParams p;
    p.scale = 8;
    p.edge_factor = 8;
    p.seed = 11;
    auto A = rmat_generate<float>(p);
    auto spec = make_spec<float>(App::NODE_EMBED_SIGMOID);
    auto records = run_bench(A, "smoke", spec, "embed", {16}, {1, 4}, 2,
                             BenchMode::BOTH);
    REQUIRE(records.size() == 2);
    for (const auto& r : records) {
        CHECK(r.fused_seconds > 0.0);
        CHECK(r.reference_seconds > 0.0);
        CHECK(r.verified);
        CHECK(!r.reference_oom);
        CHECK(r.achieved_gflops > 0.0);
        CHECK(r.iterations == 2);
    }
}

TEST_CASE("reference materialized bytes grow with d for the fr app") {
    RmatParams p;
    p.scale = 8;
    p.edge_factor = 8;
    p.seed = 13;
    auto A = rmat_generate<float>(p);
    auto spec = make_spec<float>(App::FR_LAYOUT);
    auto records = run_bench(A, "fr-growth", spec, "fr", {8, 16, 32}, {1}, 1,
                             BenchMode::REFERENCE);
    REQUIRE(records.size() == 3);
    const auto nnz = static_cast<std::size_t>(A.nnz());
    for (const auto& r : records)
        CHECK(r.materialized_h_bytes ==
              nnz * static_cast<std::size_t>(r.d) * 12);
}
