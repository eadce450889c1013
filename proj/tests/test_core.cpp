#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>
#include <tuple>

#include "fusedmm/matrix.hpp"
#include "test_util.hpp"

using namespace fusedmm;

TEST_CASE("csr_from_coo builds a 2-cycle") {
    std::vector<CooEntry<double>> e{{0, 1, 1.0}, {1, 0, 1.0}};
    auto A = csr_from_coo(e, 2, 2);
    CHECK(A.row_ptr == std::vector<index_t>{0, 1, 2});
    CHECK(A.col_idx == std::vector<index_t>{1, 0});
    CHECK(A.nnz() == 2);
}

TEST_CASE("csr_from_coo empty graph") {
    auto A = csr_from_coo<double>({}, 3, 3);
    CHECK(A.row_ptr == std::vector<index_t>{0, 0, 0, 0});
    CHECK(A.nnz() == 0);
}

TEST_CASE("csr_from_coo sums duplicates") {
    std::vector<CooEntry<double>> e{{0, 0, 1.0}, {0, 0, 2.0}};
    auto A = csr_from_coo(e, 1, 1);
    REQUIRE(A.nnz() == 1);
    CHECK(A.values[0] == 3.0);
}

TEST_CASE("csr_from_coo keeps first-occurrence order within a row") {
    std::vector<CooEntry<double>> e{{0, 3, 1.0}, {0, 1, 2.0}, {0, 3, 4.0}};
    auto A = csr_from_coo(e, 1, 4);
    CHECK(A.col_idx == std::vector<index_t>{3, 1});
    CHECK(A.values == std::vector<double>{5.0, 2.0});
}

TEST_CASE("csr_from_coo rejects out-of-bounds entries") {
    std::vector<CooEntry<double>> e{{2, 0, 1.0}};
    CHECK_THROWS_AS(csr_from_coo(e, 2, 2), std::invalid_argument);
    std::vector<CooEntry<double>> e2{{0, 5, 1.0}};
    CHECK_THROWS_AS(csr_from_coo(e2, 2, 2), std::invalid_argument);
}

TEST_CASE("validate accepts a valid CSR") {
    auto A = csr_from_coo<double>({{0, 1, 1.0}, {1, 0, 1.0}}, 2, 2);
    CHECK(!validate(A).has_value());
}

TEST_CASE("validate reports non-monotone row_ptr") {
    CsrMatrix<double> A;
    A.nrows = 2;
    A.ncols = 2;
    A.row_ptr = {0, 2, 1};
    A.col_idx = {0};
    A.values = {1.0};
    auto v = validate(A);
    REQUIRE(v.has_value());
    CHECK(*v == "row_ptr not monotone at index 2");
}

TEST_CASE("validate reports out-of-range column") {
    CsrMatrix<double> A;
    A.nrows = 1;
    A.ncols = 2;
    A.row_ptr = {0, 1};
    A.col_idx = {2};
    A.values = {1.0};
    auto v = validate(A);
    REQUIRE(v.has_value());
    CHECK(*v == "column index out of range");
}

TEST_CASE("stats on the 2-cycle") {
    auto A = csr_from_coo<double>({{0, 1, 1.0}, {1, 0, 1.0}}, 2, 2);
    auto s = stats(A);
    CHECK(s.avg_degree == 1.0);
    CHECK(s.max_degree == 1);
}

TEST_CASE("stats on a star graph") {
    std::vector<CooEntry<double>> e;
    for (index_t v = 1; v <= 5; ++v) e.push_back({0, v, 1.0});
    auto A = csr_from_coo(e, 6, 6);
    auto s = stats(A);
    CHECK(s.avg_degree == doctest::Approx(5.0 / 6.0));
    CHECK(s.max_degree == 5);
}

TEST_CASE("avg degree formula matches the Orkut-scale figure") {
    // formula check only, not constructed at desk scale
    double avg = 234370166.0 / 3072441.0;
    CHECK(avg == doctest::Approx(76.28).epsilon(0.0001));
}

TEST_CASE("COO round-trip property") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        index_t m = 1 + static_cast<index_t>(rng() % 20);
        index_t n = 1 + static_cast<index_t>(rng() % 20);
        std::uniform_real_distribution<double> val(0.1, 2.0);
        std::vector<CooEntry<double>> entries;
        index_t cnt = static_cast<index_t>(rng() % (m * n + 1));
        for (index_t i = 0; i < cnt; ++i)
            entries.push_back({static_cast<index_t>(rng() % m),
                               static_cast<index_t>(rng() % n), val(rng)});
        auto A = csr_from_coo(entries, m, n);
        CHECK(!validate(A).has_value());

        // dedup + sum the input independently
        std::vector<std::tuple<index_t, index_t, double>> expect;
        for (const auto& e : entries) {
            auto it = std::find_if(expect.begin(), expect.end(), [&](auto& t) {
                return std::get<0>(t) == e.row && std::get<1>(t) == e.col;
            });
            if (it == expect.end())
                expect.emplace_back(e.row, e.col, e.value);
            else
                std::get<2>(*it) += e.value;
        }
        std::vector<std::tuple<index_t, index_t, double>> got;
        for (index_t r = 0; r < m; ++r)
            for (index_t p = A.row_ptr[r]; p < A.row_ptr[r + 1]; ++p)
                got.emplace_back(r, A.col_idx[p], A.values[p]);
        std::sort(expect.begin(), expect.end());
        std::sort(got.begin(), got.end());
        REQUIRE(got.size() == expect.size());
        for (std::size_t i = 0; i < got.size(); ++i) {
            CHECK(std::get<0>(got[i]) == std::get<0>(expect[i]));
            CHECK(std::get<1>(got[i]) == std::get<1>(expect[i]));
            CHECK(std::get<2>(got[i]) ==
                  doctest::Approx(std::get<2>(expect[i])));
        }
    }
}

TEST_CASE("DenseMatrix rejects non-finite values") {
    std::vector<double> bad{1.0, std::numeric_limits<double>::quiet_NaN()};
    CHECK_THROWS_AS(DenseMatrix<double>(1, 2, bad), std::invalid_argument);
}
