#include <doctest.h>

#include "corners/error.hpp"
#include "corners/homology.hpp"
#include "support/oracles.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <numeric>
#include <random>
#include <sstream>

using namespace corners;
using oracle::complex_from;
using oracle::Dense;
using oracle::mul;
using oracle::random_unimodular;

namespace {

// Textbook elimination over GF(2) on unpacked bytes.
long long naive_rank_gf2(Dense a) {
    const int rows = static_cast<int>(a.size());
    const int cols = rows ? static_cast<int>(a[0].size()) : 0;
    for (auto& r : a)
        for (auto& x : r) x = ((x % 2) + 2) % 2;
    long long rank = 0;
    for (int c = 0; c < cols && rank < rows; ++c) {
        int piv = -1;
        for (int r = static_cast<int>(rank); r < rows; ++r)
            if (a[r][c]) piv = r;
        if (piv < 0) continue;
        std::swap(a[rank], a[piv]);
        for (int r = 0; r < rows; ++r)
            if (r != rank && a[r][c])
                for (int k = 0; k < cols; ++k) a[r][k] ^= a[rank][k];
        ++rank;
    }
    return rank;
}

// Gaussian elimination over Q with exact rationals.
long long naive_rank_q(const Dense& in) {
    using boost::multiprecision::cpp_rational;
    const int rows = static_cast<int>(in.size());
    const int cols = rows ? static_cast<int>(in[0].size()) : 0;
    std::vector<std::vector<cpp_rational>> a(rows, std::vector<cpp_rational>(cols));
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) a[r][c] = in[r][c];
    long long rank = 0;
    for (int c = 0; c < cols && rank < rows; ++c) {
        int piv = -1;
        for (int r = static_cast<int>(rank); r < rows && piv < 0; ++r)
            if (a[r][c] != 0) piv = r;
        if (piv < 0) continue;
        std::swap(a[rank], a[piv]);
        for (int r = static_cast<int>(rank) + 1; r < rows; ++r) {
            if (a[r][c] == 0) continue;
            const cpp_rational f = a[r][c] / a[rank][c];
            for (int k = c; k < cols; ++k) a[r][k] -= f * a[rank][k];
        }
        ++rank;
    }
    return rank;
}

Dense random_dense(std::mt19937_64& rng, int rows, int cols, double density, int lo, int hi) {
    std::bernoulli_distribution coin(density);
    std::uniform_int_distribution<int> val(lo, hi);
    Dense a(rows, std::vector<std::int64_t>(cols, 0));
    for (auto& r : a)
        for (auto& x : r)
            if (coin(rng)) x = val(rng);
    return a;
}

// Random low-rank integer matrix: product of two thin random factors.
Dense low_rank(std::mt19937_64& rng, int rows, int cols, int rank) {
    auto u = random_dense(rng, rows, rank, 0.5, -3, 3);
    auto v = random_dense(rng, rank, cols, 0.5, -3, 3);
    Dense a(rows, std::vector<std::int64_t>(cols, 0));
    for (int i = 0; i < rows; ++i)
        for (int k = 0; k < rank; ++k)
            for (int j = 0; j < cols; ++j) a[i][j] += u[i][k] * v[k][j];
    return a;
}

}  // namespace

TEST_CASE("rank: trivial cases") {
    CHECK(rank_gf2(SparseIntMatrix(4, 3)) == 0);
    CHECK(rank_rational(SparseIntMatrix(4, 3)) == 0);
    Dense id(5, std::vector<std::int64_t>(5, 0));
    for (int i = 0; i < 5; ++i) id[i][i] = 1;
    CHECK(rank_gf2(SparseIntMatrix::from_dense(id)) == 5);
    CHECK(rank_rational(SparseIntMatrix::from_dense({{2, 4}, {1, 2}})) == 1);
    CHECK(rank_rational(SparseIntMatrix::from_dense({{2}})) == 1);
    CHECK(rank_gf2(SparseIntMatrix::from_dense({{2}})) == 0);
    CHECK(rank_exact(SparseIntMatrix::from_dense({{2, 4}, {1, 2}})) == 1);
}

TEST_CASE("rank_gf2 agrees with unpacked elimination on random 300x300") {
    std::mt19937_64 rng(1);
    for (double density : {0.005, 0.02, 0.3}) {
        auto a = random_dense(rng, 300, 300, density, 0, 1);
        const auto m = SparseIntMatrix::from_dense(a);
        const long long expect = naive_rank_gf2(a);
        CHECK(rank_gf2(m) == expect);
        CHECK(rank_gf2(m, {1.1, 1}) == expect);  // never switch to dense
        CHECK(rank_gf2(m, {0.0, 1}) == expect);  // dense at once
        CHECK(rank_mod_p(m, 2) == expect);
    }
}

TEST_CASE("rank_rational agrees with exact rational elimination on random 100x100") {
    std::mt19937_64 rng(2);
    for (int trial = 0; trial < 4; ++trial) {
        auto a = trial < 2 ? random_dense(rng, 100, 100, 0.05, -5, 5) : low_rank(rng, 100, 100, 37 + trial);
        const auto m = SparseIntMatrix::from_dense(a);
        const long long expect = naive_rank_q(a);
        CHECK(rank_rational(m) == expect);
        CHECK(rank_exact(m) == expect);
        auto rep = rank_rational_report(m);
        CHECK(rep.p1 > (1u << 20));
        CHECK(rep.p2 > (1u << 20));
        CHECK(rep.p1 != rep.p2);
        CHECK(is_prime(rep.p1));
        CHECK(is_prime(rep.p2));
    }
}

TEST_CASE("rank_rational: metamorphic invariance") {
    std::mt19937_64 rng(3);
    auto a = low_rank(rng, 60, 80, 25);
    const long long base = rank_rational(SparseIntMatrix::from_dense(a));
    for (int trial = 0; trial < 5; ++trial) {
        Dense b = a;
        std::shuffle(b.begin(), b.end(), rng);
        std::vector<int> perm(80);
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), rng);
        for (auto& row : b) {
            std::vector<std::int64_t> r(80);
            for (int j = 0; j < 80; ++j) r[j] = row[perm[j]];
            row = r;
        }
        for (std::size_t i = 0; i < b.size(); i += 3)
            for (auto& x : b[i]) x = -x;
        CHECK(rank_rational(SparseIntMatrix::from_dense(b)) == base);
        CHECK(rank_rational(SparseIntMatrix::from_dense(b), 1000 + trial) == base);
    }
    CHECK(rank_rational(SparseIntMatrix::from_dense(a).transpose()) == base);
}

TEST_CASE("rank mod p detects a prime dividing a minor") {
    // det = 7 * 3: rank 2 over Q, 1 mod 7.
    auto m = SparseIntMatrix::from_dense({{7, 0}, {0, 3}});
    CHECK(rank_mod_p(m, 7) == 1);
    CHECK(rank_mod_p(m, 11) == 2);
    CHECK(rank_exact(m) == 2);
}

TEST_CASE("primes") {
    CHECK(is_prime(2));
    CHECK(is_prime(1000003));
    CHECK_FALSE(is_prime(1));
    CHECK_FALSE(is_prime(561));  // Carmichael
    CHECK_FALSE(is_prime(1000001));
    std::uint64_t state = 9;
    for (int i = 0; i < 10; ++i) {
        const auto p = random_prime(state, 1u << 20, 1u << 30);
        CHECK(is_prime(p));
        CHECK(p > (1u << 20));
        CHECK(p < (1u << 30));
    }
}

TEST_CASE("smith normal form") {
    CHECK(smith_normal_form(SparseIntMatrix::from_dense({{2, 0}, {0, 3}})) == std::vector<std::int64_t>{1, 6});
    CHECK(smith_normal_form(SparseIntMatrix(3, 3)).empty());
    CHECK(smith_normal_form(SparseIntMatrix::from_dense({{2, 4, 4}, {-6, 6, 12}, {10, -4, -16}})) ==
          std::vector<std::int64_t>{2, 6, 12});
    CHECK_THROWS_AS(smith_normal_form(SparseIntMatrix(3, 3), 2), Error);
}

TEST_CASE("UCT oracle: random chain complexes with known torsion") {
    // Build d_k = U_{k-1} D_k V_k with D_k diagonal blocks chosen so D_k D_{k+1} = 0.
    // Over Q the rank of d_k is the number of nonzero factors; mod 2 it drops by
    // the even ones; SNF recovers the factors.
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 25; ++trial) {
        std::uniform_int_distribution<int> small(0, 3), factor(1, 6);
        const int n = 3;
        // Per degree: free part f_d, and a block of size a_d paired with degree d+1.
        std::vector<int> f(n + 1), a(n + 1, 0);
        for (int d = 0; d <= n; ++d) f[d] = small(rng);
        for (int d = 0; d < n; ++d) a[d] = small(rng);
        std::vector<long long> cells(n + 1);
        for (int d = 0; d <= n; ++d) cells[d] = f[d] + a[d] + (d ? a[d - 1] : 0);
        std::vector<std::vector<std::int64_t>> factors(n + 2);  // factors[d] belong to d_d
        std::vector<Dense> maps;
        std::vector<std::pair<Dense, Dense>> basis;
        for (int d = 0; d <= n; ++d) basis.push_back(random_unimodular(rng, static_cast<int>(cells[d])));
        for (int d = 1; d <= n; ++d) {
            // Layout of C_d: [free f_d | block a_d (source of nothing) | block a_{d-1} mapping down].
            Dense diag(cells[d - 1], std::vector<std::int64_t>(cells[d], 0));
            for (int i = 0; i < a[d - 1]; ++i) {
                const int t = factor(rng);
                factors[d].push_back(t);
                diag[f[d - 1] + i][f[d] + a[d] + i] = t;
            }
            // d_d = U_{d-1} diag U_d^{-1}
            maps.push_back(mul(mul(basis[d - 1].first, diag), basis[d].second));
        }
        auto cc = complex_from(cells, maps);
        REQUIRE(boundary_squares_to_zero(cc));
        auto bq = betti(cc, Field::rational);
        auto b2 = betti(cc, Field::gf2);
        for (int d = 0; d <= n; ++d) {
            auto even = [](const std::vector<std::int64_t>& v) {
                return std::count_if(v.begin(), v.end(), [](std::int64_t t) { return t % 2 == 0; });
            };
            // Torsion of H_d comes from d_{d+1}; the Tor term from H_{d-1} comes from d_d.
            CHECK(bq.b[d] == f[d]);
            CHECK(b2.b[d] == f[d] + even(factors[d + 1]) + even(factors[d]));
        }
        for (int d = 1; d <= n; ++d) {
            auto snf = smith_normal_form(cc.boundary[d]);
            auto expect = factors[d];
            std::sort(expect.begin(), expect.end());
            // Diagonal entries need not divide each other; compare the products and
            // the count of nonzero factors, and the 2-adic torsion count.
            std::int64_t p1 = 1, p2 = 1;
            for (auto t : snf) p1 *= t;
            for (auto t : expect) p2 *= t;
            CHECK(snf.size() == expect.size());
            CHECK(p1 == p2);
            CHECK(std::count_if(snf.begin(), snf.end(), [](auto t) { return t % 2 == 0; }) ==
                  std::count_if(expect.begin(), expect.end(), [](auto t) { return t % 2 == 0; }));
        }
    }
}

TEST_CASE("lens-space-like complexes") {
    // One cell per dimension 0..3 with d_2 = p: H_1 = Z/p.
    for (std::int64_t p : {2, 3, 4, 5}) {
        auto cc = complex_from({1, 1, 1, 1}, {{{0}}, {{p}}, {{0}}});
        auto bq = betti(cc, Field::rational);
        auto b2 = betti(cc, Field::gf2);
        CHECK(bq.b == std::vector<long long>{1, 0, 0, 1});
        if (p % 2 == 0)
            CHECK(b2.b == std::vector<long long>{1, 1, 1, 1});
        else
            CHECK(b2.b == std::vector<long long>{1, 0, 0, 1});
        CHECK(smith_normal_form(cc.boundary[2]) == std::vector<std::int64_t>{p});
        CHECK(cc.euler_characteristic() == 0);
    }
}

TEST_CASE("betti fast path agrees with the slow path on a closed orientable surface") {
    // Torus: 1 vertex, 2 edges, 1 face with boundary a + b - a - b.
    auto cc = complex_from({1, 2, 1}, {{{0, 0}}, {{0}, {0}}});
    cc.closed_orientable_manifold = true;
    auto slow = betti(cc, Field::rational);
    auto fast = betti(cc, Field::rational, true);
    CHECK(slow.b == std::vector<long long>{1, 2, 1});
    CHECK(fast.b == slow.b);
    CHECK(fast.fast_path);
    cc.closed_orientable_manifold = false;
    CHECK_THROWS_AS(betti(cc, Field::rational, true), Error);
    cc.closed_orientable_manifold = true;
    CHECK_THROWS_AS(betti(cc, Field::gf2, true), Error);
}

TEST_CASE("chain complex dump round trip") {
    auto cc = complex_from({1, 1, 1, 1}, {{{0}}, {{2}}, {{0}}});
    cc.closed_orientable_manifold = true;
    std::stringstream s;
    write_chain_complex(s, cc);
    auto back = read_chain_complex(s);
    CHECK(back.cells == cc.cells);
    CHECK(back.closed_orientable_manifold);
    for (int d = 1; d <= 3; ++d) CHECK(back.boundary[d].to_dense() == cc.boundary[d].to_dense());
    std::istringstream bad("complex 1\ncells 0 1\ncells 1 1\n1 5 0 1\n");
    CHECK_THROWS_AS(read_chain_complex(bad), FormatError);
}

TEST_CASE("boundary_squares_to_zero catches a broken complex") {
    auto cc = complex_from({1, 1, 1}, {{{1}}, {{1}}});
    CHECK_FALSE(boundary_squares_to_zero(cc));
}
