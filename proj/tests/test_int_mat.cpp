#include <catch2/catch_amalgamated.hpp>

#include <functional>
#include <map>
#include <random>
#include <set>

#include "cyclab/int_mat.hpp"

using namespace cyclab;

namespace {

IntMat from_rows(const std::vector<std::vector<long>>& rows) {
    if (rows.empty()) return IntMat(0, 0);
    IntMat m((int)rows.size(), (int)rows[0].size());
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) m.at(i, j) = rows[i][j];
    return m;
}

// Brute-force structure of Z^n / rowspan(gens) when the quotient is finite
// and small: enumerate cosets inside the HNF fundamental domain, then read
// off invariant factors from solution counts of k*x = 0.
std::optional<FinAbGroup> quotient_oracle(int ambient, const IntMat& gens, long bound = 10000) {
    IntMat H = hnf_basis(gens);
    if (H.rows() < ambient) return std::nullopt;  // infinite quotient
    Int order = 1;
    for (int i = 0; i < ambient; ++i) order *= H.at(i, i);
    if (order > bound) return std::nullopt;
    long N = (long)order.get_si();

    // Enumerate vectors with coordinate i in [0, H[i][i]), reduce map.
    auto reduce = [&](std::vector<Int> v) {
        for (int i = 0; i < ambient; ++i) {
            Int q;
            mpz_fdiv_q(q.get_mpz_t(), v[i].get_mpz_t(), H.at(i, i).get_mpz_t());
            if (q != 0)
                for (int j = i; j < ambient; ++j) v[j] -= q * H.at(i, j);
        }
        return v;
    };
    std::vector<std::vector<Int>> elems;
    std::vector<Int> cur(ambient, 0);
    std::function<void(int)> gen = [&](int i) {
        if (i == ambient) {
            elems.push_back(cur);
            return;
        }
        for (Int v = 0; v < H.at(i, i); ++v) {
            cur[i] = v;
            gen(i + 1);
        }
    };
    gen(0);
    REQUIRE((long)elems.size() == N);

    // count solutions of k*x == 0
    auto count_killed = [&](long k) {
        long c = 0;
        for (auto& e : elems) {
            std::vector<Int> ke(ambient);
            for (int j = 0; j < ambient; ++j) ke[j] = e[j] * k;
            ke = reduce(ke);
            bool z = true;
            for (auto& x : ke) z &= (x == 0);
            if (z) ++c;
        }
        return c;
    };

    // Per prime p | N: #{i : v_p(d_i) >= j} = log_p(N_{p^j} / N_{p^{j-1}});
    // assemble exponent columns into an invariant-factor chain.
    std::map<long, std::vector<int>> exps_by_prime;  // prime -> exponents (one per cyclic p-factor)
    for (auto& [p, e] : cyclab::factorize(N)) {
        std::vector<int> mult;  // mult[j-1] = #factors with v_p >= j
        long prev = count_killed(1), pj = 1;
        while (true) {
            pj *= p;
            long cnt = count_killed(pj);
            long ratio = cnt / prev;
            int r = 0;
            while (ratio > 1) ratio /= p, ++r;
            if (r == 0) break;
            mult.push_back(r);
            prev = cnt;
        }
        std::vector<int> exps;
        if (!mult.empty()) {
            int k = mult[0];
            exps.assign(k, 0);
            for (size_t j = 0; j < mult.size(); ++j)
                for (int i = 0; i < mult[j]; ++i) exps[i] += 1;
        }
        std::sort(exps.begin(), exps.end());  // ascending
        exps_by_prime[p] = exps;
    }
    size_t nfac = 0;
    for (auto& [p, v] : exps_by_prime) nfac = std::max(nfac, v.size());
    std::vector<Int> ds(nfac, 1);
    for (auto& [p, v] : exps_by_prime)
        for (size_t i = 0; i < v.size(); ++i) {
            // align largest exponents with the last invariant factors
            size_t pos = nfac - v.size() + i;
            for (int t = 0; t < v[i]; ++t) ds[pos] *= p;
        }
    FinAbGroup g;
    for (auto& d : ds)
        if (d > 1) g.factors.push_back(d);
    return g;
}

}  // namespace

TEST_CASE("snf examples") {
    SECTION("identity") {
        IntMat I = IntMat::identity(3);
        SnfResult s = snf(I);
        CHECK(s.D == I);
        CHECK(s.U.mul(I).mul(s.V) == s.D);
    }
    SECTION("diag(2,3) -> diag(1,6)") {
        IntMat m = from_rows({{2, 0}, {0, 3}});
        SnfResult s = snf(m);
        CHECK(s.diag == std::vector<Int>{1, 6});
        CHECK(s.U.mul(m).mul(s.V) == s.D);
    }
    SECTION("[[2,4],[6,8]] -> diag(2,4)") {
        IntMat m = from_rows({{2, 4}, {6, 8}});
        SnfResult s = snf(m);
        CHECK(s.diag == std::vector<Int>{2, 4});
        CHECK(s.U.mul(m).mul(s.V) == s.D);
    }
}

TEST_CASE("snf round trip randomized") {
    std::mt19937_64 rng(12345);
    for (int iter = 0; iter < 120; ++iter) {
        int r = 1 + (int)(rng() % 8), c = 1 + (int)(rng() % 8);
        IntMat m(r, c);
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < c; ++j) m.at(i, j) = (long)(rng() % 2000001) - 1000000;
        SnfResult s = snf(m);
        REQUIRE(s.U.mul(m).mul(s.V) == s.D);
        REQUIRE(s.V.mul(s.Vinv) == IntMat::identity(c));
        // divisibility chain
        for (size_t i = 0; i + 1 < s.diag.size(); ++i) {
            if (s.diag[i + 1] == 0) continue;
            if (s.diag[i] == 0) {
                REQUIRE(s.diag[i + 1] == 0);
            } else {
                REQUIRE(mpz_divisible_p(s.diag[i + 1].get_mpz_t(), s.diag[i].get_mpz_t()));
            }
        }
        // |det| preservation on square nonsingular
        if (r == c) {
            Int d = det_bareiss(m);
            if (d != 0) {
                Int prod = 1;
                for (auto& x : s.diag) prod *= x;
                REQUIRE(prod == abs(d));
            }
        }
    }
}

TEST_CASE("quotient_structure examples") {
    SECTION("full rank standard basis") {
        auto q = quotient_structure(2, from_rows({{1, 0}, {0, 1}}));
        CHECK(q.free_rank == 0);
        CHECK(q.torsion.is_trivial());
    }
    SECTION("(2,0),(0,3) -> Z/6") {
        auto q = quotient_structure(2, from_rows({{2, 0}, {0, 3}}));
        CHECK(q.free_rank == 0);
        CHECK(q.torsion == FinAbGroup::cyclic(6));
    }
    SECTION("one row (1,0)") {
        auto q = quotient_structure(2, from_rows({{1, 0}}));
        CHECK(q.free_rank == 1);
        CHECK(q.torsion.is_trivial());
    }
}

TEST_CASE("quotient structure against coset-enumeration oracle") {
    std::mt19937_64 rng(777);
    int tested = 0;
    for (int iter = 0; iter < 400 && tested < 60; ++iter) {
        int n = 1 + (int)(rng() % 3);
        IntMat m(n + (int)(rng() % 2), n);
        for (int i = 0; i < m.rows(); ++i)
            for (int j = 0; j < m.cols(); ++j) m.at(i, j) = (long)(rng() % 13) - 6;
        auto q = quotient_structure(n, m);
        if (q.free_rank != 0) continue;
        auto oracle = quotient_oracle(n, m);
        if (!oracle) continue;
        ++tested;
        REQUIRE(q.torsion == *oracle);
    }
    REQUIRE(tested >= 30);
}

TEST_CASE("intersect and saturate") {
    SECTION("orthogonal lines meet in 0") {
        IntMat r = intersect_lattices(from_rows({{1, 0}}), from_rows({{0, 1}}));
        CHECK(r.rows() == 0);
    }
    SECTION("saturate 2Z^2 is Z^2") {
        IntMat s = saturate(from_rows({{2, 0}, {0, 2}}));
        CHECK(s == IntMat::identity(2));
    }
    SECTION("diagonal line in 2Z^2") {
        IntMat r = intersect_lattices(from_rows({{1, 1}}), from_rows({{2, 0}, {0, 2}}));
        CHECK(r == from_rows({{2, 2}}));
    }
    SECTION("saturate idempotent, intersect commutative/associative (randomized)") {
        std::mt19937_64 rng(99);
        for (int iter = 0; iter < 40; ++iter) {
            int n = 2 + (int)(rng() % 3);
            auto rnd = [&](int rows) {
                IntMat m(rows, n);
                for (int i = 0; i < rows; ++i)
                    for (int j = 0; j < n; ++j) m.at(i, j) = (long)(rng() % 9) - 4;
                return m;
            };
            IntMat A = rnd(1 + (int)(rng() % n)), B = rnd(1 + (int)(rng() % n)), C = rnd(1 + (int)(rng() % n));
            IntMat sA = saturate(A);
            REQUIRE(saturate(sA) == sA);
            REQUIRE(intersect_lattices(A, B) == intersect_lattices(B, A));
            IntMat ab_c = intersect_lattices(intersect_lattices(A, B), C);
            IntMat a_bc = intersect_lattices(A, intersect_lattices(B, C));
            REQUIRE(ab_c == a_bc);
        }
    }
}

TEST_CASE("kernel and solve") {
    std::mt19937_64 rng(4242);
    for (int iter = 0; iter < 60; ++iter) {
        int r = 2 + (int)(rng() % 4), c = 1 + (int)(rng() % 4);
        IntMat m(r, c);
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < c; ++j) m.at(i, j) = (long)(rng() % 15) - 7;
        IntMat K = kernel(m);
        REQUIRE(K.rows() == r - rank_of(m));
        if (K.rows() > 0) REQUIRE(K.mul(m).is_zero());
        // any Z-combination of rows is solvable back
        IntMat comb(1, r);
        for (int j = 0; j < r; ++j) comb.at(0, j) = (long)(rng() % 7) - 3;
        IntMat b = comb.mul(m);
        auto x = solve_left(m, b);
        REQUIRE(x.has_value());
        REQUIRE(x->mul(m) == b);
    }
}

TEST_CASE("p_part and torsion helpers") {
    FinAbGroup g;
    g.factors = {Int(6)};
    CHECK(p_part(g, 3) == FinAbGroup::cyclic(3));
    CHECK(p_part(FinAbGroup::trivial(), 3).is_trivial());
    FinAbGroup h;
    h.factors = {Int(2), Int(18)};  // Z/2 + Z/18; 3-part = Z/9
    CHECK(p_part(h, 3) == FinAbGroup::cyclic(9));
    FinAbGroup k;
    k.factors = {Int(3), Int(9)};
    CHECK(group_pk_torsion(k, 3, 1) == FinAbGroup(std::vector<Int>{3, 3}));
}

TEST_CASE("p-normal lattice and p-local equality") {
    // L = <(2,0),(0,3)>: 3-locally equal to <(1,0),(0,3)>
    IntMat A = from_rows({{2, 0}, {0, 3}});
    IntMat B = from_rows({{1, 0}, {0, 3}});
    CHECK(lattice_p_equal(A, B, 3));
    CHECK(!lattice_p_equal(A, B, 2));
    // rational lattices: (1/3)<(3,0),(0,3)> == <(1,0),(0,1)> at 3
    RatLattice L1(from_rows({{3, 0}, {0, 3}}), Int(3));
    RatLattice L2(from_rows({{1, 0}, {0, 1}}), Int(1));
    CHECK(rat_lattice_p_equal(L1, L2, 3));
    RatLattice L3(from_rows({{1, 0}, {0, 3}}), Int(1));
    CHECK(!rat_lattice_p_equal(L1, L3, 3));
}

TEST_CASE("p_quotient_structure") {
    // Z^2 / <(3,0),(0,6)> : 3-part Z/3 + Z/3, free 0
    RatLattice A(IntMat::identity(2));
    RatLattice B(from_rows({{3, 0}, {0, 6}}));
    auto q = p_quotient_structure(A, B, 3);
    CHECK(q.free_rank == 0);
    CHECK(q.p_torsion == FinAbGroup(std::vector<Int>{3, 3}));
    // with denominators: A = Z^2, B = (1/3)<(3,0),(0,18)>  => quotient 3-part Z/3... B = <(1,0),(0,6)>
    RatLattice B2(from_rows({{3, 0}, {0, 18}}), Int(3));
    auto q2 = p_quotient_structure(A, B2, 3);
    CHECK(q2.free_rank == 0);
    CHECK(q2.p_torsion == FinAbGroup::cyclic(3));
    // half-rank
    RatLattice B3(from_rows({{3, 0}}));
    auto q3 = p_quotient_structure(A, B3, 3);
    CHECK(q3.free_rank == 1);
    CHECK(q3.p_torsion == FinAbGroup::cyclic(3));
}
