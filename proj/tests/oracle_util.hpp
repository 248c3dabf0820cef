#pragma once

// Test-only oracles, independent of the library's computation paths: finite
// quotient structure by coset enumeration inside the HNF fundamental domain.

#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "cyclab/int_mat.hpp"
#include "cyclab/tate.hpp"

namespace cyclab_test {

using namespace cyclab;

inline std::optional<FinAbGroup> quotient_oracle(int ambient, const IntMat& gens, long bound = 10000) {
    IntMat H = hnf_basis(gens);
    if (H.rows() < ambient) return std::nullopt;
    Int order = 1;
    for (int i = 0; i < ambient; ++i) order *= H.at(i, i);
    if (order > bound) return std::nullopt;
    long N = (long)order.get_si();

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
    if ((long)elems.size() != N) return std::nullopt;

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

    std::map<long, std::vector<int>> exps_by_prime;
    for (auto& [p, e] : cyclab::factorize(N)) {
        std::vector<int> mult;
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
            exps.assign(mult[0], 0);
            for (size_t j = 0; j < mult.size(); ++j)
                for (int i = 0; i < mult[j]; ++i) exps[i] += 1;
        }
        std::sort(exps.begin(), exps.end());
        exps_by_prime[p] = exps;
    }
    size_t nfac = 0;
    for (auto& [p, v] : exps_by_prime) nfac = std::max(nfac, v.size());
    std::vector<Int> ds(nfac, 1);
    for (auto& [p, v] : exps_by_prime)
        for (size_t i = 0; i < v.size(); ++i) {
            size_t pos = nfac - v.size() + i;
            for (int t = 0; t < v[i]; ++t) ds[pos] *= p;
        }
    FinAbGroup g;
    for (auto& d : ds)
        if (d > 1) g.factors.push_back(d);
    return g;
}

// Tate groups by coset enumeration (for small cases): returns nullopt when
// the expected enumeration bound is exceeded.
inline std::optional<TateGroups> tate_oracle(const IntMat& T, int64_t order, long bound = 10000) {
    int k = T.rows();
    TateGroups out;
    if (k == 0) return out;
    IntMat I = IntMat::identity(k);
    IntMat Tm1 = T - I;
    IntMat nu(k, k);
    IntMat pw = I;
    for (int64_t i = 0; i < order; ++i) {
        nu = nu + pw;
        pw = pw.mul(T);
    }
    auto piece = [&](const IntMat& ker_of, const IntMat& image_of) -> std::optional<FinAbGroup> {
        IntMat K = kernel(ker_of);
        if (K.rows() == 0) return FinAbGroup::trivial();
        auto X = solve_left(K, image_of);
        if (!X) return std::nullopt;
        return quotient_oracle(K.rows(), *X, bound);
    };
    auto h0 = piece(Tm1, hnf_basis(nu));
    auto hm1 = piece(nu, hnf_basis(Tm1));
    if (!h0 || !hm1) return std::nullopt;
    out.h0 = *h0;
    out.h_minus1 = *hm1;
    return out;
}

}  // namespace cyclab_test
