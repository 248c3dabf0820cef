#pragma once

#include <vector>

#include "cyclab/int_mat.hpp"

namespace cyclab {

// All-integer LLL reduction (Cohen alg. 2.6.3) on the rows of B, which must
// be linearly independent. delta = 3/4. Reduces B in place.
inline void lll_reduce(IntMat& B) {
    int n = B.rows();
    if (n <= 1) return;
    int m = B.cols();
    std::vector<Int> d(n + 1);
    d[0] = 1;
    std::vector<std::vector<Int>> lam(n, std::vector<Int>(n));

    auto dot = [&](int i, int j) {
        Int s = 0;
        for (int t = 0; t < m; ++t) s += B.at(i, t) * B.at(j, t);
        return s;
    };

    // incremental Gram-Schmidt bookkeeping
    auto compute_row = [&](int k) {
        for (int j = 0; j <= k; ++j) {
            Int u = dot(k, j);
            for (int i = 0; i < j; ++i) u = (d[i + 1] * u - lam[k][i] * lam[j][i]) / d[i];
            if (j < k)
                lam[k][j] = u;
            else
                d[k + 1] = u;
        }
        if (d[k + 1] == 0) throw InternalError("lll_reduce: rows not independent");
    };

    auto red = [&](int k, int l) {
        Int two_lam = 2 * lam[k][l];
        if (abs(two_lam) <= d[l + 1]) return;
        Int q = detail::quot_near(lam[k][l], d[l + 1]);
        for (int t = 0; t < m; ++t) B.at(k, t) -= q * B.at(l, t);
        lam[k][l] -= q * d[l + 1];
        for (int i = 0; i < l; ++i) lam[k][i] -= q * lam[l][i];
    };

    auto swap_step = [&](int k) {
        detail::row_swap(B, k, k - 1);
        for (int j = 0; j < k - 1; ++j) std::swap(lam[k][j], lam[k - 1][j]);
        Int lam_val = lam[k][k - 1];
        Int bnew = (d[k - 1] * d[k + 1] + lam_val * lam_val) / d[k];
        for (int i = k + 1; i < n; ++i) {
            Int t = lam[i][k];
            lam[i][k] = (d[k + 1] * lam[i][k - 1] - lam_val * t) / d[k];
            lam[i][k - 1] = (bnew * t + lam_val * lam[i][k]) / d[k + 1];
        }
        d[k] = bnew;
    };

    for (int k = 0; k < n; ++k) compute_row(k);

    int k = 1;
    while (k < n) {
        red(k, k - 1);
        // Lovasz condition: d[k+1]*d[k-1] >= (3/4) d[k]^2 - lam^2, integrally:
        // 4 (d[k+1] d[k-1] + lam^2) >= 3 d[k]^2
        Int lhs = 4 * (d[k + 1] * d[k - 1] + lam[k][k - 1] * lam[k][k - 1]);
        Int rhs = 3 * d[k] * d[k];
        if (lhs < rhs) {
            swap_step(k);
            if (k > 1) --k;
        } else {
            for (int l = k - 2; l >= 0; --l) red(k, l);
            ++k;
        }
    }
}

}  // namespace cyclab
