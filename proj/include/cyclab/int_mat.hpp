#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <vector>

#include "cyclab/numeric_util.hpp"

namespace cyclab {

using Int = mpz_class;
using Rat = mpq_class;

// Dense matrix of arbitrary-precision integers. Lattices throughout the
// library are row spans of these.
class IntMat {
  public:
    IntMat() : rows_(0), cols_(0) {}
    IntMat(int rows, int cols) : rows_(rows), cols_(cols), a_(size_t(rows) * cols) {}

    static IntMat identity(int n) {
        IntMat m(n, n);
        for (int i = 0; i < n; ++i) m.at(i, i) = 1;
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    Int& at(int i, int j) { return a_[size_t(i) * cols_ + j]; }
    const Int& at(int i, int j) const { return a_[size_t(i) * cols_ + j]; }

    bool operator==(const IntMat& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
    }

    bool is_zero() const {
        for (const auto& x : a_)
            if (x != 0) return false;
        return true;
    }

    IntMat transpose() const {
        IntMat t(cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) t.at(j, i) = at(i, j);
        return t;
    }

    IntMat mul(const IntMat& b) const {
        if (cols_ != b.rows_) throw InternalError("IntMat::mul: shape mismatch");
        IntMat c(rows_, b.cols_);
        Int tmp;
        for (int i = 0; i < rows_; ++i)
            for (int k = 0; k < cols_; ++k) {
                const Int& aik = at(i, k);
                if (aik == 0) continue;
                for (int j = 0; j < b.cols_; ++j) {
                    if (b.at(k, j) == 0) continue;
                    tmp = aik * b.at(k, j);
                    c.at(i, j) += tmp;
                }
            }
        return c;
    }

    IntMat operator*(const IntMat& b) const { return mul(b); }

    IntMat operator+(const IntMat& b) const {
        IntMat c(rows_, cols_);
        for (size_t i = 0; i < a_.size(); ++i) c.a_[i] = a_[i] + b.a_[i];
        return c;
    }

    IntMat operator-(const IntMat& b) const {
        IntMat c(rows_, cols_);
        for (size_t i = 0; i < a_.size(); ++i) c.a_[i] = a_[i] - b.a_[i];
        return c;
    }

    IntMat scaled(const Int& k) const {
        IntMat c(rows_, cols_);
        for (size_t i = 0; i < a_.size(); ++i) c.a_[i] = a_[i] * k;
        return c;
    }

    std::vector<Int> row(int i) const {
        return std::vector<Int>(a_.begin() + size_t(i) * cols_, a_.begin() + size_t(i + 1) * cols_);
    }

    void set_row(int i, const std::vector<Int>& r) {
        for (int j = 0; j < cols_; ++j) at(i, j) = r[j];
    }

    IntMat rows_slice(int from, int to) const {
        IntMat m(to - from, cols_);
        for (int i = from; i < to; ++i)
            for (int j = 0; j < cols_; ++j) m.at(i - from, j) = at(i, j);
        return m;
    }

    static IntMat vstack(const IntMat& a, const IntMat& b) {
        if (a.rows() == 0) return b;
        if (b.rows() == 0) return a;
        if (a.cols() != b.cols()) throw InternalError("vstack: col mismatch");
        IntMat m(a.rows() + b.rows(), a.cols());
        for (int i = 0; i < a.rows(); ++i)
            for (int j = 0; j < a.cols(); ++j) m.at(i, j) = a.at(i, j);
        for (int i = 0; i < b.rows(); ++i)
            for (int j = 0; j < b.cols(); ++j) m.at(a.rows() + i, j) = b.at(i, j);
        return m;
    }

    std::string str() const {
        std::string s;
        for (int i = 0; i < rows_; ++i) {
            s += "[";
            for (int j = 0; j < cols_; ++j) {
                s += at(i, j).get_str();
                if (j + 1 < cols_) s += ", ";
            }
            s += "]\n";
        }
        return s;
    }

  private:
    int rows_, cols_;
    std::vector<Int> a_;
};

namespace detail {
inline void row_sub_mul(IntMat& m, int dst, int src, const Int& q) {
    if (q == 0) return;
    Int tmp;
    for (int j = 0; j < m.cols(); ++j) {
        if (m.at(src, j) == 0) continue;
        tmp = q * m.at(src, j);
        m.at(dst, j) -= tmp;
    }
}
inline void row_swap(IntMat& m, int i, int k) {
    if (i == k) return;
    for (int j = 0; j < m.cols(); ++j) mpz_swap(m.at(i, j).get_mpz_t(), m.at(k, j).get_mpz_t());
}
inline void row_neg(IntMat& m, int i) {
    for (int j = 0; j < m.cols(); ++j) m.at(i, j) = -m.at(i, j);
}
// Quotient round-to-nearest, for entry-size control during elimination.
inline Int quot_near(const Int& a, const Int& b) {
    Int q, r;
    mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    Int b2 = abs(b);
    if (r * 2 > b2) q += 1;
    return q;
}
}  // namespace detail

struct HnfResult {
    IntMat H;                     // U * M = H, echelon form
    IntMat U;                     // unimodular
    std::vector<int> pivot_cols;  // one per pivot row
    int rank = 0;
};

// Row-style Hermite normal form: pivot rows first, pivots positive, entries
// above each pivot reduced into [0, pivot).
inline HnfResult hnf(const IntMat& M, bool with_transform = true) {
    HnfResult res;
    res.H = M;
    if (with_transform) res.U = IntMat::identity(M.rows());
    IntMat& H = res.H;
    IntMat& U = res.U;
    int r = 0;
    for (int c = 0; c < M.cols() && r < M.rows(); ++c) {
        // Euclidean reduction of column c among rows r..end.
        while (true) {
            int best = -1;
            for (int i = r; i < H.rows(); ++i) {
                if (H.at(i, c) == 0) continue;
                if (best < 0 || mpz_cmpabs(H.at(i, c).get_mpz_t(), H.at(best, c).get_mpz_t()) < 0) best = i;
            }
            if (best < 0) break;
            detail::row_swap(H, r, best);
            if (with_transform) detail::row_swap(U, r, best);
            bool cleared = true;
            for (int i = r + 1; i < H.rows(); ++i) {
                if (H.at(i, c) == 0) continue;
                Int q = detail::quot_near(H.at(i, c), H.at(r, c));
                detail::row_sub_mul(H, i, r, q);
                if (with_transform) detail::row_sub_mul(U, i, r, q);
                if (H.at(i, c) != 0) cleared = false;
            }
            if (cleared) break;
        }
        if (H.at(r, c) == 0) continue;
        if (H.at(r, c) < 0) {
            detail::row_neg(H, r);
            if (with_transform) detail::row_neg(U, r);
        }
        for (int i = 0; i < r; ++i) {
            Int q;
            mpz_fdiv_q(q.get_mpz_t(), H.at(i, c).get_mpz_t(), H.at(r, c).get_mpz_t());
            detail::row_sub_mul(H, i, r, q);
            if (with_transform) detail::row_sub_mul(U, i, r, q);
        }
        res.pivot_cols.push_back(c);
        ++r;
    }
    res.rank = r;
    return res;
}

// Canonical basis (HNF pivot rows only) of the row span.
inline IntMat hnf_basis(const IntMat& M) {
    HnfResult h = hnf(M, false);
    return h.H.rows_slice(0, h.rank);
}

inline int rank_of(const IntMat& M) { return hnf(M, false).rank; }

// Basis of {x : x*M = 0}, as HNF rows.
inline IntMat kernel(const IntMat& M) {
    HnfResult h = hnf(M, true);
    IntMat K = h.U.rows_slice(h.rank, M.rows());
    return hnf_basis(K);
}

// Solve X*M = B exactly over Z; returns nullopt if any row has no solution.
inline std::optional<IntMat> solve_left(const IntMat& M, const IntMat& B) {
    HnfResult h = hnf(M, true);
    IntMat X(B.rows(), M.rows());
    std::vector<Int> b(M.cols());
    for (int i = 0; i < B.rows(); ++i) {
        for (int j = 0; j < M.cols(); ++j) b[j] = B.at(i, j);
        std::vector<Int> y(M.rows());
        for (int r = 0; r < h.rank; ++r) {
            int c = h.pivot_cols[r];
            if (b[c] == 0) continue;
            Int q, rem;
            mpz_fdiv_qr(q.get_mpz_t(), rem.get_mpz_t(), b[c].get_mpz_t(), h.H.at(r, c).get_mpz_t());
            if (rem != 0) return std::nullopt;
            y[r] = q;
            for (int j = 0; j < M.cols(); ++j)
                if (h.H.at(r, j) != 0) b[j] -= q * h.H.at(r, j);
        }
        for (int j = 0; j < M.cols(); ++j)
            if (b[j] != 0) return std::nullopt;
        // X row = y * U
        for (int r = 0; r < M.rows(); ++r) {
            if (y[r] == 0) continue;
            for (int j = 0; j < M.rows(); ++j)
                if (h.U.at(r, j) != 0) X.at(i, j) += y[r] * h.U.at(r, j);
        }
    }
    return X;
}

// Solve X*M = B over Q; returns (X_int, den) with X = X_int/den, or nullopt.
inline std::optional<std::pair<IntMat, Int>> solve_left_rational(const IntMat& M, const IntMat& B) {
    HnfResult h = hnf(M, true);
    std::vector<Rat> b(M.cols());
    std::vector<std::vector<Rat>> Y(B.rows(), std::vector<Rat>(M.rows()));
    for (int i = 0; i < B.rows(); ++i) {
        for (int j = 0; j < M.cols(); ++j) b[j] = Rat(B.at(i, j));
        for (int r = 0; r < h.rank; ++r) {
            int c = h.pivot_cols[r];
            if (b[c] == 0) continue;
            Rat q = b[c] / Rat(h.H.at(r, c));
            Y[i][r] = q;
            for (int j = 0; j < M.cols(); ++j)
                if (h.H.at(r, j) != 0) b[j] -= q * Rat(h.H.at(r, j));
        }
        for (int j = 0; j < M.cols(); ++j)
            if (b[j] != 0) return std::nullopt;
    }
    Int den = 1;
    for (auto& row : Y)
        for (auto& q : row) den = lcm(den, Int(q.get_den()));
    IntMat X(B.rows(), M.rows());
    for (int i = 0; i < B.rows(); ++i)
        for (int r = 0; r < M.rows(); ++r) {
            if (Y[i][r] == 0) continue;
            Int scaled = Int(Y[i][r].get_num()) * (den / Int(Y[i][r].get_den()));
            for (int j = 0; j < M.rows(); ++j)
                if (h.U.at(r, j) != 0) X.at(i, j) += scaled * h.U.at(r, j);
        }
    return std::make_pair(std::move(X), den);
}

struct SnfResult {
    IntMat D;     // U*M*V = D, diagonal, d1 | d2 | ..., entries >= 0
    IntMat U;     // unimodular rows x rows
    IntMat V;     // unimodular cols x cols
    IntMat Vinv;  // V^{-1}
    std::vector<Int> diag;
};

inline SnfResult snf(const IntMat& M) {
    SnfResult res;
    res.D = M;
    res.U = IntMat::identity(M.rows());
    res.V = IntMat::identity(M.cols());
    res.Vinv = IntMat::identity(M.cols());
    IntMat& D = res.D;

    auto col_swap = [&](int i, int k) {
        if (i == k) return;
        for (int r = 0; r < D.rows(); ++r) mpz_swap(D.at(r, i).get_mpz_t(), D.at(r, k).get_mpz_t());
        for (int r = 0; r < res.V.rows(); ++r) mpz_swap(res.V.at(r, i).get_mpz_t(), res.V.at(r, k).get_mpz_t());
        detail::row_swap(res.Vinv, i, k);
    };
    auto col_sub_mul = [&](int dst, int src, const Int& q) {
        // col_dst -= q*col_src ; Vinv: row_src += q*row_dst
        if (q == 0) return;
        Int tmp;
        for (int r = 0; r < D.rows(); ++r) {
            if (D.at(r, src) == 0) continue;
            tmp = q * D.at(r, src);
            D.at(r, dst) -= tmp;
        }
        for (int r = 0; r < res.V.rows(); ++r) {
            if (res.V.at(r, src) == 0) continue;
            tmp = q * res.V.at(r, src);
            res.V.at(r, dst) -= tmp;
        }
        detail::row_sub_mul(res.Vinv, src, dst, -q);
    };
    auto col_neg = [&](int i) {
        for (int r = 0; r < D.rows(); ++r) D.at(r, i) = -D.at(r, i);
        for (int r = 0; r < res.V.rows(); ++r) res.V.at(r, i) = -res.V.at(r, i);
        detail::row_neg(res.Vinv, i);
    };

    int n = std::min(M.rows(), M.cols());
    for (int t = 0; t < n; ++t) {
        while (true) {
            int bi = -1, bj = -1;
            for (int i = t; i < D.rows(); ++i)
                for (int j = t; j < D.cols(); ++j) {
                    if (D.at(i, j) == 0) continue;
                    if (bi < 0 || mpz_cmpabs(D.at(i, j).get_mpz_t(), D.at(bi, bj).get_mpz_t()) < 0) bi = i, bj = j;
                }
            if (bi < 0) break;
            detail::row_swap(D, t, bi);
            detail::row_swap(res.U, t, bi);
            col_swap(t, bj);
            bool clean = true;
            for (int i = t + 1; i < D.rows(); ++i) {
                if (D.at(i, t) == 0) continue;
                Int q = detail::quot_near(D.at(i, t), D.at(t, t));
                detail::row_sub_mul(D, i, t, q);
                detail::row_sub_mul(res.U, i, t, q);
                if (D.at(i, t) != 0) clean = false;
            }
            for (int j = t + 1; j < D.cols(); ++j) {
                if (D.at(t, j) == 0) continue;
                Int q = detail::quot_near(D.at(t, j), D.at(t, t));
                col_sub_mul(j, t, q);
                if (D.at(t, j) != 0) clean = false;
            }
            if (!clean) continue;
            // Pivot divides every remaining entry? If not, fold the offender in.
            bool divides_all = true;
            for (int i = t + 1; i < D.rows() && divides_all; ++i)
                for (int j = t + 1; j < D.cols() && divides_all; ++j) {
                    if (D.at(i, j) == 0) continue;
                    if (!mpz_divisible_p(D.at(i, j).get_mpz_t(), D.at(t, t).get_mpz_t())) {
                        detail::row_sub_mul(D, t, i, Int(-1));
                        detail::row_sub_mul(res.U, t, i, Int(-1));
                        divides_all = false;
                    }
                }
            if (divides_all) break;
        }
        if (D.at(t, t) < 0) {
            detail::row_neg(D, t);
            detail::row_neg(res.U, t);
        }
    }
    res.diag.resize(n);
    for (int t = 0; t < n; ++t) res.diag[t] = D.at(t, t);
    return res;
}

// Finite abelian group as an invariant-factor chain d1 | d2 | ..., each >= 2.
struct FinAbGroup {
    std::vector<Int> factors;

    FinAbGroup() = default;
    explicit FinAbGroup(std::vector<Int> fs) : factors(std::move(fs)) {}

    static FinAbGroup trivial() { return FinAbGroup{}; }
    static FinAbGroup cyclic(const Int& n) {
        FinAbGroup g;
        if (n > 1) g.factors.push_back(n);
        return g;
    }

    bool is_trivial() const { return factors.empty(); }
    Int order() const {
        Int o = 1;
        for (const auto& d : factors) o *= d;
        return o;
    }
    bool operator==(const FinAbGroup& o) const { return factors == o.factors; }
    bool operator!=(const FinAbGroup& o) const { return !(*this == o); }

    std::string str() const {
        if (factors.empty()) return "0";
        std::string s;
        for (size_t i = 0; i < factors.size(); ++i) {
            s += "Z/" + factors[i].get_str();
            if (i + 1 < factors.size()) s += " + ";
        }
        return s;
    }
};

inline int int_valuation(Int n, const Int& p) {
    int v = 0;
    while (n != 0 && mpz_divisible_p(n.get_mpz_t(), p.get_mpz_t())) {
        n /= p;
        ++v;
    }
    return v;
}

inline Int int_pow(const Int& b, unsigned e) {
    Int r;
    mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
    return r;
}

// p-primary component.
inline FinAbGroup p_part(const FinAbGroup& g, const Int& p) {
    FinAbGroup out;
    for (const auto& d : g.factors) {
        int v = int_valuation(d, p);
        if (v > 0) out.factors.push_back(int_pow(p, v));
    }
    return out;
}

// A[p^k]  (isomorphic to A/p^k A for finite abelian A).
inline FinAbGroup group_pk_torsion(const FinAbGroup& g, const Int& p, int k) {
    FinAbGroup out;
    for (const auto& d : g.factors) {
        int v = std::min(int_valuation(d, p), k);
        if (v > 0) out.factors.push_back(int_pow(p, v));
    }
    return out;
}

struct QuotientStructure {
    int free_rank = 0;
    FinAbGroup torsion;
};

// Structure of Z^ambient / rowspan(gens).
inline QuotientStructure quotient_structure(int ambient_rank, const IntMat& sub_gens) {
    if (sub_gens.rows() != 0 && sub_gens.cols() != ambient_rank)
        throw InvalidInput("quotient_structure: row length mismatch");
    QuotientStructure q;
    if (sub_gens.rows() == 0 || sub_gens.is_zero()) {
        q.free_rank = ambient_rank;
        return q;
    }
    SnfResult s = snf(sub_gens);
    int rank = 0;
    for (const auto& d : s.diag)
        if (d != 0) ++rank;
    q.free_rank = ambient_rank - rank;
    for (const auto& d : s.diag)
        if (d > 1) q.torsion.factors.push_back(d);
    return q;
}

// Basis of (Q * rowspan(M)) intersect Z^cols, via the double-kernel identity.
inline IntMat saturate(const IntMat& M) {
    IntMat K = kernel(M.transpose());  // right-kernel as rows
    if (K.rows() == 0) return hnf_basis(IntMat::identity(M.cols()));
    return kernel(K.transpose());
}

// Basis of rowspan(A) intersect rowspan(B).
inline IntMat intersect_lattices(const IntMat& A, const IntMat& B) {
    if (A.cols() != B.cols()) throw InvalidInput("intersect: ambient mismatch");
    if (A.rows() == 0 || B.rows() == 0) return IntMat(0, A.cols());
    IntMat S = IntMat::vstack(A, B);
    IntMat K = kernel(S);  // u*A + v*B = 0
    IntMat out(K.rows(), A.cols());
    for (int i = 0; i < K.rows(); ++i)
        for (int k = 0; k < A.rows(); ++k) {
            if (K.at(i, k) == 0) continue;
            for (int j = 0; j < A.cols(); ++j) out.at(i, j) += K.at(i, k) * A.at(k, j);
        }
    return hnf_basis(out);
}

// Canonical representative of rowspan(M) tensor Z_(p) inside Z^n: the lattice
// L with M <= L <= sat(M), L/M of order prime to p, sat(M)/L p-primary.
inline IntMat p_normal_lattice(const IntMat& M, const Int& p) {
    IntMat S = saturate(hnf_basis(M));
    if (S.rows() == 0) return S;
    IntMat B = hnf_basis(M);
    auto A = solve_left(S, B);
    if (!A) throw InternalError("p_normal_lattice: basis not in saturation");
    SnfResult s = snf(*A);
    // rowspan(A) = rowspan(D * Vinv); keep only the p-part of each diagonal.
    IntMat T = s.Vinv.mul(S);
    IntMat out(T.rows(), T.cols());
    for (int i = 0; i < T.rows(); ++i) {
        Int scale = int_pow(p, int_valuation(s.diag[i], p));
        for (int j = 0; j < T.cols(); ++j) out.at(i, j) = scale * T.at(i, j);
    }
    return hnf_basis(out);
}

inline bool lattice_p_equal(const IntMat& A, const IntMat& B, const Int& p) {
    return p_normal_lattice(A, p) == p_normal_lattice(B, p);
}

enum class LatticeOp { INTERSECT, SATURATE };

// Combined entry point: INTERSECT returns a basis of the intersection of
// the two row spans, SATURATE ignores L2 and saturates L1.
inline IntMat intersect_and_saturate(const IntMat& L1, const IntMat& L2, LatticeOp mode) {
    if (mode == LatticeOp::SATURATE) return saturate(L1);
    return intersect_lattices(L1, L2);
}

// Fraction-free determinant (Bareiss).
inline Int det_bareiss(IntMat m) {
    if (m.rows() != m.cols()) throw InvalidInput("det: not square");
    int n = m.rows();
    if (n == 0) return 1;
    Int denom = 1;
    int sign = 1;
    for (int k = 0; k < n - 1; ++k) {
        if (m.at(k, k) == 0) {
            int piv = -1;
            for (int i = k + 1; i < n; ++i)
                if (m.at(i, k) != 0) {
                    piv = i;
                    break;
                }
            if (piv < 0) return 0;
            detail::row_swap(m, k, piv);
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i)
            for (int j = k + 1; j < n; ++j) {
                Int num = m.at(i, j) * m.at(k, k) - m.at(i, k) * m.at(k, j);
                mpz_divexact(m.at(i, j).get_mpz_t(), num.get_mpz_t(), denom.get_mpz_t());
            }
        denom = m.at(k, k);
    }
    return sign > 0 ? m.at(n - 1, n - 1) : Int(-m.at(n - 1, n - 1));
}

// A lattice with a global denominator: rowspan(num)/den.
struct RatLattice {
    IntMat num;
    Int den = 1;

    RatLattice() = default;
    explicit RatLattice(IntMat m, Int d = Int(1)) : num(std::move(m)), den(std::move(d)) {}

    int ambient() const { return num.cols(); }
    int rank() const { return num.rows(); }  // rows assumed independent (basis form)
};

// Canonical p-local form: pair (basis, k) representing p^{-k} * basis with
// basis = p-normal integral lattice, k minimal.
struct PLocalForm {
    IntMat basis;
    int p_exp = 0;
    bool operator==(const PLocalForm& o) const { return p_exp == o.p_exp && basis == o.basis; }
};

inline PLocalForm p_local_form(const RatLattice& L, const Int& p) {
    PLocalForm f;
    f.p_exp = int_valuation(L.den, p);
    f.basis = p_normal_lattice(L.num, p);
    // Strip common p factors to make the exponent minimal.
    while (f.p_exp > 0) {
        bool all = true;
        for (int i = 0; i < f.basis.rows() && all; ++i)
            for (int j = 0; j < f.basis.cols() && all; ++j)
                if (f.basis.at(i, j) != 0 && !mpz_divisible_p(f.basis.at(i, j).get_mpz_t(), p.get_mpz_t()))
                    all = false;
        if (!all) break;
        for (int i = 0; i < f.basis.rows(); ++i)
            for (int j = 0; j < f.basis.cols(); ++j)
                if (f.basis.at(i, j) != 0) mpz_divexact(f.basis.at(i, j).get_mpz_t(), f.basis.at(i, j).get_mpz_t(), p.get_mpz_t());
        --f.p_exp;
    }
    return f;
}

inline bool rat_lattice_p_equal(const RatLattice& A, const RatLattice& B, const Int& p) {
    return p_local_form(A, p) == p_local_form(B, p);
}

// Structure of (A/B) tensor Z_(p) for sublattices B <= A (p-locally).
// Throws if B is not p-locally contained in A.
struct PQuotient {
    int free_rank = 0;
    FinAbGroup p_torsion;           // p-primary part
    FinAbGroup full_torsion;        // all invariant factors of the integral model
};

inline PQuotient p_quotient_structure(const RatLattice& A, const RatLattice& B, const Int& p) {
    PQuotient out;
    if (B.num.rows() == 0 || B.num.is_zero()) {
        out.free_rank = rank_of(A.num);
        return out;
    }
    auto sol = solve_left_rational(A.num, B.num);
    if (!sol) throw InternalError("p_quotient_structure: B not in Q-span of A");
    auto& [X, t] = *sol;
    // True map is (den_A / den_B) * X / t ; only p-adic valuations matter.
    int shift = int_valuation(A.den, p) - int_valuation(B.den, p) - int_valuation(t, p);
    SnfResult s = snf(X);
    int rank = 0;
    for (const auto& d : s.diag)
        if (d != 0) ++rank;
    out.free_rank = rank_of(A.num) - rank;
    for (const auto& d : s.diag) {
        if (d == 0) continue;
        int e = int_valuation(d, p) + shift;
        if (e < 0) throw InternalError("p_quotient_structure: B not p-locally inside A");
        if (e > 0) out.p_torsion.factors.push_back(int_pow(p, e));
        if (d > 1) out.full_torsion.factors.push_back(d);
    }
    return out;
}

}  // namespace cyclab
