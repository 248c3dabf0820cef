#pragma once

#include <gmpxx.h>

#include <cstring>
#include <functional>
#include <map>
#include <mutex>
#include <vector>

#include "cyclab/int_mat.hpp"
#include "cyclab/numeric_util.hpp"

namespace cyclab {

using Poly = std::vector<Int>;  // dense, coefficient of x^i at index i

namespace polydetail {

inline void trim(Poly& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

inline Poly mul_schoolbook(const Poly& a, const Poly& b) {
    if (a.empty() || b.empty()) return {};
    Poly c(a.size() + b.size() - 1);
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (size_t j = 0; j < b.size(); ++j) {
            if (b[j] == 0) continue;
            c[i + j] += a[i] * b[j];
        }
    }
    return c;
}

inline size_t max_coeff_bits(const Poly& a) {
    size_t m = 1;
    for (const auto& x : a)
        if (x != 0) m = std::max(m, mpz_sizeinbase(x.get_mpz_t(), 2));
    return m;
}

// Kronecker product of two nonnegative polynomials with a fixed slot width.
inline Poly mul_kronecker_nonneg(const Poly& a, const Poly& b, size_t slot_bytes) {
    if (a.empty() || b.empty()) return {};
    auto pack = [&](const Poly& v) {
        std::vector<unsigned char> buf(v.size() * slot_bytes, 0);
        for (size_t i = 0; i < v.size(); ++i) {
            if (v[i] == 0) continue;
            size_t count = 0;
            mpz_export(buf.data() + i * slot_bytes, &count, -1, 1, 0, 0, v[i].get_mpz_t());
        }
        Int z;
        mpz_import(z.get_mpz_t(), buf.size(), -1, 1, 0, 0, buf.data());
        return z;
    };
    Int A = pack(a), B = pack(b);
    Int C = A * B;
    size_t n = a.size() + b.size() - 1;
    std::vector<unsigned char> buf(n * slot_bytes + slot_bytes, 0);
    size_t count = 0;
    mpz_export(buf.data(), &count, -1, 1, 0, 0, C.get_mpz_t());
    Poly c(n);
    for (size_t i = 0; i < n; ++i) {
        mpz_import(c[i].get_mpz_t(), slot_bytes, -1, 1, 0, 0, buf.data() + i * slot_bytes);
    }
    return c;
}

inline void split_signs(const Poly& a, Poly& pos, Poly& neg) {
    pos.assign(a.size(), Int(0));
    neg.assign(a.size(), Int(0));
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] > 0) pos[i] = a[i];
        else if (a[i] < 0) neg[i] = -a[i];
    }
}

inline Poly mul(const Poly& a, const Poly& b) {
    if (a.empty() || b.empty()) return {};
    size_t work = a.size() * b.size();
    if (work < 4096) return mul_schoolbook(a, b);
    size_t bits = max_coeff_bits(a) + max_coeff_bits(b) + 2;
    size_t minlen = std::min(a.size(), b.size());
    size_t extra = 1;
    while ((size_t(1) << extra) < minlen) ++extra;
    size_t slot_bytes = (bits + extra + 7) / 8 + 1;
    Poly ap, an, bp, bn;
    split_signs(a, ap, an);
    split_signs(b, bp, bn);
    Poly pp = mul_kronecker_nonneg(ap, bp, slot_bytes);
    Poly nn = mul_kronecker_nonneg(an, bn, slot_bytes);
    Poly pn = mul_kronecker_nonneg(ap, bn, slot_bytes);
    Poly np = mul_kronecker_nonneg(an, bp, slot_bytes);
    Poly c(a.size() + b.size() - 1);
    for (size_t i = 0; i < c.size(); ++i) {
        if (i < pp.size()) c[i] += pp[i];
        if (i < nn.size()) c[i] += nn[i];
        if (i < pn.size()) c[i] -= pn[i];
        if (i < np.size()) c[i] -= np[i];
    }
    return c;
}

// Exact division by a divisor with leading coefficient +-1; throws if the
// remainder is nonzero.
inline Poly divexact(Poly num, const Poly& den) {
    Poly n = std::move(num), d = den;
    trim(n);
    Poly dd = d;
    trim(dd);
    if (dd.empty()) throw InvalidInput("poly divexact by zero");
    if (!(dd.back() == 1 || dd.back() == -1)) throw InvalidInput("poly divexact: divisor not monic up to sign");
    std::vector<std::pair<size_t, const Int*>> nz;
    for (size_t i = 0; i < dd.size(); ++i)
        if (dd[i] != 0) nz.push_back({i, &dd[i]});
    bool neg_lead = dd.back() == -1;
    if (n.size() < dd.size()) {
        if (!n.empty()) throw InternalError("poly divexact: nonzero remainder");
        return {};
    }
    Poly q(n.size() - dd.size() + 1);
    for (size_t k = q.size(); k-- > 0;) {
        Int c = n[k + dd.size() - 1];
        if (neg_lead) c = -c;
        if (c == 0) continue;
        q[k] = c;
        for (auto& [i, coef] : nz) n[k + i] -= c * (*coef);
    }
    for (const auto& x : n)
        if (x != 0) throw InternalError("poly divexact: nonzero remainder");
    return q;
}

}  // namespace polydetail

// Cyclotomic polynomial, cached. Uses Phi_n(x) = Phi_rad(n)(x^{n/rad}).
inline const Poly& cyclotomic_polynomial(int64_t n) {
    static std::map<int64_t, Poly> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lk(mu);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;

    std::function<Poly(int64_t)> compute = [&](int64_t m) -> Poly {
        auto c = cache.find(m);
        if (c != cache.end()) return c->second;
        Poly result;
        if (m == 1) {
            result = Poly{Int(-1), Int(1)};
        } else {
            int64_t rad = 1;
            for (int64_t p : prime_divisors(m)) rad *= p;
            if (rad != m) {
                Poly base = compute(rad);
                int64_t stride = m / rad;
                result.assign((base.size() - 1) * stride + 1, Int(0));
                for (size_t i = 0; i < base.size(); ++i) result[i * stride] = base[i];
            } else {
                Poly num(m + 1);
                num[0] = -1;
                num[m] = 1;
                for (int64_t d : divisors(m))
                    if (d < m) num = polydetail::divexact(num, compute(d));
                result = num;
            }
        }
        cache[m] = result;
        return cache[m];
    };
    compute(n);
    return cache[n];
}

// (x^N - 1) / Phi_N: multiplying by this kills every component of
// Z[x]/(x^N-1) except the Phi_N one, giving an exact zero test in Z[zeta_N].
inline const Poly& cofactor_poly(int64_t N) {
    static std::map<int64_t, Poly> cache;
    static std::mutex mu;
    {
        std::lock_guard<std::mutex> lk(mu);
        auto it = cache.find(N);
        if (it != cache.end()) return it->second;
    }
    Poly num(N + 1);
    num[0] = -1;
    num[N] = 1;
    Poly m = polydetail::divexact(std::move(num), cyclotomic_polynomial(N));
    std::lock_guard<std::mutex> lk(mu);
    return cache.emplace(N, std::move(m)).first->second;
}

// Element of Z[x]/(x^N - 1), used as an ambient for Z[zeta_N].
class RingXN {
  public:
    explicit RingXN(int64_t N) : N_(N), c_(N) {}

    static RingXN one(int64_t N) {
        RingXN r(N);
        r.c_[0] = 1;
        return r;
    }

    int64_t modulus() const { return N_; }
    const std::vector<Int>& coeffs() const { return c_; }
    Int& operator[](int64_t i) { return c_[i]; }
    const Int& operator[](int64_t i) const { return c_[i]; }

    bool literally_zero() const {
        for (const auto& x : c_)
            if (x != 0) return false;
        return true;
    }

    RingXN operator-(const RingXN& o) const {
        RingXN r(N_);
        for (int64_t i = 0; i < N_; ++i) r.c_[i] = c_[i] - o.c_[i];
        return r;
    }

    RingXN operator+(const RingXN& o) const {
        RingXN r(N_);
        for (int64_t i = 0; i < N_; ++i) r.c_[i] = c_[i] + o.c_[i];
        return r;
    }

    // multiply by x^k
    RingXN shifted(int64_t k) const {
        k = mod_norm(k, N_);
        RingXN r(N_);
        for (int64_t i = 0; i < N_; ++i) r.c_[mod_norm(i + k, N_)] = c_[i];
        return r;
    }

    void negate() {
        for (auto& x : c_) x = -x;
    }

    // in-place multiply by (1 - x^k), k != 0 mod N
    void mul_one_minus_power(int64_t k) {
        k = mod_norm(k, N_);
        if (k == 0) throw InvalidInput("mul_one_minus_power: k = 0 gives the zero factor");
        std::vector<Int> shifted(N_);
        for (int64_t i = 0; i < N_; ++i) shifted[mod_norm(i + k, N_)] = c_[i];
        for (int64_t i = 0; i < N_; ++i) c_[i] -= shifted[i];
    }

    RingXN mul(const RingXN& o) const {
        Poly prod = polydetail::mul(c_, o.c_);
        RingXN r(N_);
        for (size_t i = 0; i < prod.size(); ++i) r.c_[i % N_] += prod[i];
        return r;
    }

    // Does this element represent 0 in Z[zeta_N]?
    bool is_zero_in_zeta() const {
        if (literally_zero()) return true;
        const Poly& M = cofactor_poly(N_);
        Poly prod = polydetail::mul(c_, M);
        std::vector<Int> folded(N_);
        for (size_t i = 0; i < prod.size(); ++i) folded[i % N_] += prod[i];
        for (const auto& x : folded)
            if (x != 0) return false;
        return true;
    }

  private:
    int64_t N_;
    std::vector<Int> c_;
};

// A formal product of factors (1 - zeta_N^e)^mult with an exact pi-rational
// argument and an exact realization in RingXN.
struct FactorProduct {
    int64_t N = 1;
    std::map<int64_t, int64_t> factors;  // e (mod N, nonzero) -> multiplicity >= 0

    void add_factor(int64_t e, int64_t mult = 1) {
        e = mod_norm(e, N);
        if (e == 0) throw InvalidInput("FactorProduct: zero factor 1 - zeta^0");
        if (mult < 0) throw InvalidInput("FactorProduct: negative multiplicity");
        if (mult) factors[e] += mult;
    }

    int64_t total_factors() const {
        int64_t t = 0;
        for (auto& [e, m] : factors) t += m;
        return t;
    }

    // Argument of the complex value under zeta_N = exp(2 pi i / N), in units
    // of pi, exact, as a rational mod 2.
    Rat arg_in_pi() const {
        Rat t(0);
        for (auto& [e, m] : factors) t += Rat(Int(m) * Int(2 * e - N), Int(2 * N));
        // reduce mod 2
        Rat two(2);
        mpq_class q = t / two;
        Int fl;
        mpz_fdiv_q(fl.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
        t -= Rat(fl) * two;
        t.canonicalize();
        return t;
    }

    RingXN realize() const {
        RingXN r = RingXN::one(N);
        for (auto& [e, m] : factors)
            for (int64_t i = 0; i < m; ++i) r.mul_one_minus_power(e);
        return r;
    }
};

struct RootOfUnity {
    bool minus = false;  // extra sign
    int64_t power = 0;   // exponent of zeta_N

    bool is_one() const { return !minus && power == 0; }
};

inline Int mod_norm_int(const Int& a, int64_t m) {
    Int r;
    Int mm(m);
    mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), mm.get_mpz_t());
    return r;
}

// Decide exactly whether P = zeta * Q for a root of unity zeta in Q(zeta_N);
// both sides are products of nonzero factors (1 - zeta^e). Returns the root
// of unity on success.
inline std::optional<RootOfUnity> root_of_unity_ratio(const FactorProduct& P, const FactorProduct& Q,
                                                      int64_t factor_budget = 2000000) {
    if (P.N != Q.N) throw InvalidInput("root_of_unity_ratio: mismatched moduli");
    int64_t N = P.N;
    if (P.total_factors() + Q.total_factors() > factor_budget)
        throw ResourceLimit("root_of_unity_ratio: factor budget exceeded");
    // Exact argument difference pins the only possible root of unity.
    Rat t = P.arg_in_pi() - Q.arg_in_pi();
    // zeta = exp(i pi t) must satisfy t = J/N with J integral (mod 2N).
    Rat J = t * Rat(N);
    if (J.get_den() != 1) return std::nullopt;
    Int Jz = mod_norm_int(J.get_num(), 2 * N);
    RootOfUnity zeta;
    if (N % 2 == 1) {
        // mu = <zeta_{2N}>; zeta_{2N}^J = (-1)^J zeta_N^{J(N+1)/2}
        int64_t Jl = Jz.get_si();
        zeta.minus = (Jl % 2) != 0;
        zeta.power = mod_norm(Jl * ((N + 1) / 2), N);
    } else {
        int64_t Jl = Jz.get_si();
        if (Jl % 2 != 0) return std::nullopt;  // not in mu(Q(zeta_N))
        zeta.minus = false;
        zeta.power = mod_norm(Jl / 2, N);
    }
    RingXN lhs = P.realize();
    RingXN rhs = Q.realize().shifted(zeta.power);
    if (zeta.minus) rhs.negate();
    if ((lhs - rhs).is_zero_in_zeta()) return zeta;
    return std::nullopt;
}

}  // namespace cyclab
