#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "cyclab/abfield.hpp"
#include "cyclab/cyclo_poly.hpp"
#include "cyclab/interval.hpp"

namespace cyclab {

// The circular number N_{Q(zeta_d)/Q(zeta_d) cap target}(1 - zeta_d^a),
// canonicalized so that two symbols denoting the same number compare equal.
struct CircSymbol {
    int64_t d = 1;
    int64_t a = 0;
    AbelianField target;

    CircSymbol() = default;

    static CircSymbol make(int64_t d, int64_t a, const AbelianField& target) {
        if (d <= 1) throw InvalidInput("CircSymbol: d must be > 1");
        a = mod_norm(a, d);
        if (std::gcd(a, d) != 1) throw InvalidInput("CircSymbol: gcd(a,d) != 1");
        CircSymbol s;
        s.d = d;
        s.a = a;
        s.target = target;
        s.canonicalize();
        return s;
    }

    // Galois group of Q(zeta_d) over Q(zeta_d) cap target, inside (Z/d)^x.
    std::vector<int64_t> conjugation_set() const { return target.subgroup_image_mod(d); }

    void canonicalize() {
        int64_t best = a;
        for (int64_t t : conjugation_set()) best = std::min(best, mul_mod(a, t, d));
        a = best;
    }

    CircSymbol conjugate_by(int64_t c) const {
        // c is a residue acting on the target's cyclotomic closure
        int64_t cd = mod_norm(c, d);
        if (std::gcd(cd, d) != 1) throw InvalidInput("conjugate_by: residue not invertible mod d");
        return make(d, mul_mod(a, cd, d), target);
    }

    bool operator==(const CircSymbol& o) const { return d == o.d && a == o.a && target == o.target; }
    bool operator<(const CircSymbol& o) const {
        if (d != o.d) return d < o.d;
        if (a != o.a) return a < o.a;
        return target < o.target;
    }

    std::string str() const { return "N(d=" + std::to_string(d) + ",a=" + std::to_string(a) + ")@" + target.str(); }
};

// Generators of Cyc(target): for each divisor d > 1 of the conductor, the
// full Galois orbit of N_{Q(zeta_d)/Q(zeta_d) cap F}(1 - zeta_d).
inline std::vector<CircSymbol> circ_generators(const AbelianField& F) {
    if (!F.totally_real()) throw Unsupported("circ_generators: field must be totally real");
    std::vector<CircSymbol> gens;
    for (int64_t d : divisors(F.conductor())) {
        if (d == 1) continue;
        std::vector<int64_t> Hd = F.subgroup_image_mod(d);
        std::vector<char> seen(d, 0);
        for (int64_t x : unit_group(d)) {
            if (seen[x]) continue;
            for (int64_t t : Hd) seen[mul_mod(x, t, d)] = 1;
            gens.push_back(CircSymbol::make(d, x, F));
        }
    }
    std::sort(gens.begin(), gens.end());
    return gens;
}

struct LogVector {
    std::vector<RInterval> coords;  // one per real embedding of the target
    double abs_error = 0;           // certified uniform bound
    int precision_bits = 0;
};

// Archimedean log-embedding: coordinate at the embedding indexed by the
// coset c is sum over the conjugation set of log|1 - exp(2 pi i (c a t)/d)|.
inline LogVector log_embedding(const CircSymbol& s, int prec) {
    if (prec < 64) throw InvalidInput("log_embedding: precision below the floor of 64 bits");
    if (!s.target.totally_real()) throw Unsupported("log_embedding: target must be totally real");
    LogVector out;
    out.precision_bits = prec;
    int64_t f = s.target.conductor();
    int64_t L = std::lcm(f, s.d);
    auto Hd = s.conjugation_set();
    for (int64_t c : s.target.galois_cosets()) {
        // lift c to a unit mod L
        int64_t lift = (f == 1) ? 1 : c;
        if (L != f) {
            while (std::gcd(lift, L) != 1) lift += f;
        }
        RInterval v = RInterval::zero(prec);
        for (int64_t t : Hd) {
            int64_t k = mul_mod(mul_mod(mod_norm(lift, s.d), s.a, s.d), t, s.d);
            v += log_2sin(k, s.d, prec);
        }
        out.abs_error = std::max(out.abs_error, v.width() / 2);
        out.coords.push_back(std::move(v));
    }
    return out;
}

// Valuation of the symbol at the rational prime ell, normalized at the
// places of the target field (uniform across them; see Galois argument in
// the tests). Nonzero only when d is a power of ell.
inline int64_t valuation_at(const CircSymbol& s, int64_t ell) {
    auto fac = factorize(s.d);
    if (fac.size() != 1 || fac[0].first != ell) return 0;
    // the number lives in E = target cap Q(zeta_d), with a unique place
    // above ell there and valuation 1; rescale to the target's places.
    AbelianField E = AbelianField::intersection(s.target, AbelianField::make(s.d, {}));
    int64_t eF = splitting_data(s.target, ell).e;
    int64_t eE = splitting_data(E, ell).e;
    if (eF % eE != 0) throw InternalError("valuation_at: ramification indices not multiplicative");
    return eF / eE;
}

// Primes where any symbol over this target can have nonzero valuation.
inline std::vector<int64_t> ramified_prime_index(const AbelianField& F, int64_t extra_modulus = 1) {
    return prime_divisors(std::lcm(F.conductor(), extra_modulus));
}

// Valuation vector over the primes of lcm(conductor, d), in index order.
inline std::vector<int64_t> valuation_vector(const CircSymbol& s) {
    std::vector<int64_t> out;
    for (int64_t ell : ramified_prime_index(s.target, s.d)) out.push_back(valuation_at(s, ell));
    return out;
}

struct RelationVerdict {
    bool verified = false;
    RootOfUnity root;  // meaningful when verified
};

// Exact check of prod_i gens[i]^{exps[i]} = root of unity, by polynomial
// arithmetic in Z[x]/(x^N - 1) with an exact-argument search for the root.
inline RelationVerdict verify_relation_exact(const std::vector<CircSymbol>& gens, const std::vector<Int>& exps,
                                             int64_t factor_budget = 2000000) {
    if (gens.size() != exps.size()) throw InvalidInput("verify_relation_exact: length mismatch");
    if (gens.empty()) return {true, RootOfUnity{}};
    int64_t N = 1;
    for (const auto& g : gens) N = std::lcm(N, g.d);
    FactorProduct P, Q;
    P.N = Q.N = N;
    Int total = 0;
    for (size_t i = 0; i < gens.size(); ++i) {
        if (exps[i] == 0) continue;
        auto Hd = gens[i].conjugation_set();
        Int mag = abs(exps[i]);
        total += mag * (long)Hd.size();
        if (total > factor_budget) throw ResourceLimit("verify_relation_exact: factor budget exceeded");
        if (!mag.fits_slong_p()) throw ResourceLimit("verify_relation_exact: exponent too large");
        int64_t m = mag.get_si();
        int64_t stride = N / gens[i].d;
        for (int64_t t : Hd) {
            int64_t e = stride * mul_mod(gens[i].a, t, gens[i].d);
            if (exps[i] > 0)
                P.add_factor(e, m);
            else
                Q.add_factor(e, m);
        }
    }
    auto r = root_of_unity_ratio(P, Q, factor_budget);
    if (!r) return {false, RootOfUnity{}};
    return {true, *r};
}

inline RelationVerdict verify_relation_exact(const std::vector<CircSymbol>& gens, const std::vector<long>& exps,
                                             int64_t factor_budget = 2000000) {
    std::vector<Int> e(exps.begin(), exps.end());
    return verify_relation_exact(gens, e, factor_budget);
}

}  // namespace cyclab
