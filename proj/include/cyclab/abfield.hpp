#pragma once

#include <algorithm>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "cyclab/numeric_util.hpp"

namespace cyclab {

// A real-or-imaginary abelian number field, encoded by a modulus f and the
// subgroup H of (Z/f)^x fixing it inside Q(zeta_f). Always canonicalized to
// the conductor, so equality of fields is equality of encodings.
class AbelianField {
  public:
    AbelianField() : modulus_(1), subgroup_{0} {}

    static AbelianField rationals() { return AbelianField(); }

    // Field fixed by the subgroup generated by `gens` inside (Z/f)^x.
    static AbelianField make(int64_t f, const std::vector<int64_t>& gens) {
        if (f <= 0) throw InvalidInput("make_field: modulus must be positive");
        for (int64_t g : gens)
            if (std::gcd(mod_norm(g, f), f) != 1) throw InvalidInput("make_field: generator not coprime to modulus");
        return from_subgroup(f, close_subgroup(f, gens));
    }

    // Field with the given full subgroup (will be closed and canonicalized).
    static AbelianField from_subgroup(int64_t f, std::vector<int64_t> H) {
        AbelianField F;
        if (f == 1) return F;
        std::sort(H.begin(), H.end());
        H.erase(std::unique(H.begin(), H.end()), H.end());
        // canonicalize to the conductor
        for (int64_t d : divisors(f)) {
            if (!kernel_contained(f, d, H)) continue;
            F.modulus_ = d;
            F.subgroup_ = image_mod(H, d);
            return F;
        }
        throw InternalError("from_subgroup: no conductor found");
    }

    static AbelianField parse(const std::string& s) {
        auto colon = s.find(':');
        if (colon == std::string::npos) throw InvalidInput("field spec must be f:h1,h2,...");
        int64_t f = std::stoll(s.substr(0, colon));
        std::vector<int64_t> hs;
        std::string rest = s.substr(colon + 1);
        std::stringstream ss(rest);
        std::string tok;
        while (std::getline(ss, tok, ','))
            if (!tok.empty()) hs.push_back(std::stoll(tok));
        if (f == 1) return rationals();
        for (int64_t h : hs)
            if (std::gcd(mod_norm(h, f), f) != 1) throw InvalidInput("field spec: residue not coprime to modulus");
        return make(f, hs);
    }

    int64_t conductor() const { return modulus_; }
    const std::vector<int64_t>& subgroup() const { return subgroup_; }

    int64_t degree() const { return euler_phi(modulus_) / (int64_t)subgroup_.size(); }

    bool totally_real() const { return modulus_ == 1 || contains(mod_norm(-1, modulus_)); }

    bool is_rationals() const { return modulus_ == 1; }

    bool contains(int64_t a) const {
        a = mod_norm(a, modulus_);
        return std::binary_search(subgroup_.begin(), subgroup_.end(), a);
    }

    bool operator==(const AbelianField& o) const { return modulus_ == o.modulus_ && subgroup_ == o.subgroup_; }
    bool operator!=(const AbelianField& o) const { return !(*this == o); }
    bool operator<(const AbelianField& o) const {
        if (modulus_ != o.modulus_) return modulus_ < o.modulus_;
        return subgroup_ < o.subgroup_;
    }

    std::string str() const {
        std::string s = std::to_string(modulus_) + ":";
        for (size_t i = 0; i < subgroup_.size(); ++i) {
            s += std::to_string(subgroup_[i]);
            if (i + 1 < subgroup_.size()) s += ",";
        }
        return s;
    }

    // E subset of F as number fields.
    static bool is_subfield(const AbelianField& E, const AbelianField& F) {
        if (F.modulus_ % E.modulus_ != 0) return false;
        if (E.modulus_ == 1) return true;
        for (int64_t h : F.subgroup_)
            if (!E.contains(h % E.modulus_)) return false;
        return true;
    }

    static AbelianField compositum(const AbelianField& A, const AbelianField& B) {
        int64_t L = std::lcm(A.modulus_, B.modulus_);
        if (L == 1) return rationals();
        std::vector<int64_t> H;
        for (int64_t x : unit_group(L)) {
            if (A.modulus_ > 1 && !A.contains(x % A.modulus_)) continue;
            if (B.modulus_ > 1 && !B.contains(x % B.modulus_)) continue;
            H.push_back(x);
        }
        return from_subgroup(L, std::move(H));
    }

    static AbelianField intersection(const AbelianField& A, const AbelianField& B) {
        int64_t L = std::lcm(A.modulus_, B.modulus_);
        if (L == 1) return rationals();
        std::vector<int64_t> gens;
        for (int64_t x : unit_group(L)) {
            bool inA = A.modulus_ == 1 || A.contains(x % A.modulus_);
            bool inB = B.modulus_ == 1 || B.contains(x % B.modulus_);
            if (inA || inB) gens.push_back(x);
        }
        return make(L, gens);
    }

    AbelianField maximal_real_subfield() const {
        if (modulus_ == 1) return *this;
        std::vector<int64_t> gens = subgroup_;
        gens.push_back(mod_norm(-1, modulus_));
        return make(modulus_, gens);
    }

    // Coset minimal representatives of H in (Z/f)^x, sorted: the Galois group.
    std::vector<int64_t> galois_cosets() const {
        std::vector<int64_t> reps;
        std::vector<char> seen;
        if (modulus_ == 1) return {0};
        seen.assign(modulus_, 0);
        for (int64_t x : unit_group(modulus_)) {
            if (seen[x]) continue;
            reps.push_back(x);
            for (int64_t h : subgroup_) seen[mul_mod(x, h, modulus_)] = 1;
        }
        return reps;
    }

    int64_t coset_rep(int64_t a) const {
        if (modulus_ == 1) return 0;
        a = mod_norm(a, modulus_);
        int64_t best = a;
        for (int64_t h : subgroup_) best = std::min(best, mul_mod(a, h, modulus_));
        return best;
    }

    static std::vector<int64_t> close_subgroup(int64_t f, const std::vector<int64_t>& gens) {
        if (f == 1) return {0};
        std::vector<char> in(f, 0);
        in[1 % f] = 1;
        std::vector<int64_t> H{1 % f};
        std::vector<int64_t> frontier{1 % f};
        while (!frontier.empty()) {
            std::vector<int64_t> next;
            for (int64_t x : frontier)
                for (int64_t g : gens) {
                    int64_t y = mul_mod(x, mod_norm(g, f), f);
                    if (!in[y]) {
                        in[y] = 1;
                        H.push_back(y);
                        next.push_back(y);
                    }
                }
            frontier = std::move(next);
        }
        std::sort(H.begin(), H.end());
        return H;
    }

    // Subgroup of (Z/d)^x fixing F intersect Q(zeta_d), for arbitrary d.
    std::vector<int64_t> subgroup_image_mod(int64_t d) const {
        if (d == 1) return {0};
        if (modulus_ == 1) return unit_group(d);
        int64_t L = std::lcm(modulus_, d);
        std::vector<int64_t> img;
        if (L == modulus_) {
            img = image_mod(subgroup_, d);
        } else {
            std::vector<char> seen(d, 0);
            for (int64_t x : unit_group(L)) {
                if (!contains(x % modulus_)) continue;
                if (!seen[x % d]) {
                    seen[x % d] = 1;
                    img.push_back(x % d);
                }
            }
            std::sort(img.begin(), img.end());
        }
        return img;
    }

  private:
    static std::vector<int64_t> image_mod(const std::vector<int64_t>& H, int64_t d) {
        if (d == 1) return {0};
        std::vector<int64_t> img;
        img.reserve(H.size());
        for (int64_t h : H) img.push_back(h % d);
        std::sort(img.begin(), img.end());
        img.erase(std::unique(img.begin(), img.end()), img.end());
        return img;
    }

    // ker((Z/f)^x -> (Z/d)^x) contained in H?
    static bool kernel_contained(int64_t f, int64_t d, const std::vector<int64_t>& H) {
        for (int64_t x = 1; x < f; ++x) {
            if (x % d != 1 % d) continue;
            if (std::gcd(x, f) != 1) continue;
            if (!std::binary_search(H.begin(), H.end(), x)) return false;
        }
        return true;
    }

    int64_t modulus_;
    std::vector<int64_t> subgroup_;
};

// One Galois automorphism of F, as the minimal residue of its H-coset.
struct GaloisElement {
    AbelianField field;
    int64_t residue = 0;

    GaloisElement() = default;
    GaloisElement(AbelianField F, int64_t a) : field(std::move(F)) { residue = field.coset_rep(a); }

    bool is_identity() const { return residue == field.coset_rep(1); }
    int64_t order() const {
        int64_t o = 1;
        int64_t x = residue;
        while (!GaloisElement(field, x).is_identity()) {
            x = mul_mod(x, residue, field.conductor());
            ++o;
        }
        return o;
    }
    bool operator==(const GaloisElement& o) const { return field == o.field && residue == o.residue; }
};

struct SplittingData {
    int64_t e = 1;      // ramification index
    int64_t f_res = 1;  // residue degree
    int64_t s = 1;      // number of places above p
    int64_t s_plus = 1; // places above p in the maximal real subfield
};

namespace detail_field {
// Inertia subgroup generators at q inside (Z/f)^x: units congruent to 1 at
// the prime-to-q part of f.
inline std::vector<int64_t> inertia_subgroup(int64_t f, int64_t q) {
    int64_t m = f;
    while (m % q == 0) m /= q;
    std::vector<int64_t> I;
    for (int64_t x : unit_group(f))
        if (x % m == 1 % m) I.push_back(x);
    return I;
}

// A residue acting like Frobenius at q: congruent to q at the prime-to-q
// part, trivial on the q-part.
inline int64_t frobenius_lift(int64_t f, int64_t q) {
    int64_t qa = 1, m = f;
    while (m % q == 0) m /= q, qa *= q;
    if (m == 1) return 0 % f == 0 && f == 1 ? 0 : 1 % f;
    if (qa == 1) return mod_norm(q, f);
    return crt(1, qa, q % m, m);
}
}  // namespace detail_field

inline SplittingData splitting_data(const AbelianField& F, int64_t q) {
    SplittingData out;
    if (!is_prime64(q)) throw InvalidInput("splitting_data: q must be prime");
    if (F.is_rationals()) return out;
    int64_t f = F.conductor();
    auto I = detail_field::inertia_subgroup(f, q);
    std::vector<int64_t> genI = I;
    for (int64_t h : F.subgroup()) genI.push_back(h);
    auto IH = AbelianField::close_subgroup(f, genI);
    out.e = (int64_t)IH.size() / (int64_t)F.subgroup().size();
    genI.push_back(detail_field::frobenius_lift(f, q));
    auto DH = AbelianField::close_subgroup(f, genI);
    out.f_res = (int64_t)DH.size() / (int64_t)IH.size();
    out.s = euler_phi(f) / (int64_t)DH.size();
    if (F.totally_real()) {
        out.s_plus = out.s;
    } else {
        out.s_plus = splitting_data(F.maximal_real_subfield(), q).s;
    }
    return out;
}

struct InertiaDecomposition {
    AbelianField inertia_field;        // I_n
    AbelianField decomposition_field;  // D_n
    GaloisElement frobenius;           // sigma_p on I_n
};

inline InertiaDecomposition inertia_decomposition(const AbelianField& F, int64_t q) {
    if (!is_prime64(q)) throw InvalidInput("inertia_decomposition: q must be prime");
    InertiaDecomposition out;
    if (F.is_rationals()) {
        out.inertia_field = F;
        out.decomposition_field = F;
        out.frobenius = GaloisElement(F, 0);
        return out;
    }
    int64_t f = F.conductor();
    auto I = detail_field::inertia_subgroup(f, q);
    std::vector<int64_t> gens = I;
    for (int64_t h : F.subgroup()) gens.push_back(h);
    out.inertia_field = AbelianField::make(f, gens);
    gens.push_back(detail_field::frobenius_lift(f, q));
    out.decomposition_field = AbelianField::make(f, gens);
    int64_t ci = out.inertia_field.conductor();
    out.frobenius = GaloisElement(out.inertia_field, ci == 1 ? 0 : mod_norm(q, ci));
    return out;
}

// The k-th layer of the cyclotomic Z_p-tower over Q (degree p^k, conductor
// p^{k+1} for k >= 1).
inline AbelianField tower_layer_over_q(int64_t p, int k) {
    if (k == 0) return AbelianField::rationals();
    int64_t mod = 1;
    for (int i = 0; i <= k; ++i) mod *= p;
    std::vector<int64_t> H;
    for (int64_t x : unit_group(mod))
        if (pow_mod(x, p - 1, mod) == 1) H.push_back(x);
    return AbelianField::from_subgroup(mod, H);
}

// Largest k with Q_k (the degree-p^k tower layer) contained in F.
inline int tower_overlap_e0(const AbelianField& F, int64_t p) {
    int e0 = 0;
    while (true) {
        AbelianField Q = tower_layer_over_q(p, e0 + 1);
        if (!AbelianField::is_subfield(Q, F)) break;
        ++e0;
    }
    return e0;
}

inline void require_odd_prime(int64_t p) {
    if (p == 2) throw Unsupported("p = 2 is not supported");
    if (!is_prime64(p)) throw InvalidInput("p must be an odd prime");
}

// F_n: compositum of F with the degree-p^{n+e0} tower layer, so [F_n:F]=p^n.
inline AbelianField layer(const AbelianField& F, int64_t p, int n) {
    require_odd_prime(p);
    if (n < 0) throw InvalidInput("layer: n must be >= 0");
    if (n == 0) return F;
    int e0 = tower_overlap_e0(F, p);
    AbelianField Fn = AbelianField::compositum(F, tower_layer_over_q(p, n + e0));
    int64_t expect = F.degree();
    for (int i = 0; i < n; ++i) expect *= p;
    if (Fn.degree() != expect) throw InternalError("layer: degree mismatch");
    return Fn;
}

struct TowerConstants {
    int n_d = 0;  // no place above p splits in F_inf/F_{n_d}
    int n_i = 0;  // first n with F_{n+1}/F_n ramified at p
    int e0 = 0;   // tower layers of Q already inside F
};

// n_i is found by a provably sufficient scan: unramified tower steps number
// at most v_p(e(F_0)) - e0, and once a step ramifies every later one does.
inline TowerConstants tower_constants(const AbelianField& F, int64_t p, int n_max = 1) {
    require_odd_prime(p);
    if (n_max < 1) throw InvalidInput("tower_constants: n_max must be >= 1");
    TowerConstants tc;
    tc.e0 = tower_overlap_e0(F, p);
    int64_t e_at_0 = splitting_data(F, p).e;
    int bound = valuation(e_at_0, p) - tc.e0;
    if (bound < 0) throw InternalError("tower_constants: overlap exceeds wild ramification");
    std::vector<int64_t> e_seq, s_seq;
    for (int n = 0; n <= bound + 1; ++n) {
        SplittingData sd = splitting_data(layer(F, p, n), p);
        e_seq.push_back(sd.e);
        s_seq.push_back(sd.s);
    }
    int ni = -1;
    for (int n = 0; n <= bound; ++n)
        if (e_seq[n + 1] > e_seq[n]) {
            ni = n;
            break;
        }
    if (ni < 0) throw InternalError("tower_constants: no ramified step within the provable bound");
    tc.n_i = ni;
    for (int n = 0; n <= ni; ++n)
        if (s_seq[n] == s_seq[ni]) {
            tc.n_d = n;
            break;
        }
    return tc;
}

}  // namespace cyclab
