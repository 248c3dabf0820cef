#pragma once

#include "cyclab/abfield.hpp"

namespace cyclab {

// The cubic subfield of Q(zeta_l) for a prime l = 1 mod 3: fixed field of
// the cubes in (Z/l)^x.
inline AbelianField cubic_of_prime_conductor(int64_t l) {
    if (!is_prime64(l) || l % 3 != 1) throw InvalidInput("need a prime l = 1 mod 3");
    std::vector<int64_t> cubes;
    for (int64_t x : unit_group(l)) cubes.push_back(pow_mod(x, 3, l));
    return AbelianField::from_subgroup(l, AbelianField::close_subgroup(l, cubes));
}

inline int64_t discrete_log(int64_t g, int64_t x, int64_t m) {
    int64_t y = 1;
    for (int64_t k = 0; k < m; ++k) {
        if (y == mod_norm(x, m)) return k;
        y = mul_mod(y, g, m);
    }
    throw InternalError("discrete_log: not in the cyclic group");
}

inline int64_t primitive_root(int64_t l) {
    int64_t phi = l - 1;
    auto ps = prime_divisors(phi);
    for (int64_t g = 2; g < l; ++g) {
        bool ok = true;
        for (int64_t q : ps)
            if (pow_mod(g, phi / q, l) == 1) {
                ok = false;
                break;
            }
        if (ok) return g;
    }
    throw InternalError("primitive_root: none found");
}

// Cubic fields inside Q(zeta_{l1*l2}) cut out by a product of the cubic
// characters mod l1 and mod l2. There are two such of conductor l1*l2; this
// returns the one in which p stays prime (sigma_p generates), when it exists.
inline AbelianField cubic_two_prime_inert(int64_t l1, int64_t l2, int64_t p) {
    int64_t g1 = primitive_root(l1), g2 = primitive_root(l2);
    auto kernel_field = [&](int64_t twist) {
        std::vector<int64_t> gens;
        for (int64_t x : unit_group(l1 * l2)) {
            int64_t i1 = discrete_log(g1, x % l1, l1) % 3;
            int64_t i2 = discrete_log(g2, x % l2, l2) % 3;
            if ((i1 + twist * i2) % 3 == 0) gens.push_back(x);
        }
        return AbelianField::make(l1 * l2, gens);
    };
    for (int64_t twist : {1, 2}) {
        AbelianField F = kernel_field(twist);
        if (!F.contains(p)) return F;  // p outside the kernel: sigma_p generates
    }
    throw InvalidInput("cubic_two_prime_inert: p is a cube modulo both primes");
}

// The decomposition subfield at p inside the compositum of the two cubic
// fields of conductors l1 and l2 (the cubic in which p splits completely).
inline AbelianField cubic_two_prime_split(int64_t l1, int64_t l2, int64_t p) {
    std::vector<int64_t> gens;
    int64_t g1 = primitive_root(l1), g2 = primitive_root(l2);
    for (int64_t x : unit_group(l1 * l2)) {
        int64_t i1 = discrete_log(g1, x % l1, l1) % 3;
        int64_t i2 = discrete_log(g2, x % l2, l2) % 3;
        if (i1 == 0 && i2 == 0) gens.push_back(x);
    }
    gens.push_back(mod_norm(p, l1 * l2));
    AbelianField D = AbelianField::make(l1 * l2, gens);
    if (D.degree() != 3) throw InvalidInput("cubic_two_prime_split: p is a cube modulo a factor");
    return D;
}

}  // namespace cyclab
