#pragma once

#include <vector>

#include "cyclab/galois_lattice.hpp"

namespace cyclab {

struct TateGroups {
    FinAbGroup h_minus1;  // ker(nu) / im(sigma - 1)
    FinAbGroup h0;        // ker(sigma - 1) / im(nu)
};

// Tate cohomology of a cyclic group acting on a free Z-lattice, from the
// action matrix T of a generator (T^order = 1). Both groups are finite.
inline TateGroups tate_of_action(const IntMat& T, int64_t order) {
    int k = T.rows();
    TateGroups out;
    if (k == 0) return out;
    IntMat I = IntMat::identity(k);
    IntMat Tm1 = T - I;
    IntMat nu(k, k);
    {
        IntMat pw = I;
        for (int64_t i = 0; i < order; ++i) {
            nu = nu + pw;
            pw = pw.mul(T);
        }
        if (!(pw == I)) throw InvalidInput("tate_of_action: generator order mismatch");
    }
    if (!nu.mul(Tm1).is_zero()) throw InternalError("tate_of_action: nu * (sigma - 1) != 0");

    auto quotient_in_kernel = [&](const IntMat& ker_of, const IntMat& image_of) {
        IntMat K = kernel(ker_of);  // rows span ker
        if (K.rows() == 0) return FinAbGroup::trivial();
        // rows of image_of lie in the kernel; express and take the quotient
        auto X = solve_left(K, image_of);
        if (!X) throw InternalError("tate: image not inside kernel");
        QuotientStructure q = quotient_structure(K.rows(), *X);
        if (q.free_rank != 0) throw InternalError("tate: cohomology group infinite");
        return q.torsion;
    };
    // H^0: ker(sigma-1) / im(nu); rows of nu span the image lattice
    out.h0 = quotient_in_kernel(Tm1, hnf_basis(nu));
    // H^-1: ker(nu) / im(sigma-1)
    out.h_minus1 = quotient_in_kernel(nu, hnf_basis(Tm1));
    return out;
}

// Action matrix of the Galois residue c restricted to the lattice L.
inline IntMat lattice_action(const GalLattice& L, int64_t c) {
    if (L.rank() == 0) return IntMat(0, 0);
    IntMat A = L.ctx->act(c);
    return L.restricted_action(A);
}

// Tate cohomology of Gal(F_m/F_n) (or any cyclic subgroup given by a
// generator residue and its order) acting on L.
inline TateGroups tate(const GalLattice& L, int64_t generator_residue, int64_t order) {
    return tate_of_action(lattice_action(L, generator_residue), order);
}

inline Rat herbrand_quotient(const GalLattice& L, int64_t generator_residue, int64_t order) {
    TateGroups t = tate(L, generator_residue, order);
    return Rat(t.h0.order(), t.h_minus1.order());
}

}  // namespace cyclab
