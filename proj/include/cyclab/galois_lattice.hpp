#pragma once

#include <map>
#include <memory>
#include <set>
#include <vector>

#include "cyclab/circ_symbol.hpp"
#include "cyclab/relations.hpp"

namespace cyclab {

enum class Kind { CYC, SINNOTT, WASHINGTON, UNIV_NORM_C, UNIV_NORM_W };

inline const char* kind_name(Kind k) {
    switch (k) {
        case Kind::CYC: return "CYC";
        case Kind::SINNOTT: return "SINNOTT";
        case Kind::WASHINGTON: return "WASHINGTON";
        case Kind::UNIV_NORM_C: return "UNIV_NORM_C";
        case Kind::UNIV_NORM_W: return "UNIV_NORM_W";
    }
    return "?";
}

// The abstract module Cyc(F)/{+-1} = Z^G / R presented on the canonical
// generator list, with a free coordinate system Z^q and the Galois action.
struct CycModuleCtx {
    AbelianField F;
    std::vector<CircSymbol> gens;
    IntMat relations;  // saturated HNF basis, rank rho
    RelStatus rel_status = RelStatus::OK;
    int G = 0;
    int q = 0;         // free rank of the quotient
    IntMat proj;       // G x q ; class(x) = x * proj
    IntMat sect;       // q x G ; section of proj (sect * proj = I_q)
    std::vector<int64_t> primes;  // primes of the conductor
    IntMat val_q;      // q x P valuations on the quotient
    std::vector<int64_t> gal_gens;  // generating coset residues of Gal(F/Q)

    int index_of(const CircSymbol& s) const {
        auto it = std::lower_bound(gens.begin(), gens.end(), s);
        if (it == gens.end() || !(*it == s)) throw InternalError("CycModuleCtx: unknown symbol");
        return (int)(it - gens.begin());
    }

    std::vector<int> perm_of_residue(int64_t c) const {
        std::vector<int> p(G);
        for (int i = 0; i < G; ++i) p[i] = index_of(gens[i].conjugate_by(c));
        return p;
    }

    // action of the coset of c on the free coordinates
    IntMat act(int64_t c) const {
        return act_perm(perm_of_residue(c));
    }

    IntMat act_perm(const std::vector<int>& perm) const {
        IntMat PP(G, q);
        for (int i = 0; i < G; ++i)
            for (int j = 0; j < q; ++j) PP.at(i, j) = proj.at(perm[i], j);
        return sect.mul(PP);
    }

    // sum of the actions of a set of residues (for norm elements)
    IntMat act_sum(const std::vector<int64_t>& residues) const {
        IntMat S(G, q);
        for (int64_t c : residues) {
            auto perm = perm_of_residue(c);
            for (int i = 0; i < G; ++i)
                for (int j = 0; j < q; ++j) S.at(i, j) += proj.at(perm[i], j);
        }
        return sect.mul(S);
    }
};

namespace galdetail {

// Distribution/norm identity rows for the full generator family of F: the
// level-raising identities prod_j (1 - zeta_{dl}^{a+jd}) = 1 - zeta_d^a,
// normed from Q(zeta_f) down to F.
inline IntMat seed_rows(const AbelianField& F, const std::vector<CircSymbol>& gens) {
    std::map<CircSymbol, int> index;
    for (size_t i = 0; i < gens.size(); ++i) index[gens[i]] = (int)i;
    int64_t f = F.conductor();
    int64_t Hsize = (int64_t)F.subgroup().size();
    std::map<int64_t, int64_t> h_of_d;  // |ker(H -> (Z/d)^x)| = |H| / |H_d|
    auto h_of = [&](int64_t d) {
        auto it = h_of_d.find(d);
        if (it != h_of_d.end()) return it->second;
        int64_t hd = Hsize / (int64_t)F.subgroup_image_mod(d).size();
        h_of_d[d] = hd;
        return hd;
    };
    std::set<std::vector<Int>> rows;
    auto push_unique = [&](std::vector<Int>&& row) {
        bool nz = false;
        for (auto& x : row) nz |= (x != 0);
        if (nz) rows.insert(std::move(row));
    };
    for (int64_t d : divisors(f)) {
        if (d == 1) continue;
        for (int64_t ell : prime_divisors(f)) {
            if (f % (d * ell) != 0) continue;
            int64_t dl = d * ell;
            for (int64_t a : unit_group(d)) {
                std::vector<Int> row(gens.size());
                row[index.at(CircSymbol::make(d, a, F))] -= h_of(d);
                if (d % ell == 0) {
                    for (int64_t j = 0; j < ell; ++j) {
                        int64_t e = mod_norm(a + j * d, dl);
                        row[index.at(CircSymbol::make(dl, e, F))] += h_of(dl);
                    }
                } else {
                    int64_t b = mul_mod(a, inv_mod(ell, d), d);
                    row[index.at(CircSymbol::make(d, b, F))] += h_of(d);
                    for (int64_t j = 0; j < ell; ++j) {
                        int64_t e = mod_norm(a + j * d, dl);
                        if (e % ell == 0) continue;  // the same-level solution
                        row[index.at(CircSymbol::make(dl, e, F))] += h_of(dl);
                    }
                }
                push_unique(std::move(row));
            }
        }
    }
    IntMat M((int)rows.size(), (int)gens.size());
    int ri = 0;
    for (const auto& row : rows) M.set_row(ri++, row);
    return M;
}

// Exactly verify every distribution identity underlying the seed family:
// prod_j (1 - zeta_{dl}^{a+jd}) = 1 - zeta_d^a at its own modulus dl. The
// seed rows are norms (products of Galois conjugates) of these, so their
// exactness follows. One representative per orbit of a suffices since
// conjugate identities are equivalent.
inline void verify_seed_identities(const AbelianField& F) {
    int64_t f = F.conductor();
    for (int64_t d : divisors(f)) {
        if (d == 1) continue;
        for (int64_t ell : prime_divisors(f)) {
            if (f % (d * ell) != 0) continue;
            int64_t dl = d * ell;
            std::vector<int64_t> Hd = F.subgroup_image_mod(d);
            std::vector<char> seen(d, 0);
            for (int64_t a : unit_group(d)) {
                if (seen[a]) continue;
                for (int64_t t : Hd) seen[mul_mod(a, t, d)] = 1;
                FactorProduct P, Q;
                P.N = Q.N = dl;
                for (int64_t j = 0; j < ell; ++j) P.add_factor(mod_norm(a + j * d, dl));
                Q.add_factor(mod_norm(a * ell, dl));
                auto r = root_of_unity_ratio(P, Q);
                if (!r || !r->is_one()) throw InternalError("seed identity failed exact verification");
            }
        }
    }
}

}  // namespace galdetail

// Build the Cyc(F) module context. For F = Q this is the zero module.
inline std::shared_ptr<CycModuleCtx> build_cyc_context(const AbelianField& F, const PrecPolicy& policy = {}) {
    auto ctx = std::make_shared<CycModuleCtx>();
    ctx->F = F;
    if (F.is_rationals()) {
        ctx->G = ctx->q = 0;
        ctx->proj = IntMat(0, 0);
        ctx->sect = IntMat(0, 0);
        ctx->relations = IntMat(0, 0);
        ctx->val_q = IntMat(0, 0);
        return ctx;
    }
    if (!F.totally_real()) throw Unsupported("build_cyc_context: field must be totally real");
    ctx->gens = circ_generators(F);
    ctx->G = (int)ctx->gens.size();
    galdetail::verify_seed_identities(F);
    IntMat seeds = galdetail::seed_rows(F, ctx->gens);
    int expected_rank = (int)(F.degree() - 1 + (int64_t)prime_divisors(F.conductor()).size());
    RelationLattice rel = relation_lattice_seeded(ctx->gens, seeds, expected_rank, policy);
    if (rel.status != RelStatus::OK)
        throw ResourceLimit("build_cyc_context: relation lattice UNRESOLVED for " + F.str());
    ctx->relations = rel.relations;
    ctx->rel_status = rel.status;
    int rho = ctx->relations.rows();
    ctx->q = ctx->G - rho;

    if (rho == 0) {
        ctx->proj = IntMat::identity(ctx->G);
        ctx->sect = IntMat::identity(ctx->G);
    } else {
        SnfResult s = snf(ctx->relations);
        for (const auto& dg : s.diag)
            if (dg != 1) throw InternalError("relation quotient has torsion; lattice not saturated?");
        // class(x) = last q coordinates of x*V ; section z -> (0|z)*V^{-1}
        IntMat V = s.V;
        ctx->proj = IntMat(ctx->G, ctx->q);
        for (int i = 0; i < ctx->G; ++i)
            for (int j = 0; j < ctx->q; ++j) ctx->proj.at(i, j) = V.at(i, rho + j);
        ctx->sect = IntMat(ctx->q, ctx->G);
        for (int i = 0; i < ctx->q; ++i)
            for (int j = 0; j < ctx->G; ++j) ctx->sect.at(i, j) = s.Vinv.at(rho + i, j);
        if (!(ctx->sect.mul(ctx->proj) == IntMat::identity(ctx->q)))
            throw InternalError("free-quotient section check failed");
    }

    ctx->primes = prime_divisors(F.conductor());
    // valuations depend only on the level d of a symbol
    std::map<int64_t, std::pair<int, int64_t>> val_of_d;  // d -> (prime index, value)
    for (int i = 0; i < ctx->G; ++i) {
        int64_t d = ctx->gens[i].d;
        if (val_of_d.count(d)) continue;
        auto fac = factorize(d);
        if (fac.size() != 1) {
            val_of_d[d] = {-1, 0};
            continue;
        }
        int64_t ell = fac[0].first;
        int pj = (int)(std::find(ctx->primes.begin(), ctx->primes.end(), ell) - ctx->primes.begin());
        val_of_d[d] = {pj, valuation_at(ctx->gens[i], ell)};
    }
    IntMat val_sym(ctx->G, (int)ctx->primes.size());
    for (int i = 0; i < ctx->G; ++i) {
        auto [pj, v] = val_of_d[ctx->gens[i].d];
        if (pj >= 0) val_sym.at(i, pj) = v;
    }
    ctx->val_q = ctx->sect.mul(val_sym);

    // minimal generating residues of the Galois group
    std::vector<int64_t> cosets = F.galois_cosets();
    std::vector<int64_t> gg;
    std::vector<int64_t> generated{F.coset_rep(1)};
    auto gen_closure = [&](const std::vector<int64_t>& gens_in) {
        std::vector<int64_t> cl{F.coset_rep(1)};
        std::vector<int64_t> frontier = cl;
        while (!frontier.empty()) {
            std::vector<int64_t> next;
            for (int64_t x : frontier)
                for (int64_t g : gens_in) {
                    int64_t y = F.coset_rep(mul_mod(mod_norm(x, F.conductor()), mod_norm(g, F.conductor()), F.conductor()));
                    if (std::find(cl.begin(), cl.end(), y) == cl.end()) {
                        cl.push_back(y);
                        next.push_back(y);
                    }
                }
            frontier = std::move(next);
        }
        return cl;
    };
    for (int64_t c : cosets) {
        if ((int64_t)generated.size() == (int64_t)cosets.size()) break;
        if (std::find(generated.begin(), generated.end(), c) != generated.end()) continue;
        gg.push_back(c);
        generated = gen_closure(gg);
    }
    ctx->gal_gens = gg;

    // Galois stability of the relation lattice (needed for the action to
    // descend to the quotient).
    if (rho > 0) {
        for (int64_t c : ctx->gal_gens) {
            auto perm = ctx->perm_of_residue(c);
            IntMat imgs(rho, ctx->G);
            for (int i = 0; i < rho; ++i)
                for (int g = 0; g < ctx->G; ++g) imgs.at(i, perm[g]) = ctx->relations.at(i, g);
            if (!solve_left(ctx->relations, imgs)) throw InternalError("relation lattice not Galois stable");
        }
    }
    return ctx;
}

// A sublattice of the Cyc quotient with a denominator, tagged by kind.
struct GalLattice {
    Kind kind = Kind::CYC;
    std::shared_ptr<const CycModuleCtx> ctx;
    RatLattice lat;  // rows in Z^q over den

    int rank() const { return lat.num.rows(); }

    // witnesses: exponent vectors over the symbol generating set (times 1/den)
    IntMat witnesses() const { return lat.num.mul(ctx->sect); }

    // action of the coset residue c restricted to this lattice, in the
    // basis of `lat` (solves T * B = B * A and checks stability).
    IntMat restricted_action(const IntMat& ambient_action) const {
        IntMat BA = lat.num.mul(ambient_action);
        auto T = solve_left(lat.num, BA);
        if (!T) throw InternalError("lattice not stable under the Galois action");
        return *T;
    }
};

inline GalLattice build_cyc(std::shared_ptr<const CycModuleCtx> ctx) {
    GalLattice L;
    L.kind = Kind::CYC;
    L.ctx = ctx;
    L.lat = RatLattice(IntMat::identity(ctx->q));
    return L;
}

inline GalLattice build_sinnott(std::shared_ptr<const CycModuleCtx> ctx) {
    GalLattice L;
    L.kind = Kind::SINNOTT;
    L.ctx = ctx;
    L.lat = RatLattice(ctx->q ? kernel(ctx->val_q) : IntMat(0, 0));
    return L;
}

// Extension map iota: Cyc(E) -> Cyc(F) for E a subfield of F, on free
// coordinates (q_E x q_F). Each E-symbol norm-splits into an orbit of
// F-symbols.
inline IntMat extension_map(const CycModuleCtx& E, const CycModuleCtx& Fx) {
    if (!AbelianField::is_subfield(E.F, Fx.F)) throw InvalidInput("extension_map: not a subfield");
    if (E.G == 0) return IntMat(0, Fx.q);
    IntMat Esym(E.G, Fx.G);
    for (int i = 0; i < E.G; ++i) {
        const CircSymbol& s = E.gens[i];
        // cosets of H_d(F) inside H_d(E)
        std::vector<int64_t> HdE = E.F.subgroup_image_mod(s.d);
        std::vector<int64_t> HdF = Fx.F.subgroup_image_mod(s.d);
        std::vector<char> seen(s.d, 0);
        for (int64_t t : HdE) {
            if (seen[t]) continue;
            for (int64_t u : HdF) seen[mul_mod(t, u, s.d)] = 1;
            Esym.at(i, Fx.index_of(CircSymbol::make(s.d, mul_mod(s.a, t, s.d), Fx.F))) += 1;
        }
    }
    // descend to free coordinates and check relations map to relations
    IntMat iota = E.sect.mul(Esym).mul(Fx.proj);
    for (int i = 0; i < E.relations.rows(); ++i) {
        IntMat r(1, E.G);
        r.set_row(0, E.relations.row(i));
        IntMat m = r.mul(Esym).mul(Fx.proj);
        if (!m.is_zero()) throw InternalError("extension map does not kill relations");
    }
    return iota;
}

// Residues of Gal(F_m/Q) fixing F_n (as coset reps in F_m's encoding).
inline std::vector<int64_t> relative_galois_cosets(const AbelianField& Fm, const AbelianField& Fn) {
    if (!AbelianField::is_subfield(Fn, Fm)) throw InvalidInput("relative_galois_cosets: not a subfield");
    std::vector<int64_t> out;
    for (int64_t c : Fm.galois_cosets()) {
        int64_t r = Fn.is_rationals() ? 0 : mod_norm(c, Fn.conductor());
        if (Fn.is_rationals() || Fn.contains(r)) out.push_back(c);
    }
    return out;
}

// Deterministic generator of the cyclic group Gal(F_m/F_n): the smallest
// coset residue of full order.
inline int64_t cyclic_generator_residue(const AbelianField& Fm, const AbelianField& Fn) {
    auto cosets = relative_galois_cosets(Fm, Fn);
    int64_t ord = (int64_t)cosets.size();
    for (int64_t c : cosets) {
        GaloisElement g(Fm, c);
        if (g.order() == ord) return g.residue;
    }
    throw InternalError("cyclic_generator_residue: group not cyclic");
}

}  // namespace cyclab
