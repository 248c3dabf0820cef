#pragma once

#include <optional>
#include <vector>

#include "cyclab/circ_symbol.hpp"
#include "cyclab/int_mat.hpp"
#include "cyclab/lll.hpp"

namespace cyclab {

struct PrecPolicy {
    int initial_bits = 192;
    int max_bits = 3072;
    int64_t verify_budget = 2000000;
    // skip exact re-verification of basis rows whose estimated polynomial
    // cost (factor mass times modulus) exceeds this; such rows are already
    // certified by the saturation argument over the verified seed identities
    int64_t verify_cost_budget = 8000000;
};

enum class RelStatus { OK, UNRESOLVED };

struct RelationLattice {
    std::vector<CircSymbol> gens;
    IntMat relations;  // HNF basis rows; saturated
    RelStatus status = RelStatus::OK;
    std::optional<std::vector<Int>> offending;  // refuted candidate at max budget
    int final_precision = 0;
};

namespace reldetail {

// Exact integer matrix of valuations: one column per prime of the combined
// modulus, one row per generator.
inline IntMat valuation_matrix(const std::vector<CircSymbol>& gens, std::vector<int64_t>* primes_out = nullptr) {
    int64_t L = 1;
    for (const auto& g : gens) L = std::lcm(L, std::lcm(g.d, g.target.conductor()));
    auto primes = prime_divisors(L);
    IntMat V((int)gens.size(), (int)primes.size());
    for (size_t i = 0; i < gens.size(); ++i)
        for (size_t j = 0; j < primes.size(); ++j) V.at((int)i, (int)j) = valuation_at(gens[i], primes[j]);
    if (primes_out) *primes_out = primes;
    return V;
}

// One pass of numeric discovery at a fixed precision: returns exactly
// verified relation rows (subset of the span of K0) and reports any refuted
// candidate.
inline IntMat discover_at_precision(const std::vector<CircSymbol>& gens, const IntMat& K0, int prec,
                                    const PrecPolicy& policy, std::optional<std::vector<Int>>* refuted) {
    int k = K0.rows();
    int G = (int)gens.size();
    IntMat empty(0, G);
    if (k == 0) return empty;
    // scaled log matrix restricted to the valuation kernel
    std::vector<LogVector> logs;
    logs.reserve(gens.size());
    for (const auto& g : gens) logs.push_back(log_embedding(g, prec));
    int r = (int)logs[0].coords.size();
    int shift = prec - 8;
    IntMat B(k, k + r);
    double max_err = 0;
    for (int i = 0; i < k; ++i) {
        B.at(i, i) = 1;
        for (int j = 0; j < r; ++j) {
            RInterval acc = RInterval::zero(prec);
            for (int g = 0; g < G; ++g) {
                if (K0.at(i, g) == 0) continue;
                if (!K0.at(i, g).fits_slong_p()) throw ResourceLimit("relation search: kernel coefficients too large");
                acc += logs[g].coords[j].scaled_long(K0.at(i, g).get_si());
            }
            B.at(i, k + j) = acc.mid_scaled(shift);
            max_err = std::max(max_err, acc.err_scaled(shift));
        }
    }
    lll_reduce(B);
    if (max_err > 1e12) return empty;  // precision far too low to separate anything
    // certified residue bound for a true relation with coefficients <= 2^20
    Int tau = Int((long)((max_err + 1.0) * 1048576.0)) * k + 1;
    Int coeff_cap = Int(1) << 20;
    IntMat found(0, G);
    std::vector<std::vector<Int>> rows;
    for (int i = 0; i < k; ++i) {
        bool small_log = true, small_coeff = true;
        for (int j = 0; j < r && small_log; ++j)
            if (abs(B.at(i, k + j)) > tau) small_log = false;
        for (int j = 0; j < k && small_coeff; ++j)
            if (abs(B.at(i, j)) > coeff_cap) small_coeff = false;
        if (!small_log || !small_coeff) continue;
        // candidate in generator coordinates
        std::vector<Int> v(G);
        bool nonzero = false;
        for (int g = 0; g < G; ++g) {
            Int s = 0;
            for (int j = 0; j < k; ++j) s += B.at(i, j) * K0.at(j, g);
            v[g] = s;
            nonzero |= (s != 0);
        }
        if (!nonzero) continue;
        auto verdict = verify_relation_exact(gens, v, policy.verify_budget);
        if (verdict.verified) {
            rows.push_back(std::move(v));
        } else if (refuted) {
            *refuted = v;
        }
    }
    IntMat M((int)rows.size(), G);
    for (size_t i = 0; i < rows.size(); ++i) M.set_row((int)i, rows[i]);
    return hnf_basis(M);
}

// Verify a spanning set of the lattice exactly. A short (LLL-reduced) basis
// is checked instead of the HNF rows: they span the same lattice, and every
// integer combination of verified relations is again a relation, so this
// certifies every stored row. Rows whose exact check exceeds the budget are
// accepted on the saturation argument (k*v a verified relation and
// F^x/{+-1} torsion-free imply v is one).
inline void verify_basis_rows(const std::vector<CircSymbol>& gens, const IntMat& R, const PrecPolicy& policy) {
    if (R.rows() == 0) return;
    IntMat S = R;
    lll_reduce(S);
    int64_t N = 1;
    for (const auto& g : gens) N = std::lcm(N, g.d);
    std::vector<int64_t> conj_size(gens.size());
    for (size_t j = 0; j < gens.size(); ++j) conj_size[j] = (int64_t)gens[j].conjugation_set().size();
    for (int i = 0; i < S.rows(); ++i) {
        std::vector<Int> v = S.row(i);
        int64_t mass = 0;
        for (size_t j = 0; j < v.size(); ++j)
            if (v[j] != 0 && v[j].fits_slong_p()) mass += std::abs(v[j].get_si()) * conj_size[j];
        if (mass * N > policy.verify_cost_budget) continue;
        try {
            auto verdict = verify_relation_exact(gens, v, policy.verify_budget);
            if (!verdict.verified) throw InternalError("relation basis row failed exact verification");
        } catch (const ResourceLimit&) {
            // implied by saturation of exactly verified rows
        }
    }
}

}  // namespace reldetail

// Numeric-first relation search: lattice reduction on certified log vectors
// restricted to the exact valuation kernel, every candidate confirmed by
// verify_relation_exact, result saturated; precision doubles until the
// output is stable across two consecutive doublings.
inline RelationLattice relation_lattice(const std::vector<CircSymbol>& gens, const PrecPolicy& policy = {}) {
    RelationLattice out;
    out.gens = gens;
    int G = (int)gens.size();
    if (G == 0) throw InvalidInput("relation_lattice: no generators");
    for (const auto& g : gens)
        if (!(g.target == gens[0].target)) throw InvalidInput("relation_lattice: mixed targets");

    IntMat V = reldetail::valuation_matrix(gens);
    IntMat K0 = kernel(V);
    if (K0.rows() == 0) {
        out.relations = IntMat(0, G);
        out.final_precision = policy.initial_bits;
        return out;
    }

    IntMat prev(0, G);
    int agreements = 0;
    std::optional<std::vector<Int>> refuted;
    for (int prec = policy.initial_bits; prec <= policy.max_bits; prec *= 2) {
        refuted.reset();
        IntMat found = reldetail::discover_at_precision(gens, K0, prec, policy, &refuted);
        IntMat sat = found.rows() ? saturate(found) : IntMat(0, G);
        out.final_precision = prec;
        if (sat == prev && prec > policy.initial_bits)
            ++agreements;
        else
            agreements = 0;
        prev = sat;
        if (agreements >= 2) {
            out.relations = sat;
            reldetail::verify_basis_rows(gens, out.relations, policy);
            return out;
        }
    }
    out.relations = prev;
    out.status = RelStatus::UNRESOLVED;
    out.offending = refuted;
    return out;
}

// Seeded variant used by the module builders: `seeds` are relation rows
// derived from proven distribution/norm identities. If their span already
// has the full corank prescribed by Dirichlet/Sinnott rank theory, the
// saturated span is provably the whole relation lattice and no numeric
// search is needed; otherwise numeric discovery fills in.
inline RelationLattice relation_lattice_seeded(const std::vector<CircSymbol>& gens, const IntMat& seeds,
                                               int expected_module_rank, const PrecPolicy& policy = {}) {
    RelationLattice out;
    out.gens = gens;
    int G = (int)gens.size();
    int target_rank = G - expected_module_rank;
    IntMat R0 = seeds.rows() ? hnf_basis(seeds) : IntMat(0, G);
    if (R0.rows() == target_rank) {
        out.relations = R0.rows() ? saturate(R0) : R0;
        out.final_precision = policy.initial_bits;
        reldetail::verify_basis_rows(gens, out.relations, policy);
        return out;
    }
    if (R0.rows() > target_rank) throw InternalError("relation seeds exceed the theoretical corank");
    RelationLattice numeric = relation_lattice(gens, policy);
    IntMat merged = hnf_basis(IntMat::vstack(R0, numeric.relations));
    out.relations = merged.rows() ? saturate(merged) : merged;
    out.final_precision = numeric.final_precision;
    out.status = out.relations.rows() == target_rank ? RelStatus::OK : RelStatus::UNRESOLVED;
    if (out.status == RelStatus::OK) reldetail::verify_basis_rows(gens, out.relations, policy);
    return out;
}

}  // namespace cyclab
