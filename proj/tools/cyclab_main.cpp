// Command-line laboratory for circular-unit Galois modules along cyclotomic
// Z_p-towers: field arithmetic, module builds, Tate cohomology, Phi / KN
// invariants, and the theorem verification suite.

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <iostream>

#include "cyclab/lab.hpp"
#include "cyclab/report_json.hpp"

using namespace cyclab;

namespace {

struct CommonOpts {
    int64_t f = 0;
    std::vector<int64_t> gens;
    std::string field_spec;
    int64_t p = 3;
    int n = 0;
    int m = -1;
    int m_max = -1;
    std::string m_list;
    std::string kind = "SINNOTT";
    std::string format = "json";
    std::string cache_dir;
    int prec = 192;
};

void add_field_opts(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--f", o.f, "field modulus");
    cmd->add_option("--gens", o.gens, "generators of the fixing subgroup")->delimiter(',');
    cmd->add_option("--field", o.field_spec, "canonical field spec f:h1,h2,...");
    cmd->add_option("--p", o.p, "odd prime for the tower")->required();
    cmd->add_option("--format", o.format, "json or tsv")->check(CLI::IsMember({"json", "tsv"}));
    cmd->add_option("--cache-dir", o.cache_dir, "cache directory (default $CYCLAB_CACHE_DIR or ./.cyclab-cache)");
    cmd->add_option("--prec", o.prec, "initial working precision in bits");
}

AbelianField field_of(const CommonOpts& o) {
    if (!o.field_spec.empty()) return AbelianField::parse(o.field_spec);
    if (o.f <= 0) throw InvalidInput("specify --f (with --gens) or --field");
    return AbelianField::make(o.f, o.gens);
}

std::string cache_dir_of(const CommonOpts& o) {
    if (!o.cache_dir.empty()) return o.cache_dir == "none" ? "" : o.cache_dir;
    if (const char* env = std::getenv("CYCLAB_CACHE_DIR")) return env;
    return ".cyclab-cache";
}

Kind kind_of(const std::string& s) {
    if (s == "CYC") return Kind::CYC;
    if (s == "SINNOTT") return Kind::SINNOTT;
    if (s == "WASHINGTON") return Kind::WASHINGTON;
    if (s == "UNIV_NORM_C") return Kind::UNIV_NORM_C;
    if (s == "UNIV_NORM_W") return Kind::UNIV_NORM_W;
    throw InvalidInput("unknown kind: " + s);
}

Json with_timestamp(Json j) {
    auto now = std::chrono::system_clock::now().time_since_epoch();
    j["generated_at"] = std::chrono::duration_cast<std::chrono::seconds>(now).count();
    return j;
}

Lab make_lab(const CommonOpts& o) {
    PrecPolicy pol;
    pol.initial_bits = o.prec;
    return Lab(field_of(o), o.p, pol, cache_dir_of(o));
}

int cmd_field_info(const CommonOpts& o) {
    AbelianField F = field_of(o);
    require_odd_prime(o.p);
    Json j;
    j["field"] = F.str();
    j["degree"] = F.degree();
    j["conductor"] = F.conductor();
    j["totally_real"] = F.totally_real();
    j["p"] = o.p;
    TowerConstants tc = tower_constants(F, o.p);
    j["n_d"] = tc.n_d;
    j["n_i"] = tc.n_i;
    j["e0"] = tc.e0;
    Json levels = Json::array();
    for (int lev = 0; lev <= std::max(o.n, 0); ++lev) {
        AbelianField Fl = layer(F, o.p, lev);
        auto idec = inertia_decomposition(Fl, o.p);
        Json lj;
        lj["n"] = lev;
        lj["field"] = Fl.str();
        lj["degree"] = Fl.degree();
        lj["conductor"] = Fl.conductor();
        lj["splitting"] = splitting_json(splitting_data(Fl, o.p));
        lj["inertia_subfield"] = idec.inertia_field.str();
        lj["decomposition_subfield"] = idec.decomposition_field.str();
        lj["frobenius_residue"] = idec.frobenius.residue;
        lj["frobenius_order"] = idec.frobenius.order();
        levels.push_back(std::move(lj));
    }
    j["levels"] = std::move(levels);
    if (o.format == "tsv") {
        std::cout << "field\tdegree\tconductor\ts_plus\tn_d\tn_i\n"
                  << F.str() << "\t" << F.degree() << "\t" << F.conductor() << "\t"
                  << splitting_data(F, o.p).s_plus << "\t" << tc.n_d << "\t" << tc.n_i << "\n";
    } else {
        std::cout << with_timestamp(j).dump(2) << "\n";
    }
    return 0;
}

int cmd_build(const CommonOpts& o) {
    Lab lab = make_lab(o);
    Kind k = kind_of(o.kind);
    GalLattice L;
    if (k == Kind::UNIV_NORM_C || k == Kind::UNIV_NORM_W) {
        int mm = o.m_max > 0 ? o.m_max : o.n + 2;
        auto un = lab.universal_norms(o.n, mm, k == Kind::UNIV_NORM_C ? Kind::SINNOTT : Kind::WASHINGTON);
        L = un.lattice;
    } else {
        L = lab.module_at(o.n, k);
    }
    std::cout << with_timestamp(lattice_json(L)).dump(2) << "\n";
    return 0;
}

int cmd_cohomology(const CommonOpts& o) {
    Lab lab = make_lab(o);
    int m = o.m > 0 ? o.m : o.n + 1;
    Kind k = kind_of(o.kind);
    GalLattice L;
    bool stab = true;
    if (k == Kind::UNIV_NORM_C || k == Kind::UNIV_NORM_W) {
        int mm = o.m_max > 0 ? o.m_max : m + 2;
        auto un = lab.universal_norms(m, mm, k == Kind::UNIV_NORM_C ? Kind::SINNOTT : Kind::WASHINGTON);
        L = un.lattice;
        stab = un.stabilized;
    } else {
        L = lab.module_at(m, k);
    }
    int64_t gen = cyclic_generator_residue(lab.field_at(m), lab.field_at(o.n));
    int64_t q = 1;
    for (int i = 0; i < m - o.n; ++i) q *= o.p;
    TateGroups t = tate(L, gen, q);
    Json j;
    j["field"] = lab.base().str();
    j["p"] = o.p;
    j["n"] = o.n;
    j["m"] = m;
    j["kind"] = kind_name(k);
    j["generator_residue"] = gen;
    j["h0"] = group_json(t.h0);
    j["h_minus1"] = group_json(t.h_minus1);
    j["h1"] = group_json(t.h_minus1);  // H^1 = H^-1 for cyclic groups
    j["h0_p_part"] = group_json(p_part(t.h0, Int(o.p)));
    j["h_minus1_p_part"] = group_json(p_part(t.h_minus1, Int(o.p)));
    j["herbrand"] = Rat(t.h0.order(), t.h_minus1.order()).get_str();
    j["proxy_stabilized"] = stab;
    std::cout << with_timestamp(j).dump(2) << "\n";
    return 0;
}

int cmd_phi(const CommonOpts& o) {
    Lab lab = make_lab(o);
    int mm = o.m_max > 0 ? o.m_max : o.n + 2;
    PhiReport r = phi_report(lab, o.n, mm, kind_of(o.kind));
    if (o.format == "tsv") {
        std::cout << "field\tp\tn\tkind\tfree_rank\ttorsion\tstabilized\n"
                  << r.field << "\t" << r.p << "\t" << r.n << "\t" << kind_name(r.kind) << "\t" << r.free_rank
                  << "\t" << r.torsion.str() << "\t" << (r.stabilized ? "yes" : "no") << "\n";
    } else {
        std::cout << with_timestamp(phi_json(r)).dump(2) << "\n";
    }
    return 0;
}

int cmd_kn(const CommonOpts& o) {
    Lab lab = make_lab(o);
    std::vector<int> ms;
    std::stringstream ss(o.m_list.empty() ? std::to_string(o.n + 1) : o.m_list);
    std::string tok;
    while (std::getline(ss, tok, ','))
        if (!tok.empty()) ms.push_back(std::stoi(tok));
    KNEstimate kn = kn_estimate(lab, o.n, ms);
    std::cout << with_timestamp(kn_json(kn)).dump(2) << "\n";
    return 0;
}

int cmd_verify(const CommonOpts& o) {
    Lab lab = make_lab(o);
    int m = o.m > 0 ? o.m : o.n + 1;
    TheoremReport rep = verify_predictions(lab, o.n, m);
    if (o.format == "tsv") {
        std::cout << "field\tp\tn\tm\tclaim\tpredicted\tcomputed\tverdict\n" << theorem_tsv(rep);
    } else {
        std::cout << with_timestamp(theorem_json(rep)).dump(2) << "\n";
    }
    if (rep.any_unresolved()) return 2;
    return rep.all_pass_or_expected() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"circular-unit Galois modules along cyclotomic Z_p-towers"};
    app.require_subcommand(1);
    CommonOpts o;

    auto* info = app.add_subcommand("field-info", "degree, conductor, splitting and tower data");
    add_field_opts(info, o);
    info->add_option("--n", o.n, "report levels 0..n");

    auto* build = app.add_subcommand("build", "construct a module lattice and print its JSON");
    add_field_opts(build, o);
    build->add_option("--n", o.n, "tower level");
    build->add_option("--kind", o.kind, "CYC|SINNOTT|WASHINGTON|UNIV_NORM_C|UNIV_NORM_W");
    build->add_option("--m-max", o.m_max, "chain bound for universal norms");

    auto* coh = app.add_subcommand("cohomology", "Tate cohomology of G_{m,n} on a module");
    add_field_opts(coh, o);
    coh->add_option("--n", o.n, "base level");
    coh->add_option("--m", o.m, "module level");
    coh->add_option("--kind", o.kind, "CYC|SINNOTT|WASHINGTON|UNIV_NORM_C|UNIV_NORM_W");
    coh->add_option("--m-max", o.m_max, "chain bound for universal norms");

    auto* phi = app.add_subcommand("phi", "universal co-norm structure report");
    add_field_opts(phi, o);
    phi->add_option("--n", o.n, "base level");
    phi->add_option("--m-max", o.m_max, "chain bound");
    phi->add_option("--kind", o.kind, "SINNOTT|WASHINGTON");

    auto* kn = app.add_subcommand("kn", "KN-torsion estimate through universal-norm cohomology");
    add_field_opts(kn, o);
    kn->add_option("--n", o.n, "base level");
    kn->add_option("--m", o.m_list, "comma-separated list of upper levels");

    auto* verify = app.add_subcommand("verify", "run the per-(m,n) theorem checks");
    add_field_opts(verify, o);
    verify->add_option("--n", o.n, "base level");
    verify->add_option("--m", o.m, "upper level");

    CLI11_PARSE(app, argc, argv);

    try {
        if (info->parsed()) return cmd_field_info(o);
        if (build->parsed()) return cmd_build(o);
        if (coh->parsed()) return cmd_cohomology(o);
        if (phi->parsed()) return cmd_phi(o);
        if (kn->parsed()) return cmd_kn(o);
        if (verify->parsed()) return cmd_verify(o);
    } catch (const InvalidInput& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const Unsupported& e) {
        std::cerr << "unsupported: " << e.what() << "\n";
        return 1;
    } catch (const ResourceLimit& e) {
        std::cerr << "unresolved: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }
    return 1;
}
