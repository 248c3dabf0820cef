#pragma once

#include "cyclab/asympt.hpp"
#include "cyclab/json_util.hpp"

namespace cyclab {

inline Json phi_json(const PhiReport& r) {
    Json j;
    j["field"] = r.field;
    j["p"] = r.p;
    j["n"] = r.n;
    j["m_used"] = r.m_used;
    j["kind"] = kind_name(r.kind);
    j["free_rank"] = r.free_rank;
    j["torsion"] = group_json(r.torsion);
    j["prime_to_p_torsion"] = group_json(r.prime_to_p_torsion);
    j["stabilized"] = r.stabilized;
    j["predicted_rank"] = r.predicted_rank;
    j["anomalous"] = r.anomalous;
    return j;
}

inline Json kn_json(const KNEstimate& kn) {
    Json j;
    j["field"] = kn.field;
    j["p"] = kn.p;
    j["n"] = kn.n;
    Json pairs = Json::array();
    for (const auto& pr : kn.pairs)
        pairs.push_back(Json{{"m", pr.m}, {"h0", group_json(pr.h0)}, {"proxy_stabilized", pr.proxy_stabilized}});
    j["pairs"] = std::move(pairs);
    j["consistent"] = kn.consistent;
    j["inferred"] = group_json(kn.inferred);
    return j;
}

inline Json theorem_json(const TheoremReport& rep) {
    Json j;
    j["field"] = rep.field;
    j["p"] = rep.p;
    j["n"] = rep.n;
    j["m"] = rep.m;
    Json claims = Json::array();
    for (const auto& c : rep.claims)
        claims.push_back(Json{{"id", c.id},
                              {"predicted", c.predicted},
                              {"computed", c.computed},
                              {"verdict", verdict_name(c.verdict)},
                              {"caveats", c.caveats}});
    j["claims"] = std::move(claims);
    return j;
}

// TSV rows: field, p, n, m, claim, predicted, computed, verdict
inline std::string theorem_tsv(const TheoremReport& rep) {
    std::string out;
    for (const auto& c : rep.claims) {
        out += rep.field + "\t" + std::to_string(rep.p) + "\t" + std::to_string(rep.n) + "\t" +
               std::to_string(rep.m) + "\t" + c.id + "\t" + c.predicted + "\t" + c.computed + "\t" +
               verdict_name(c.verdict) + "\n";
    }
    return out;
}

}  // namespace cyclab
