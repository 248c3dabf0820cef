#pragma once

#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <unistd.h>

#include "cyclab/galois_lattice.hpp"

namespace cyclab {

using Json = nlohmann::ordered_json;

inline Json group_json(const FinAbGroup& g) {
    Json arr = Json::array();
    for (const auto& d : g.factors) arr.push_back(d.get_str());
    return arr;
}

inline Json matrix_json(const IntMat& m) {
    Json rows = Json::array();
    for (int i = 0; i < m.rows(); ++i) {
        Json r = Json::array();
        for (int j = 0; j < m.cols(); ++j) r.push_back(m.at(i, j).get_str());
        rows.push_back(std::move(r));
    }
    return rows;
}

inline IntMat matrix_from_json(const Json& rows) {
    if (rows.empty()) return IntMat(0, 0);
    IntMat m((int)rows.size(), (int)rows[0].size());
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) m.at(i, j) = Int(rows[i][j].get<std::string>());
    return m;
}

inline Json splitting_json(const SplittingData& sd) {
    return Json{{"e", sd.e}, {"f_res", sd.f_res}, {"s", sd.s}, {"s_plus", sd.s_plus}};
}

inline Json lattice_json(const GalLattice& L) {
    Json j;
    j["field"] = L.ctx->F.str();
    j["kind"] = kind_name(L.kind);
    j["rank"] = L.rank();
    j["denominator"] = L.lat.den.get_str();
    j["basis_hnf"] = matrix_json(L.lat.num);
    j["witnesses"] = matrix_json(L.witnesses());
    Json acts = Json::object();
    for (int64_t c : L.ctx->gal_gens) acts[std::to_string(c)] = matrix_json(L.ctx->act(c));
    j["ambient_action"] = std::move(acts);
    return j;
}

inline constexpr const char* kCacheVersion = "cyclab-cache-v1";

// One file per key, content stamped with the code version; writes go through
// a temp file and an atomic rename, reads are lock-free.
class DiskCache {
  public:
    DiskCache() = default;
    explicit DiskCache(std::string dir) : dir_(std::move(dir)) {
        if (!dir_.empty()) std::filesystem::create_directories(dir_);
    }

    bool enabled() const { return !dir_.empty(); }

    std::optional<Json> load(const std::string& key) const {
        if (!enabled()) return std::nullopt;
        std::ifstream in(path_of(key));
        if (!in) return std::nullopt;
        Json j;
        try {
            in >> j;
        } catch (...) {
            return std::nullopt;
        }
        if (!j.contains("cache_version") || j["cache_version"] != kCacheVersion) return std::nullopt;
        return j;
    }

    void store(const std::string& key, Json j) const {
        if (!enabled()) return;
        j["cache_version"] = kCacheVersion;
        std::string tmp = path_of(key) + ".tmp." + std::to_string(::getpid());
        {
            std::ofstream out(tmp);
            out << j.dump(1);
        }
        std::filesystem::rename(tmp, path_of(key));
    }

  private:
    std::string path_of(const std::string& key) const {
        std::string safe;
        for (char c : key) safe += (isalnum((unsigned char)c) || c == '-' || c == '_') ? c : '_';
        size_t h = std::hash<std::string>{}(key);
        char buf[32];
        snprintf(buf, sizeof buf, "%016zx", h);
        if (safe.size() > 80) safe.resize(80);
        return dir_ + "/" + safe + "." + buf + ".json";
    }

    std::string dir_;
};

inline Json ctx_to_json(const CycModuleCtx& ctx) {
    Json j;
    j["field"] = ctx.F.str();
    Json gens = Json::array();
    for (const auto& g : ctx.gens) gens.push_back(Json{{"d", g.d}, {"a", g.a}});
    j["gens"] = std::move(gens);
    j["relations"] = matrix_json(ctx.relations);
    j["proj"] = matrix_json(ctx.proj);
    j["sect"] = matrix_json(ctx.sect);
    j["val_q"] = matrix_json(ctx.val_q);
    j["gal_gens"] = ctx.gal_gens;
    return j;
}

inline std::shared_ptr<CycModuleCtx> ctx_from_json(const Json& j) {
    auto ctx = std::make_shared<CycModuleCtx>();
    ctx->F = AbelianField::parse(j["field"].get<std::string>());
    for (const auto& g : j["gens"]) ctx->gens.push_back(CircSymbol::make(g["d"], g["a"], ctx->F));
    ctx->G = (int)ctx->gens.size();
    ctx->relations = matrix_from_json(j["relations"]);
    ctx->proj = matrix_from_json(j["proj"]);
    ctx->sect = matrix_from_json(j["sect"]);
    ctx->val_q = matrix_from_json(j["val_q"]);
    ctx->q = ctx->proj.cols();
    ctx->primes = prime_divisors(ctx->F.conductor());
    ctx->gal_gens = j["gal_gens"].get<std::vector<int64_t>>();
    if (ctx->G && !(ctx->sect.mul(ctx->proj) == IntMat::identity(ctx->q)))
        throw InternalError("cache: corrupt module context");
    return ctx;
}

}  // namespace cyclab
