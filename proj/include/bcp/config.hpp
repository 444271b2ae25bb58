#pragma once

// RunConfig and its JSON form. Unknown keys are rejected so that a typo cannot silently
// fall back to a default.

#include <bcp/pipeline.hpp>
#include <bcp/rng.hpp>
#include <bcp/suite.hpp>
#include <bcp/zoo.hpp>

#include <nlohmann/json.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <string>

namespace bcp {

using json = nlohmann::json;

inline constexpr const char* output_dir_env = "BCP_OUTPUT_DIR";

struct RunConfig {
    CocycleSpec cocycle{};
    /// midpoint nodes of the I grid; 0 picks 128 (smooth) or 512 (piecewise constant)
    int quadrature_nodes = 0;
    /// c#, cb and c-check nodes
    int kernel_nodes = 64;
    /// knots of the c-check / r table
    int check_grid = 512;
    /// FD step for every FD check; 0 keeps each check's own step
    double fd_step = 0;
    /// distance to the singular set below which f0 rows are flagged
    double guard = 1e-3;
    /// clamp radius of r at the ends of the table
    double kernel_guard = 1e-6;
    std::uint64_t seed = 42;
    std::map<std::string, double> tolerance_overrides;
    std::string output_dir;
    std::pair<double, double> init_values{0.0, 0.0};
    /// keep init_values as given instead of projecting onto (a, -a)
    bool general_init = false;
    /// worker pool size; 0 uses every hardware thread
    unsigned threads = 0;
    bool plant = false;
};

inline std::string default_output_dir()
{
    const char* env = std::getenv(output_dir_env);
    return env && *env ? env : "bcp_out";
}

inline json cocycle_to_json(const CocycleSpec& s)
{
    json j{{"kind", kind_name(s.kind)}};
    switch (s.kind) {
    case CocycleKind::coboundary_crossratio: j["profile"] = s.profile; break;
    case CocycleKind::mollified_cup: j["width"] = s.width; j["mollifier_nodes"] = s.mollifier_nodes; break;
    case CocycleKind::external: j["path"] = s.path; break;
    default: break;
    }
    return j;
}

namespace detail {

inline void reject_unknown(const json& j, std::initializer_list<const char*> keys, const char* where)
{
    if (!j.is_object()) throw invalid_argument(std::string(where) + ": expected a JSON object");
    std::set<std::string> ok(keys.begin(), keys.end());
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!ok.count(it.key())) throw invalid_argument(std::string(where) + ": unknown key '" + it.key() + "'");
}

template <class T>
void get_if(const json& j, const char* key, T& out)
{
    if (!j.contains(key)) return;
    try {
        out = j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw invalid_argument(std::string("config key '") + key + "': " + e.what());
    }
}

}

inline CocycleSpec cocycle_from_json(const json& j)
{
    detail::reject_unknown(j, {"kind", "profile", "width", "mollifier_nodes", "path"}, "cocycle");
    CocycleSpec s;
    std::string kind = kind_name(s.kind);
    detail::get_if(j, "kind", kind);
    s.kind = kind_from_name(kind);
    detail::get_if(j, "profile", s.profile);
    detail::get_if(j, "width", s.width);
    detail::get_if(j, "mollifier_nodes", s.mollifier_nodes);
    detail::get_if(j, "path", s.path);
    return s;
}

/// Every field except the output location and the thread count, which must not change results.
inline json config_to_json(const RunConfig& c, bool with_runtime_fields = true)
{
    json j{
        {"cocycle", cocycle_to_json(c.cocycle)},
        {"quadrature_nodes", c.quadrature_nodes},
        {"kernel_nodes", c.kernel_nodes},
        {"check_grid", c.check_grid},
        {"fd_step", c.fd_step},
        {"guard", c.guard},
        {"kernel_guard", c.kernel_guard},
        {"seed", c.seed},
        {"tolerance_overrides", c.tolerance_overrides},
        {"init_values", {c.init_values.first, c.init_values.second}},
        {"general_init", c.general_init},
        {"plant", c.plant},
    };
    if (with_runtime_fields) {
        j["output_dir"] = c.output_dir;
        j["threads"] = c.threads;
    }
    return j;
}

/// Overlay the keys present in `j` onto `c`.
inline void apply_config_json(RunConfig& c, const json& j)
{
    detail::reject_unknown(j, {"cocycle", "quadrature_nodes", "kernel_nodes", "check_grid", "fd_step", "guard",
                               "kernel_guard", "seed", "tolerance_overrides", "output_dir", "init_values",
                               "general_init", "threads", "plant"}, "config");
    if (j.contains("cocycle")) c.cocycle = cocycle_from_json(j.at("cocycle"));
    detail::get_if(j, "quadrature_nodes", c.quadrature_nodes);
    detail::get_if(j, "kernel_nodes", c.kernel_nodes);
    detail::get_if(j, "check_grid", c.check_grid);
    detail::get_if(j, "fd_step", c.fd_step);
    detail::get_if(j, "guard", c.guard);
    detail::get_if(j, "kernel_guard", c.kernel_guard);
    detail::get_if(j, "seed", c.seed);
    detail::get_if(j, "tolerance_overrides", c.tolerance_overrides);
    detail::get_if(j, "output_dir", c.output_dir);
    if (j.contains("init_values")) {
        const auto& v = j.at("init_values");
        if (!v.is_array() || v.size() != 2) throw invalid_argument("config key 'init_values': expected [a, b]");
        c.init_values = {v[0].get<double>(), v[1].get<double>()};
    }
    detail::get_if(j, "general_init", c.general_init);
    detail::get_if(j, "threads", c.threads);
    detail::get_if(j, "plant", c.plant);
}

inline RunConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw invalid_argument("cannot open config: " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw invalid_argument("config " + path + ": " + e.what());
    }
    RunConfig c;
    apply_config_json(c, j);
    return c;
}

inline void validate_config(const RunConfig& c)
{
    auto need = [](bool ok, const char* msg) { if (!ok) throw invalid_argument(msg); };
    need(c.quadrature_nodes == 0 || c.quadrature_nodes >= 4, "quadrature_nodes must be 0 or >= 4");
    need(c.kernel_nodes >= 4, "kernel_nodes must be >= 4");
    need(c.check_grid >= 8 && c.check_grid % 2 == 0, "check_grid must be even and >= 8");
    need(c.fd_step >= 0 && c.fd_step < 0.1, "fd_step must lie in [0, 0.1)");
    need(c.guard >= 0 && c.guard < 1, "guard must lie in [0, 1)");
    need(c.kernel_guard > 0 && c.kernel_guard < 0.1, "kernel_guard must lie in (0, 0.1)");
    need(std::isfinite(c.init_values.first) && std::isfinite(c.init_values.second), "init_values must be finite");
    for (const auto& [k, v] : c.tolerance_overrides) {
        check_plan(k);
        need(v >= 0, "tolerance overrides must be non-negative");
    }
}

/// FNV-1a of the canonical JSON of the result-relevant fields, as 16 hex digits.
inline std::string config_hash(const RunConfig& c)
{
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(config_to_json(c, false).dump())));
    return buf;
}

inline std::pair<double, double> effective_init(const RunConfig& c)
{
    return c.general_init ? c.init_values : enforce_alternating_init(c.init_values);
}

inline PipelineOptions pipeline_options(const RunConfig& cfg, const Cochain& c)
{
    PipelineOptions o = default_pipeline_options(c);
    if (cfg.quadrature_nodes > 0) o.n_integrate = cfg.quadrature_nodes;
    o.kernel.n_sharp = o.kernel.n_check = cfg.kernel_nodes;
    o.kernel.m = cfg.check_grid;
    o.kernel.guard = cfg.kernel_guard;
    o.solver.init = effective_init(cfg);
    o.solver.guard = cfg.guard;
    return o;
}

inline SuiteOptions suite_options(const RunConfig& cfg, const CocycleSpec& spec)
{
    SuiteOptions s;
    s.base.seed = cfg.seed;
    s.base.plant = cfg.plant;
    s.base.tolerance_overrides = cfg.tolerance_overrides;
    s.fd_step = cfg.fd_step;
    s.alternating = spec.claimed.alternating;
    return s;
}

}
