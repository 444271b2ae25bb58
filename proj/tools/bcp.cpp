// bcp: verify | solve | figures | kernels | convergence
//
// Exit codes: 0 success, 1 a check failed (or a run error), 2 invalid usage or config.

#include <bcp/bcp.hpp>

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>

namespace fs = std::filesystem;
using namespace bcp;

namespace {

constexpr double nan_v = std::numeric_limits<double>::quiet_NaN();

struct usage_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Flags that mirror RunConfig; each is applied only when given, after the config file.
struct Flags {
    std::string config;
    std::optional<std::string> cocycle, profile, external;
    std::optional<double> width;
    std::optional<int> mollifier_nodes;
    std::optional<int> quadrature_nodes, kernel_nodes, check_grid;
    std::optional<double> fd_step, guard, kernel_guard;
    std::optional<std::uint64_t> seed;
    std::vector<std::string> tolerance;
    std::optional<std::string> output_dir;
    std::optional<double> init_a;
    std::vector<double> init;
    bool general_init = false;
    std::optional<unsigned> threads;
    bool plant = false;
};

void add_flags(CLI::App& app, Flags& f)
{
    app.add_option("--config", f.config, "JSON RunConfig; flags override its values");
    app.add_option("--cocycle", f.cocycle, "zero | cup_orientation | coboundary_crossratio | mollified_cup | external");
    app.add_option("--profile", f.profile, "cross-ratio profile: cos2 | sin2 | tanh | zero");
    app.add_option("--width", f.width, "mollifier half-width");
    app.add_option("--mollifier-nodes", f.mollifier_nodes, "Gauss nodes per coordinate of the mollifier");
    app.add_option("--external", f.external, "tabulated cocycle file (implies --cocycle external)");
    app.add_option("--quadrature-nodes", f.quadrature_nodes, "I-grid nodes (0: 128 smooth, 512 piecewise)");
    app.add_option("--kernel-nodes", f.kernel_nodes, "c#, cb and c-check quadrature nodes");
    app.add_option("--check-grid", f.check_grid, "knots of the c-check / r table");
    app.add_option("--fd-step", f.fd_step, "FD step for all FD checks (0: per check)");
    app.add_option("--guard", f.guard, "f0 rows closer than this to the singular set are flagged");
    app.add_option("--kernel-guard", f.kernel_guard, "clamp radius of r at the table ends");
    app.add_option("--seed", f.seed, "sampling seed");
    app.add_option("--tolerance", f.tolerance, "override a tolerance, ID=VALUE (repeatable)");
    app.add_option("--output-dir", f.output_dir, std::string("output directory (default $") + output_dir_env + " or bcp_out)");
    app.add_option("--init-a", f.init_a, "alternating initial values (a, -a)");
    app.add_option("--init", f.init, "initial values f0(omega+), f0(omega-); projected onto (a, -a) unless --general-init")
        ->expected(2);
    app.add_flag("--general-init", f.general_init, "keep --init as given (non-alternating solutions)");
    app.add_option("--threads", f.threads, "worker threads (0: all)");
    app.add_flag("--plant", f.plant, "add a known violation to every check (negative control)");
}

RunConfig resolve(const Flags& f)
{
    RunConfig c;
    if (!f.config.empty()) c = load_config(f.config);
    if (f.cocycle) c.cocycle.kind = kind_from_name(*f.cocycle);
    if (f.external) { c.cocycle.kind = CocycleKind::external; c.cocycle.path = *f.external; }
    if (f.profile) c.cocycle.profile = *f.profile;
    if (f.width) c.cocycle.width = *f.width;
    if (f.mollifier_nodes) c.cocycle.mollifier_nodes = *f.mollifier_nodes;
    if (f.quadrature_nodes) c.quadrature_nodes = *f.quadrature_nodes;
    if (f.kernel_nodes) c.kernel_nodes = *f.kernel_nodes;
    if (f.check_grid) c.check_grid = *f.check_grid;
    if (f.fd_step) c.fd_step = *f.fd_step;
    if (f.guard) c.guard = *f.guard;
    if (f.kernel_guard) c.kernel_guard = *f.kernel_guard;
    if (f.seed) c.seed = *f.seed;
    for (const auto& t : f.tolerance) {
        auto eq = t.find('=');
        if (eq == std::string::npos) throw usage_error("--tolerance expects ID=VALUE, got " + t);
        try {
            c.tolerance_overrides[t.substr(0, eq)] = std::stod(t.substr(eq + 1));
        } catch (const std::exception&) {
            throw usage_error("--tolerance: bad value in " + t);
        }
    }
    if (f.output_dir) c.output_dir = *f.output_dir;
    if (f.init_a && !f.init.empty()) throw usage_error("--init-a and --init are exclusive");
    if (f.init_a) c.init_values = {*f.init_a, -*f.init_a};
    if (!f.init.empty()) c.init_values = {f.init[0], f.init[1]};
    if (f.general_init) c.general_init = true;
    if (f.threads) c.threads = *f.threads;
    if (f.plant) c.plant = true;
    if (c.output_dir.empty()) c.output_dir = default_output_dir();
    validate_config(c);
    return c;
}

std::vector<double> parse_list(const std::string& s, std::size_t n, const char* what)
{
    std::vector<double> v;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            v.push_back(std::stod(tok));
        } catch (const std::exception&) {
            throw usage_error(std::string(what) + ": not a number: " + tok);
        }
    }
    if (v.size() != n) throw usage_error(std::string(what) + ": expected " + std::to_string(n) + " comma separated values");
    return v;
}

struct Setup {
    RunConfig cfg;
    std::string hash;
    CocycleSpec spec;
    Cochain c;
};

Setup setup(const Flags& f)
{
    Setup s;
    s.cfg = resolve(f);
    set_threads(s.cfg.threads ? s.cfg.threads : std::max(1u, std::thread::hardware_concurrency()));
    s.hash = config_hash(s.cfg);
    s.spec = s.cfg.cocycle;
    s.c = build_cocycle(s.spec);
    return s;
}

json run_metadata(const Setup& s)
{
    return json{{"config_hash", s.hash}, {"config", config_to_json(s.cfg)}, {"cocycle", s.c.name}};
}

// ---------------------------------------------------------------------------------------------

int cmd_verify(const Flags& f, const std::vector<std::string>& only)
{
    const Setup s = setup(f);
    for (const auto& id : only) check_plan(id);
    const Pipeline p = build_pipeline(s.c, pipeline_options(s.cfg, s.c));
    SuiteOptions so = suite_options(s.cfg, s.spec);
    so.only = only;
    const auto reports = run_suite(p, so);
    const fs::path dir = ensure_dir(fs::path(s.cfg.output_dir) / "verify");
    json summary = run_metadata(s);
    summary["reports"] = json::array();
    bool all = true;
    for (const auto& r : reports) {
        const json j = report_to_json(r, s.hash);
        write_json(dir / (r.check_id + ".json"), j);
        summary["reports"].push_back(j);
        all = all && r.passed;
        std::printf("%-26s %s  residual=%.3e  tolerance=%.3e  n=%zu\n", r.check_id.c_str(), r.passed ? "PASS" : "FAIL",
                    r.max_residual, r.tolerance, r.sample_count);
    }
    summary["passed"] = all;
    summary["kernel_table_ms"] = p.table_ms;
    write_json(dir / "summary.json", summary);
    return all ? 0 : 1;
}

struct SolveArgs {
    std::vector<std::string> points, tuples;
    std::string points_file, tuples_file;
    int grid = 0;
    std::string component = "minus";
    int cached = 0;
};

void read_rows(const std::string& path, std::size_t n, std::vector<std::vector<double>>& out)
{
    std::ifstream in(path);
    if (!in) throw usage_error("cannot open " + path);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#' || std::isalpha(static_cast<unsigned char>(line[0]))) continue;
        out.push_back(parse_list(line, n, path.c_str()));
    }
}

int cmd_solve(const Flags& f, const SolveArgs& a)
{
    const Setup s = setup(f);
    if (a.component != "plus" && a.component != "minus" && a.component != "both")
        throw usage_error("--component must be plus, minus or both");
    std::vector<std::vector<double>> pts, tup;
    for (const auto& x : a.points) pts.push_back(parse_list(x, 2, "--point"));
    for (const auto& x : a.tuples) tup.push_back(parse_list(x, 4, "--tuple"));
    if (!a.points_file.empty()) read_rows(a.points_file, 2, pts);
    if (!a.tuples_file.empty()) read_rows(a.tuples_file, 4, tup);
    if (a.grid < 0 || a.cached < 0) throw usage_error("--grid and --cached must be non-negative");
    if (a.grid > 0) {
        for (int i = 0; i < a.grid; ++i)
            for (int j = 0; j < a.grid; ++j) {
                const double p1 = two_pi * (i + 0.5) / a.grid, p2 = two_pi * (j + 0.5) / a.grid;
                if (p1 == p2) continue;
                const bool minus = p1 > p2;
                if ((a.component == "minus" && !minus) || (a.component == "plus" && minus)) continue;
                pts.push_back({p1, p2});
            }
    }
    if (pts.empty() && tup.empty()) throw usage_error("solve needs --point, --tuple, --points-file, --tuples-file or --grid");

    const auto t0 = std::chrono::steady_clock::now();
    const Pipeline p = build_pipeline(s.c, pipeline_options(s.cfg, s.c));
    const fs::path dir = ensure_dir(fs::path(s.cfg.output_dir) / "solve");
    std::optional<F0GridCache> cache;
    if (a.cached > 0) cache.emplace([&](double x, double y) { return p.f0(x, y); }, a.cached);

    // rows on the boundary or the diagonal are kept and flagged, never dropped
    struct Row { F0Result r; bool valid; std::string comp; };
    auto rows = parallel_map(pts.size(), [&](std::size_t i) {
        Row row{{}, true, "none"};
        try {
            const OmegaPoint q(pts[i][0], pts[i][1]);
            row.comp = component_name(q.component());
            if (cache) {
                row.r.value = (*cache)(q.phi1, q.phi2);
                row.r.near_singular = q.singular_distance() < s.cfg.guard;
            } else {
                row.r = p.solver->eval(q);
            }
        } catch (const std::domain_error&) {
            row.valid = false;
            row.r.value = nan_v;
            row.r.near_singular = true;
        }
        return row;
    });
    std::size_t flagged = 0;
    {
        CsvWriter w(dir / "f0.csv", s.hash, {"phi1", "phi2", "f0", "component", "near_singular", "abserr", "evals"},
                    cache ? "cached grid " + std::to_string(a.cached) + ", barycentric interpolation" : "exact evaluation");
        for (std::size_t i = 0; i < pts.size(); ++i) {
            const auto& r = rows[i];
            flagged += r.r.near_singular;
            w.num(pts[i][0]).num(pts[i][1]).num(r.r.value).text(r.comp).integer(r.r.near_singular).num(r.r.abserr)
                .integer(static_cast<long long>(r.r.evals));
            w.end();
        }
    }
    if (!tup.empty()) {
        auto vals = parallel_map(tup.size(), [&](std::size_t i) {
            if (!admissible(tup[i], 0.0)) return std::make_pair(nan_v, 1);
            try {
                return std::make_pair(p.P(tup[i]), min_gap(tup[i]) < s.cfg.guard ? 1 : 0);
            } catch (const std::domain_error&) {
                return std::make_pair(nan_v, 1);
            }
        });
        CsvWriter w(dir / "P.csv", s.hash, {"theta0", "theta1", "theta2", "theta3", "P", "near_singular"});
        for (std::size_t i = 0; i < tup.size(); ++i) {
            for (double x : tup[i]) w.num(x);
            w.num(vals[i].first).integer(vals[i].second);
            w.end();
        }
    }
    json meta = run_metadata(s);
    meta["runtime_ms"] = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    meta["points"] = pts.size();
    meta["tuples"] = tup.size();
    meta["flagged"] = flagged;
    meta["quadrature"] = json{
        {"n_integrate", p.options.n_integrate},
        {"kernel_nodes", p.options.kernel.n_sharp},
        {"check_grid", p.options.kernel.m},
        {"kernel_table_ms", p.table_ms},
        {"r_clamped", p.table->clamped_count()},
        {"characteristic_epsabs", p.options.solver.quad.epsabs},
        {"init", {p.options.solver.init.first, p.options.solver.init.second}},
    };
    write_json(dir / "meta.json", meta);
    std::printf("f0 at %zu points (%zu flagged), P at %zu tuples -> %s\n", pts.size(), flagged, tup.size(), dir.c_str());
    return 0;
}

int cmd_figures(const Flags& f, const std::string& target)
{
    const RunConfig cfg = resolve(f);
    const std::string hash = config_hash(cfg);
    const auto tv = parse_list(target, 2, "--target");
    const OmegaPoint q(tv[0], tv[1]);
    const fs::path dir = ensure_dir(fs::path(cfg.output_dir) / "figures");
    auto dump = [&](const char* name, const std::vector<CurvePoint>& pts, const char* inv_name, auto inv) {
        CsvWriter w(dir / name, hash, {"id", "u", "phi1", "phi2", inv_name});
        for (const auto& p : pts) {
            w.integer(p.id).num(p.u).num(p.phi1).num(p.phi2).num(inv(p.phi1, p.phi2));
            w.end();
        }
    };
    dump("a_orbits.csv", a_orbits(), "log_tan_ratio", a_invariant);
    dump("n_orbits.csv", n_orbits(), "cot_difference", n_invariant);
    dump("path.csv", characteristic_path(q), "T", [](double a, double b) { return t_of(OmegaPoint(a, b)); });
    dump("fundamental_domain.csv", fundamental_domain_curves(), "distance_to_boundary",
         [](double a, double b) { return std::min({a, two_pi - a, b, two_pi - b}); });
    std::printf("figure data -> %s\n", dir.c_str());
    return 0;
}

int cmd_kernels(const Flags& f, int samples)
{
    const Setup s = setup(f);
    const auto po = pipeline_options(s.cfg, s.c);
    const KernelTable t = build_kernel_table(s.c, po.kernel);
    const fs::path dir = ensure_dir(fs::path(s.cfg.output_dir) / "kernels");
    {
        std::ofstream out(dir / "kernel_table.csv");
        out << "# config_hash=" << s.hash << '\n';
        t.write_csv(out);
    }
    {
        CsvWriter w(dir / "r_samples.csv", s.hash, {"phi", "re_r", "im_r", "abs_r", "ode_residual"});
        for (int i = 0; i < samples; ++i) {
            const double phi = two_pi * (i + 0.5) / samples;
            const auto r = t.r(phi);
            w.num(phi).num(r.real()).num(r.imag()).num(std::abs(r)).num(std::abs(t.ode_residual(phi)));
            w.end();
        }
    }
    std::printf("kernel table (M=%d) -> %s\n", t.m, dir.c_str());
    return 0;
}

int cmd_convergence(const Flags& f, const std::vector<std::string>& kinds, const std::string& header, std::uint64_t study_seed,
                    const std::vector<std::string>& checks)
{
    const RunConfig cfg = resolve(f);
    set_threads(cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency()));
    const fs::path dir = ensure_dir(fs::path(cfg.output_dir) / "convergence");
    StudyOptions so;
    so.seed = study_seed;
    so.only = checks;
    for (const auto& id : checks)
        if (!check_plan(id).fitted) throw usage_error(id + " has no fitted tolerance");
    if (so.seed == cfg.seed) throw usage_error("the study seed must differ from the check seed");
    std::vector<FittedEntry> fitted;
    CsvWriter w(dir / "study.csv", config_hash(cfg), {"family", "check_id", "n", "h", "M", "residual"});
    for (const auto& k : kinds) {
        CocycleSpec spec = cfg.cocycle;
        spec.kind = kind_from_name(k);
        const Cochain c = build_cocycle(spec);
        const Family fam = family_of(c);
        if (fam == Family::zero) continue;
        const auto samples = convergence_study(c, so, &std::cerr);
        for (const auto& x : samples) {
            w.text(family_name(fam)).text(x.check_id).integer(x.n).num(x.h).integer(x.m).num(x.residual);
            w.end();
        }
        auto e = fit_family(samples, fam, so.safety);
        fitted.insert(fitted.end(), e.begin(), e.end());
    }
    std::ostringstream prov;
    prov << "study seed " << so.seed << "; n in {32, 48, 64}, h in {4, 2, 1} x plan step, M in {128, 256, 512}";
    const fs::path out = header.empty() ? dir / "fitted_tolerances.hpp" : fs::path(header);
    std::ofstream hs(out);
    if (!hs) throw std::runtime_error("cannot write " + out.string());
    write_fitted_header(hs, fitted, prov.str());
    std::printf("%zu fitted models -> %s\n", fitted.size(), out.c_str());
    return 0;
}

}

int main(int argc, char** argv)
{
    CLI::App app{"Bounded G-invariant primitives of bounded 4-cocycles on the circle"};
    app.require_subcommand(1);
    Flags flags;

    auto* verify = app.add_subcommand("verify", "run every check on the configured cocycle");
    add_flags(*verify, flags);
    std::vector<std::string> only;
    verify->add_option("--only", only, "run only these check ids")->delimiter(',');

    auto* solve = app.add_subcommand("solve", "f0 at Omega points and P at 4-tuples");
    add_flags(*solve, flags);
    SolveArgs sa;
    solve->add_option("--point", sa.points, "phi1,phi2 (repeatable)");
    solve->add_option("--tuple", sa.tuples, "t0,t1,t2,t3 (repeatable)");
    solve->add_option("--points-file", sa.points_file, "CSV of phi1,phi2 rows");
    solve->add_option("--tuples-file", sa.tuples_file, "CSV of t0,t1,t2,t3 rows");
    solve->add_option("--grid", sa.grid, "G x G cell-centre grid on Omega");
    solve->add_option("--component", sa.component, "grid component: plus | minus | both");
    solve->add_option("--cached", sa.cached, "interpolate from a K x K cached f0 grid instead of exact evaluation");

    auto* figures = app.add_subcommand("figures", "orbit, path and fundamental-domain curves");
    add_flags(*figures, flags);
    std::string target = "1.5707963267948966,3.141592653589793";
    figures->add_option("--target", target, "end point phi1,phi2 of the characteristic path");

    auto* kernels = app.add_subcommand("kernels", "dump the c-check / r table");
    add_flags(*kernels, flags);
    int r_samples = 1000;
    kernels->add_option("--samples", r_samples, "uniform r samples");

    auto* conv = app.add_subcommand("convergence", "tolerance-fitting study");
    add_flags(*conv, flags);
    std::vector<std::string> kinds{"cup_orientation", "coboundary_crossratio"};
    std::string header;
    std::uint64_t study_seed = 20261018;
    conv->add_option("--kinds", kinds, "cocycle kinds to study");
    conv->add_option("--header", header, "write the fitted table here (default <output>/convergence/fitted_tolerances.hpp)");
    conv->add_option("--study-seed", study_seed, "seed of the study samples");
    std::vector<std::string> conv_only;
    conv->add_option("--only", conv_only, "study only these fitted checks")->delimiter(',');

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    try {
        if (*verify) return cmd_verify(flags, only);
        if (*solve) return cmd_solve(flags, sa);
        if (*figures) return cmd_figures(flags, target);
        if (*kernels) return cmd_kernels(flags, r_samples);
        if (*conv) return cmd_convergence(flags, kinds, header, study_seed, conv_only);
    } catch (const usage_error& e) {
        std::fprintf(stderr, "usage: %s\n", e.what());
        return 2;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "invalid config: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 2;
}
