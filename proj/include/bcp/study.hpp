#pragma once

// Convergence study behind the fitted tolerances: one-at-a-time sweeps of the kernel node
// count n, the FD step h and the table size M around a base configuration, then a
// non-negative fit of r = floor + a/n^2 + b h^2 + c/M^2 scaled up to envelope every sample.

#include <bcp/suite.hpp>

#include <gsl/gsl_multifit.h>

#include <algorithm>
#include <cstdio>
#include <ostream>

namespace bcp {

struct StudyOptions {
    /// deliberately not the check seed
    std::uint64_t seed = 20261018;
    std::vector<int> n{32, 48, 64};
    /// multiples of each check's own FD step
    std::vector<double> h_scale{4, 2, 1};
    std::vector<int> m{128, 256, 512};
    int base_n = 64;
    int base_m = 512;
    double safety = 3;
    /// restrict to these check ids when non-empty
    std::vector<std::string> only;
};

struct StudySample {
    std::string check_id;
    int n;
    double h;
    int m;
    double residual;
};

inline std::vector<const CheckPlan*> fitted_plans()
{
    std::vector<const CheckPlan*> out;
    for (const auto& p : check_plans)
        if (p.fitted) out.push_back(&p);
    return out;
}

/// Residual of every fitted check over the three sweeps. `log` gets one line per sample.
inline std::vector<StudySample> convergence_study(const Cochain& c, const StudyOptions& s, std::ostream* log = nullptr)
{
    std::vector<StudySample> out;
    auto run = [&](int n, int m, bool sweep_h) {
        PipelineOptions po = default_pipeline_options(c);
        po.kernel.n_sharp = po.kernel.n_check = n;
        po.kernel.m = m;
        const Pipeline p = build_pipeline(c, po);
        for (const CheckPlan* plan : fitted_plans()) {
            if (!s.only.empty() && std::find(s.only.begin(), s.only.end(), plan->id) == s.only.end()) continue;
            std::vector<double> scales{1};
            if (sweep_h && plan->h > 0) scales = s.h_scale;
            for (double k : scales) {
                CheckOptions o;
                o.seed = s.seed;
                o = plan_options(o, *plan);
                o.h = plan->h * k;
                const CheckReport r = run_check(plan->id, p, o);
                out.push_back({plan->id, n, o.h, m, r.max_residual});
                if (log) {
                    char buf[160];
                    std::snprintf(buf, sizeof buf, "%s n=%d h=%.3g M=%d residual=%.6g\n", plan->id, n, o.h, m, r.max_residual);
                    *log << buf << std::flush;
                }
            }
        }
    };
    run(s.base_n, s.base_m, true);
    for (int n : s.n)
        if (n != s.base_n) run(n, s.base_m, false);
    for (int m : s.m)
        if (m != s.base_m) run(s.base_n, m, false);
    return out;
}

/// Relative least squares over every subset of the four terms, keeping the best fit with
/// non-negative coefficients, then scaled so that the model bounds every sample.
inline ToleranceModel fit_tolerance(const std::vector<StudySample>& samples, double safety = 3, double floor_min = 1e-12)
{
    const std::size_t n = samples.size();
    if (n == 0) return {};
    auto column = [&](int j, const StudySample& x) {
        switch (j) {
        case 0: return 1.0;
        case 1: return 1.0 / (double(x.n) * x.n);
        case 2: return x.h * x.h;
        default: return 1.0 / (double(x.m) * x.m);
        }
    };
    std::array<double, 4> best{};
    double best_chi = INFINITY;
    for (unsigned mask = 1; mask < 16; ++mask) {
        std::vector<int> cols;
        for (int j = 0; j < 4; ++j)
            if (mask >> j & 1u) cols.push_back(j);
        // a column that vanishes on every sample (b for checks without FD) cannot be fitted
        bool degenerate = false;
        for (int j : cols) {
            double hi = 0;
            for (const auto& x : samples) hi = std::max(hi, column(j, x));
            if (hi <= 0) degenerate = true;
        }
        if (degenerate || cols.size() > n) continue;
        gsl_matrix* X = gsl_matrix_alloc(n, cols.size());
        gsl_vector* y = gsl_vector_alloc(n);
        gsl_vector* w = gsl_vector_alloc(n);
        gsl_vector* beta = gsl_vector_alloc(cols.size());
        gsl_matrix* cov = gsl_matrix_alloc(cols.size(), cols.size());
        for (std::size_t i = 0; i < n; ++i) {
            const double r = std::max(samples[i].residual, floor_min);
            for (std::size_t k = 0; k < cols.size(); ++k) gsl_matrix_set(X, i, k, column(cols[k], samples[i]));
            gsl_vector_set(y, i, r);
            gsl_vector_set(w, i, 1.0 / (r * r));
        }
        double chi = INFINITY;
        gsl_multifit_linear_workspace* ws = gsl_multifit_linear_alloc(n, cols.size());
        const int status = gsl_multifit_wlinear(X, w, y, beta, cov, &chi, ws);
        bool ok = status == 0 && std::isfinite(chi);
        std::array<double, 4> coef{};
        for (std::size_t k = 0; k < cols.size() && ok; ++k) {
            coef[cols[k]] = gsl_vector_get(beta, k);
            if (!(coef[cols[k]] >= 0)) ok = false;
        }
        if (ok && chi < best_chi * (1 - 1e-9)) { best_chi = chi; best = coef; }
        gsl_multifit_linear_free(ws);
        gsl_matrix_free(cov);
        gsl_vector_free(beta);
        gsl_vector_free(w);
        gsl_vector_free(y);
        gsl_matrix_free(X);
    }
    ToleranceModel t{std::max(best[0], floor_min), best[1], best[2], best[3], safety};
    auto raw = [&](const StudySample& x) { return t.floor + t.a / (double(x.n) * x.n) + t.b * x.h * x.h + t.c / (double(x.m) * x.m); };
    double scale = 1;
    for (const auto& x : samples)
        if (std::isfinite(x.residual)) scale = std::max(scale, x.residual / raw(x));
    t.floor *= scale; t.a *= scale; t.b *= scale; t.c *= scale;
    return t;
}

/// One fitted model per check for this family.
inline std::vector<FittedEntry> fit_family(const std::vector<StudySample>& samples, Family fam, double safety = 3)
{
    std::vector<FittedEntry> out;
    for (const CheckPlan* plan : fitted_plans()) {
        std::vector<StudySample> mine;
        for (const auto& x : samples)
            if (x.check_id == plan->id) mine.push_back(x);
        if (mine.empty()) continue;
        out.push_back({plan->id, fam, fit_tolerance(mine, safety)});
    }
    return out;
}

/// The table as a fitted_tolerances.hpp body.
inline void write_fitted_header(std::ostream& os, const std::vector<FittedEntry>& entries, const std::string& provenance)
{
    os << "#pragma once\n\n// Generated by `bcp convergence`; see tolerance.hpp.\n// " << provenance << "\n\n#include <array>\n\nnamespace bcp {\n\n";
    os << "inline constexpr std::array<FittedEntry, " << entries.size() << "> fitted_tolerances{{\n";
    for (const auto& e : entries) {
        char buf[320];
        std::snprintf(buf, sizeof buf, "    {\"%s\", Family::%s, {%.3e, %.3e, %.3e, %.3e, %g}},\n", e.check_id,
                      family_name(e.family), e.model.floor, e.model.a, e.model.b, e.model.c, e.model.safety);
        os << buf;
    }
    os << "}};\n\n}\n";
}

}
