#pragma once

#include "ri/common.hpp"
#include "ri/dataset.hpp"
#include "ri/graph.hpp"
#include "ri/model.hpp"

#include <optional>
#include <string>
#include <vector>

namespace ri {

struct BCDConfig {
    int max_iter = 150;
    double tol = 1e-6;        // relative objective-change stopping tolerance
    double xi = 1.0;          // alpha_k = xi / L_k, xi in (0, 1]
    double ls_growth = 2.0;   // L multiplier per backtracking step
    double L_init = 1e-3;     // initial Lipschitz guess
    enum class EtaMode { Nesterov, Zero } eta_mode = EtaMode::Nesterov;
    std::uint64_t seed = 1;
    bool freeze_u = false;    // keep u at its initial value (reduction mode)
};

struct IterationStat {
    int iteration = 0;
    double objective = 0.0;
    double alpha_beta = 0.0;
    double mean_alpha_u = 0.0;
    double eta = 0.0;
    Eigen::Index nnz_u = 0;
    double millis = 0.0;
};

struct OptimizerTrace {
    std::vector<IterationStat> iterations;
    bool converged = false;
    double initial_objective = 0.0;
    // Count of committed u blocks whose support exceeded r (always 0; the
    // solver re-projects and records rather than silently fixing).
    long l0_violations = 0;
};

/// eta_k = (t_{k-1} - 1) / t_k with the FISTA t-sequence, t_0 = 1.
double eta_schedule(int k);

/// p_hat = current + eta * (current - previous).
Vec extrapolate(const Vec& current, const Vec& previous, double eta);

/// True iff |J_k - J_{k-1}| / max(1, |J_{k-1}|) < tol for the last pair.
bool converged(const OptimizerTrace& trace, double tol);

struct LineSearchResult {
    double alpha = 0.0;
    double lipschitz = 0.0;
    bool ok = false;
    Vec candidate;
};

/**
 * Backtracking line search: grows L by cfg.ls_growth until the candidate
 * step(p_hat, g, xi/L) satisfies
 *   f(cand) <= f(p_hat) + <g, cand - p_hat> + (L/2) ||cand - p_hat||^2.
 * Gives up after 60 growth steps (ok = false).
 */
template <class SmoothEval, class Stepper>
LineSearchResult line_search(SmoothEval&& f_smooth, Stepper&& step, const Vec& p_hat,
                             double f_hat, const Vec& g, double l_start,
                             const BCDConfig& cfg) {
    LineSearchResult res;
    double lip = std::max(l_start, cfg.L_init);
    const double slack = 1e-12 * (1.0 + std::abs(f_hat));
    for (int grow = 0; grow <= 60; ++grow) {
        const double alpha = cfg.xi / lip;
        Vec cand = step(p_hat, g, alpha);
        const Vec delta = cand - p_hat;
        const double bound = f_hat + g.dot(delta) + 0.5 * lip * delta.squaredNorm();
        if (f_smooth(cand) <= bound + slack) {
            res.alpha = alpha;
            res.lipschitz = lip;
            res.ok = true;
            res.candidate = std::move(cand);
            return res;
        }
        lip *= cfg.ls_growth;
    }
    res.lipschitz = lip;
    return res;
}

/**
 * Block coordinate descent with prox-linear updates: per iteration, an
 * extrapolated proximal step on beta (soft threshold), then one projected
 * step per u_i in index order. Extrapolated candidates that would raise the
 * objective are retried without extrapolation; a committed iterate never
 * increases the objective by more than 1e-9. Deterministic given
 * (dataset, laplacian, hyper, config, init).
 */
std::pair<ModelParams, OptimizerTrace> fit(const Dataset& d, const LaplacianOperator* l,
                                           const Hyper& h, const BCDConfig& cfg,
                                           const ModelParams* init = nullptr);

/// Seeded default start: beta ~ U(-0.01, 0.01), u_i = 1/n_i projected to r.
ModelParams default_init(const Dataset& d, const Hyper& h, std::uint64_t seed);

void save_trace_csv(const OptimizerTrace& trace, const std::string& path,
                    const std::string& config_header = "", bool include_timings = false);

}  // namespace ri
