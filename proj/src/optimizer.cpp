#include "ri/optimizer.hpp"

#include "ri/kernels.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>

namespace ri {

namespace {

// Committed steps may not raise the objective beyond this.
constexpr double kGuardTol = 1e-9;

double fista_next_t(double t) { return 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t)); }

Eigen::Index count_nonzeros(const Vec& v) {
    Eigen::Index n = 0;
    for (Eigen::Index j = 0; j < v.size(); ++j) {
        if (v[j] != 0.0) ++n;
    }
    return n;
}

}  // namespace

double eta_schedule(int k) {
    if (k < 1) throw io_error("eta_schedule: iteration must be >= 1");
    double t_prev = 1.0;
    double t_cur = 1.0;
    for (int i = 1; i <= k; ++i) {
        t_prev = t_cur;
        t_cur = fista_next_t(t_prev);
    }
    return (t_prev - 1.0) / t_cur;
}

Vec extrapolate(const Vec& current, const Vec& previous, double eta) {
    if (current.size() != previous.size()) throw io_error("extrapolate: shape mismatch");
    return current + eta * (current - previous);
}

bool converged(const OptimizerTrace& trace, double tol) {
    const std::size_t n = trace.iterations.size();
    if (n < 2) return false;
    const double prev = trace.iterations[n - 2].objective;
    const double cur = trace.iterations[n - 1].objective;
    return std::abs(cur - prev) / std::max(1.0, std::abs(prev)) < tol;
}

ModelParams default_init(const Dataset& d, const Hyper& h, std::uint64_t seed) {
    Rng rng(seed);
    ModelParams p;
    p.beta.resize(d.dim);
    for (Eigen::Index f = 0; f < d.dim; ++f) p.beta[f] = rng.next_uniform(-0.01, 0.01);
    p.u.reserve(static_cast<std::size_t>(d.size()));
    for (const auto& t : d.tweets) {
        const Vec uniform = Vec::Constant(t.n_words(), 1.0 / static_cast<double>(t.n_words()));
        p.u.push_back(project_l0(uniform, h.r));
    }
    return p;
}

namespace {

/// Mutable solver state tied to one fit call. Z, s = Z beta and ls = L s are
/// kept in sync with the committed parameters.
struct SolverState {
    const Dataset& d;
    const LaplacianOperator* lop;
    const Hyper& h;
    std::vector<int> y;
    bool net = false;

    ModelParams p;
    Mat z;
    Vec s;
    Vec ls;
    double objective = 0.0;

    SolverState(const Dataset& dataset, const LaplacianOperator* l, const Hyper& hyper,
                ModelParams params)
        : d(dataset), lop(l), h(hyper), y(dataset.labels()), p(std::move(params)) {
        net = h.lambda3 != 0.0 && lop != nullptr && lop->matrix.nonZeros() > 0;
        refresh();
    }

    void refresh() {
        kernels::aggregate_all(d, p.u, z);
        kernels::matvec(z, p.beta, s);
        if (net) {
            kernels::spmv(lop->matrix, s, ls);
        } else {
            ls = Vec::Zero(d.size());
        }
        objective = objective_at(s, p.beta);
    }

    double smooth_at(const Vec& s_val, const Vec& beta) const {
        double f = kernels::logistic_loss(s_val, y) + 0.5 * h.lambda1 * beta.squaredNorm();
        if (net) {
            Vec lsv;
            kernels::spmv(lop->matrix, s_val, lsv);
            f += 0.5 * h.lambda3 * kernels::dot(s_val, lsv);
        }
        return f;
    }

    double objective_at(const Vec& s_val, const Vec& beta) const {
        return smooth_at(s_val, beta) + h.lambda2 * beta.lpNorm<1>();
    }
};

}  // namespace

std::pair<ModelParams, OptimizerTrace> fit(const Dataset& d, const LaplacianOperator* l,
                                           const Hyper& h, const BCDConfig& cfg,
                                           const ModelParams* init) {
    if (cfg.max_iter < 1 || !(cfg.tol > 0.0) || !(cfg.ls_growth > 1.0) ||
        !(cfg.xi > 0.0 && cfg.xi <= 1.0) || !(cfg.L_init > 0.0)) {
        throw io_error("fit: invalid solver configuration");
    }
    if (h.r < 1 || h.lambda1 < 0.0 || h.lambda2 < 0.0 || h.lambda3 < 0.0) {
        throw io_error("fit: invalid hyperparameters");
    }
    for (const auto& t : d.tweets) {
        if (t.label != +1 && t.label != -1) {
            throw io_error("fit: tweet '" + t.id + "' is unlabeled; training needs labels in {+1, -1}");
        }
    }
    if (h.lambda3 != 0.0 && l != nullptr && l->size() != d.size()) {
        throw io_error("fit: laplacian is " + std::to_string(l->size()) + "x" +
                       std::to_string(l->size()) + " but dataset has " + std::to_string(d.size()) +
                       " tweets");
    }

    ModelParams start = init ? *init : default_init(d, h, cfg.seed);
    if (start.beta.size() != d.dim || static_cast<Eigen::Index>(start.u.size()) != d.size()) {
        throw io_error("fit: init has wrong shapes");
    }
    for (Eigen::Index i = 0; i < d.size(); ++i) {
        auto& ui = start.u[static_cast<std::size_t>(i)];
        if (ui.size() != d.tweets[static_cast<std::size_t>(i)].n_words()) {
            throw io_error("fit: init u length mismatch at tweet " + std::to_string(i));
        }
        if (!cfg.freeze_u && count_nonzeros(ui) > h.r) ui = project_l0(ui, h.r);
    }

    SolverState st(d, l, h, std::move(start));
    const Eigen::Index m = d.size();

    OptimizerTrace trace;
    trace.initial_objective = st.objective;
    if (!std::isfinite(st.objective)) throw numeric_error("fit: non-finite initial objective");

    Vec beta_prev = st.p.beta;
    std::vector<Vec> u_prev = st.p.u;
    double l_beta = cfg.L_init;
    std::vector<double> l_u(static_cast<std::size_t>(m), cfg.L_init);

    // Per-word scores X_i beta, refreshed after each beta commit.
    std::vector<Vec> scores;
    kernels::scores_all(d, st.p.beta, scores);

    double t_fista = 1.0;
    const auto t_start = std::chrono::steady_clock::now();
    double last_millis = 0.0;

    for (int it = 1; it <= cfg.max_iter; ++it) {
        double eta = 0.0;
        if (cfg.eta_mode == BCDConfig::EtaMode::Nesterov) {
            const double t_next = fista_next_t(t_fista);
            eta = (t_fista - 1.0) / t_next;
            t_fista = t_next;
        }

        // ---- beta block ----
        double alpha_beta = 0.0;
        auto beta_attempt = [&](double eta_use) -> bool {
            const Vec bhat = extrapolate(st.p.beta, beta_prev, eta_use);
            Vec s_hat;
            kernels::matvec(st.z, bhat, s_hat);
            Vec coeff;
            kernels::logistic_coeffs(s_hat, st.y, coeff);
            Vec g;
            kernels::gemv_transpose(st.z, coeff, g);
            g += h.lambda1 * bhat;
            Vec ls_hat;
            if (st.net) {
                kernels::spmv(l->matrix, s_hat, ls_hat);
                Vec gnet;
                kernels::gemv_transpose(st.z, ls_hat, gnet);
                g += h.lambda3 * gnet;
            }
            const double f_hat = st.smooth_at(s_hat, bhat);

            auto f_smooth = [&](const Vec& b) {
                Vec s_cand;
                kernels::matvec(st.z, b, s_cand);
                return st.smooth_at(s_cand, b);
            };
            auto stepper = [&](const Vec& at, const Vec& grad, double alpha) {
                return prox_beta(at - alpha * grad, alpha, h);
            };
            LineSearchResult res = line_search(f_smooth, stepper, bhat, f_hat, g,
                                               l_beta / cfg.ls_growth, cfg);
            if (!res.ok) {
                throw numeric_error("fit: beta line search exhausted 60 growth steps at iteration " +
                                    std::to_string(it));
            }
            Vec s_new;
            kernels::matvec(st.z, res.candidate, s_new);
            const double j_new = st.objective_at(s_new, res.candidate);
            if (!std::isfinite(j_new)) throw numeric_error("fit: non-finite objective in beta block");
            if (j_new > st.objective + kGuardTol) return false;
            beta_prev = st.p.beta;
            st.p.beta = std::move(res.candidate);
            st.s = std::move(s_new);
            if (st.net) kernels::spmv(l->matrix, st.s, st.ls);
            st.objective = j_new;
            l_beta = res.lipschitz;
            alpha_beta = res.alpha;
            return true;
        };
        if (!beta_attempt(eta)) {
            if (eta == 0.0 || !beta_attempt(0.0)) {
                beta_prev = st.p.beta;  // kill momentum, keep the iterate
            }
        }
        kernels::scores_all(d, st.p.beta, scores);

        // ---- u sweep, Gauss-Seidel in index order ----
        double alpha_u_sum = 0.0;
        Eigen::Index alpha_u_count = 0;
        if (!cfg.freeze_u) {
            for (Eigen::Index i = 0; i < m; ++i) {
                const auto si = static_cast<std::size_t>(i);
                const Vec& sc = scores[si];
                const double yi = static_cast<double>(st.y[si]);
                const double l_ii = st.net ? st.lop->matrix.coeff(i, i) : 0.0;
                // off-diagonal part of (L s)_i, constant while u_i moves
                const double b_off = st.net ? st.ls[i] - l_ii * st.s[i] : 0.0;

                // Objective restricted to u_i, in terms of x = <scores_i, u_i>.
                auto f_of_x = [&](double x) {
                    double f = log1p_exp(-yi * x);
                    if (st.net) f += 0.5 * h.lambda3 * (l_ii * x * x + 2.0 * b_off * x);
                    return f;
                };

                auto u_attempt = [&](double eta_use) -> bool {
                    const Vec uhat = extrapolate(st.p.u[si], u_prev[si], eta_use);
                    const double x_hat = sc.dot(uhat);
                    const double coeff = -yi * sigmoid(-yi * x_hat) +
                                         (st.net ? h.lambda3 * (l_ii * x_hat + b_off) : 0.0);
                    const Vec g = coeff * sc;
                    auto f_smooth = [&](const Vec& u_cand) { return f_of_x(sc.dot(u_cand)); };
                    auto stepper = [&](const Vec& at, const Vec& grad, double alpha) {
                        return project_l0(at - alpha * grad, h.r);
                    };
                    LineSearchResult res = line_search(f_smooth, stepper, uhat, f_of_x(x_hat), g,
                                                       l_u[si] / cfg.ls_growth, cfg);
                    if (!res.ok) {
                        throw numeric_error("fit: u line search exhausted 60 growth steps at tweet " +
                                            std::to_string(i) + ", iteration " + std::to_string(it));
                    }
                    const double x_new = sc.dot(res.candidate);
                    const double delta_j = f_of_x(x_new) - f_of_x(st.s[i]);
                    if (!std::isfinite(delta_j)) throw numeric_error("fit: non-finite objective in u block");
                    if (delta_j > kGuardTol) return false;
                    u_prev[si] = st.p.u[si];
                    st.p.u[si] = std::move(res.candidate);
                    const double old_s = st.s[i];
                    st.z.row(i) = (d.tweets[si].words.transpose() * st.p.u[si]).transpose();
                    st.s[i] = st.z.row(i).dot(st.p.beta);
                    if (st.net) {
                        const double ds = st.s[i] - old_s;
                        if (ds != 0.0) {
                            for (SpMat::InnerIterator itr(st.lop->matrix, i); itr; ++itr) {
                                st.ls[itr.col()] += itr.value() * ds;
                            }
                        }
                    }
                    st.objective += delta_j;
                    l_u[si] = res.lipschitz;
                    alpha_u_sum += res.alpha;
                    ++alpha_u_count;
                    return true;
                };
                if (!u_attempt(eta)) {
                    if (eta == 0.0 || !u_attempt(0.0)) {
                        u_prev[si] = st.p.u[si];
                    }
                }
                if (count_nonzeros(st.p.u[si]) > h.r) ++trace.l0_violations;
            }
        }

        // Full refresh kills incremental drift before the trace records J.
        st.refresh();
        if (!std::isfinite(st.objective)) throw numeric_error("fit: non-finite objective");

        Eigen::Index nnz = 0;
        for (const auto& ui : st.p.u) nnz += count_nonzeros(ui);
        const double millis = std::chrono::duration<double, std::milli>(
                                  std::chrono::steady_clock::now() - t_start).count();
        trace.iterations.push_back({it, st.objective, alpha_beta,
                                    alpha_u_count > 0 ? alpha_u_sum / static_cast<double>(alpha_u_count) : 0.0,
                                    eta, nnz, millis - last_millis});
        last_millis = millis;

        if (converged(trace, cfg.tol)) {
            trace.converged = true;
            break;
        }
    }
    return {std::move(st.p), std::move(trace)};
}

void save_trace_csv(const OptimizerTrace& trace, const std::string& path,
                    const std::string& config_header, bool include_timings) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot write trace file: " + path);
    if (!config_header.empty()) out << "# " << config_header << "\n";
    out << "iteration,objective,alpha_beta,mean_alpha_u,eta,nnz_u,millis\n";
    char buf[256];
    for (const auto& st : trace.iterations) {
        std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g,%.17g,%.17g,%lld,%.17g", st.iteration,
                      st.objective, st.alpha_beta, st.mean_alpha_u, st.eta,
                      static_cast<long long>(st.nnz_u), include_timings ? st.millis : 0.0);
        out << buf << "\n";
    }
}

}  // namespace ri
