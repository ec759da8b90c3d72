#include "ri/eval.hpp"

#include <boost/math/distributions/students_t.hpp>
#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

namespace ri {

MetricsReport precision_recall_f1(const std::vector<int>& pred, const std::vector<int>& truth) {
    if (pred.size() != truth.size()) throw io_error("metrics: prediction/truth length mismatch");
    if (pred.empty()) throw io_error("metrics: empty prediction set");
    MetricsReport r;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        if (pred[i] != +1 && pred[i] != -1) throw io_error("metrics: predictions must be +1/-1");
        if (truth[i] != +1 && truth[i] != -1) throw io_error("metrics: truth labels must be +1/-1");
        if (truth[i] == +1) {
            (pred[i] == +1 ? r.tp : r.fn) += 1;
        } else {
            (pred[i] == +1 ? r.fp : r.tn) += 1;
        }
    }
    r.precision = (r.tp + r.fp) > 0 ? static_cast<double>(r.tp) / static_cast<double>(r.tp + r.fp) : 0.0;
    r.recall = (r.tp + r.fn) > 0 ? static_cast<double>(r.tp) / static_cast<double>(r.tp + r.fn) : 0.0;
    r.f1 = (r.precision + r.recall) > 0.0
               ? 2.0 * r.precision * r.recall / (r.precision + r.recall)
               : 0.0;
    return r;
}

TTestResult t_test(const std::vector<double>& group_a, const std::vector<double>& group_b) {
    const std::size_t na = group_a.size();
    const std::size_t nb = group_b.size();
    if (na < 2 || nb < 2) throw io_error("t_test: each group needs at least two values");

    auto mean = [](const std::vector<double>& v) {
        double s = 0.0;
        for (double x : v) s += x;
        return s / static_cast<double>(v.size());
    };
    auto variance = [&](const std::vector<double>& v, double mu) {
        double s = 0.0;
        for (double x : v) s += (x - mu) * (x - mu);
        return s / static_cast<double>(v.size() - 1);
    };
    const double ma = mean(group_a);
    const double mb = mean(group_b);
    const double va = variance(group_a, ma);
    const double vb = variance(group_b, mb);
    const double sa = va / static_cast<double>(na);
    const double sb = vb / static_cast<double>(nb);

    TTestResult res;
    if (sa + sb <= 0.0) {
        if (ma == mb) throw numeric_error("t_test: zero variance in both groups with equal means");
        res.t = ma > mb ? std::numeric_limits<double>::infinity()
                        : -std::numeric_limits<double>::infinity();
        res.p = ma > mb ? 0.0 : 1.0;
        res.df = static_cast<double>(na + nb - 2);
        res.reject_at_005 = res.p < 0.05;
        return res;
    }
    res.t = (ma - mb) / std::sqrt(sa + sb);
    res.df = (sa + sb) * (sa + sb) /
             (sa * sa / static_cast<double>(na - 1) + sb * sb / static_cast<double>(nb - 1));
    const boost::math::students_t dist(res.df);
    res.p = boost::math::cdf(boost::math::complement(dist, res.t));
    res.reject_at_005 = res.p < 0.05;
    return res;
}

namespace {

// Bag-sum features: z_i = sum_j words_ij, one row per tweet.
Mat bag_sum_features(const Dataset& d) {
    Mat z(d.size(), d.dim);
    for (Eigen::Index i = 0; i < d.size(); ++i) {
        z.row(i) = d.tweets[static_cast<std::size_t>(i)].words.colwise().sum();
    }
    return z;
}

double logistic(double t) { return t >= 0.0 ? 1.0 / (1.0 + std::exp(-t)) : std::exp(t) / (1.0 + std::exp(t)); }

double stable_log1p_exp(double t) {
    return t > 0.0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t));
}

double en_objective(const Mat& z, const std::vector<int>& y, const Vec& beta, double lambda1,
                    double lambda2) {
    double obj = 0.0;
    for (Eigen::Index i = 0; i < z.rows(); ++i) {
        obj += stable_log1p_exp(-static_cast<double>(y[static_cast<std::size_t>(i)]) * z.row(i).dot(beta));
    }
    obj += 0.5 * lambda1 * beta.squaredNorm() + lambda2 * beta.lpNorm<1>();
    return obj;
}

}  // namespace

Vec reference_elastic_net_lr(const Dataset& d, double lambda1, double lambda2, double tol,
                             int max_iter) {
    const Mat z = bag_sum_features(d);
    const std::vector<int> y = d.labels();
    const Eigen::Index k = z.cols();

    // Lipschitz bound 0.25 * sigma_max(Z)^2 + lambda1 via power iteration.
    const Mat gram = z.transpose() * z;
    Vec v = Vec::Ones(k) / std::sqrt(static_cast<double>(k));
    double sigma2 = 0.0;
    for (int it = 0; it < 200; ++it) {
        Vec w = gram * v;
        const double n = w.norm();
        if (n <= 0.0) break;
        v = w / n;
        sigma2 = n;
    }
    const double lip = 0.25 * sigma2 + lambda1 + 1e-12;

    Vec beta = Vec::Zero(k);
    double prev_obj = en_objective(z, y, beta, lambda1, lambda2);
    for (int it = 0; it < max_iter; ++it) {
        Vec grad = lambda1 * beta;
        for (Eigen::Index i = 0; i < z.rows(); ++i) {
            const double yi = static_cast<double>(y[static_cast<std::size_t>(i)]);
            const double margin = z.row(i).dot(beta);
            grad += logistic(-yi * margin) * (-yi) * z.row(i).transpose();
        }
        Vec step = beta - grad / lip;
        const double thresh = lambda2 / lip;
        for (Eigen::Index f = 0; f < k; ++f) {
            const double mag = std::abs(step[f]) - thresh;
            step[f] = mag > 0.0 ? (step[f] > 0.0 ? mag : -mag) : 0.0;
        }
        beta = step;
        const double obj = en_objective(z, y, beta, lambda1, lambda2);
        if (std::abs(prev_obj - obj) / std::max(1.0, std::abs(prev_obj)) < tol) return beta;
        prev_obj = obj;
    }
    throw numeric_error("reference_elastic_net_lr: no convergence within " +
                        std::to_string(max_iter) + " iterations");
}

double reference_elastic_net_objective(const Dataset& d, const Vec& beta, double lambda1,
                                       double lambda2) {
    return en_objective(bag_sum_features(d), d.labels(), beta, lambda1, lambda2);
}

EvalRun evaluate_run(const ModelParams& params, const Hyper& h, const Dataset& d) {
    if (d.size() < 1) throw io_error("evaluate_run: empty prediction set");
    if (params.beta.size() != d.dim) {
        throw io_error("evaluate_run: model dimension " + std::to_string(params.beta.size()) +
                       " does not match dataset dimension " + std::to_string(d.dim));
    }
    EvalRun run;
    std::vector<int> pred_labeled, truth_labeled;
    for (const auto& t : d.tweets) {
        const Prediction p = predict_tweet(params.beta, t, h);
        run.scores.push_back({t.id, p.proportion, p.label});
        if (t.label != kUnlabeled) {
            pred_labeled.push_back(p.label);
            truth_labeled.push_back(t.label);
        }
    }
    if (!truth_labeled.empty()) {
        run.report = precision_recall_f1(pred_labeled, truth_labeled);
        run.has_report = true;
    }
    return run;
}

void save_report(const EvalRun& run, const std::string& path, const std::string& config_header) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot write report file: " + path);
    nlohmann::json j;
    if (!config_header.empty()) j["_config"] = config_header;
    j["evaluated"] = run.scores.size();
    if (run.has_report) {
        j["tp"] = run.report.tp;
        j["fp"] = run.report.fp;
        j["fn"] = run.report.fn;
        j["tn"] = run.report.tn;
        j["precision"] = run.report.precision;
        j["recall"] = run.report.recall;
        j["f1"] = run.report.f1;
    }
    out << j.dump(2) << "\n";
}

void save_scores_csv(const EvalRun& run, const std::string& path,
                     const std::string& config_header) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot write scores file: " + path);
    if (!config_header.empty()) out << "# " << config_header << "\n";
    out << "tweet_id,proportion,label\n";
    char buf[64];
    for (const auto& row : run.scores) {
        std::snprintf(buf, sizeof(buf), "%.17g", row.proportion);
        out << row.id << ',' << buf << ',' << row.label << '\n';
    }
}

}  // namespace ri
