#pragma once

#include "ri/common.hpp"
#include "ri/dataset.hpp"
#include "ri/model.hpp"

#include <string>
#include <vector>

namespace ri {

struct MetricsReport {
    long tp = 0, fp = 0, fn = 0, tn = 0;
    double precision = 0.0, recall = 0.0, f1 = 0.0;
};

/// Confusion counts and P/R/F1 with +1 as the positive class. Degenerate
/// denominators yield 0, never NaN.
MetricsReport precision_recall_f1(const std::vector<int>& pred, const std::vector<int>& truth);

struct TTestResult {
    double t = 0.0;
    double p = 1.0;
    double df = 0.0;
    bool reject_at_005 = false;
};

/// One-sided Welch two-sample t-test of mean(a) > mean(b).
TTestResult t_test(const std::vector<double>& group_a, const std::vector<double>& group_b);

/**
 * Independent elastic-net logistic regression on bag-sum features (u fixed
 * at all-ones): plain proximal gradient with a power-iterated Lipschitz
 * bound. Shares no code with the solver; used as its reduction oracle.
 */
Vec reference_elastic_net_lr(const Dataset& d, double lambda1, double lambda2, double tol,
                             int max_iter = 10000);

/// Objective value the reference solver minimizes, for cross-checking.
double reference_elastic_net_objective(const Dataset& d, const Vec& beta, double lambda1,
                                       double lambda2);

struct ScoreRow {
    std::string id;
    double proportion = 0.0;
    int label = -1;
};

struct EvalRun {
    bool has_report = false;
    MetricsReport report;
    std::vector<ScoreRow> scores;
};

/// Applies the threshold prediction rule to every tweet; labeled tweets
/// (ground truth present) feed the metrics report.
EvalRun evaluate_run(const ModelParams& params, const Hyper& h, const Dataset& d);

void save_report(const EvalRun& run, const std::string& path,
                 const std::string& config_header = "");
void save_scores_csv(const EvalRun& run, const std::string& path,
                     const std::string& config_header = "");

}  // namespace ri
