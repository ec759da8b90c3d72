#pragma once

#include "ri/common.hpp"
#include "ri/dataset.hpp"
#include "ri/graph.hpp"

#include <string>
#include <vector>

namespace ri {

/// Regularization weights, instance budget, and prediction thresholds.
struct Hyper {
    double lambda1 = 0.002;  // l2 on beta
    double lambda2 = 0.1;    // l1 on beta
    double lambda3 = 0.2;    // network smoothing
    Eigen::Index r = 50;     // max nonzeros per instance weight vector
    double tau_word = 0.9;   // word relevance threshold
    double tau_tweet = 0.6;  // relevant-word proportion threshold
};

/// Feature weights plus one instance-weight vector per tweet.
struct ModelParams {
    Vec beta;
    std::vector<Vec> u;
};

/**
 * Differentiable part of the objective: instance-weighted logistic loss
 * + (lambda1/2)||beta||_2^2 + lambda3 * network penalty. The l1 term is
 * excluded here; it is handled by prox_beta.
 */
double smooth_loss(const Dataset& d, const LaplacianOperator* l, const ModelParams& p,
                   const Hyper& h);

/// smooth_loss + lambda2 ||beta||_1; the quantity reported in traces.
double full_objective(const Dataset& d, const LaplacianOperator* l, const ModelParams& p,
                      const Hyper& h);

/// Gradient of smooth_loss in beta (u fixed). No l1 subgradient.
Vec grad_beta(const Dataset& d, const LaplacianOperator* l, const ModelParams& p,
              const Hyper& h);

/// Gradient of smooth_loss in u_i (beta fixed).
Vec grad_u(const Dataset& d, const LaplacianOperator* l, const ModelParams& p,
           const Hyper& h, Eigen::Index i);

/// Soft threshold: the proximal operator of alpha * lambda2 * ||.||_1.
Vec prox_beta(const Vec& v, double alpha, const Hyper& h);

/// Keeps the r largest-magnitude entries (ties to the lowest index).
Vec project_l0(const Vec& v, Eigen::Index r);

/// True iff <beta, word> >= tau_word (inclusive).
bool word_relevance(const Vec& beta, const Vec& word, double tau_word);

struct Prediction {
    int label = -1;
    double proportion = 0.0;
};

/// Labels +1 iff the fraction of relevant words reaches tau_tweet.
/// Uses beta and the thresholds only; u plays no role at prediction time.
Prediction predict_tweet(const Vec& beta, const Tweet& t, const Hyper& h);

void save_model(const ModelParams& p, const Hyper& h, bool bias, bool normalize,
                const std::string& path, const std::string& config_header = "",
                bool include_u = true);

struct LoadedModel {
    ModelParams params;
    Hyper hyper;
    bool bias = true;
    bool normalize = false;
};
LoadedModel load_model(const std::string& path);

}  // namespace ri
