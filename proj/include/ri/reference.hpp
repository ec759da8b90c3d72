#pragma once

#include "ri/dataset.hpp"
#include "ri/graph.hpp"
#include "ri/model.hpp"

namespace ri::ref {

/**
 * Serial reference implementations: plain nested loops written term by
 * term from the objective definition, sharing no code with ri::kernels.
 * Kept for testing (tests compare the parallel kernels against these) and
 * as the baseline in the kernels benchmark. Not used by the solver.
 */

Mat aggregate_all(const Dataset& d, const std::vector<Vec>& u);

double network_penalty(const LaplacianOperator& l, const Mat& z, const Vec& beta);

double smooth_loss(const Dataset& d, const LaplacianOperator* l, const ModelParams& p,
                   const Hyper& h);

double full_objective(const Dataset& d, const LaplacianOperator* l, const ModelParams& p,
                      const Hyper& h);

Vec grad_beta(const Dataset& d, const LaplacianOperator* l, const ModelParams& p,
              const Hyper& h);

Vec grad_u(const Dataset& d, const LaplacianOperator* l, const ModelParams& p,
           const Hyper& h, Eigen::Index i);

}  // namespace ri::ref
