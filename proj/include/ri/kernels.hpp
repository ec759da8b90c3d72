#pragma once

#include "ri/common.hpp"
#include "ri/dataset.hpp"

#include <vector>

namespace ri::kernels {

/**
 * OpenMP-parallel inner loops shared by the model and the solver.
 *
 * Reductions run over fixed 1024-element chunks combined in index order, so
 * every kernel returns the same bits for any thread count. The naive serial
 * counterparts live in ri::ref and are used as oracles and benchmark
 * baselines.
 */

/// Z row i = words_i^T u_i (m x k).
void aggregate_all(const Dataset& d, const std::vector<Vec>& u, Mat& z);

/// out_i = Z.row(i) . beta.
void matvec(const Mat& z, const Vec& beta, Vec& out);

/// out = Z^T c, column by column.
void gemv_transpose(const Mat& z, const Vec& c, Vec& out);

/// scores[i] = words_i * beta (per-word scores of tweet i).
void scores_all(const Dataset& d, const Vec& beta, std::vector<Vec>& scores);

/// out = L s (row-parallel sparse matvec).
void spmv(const SpMat& l, const Vec& s, Vec& out);

/// sum_i log(1 + exp(-y_i s_i)), chunked.
double logistic_loss(const Vec& s, const std::vector<int>& y);

/// c_i = sigmoid(-y_i s_i) * (-y_i), the per-sample loss derivative in s_i.
void logistic_coeffs(const Vec& s, const std::vector<int>& y, Vec& c);

/// Deterministic chunked dot product.
double dot(const Vec& a, const Vec& b);

}  // namespace ri::kernels
