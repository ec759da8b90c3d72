#include "ri/kernels.hpp"

namespace ri::kernels {

namespace {
constexpr Eigen::Index kChunk = 1024;
}

void aggregate_all(const Dataset& d, const std::vector<Vec>& u, Mat& z) {
    const Eigen::Index m = d.size();
    z.resize(m, d.dim);
#pragma omp parallel for schedule(static)
    for (Eigen::Index i = 0; i < m; ++i) {
        z.row(i) = (d.tweets[static_cast<std::size_t>(i)].words.transpose() *
                    u[static_cast<std::size_t>(i)]).transpose();
    }
}

void matvec(const Mat& z, const Vec& beta, Vec& out) {
    const Eigen::Index m = z.rows();
    out.resize(m);
#pragma omp parallel for schedule(static)
    for (Eigen::Index i = 0; i < m; ++i) {
        out[i] = z.row(i).dot(beta);
    }
}

void gemv_transpose(const Mat& z, const Vec& c, Vec& out) {
    const Eigen::Index k = z.cols();
    out.resize(k);
#pragma omp parallel for schedule(static)
    for (Eigen::Index j = 0; j < k; ++j) {
        out[j] = z.col(j).dot(c);
    }
}

void scores_all(const Dataset& d, const Vec& beta, std::vector<Vec>& scores) {
    const Eigen::Index m = d.size();
    scores.resize(static_cast<std::size_t>(m));
#pragma omp parallel for schedule(static)
    for (Eigen::Index i = 0; i < m; ++i) {
        scores[static_cast<std::size_t>(i)] = d.tweets[static_cast<std::size_t>(i)].words * beta;
    }
}

void spmv(const SpMat& l, const Vec& s, Vec& out) {
    const Eigen::Index m = l.rows();
    out.resize(m);
#pragma omp parallel for schedule(static)
    for (Eigen::Index i = 0; i < m; ++i) {
        double acc = 0.0;
        for (SpMat::InnerIterator it(l, i); it; ++it) acc += it.value() * s[it.col()];
        out[i] = acc;
    }
}

double logistic_loss(const Vec& s, const std::vector<int>& y) {
    const Eigen::Index m = s.size();
    const Eigen::Index n_chunks = (m + kChunk - 1) / kChunk;
    std::vector<double> partial(static_cast<std::size_t>(n_chunks), 0.0);
#pragma omp parallel for schedule(static)
    for (Eigen::Index c = 0; c < n_chunks; ++c) {
        const Eigen::Index lo = c * kChunk;
        const Eigen::Index hi = std::min(lo + kChunk, m);
        double acc = 0.0;
        for (Eigen::Index i = lo; i < hi; ++i) {
            acc += log1p_exp(-static_cast<double>(y[static_cast<std::size_t>(i)]) * s[i]);
        }
        partial[static_cast<std::size_t>(c)] = acc;
    }
    double total = 0.0;
    for (double p : partial) total += p;
    return total;
}

void logistic_coeffs(const Vec& s, const std::vector<int>& y, Vec& c) {
    const Eigen::Index m = s.size();
    c.resize(m);
#pragma omp parallel for schedule(static)
    for (Eigen::Index i = 0; i < m; ++i) {
        const double yi = static_cast<double>(y[static_cast<std::size_t>(i)]);
        c[i] = -yi * sigmoid(-yi * s[i]);
    }
}

double dot(const Vec& a, const Vec& b) {
    const Eigen::Index m = a.size();
    const Eigen::Index n_chunks = (m + kChunk - 1) / kChunk;
    std::vector<double> partial(static_cast<std::size_t>(n_chunks), 0.0);
#pragma omp parallel for schedule(static)
    for (Eigen::Index c = 0; c < n_chunks; ++c) {
        const Eigen::Index lo = c * kChunk;
        const Eigen::Index hi = std::min(lo + kChunk, m);
        double acc = 0.0;
        for (Eigen::Index i = lo; i < hi; ++i) acc += a[i] * b[i];
        partial[static_cast<std::size_t>(c)] = acc;
    }
    double total = 0.0;
    for (double p : partial) total += p;
    return total;
}

}  // namespace ri::kernels
