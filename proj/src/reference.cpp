#include "ri/reference.hpp"

#include <cmath>

namespace ri::ref {

namespace {

// Dense copy of L for index-by-index arithmetic.
Mat dense_l(const LaplacianOperator& l) { return Mat(l.matrix); }

double word_sum(const Tweet& t, const Vec& u, Eigen::Index f) {
    double acc = 0.0;
    for (Eigen::Index j = 0; j < t.n_words(); ++j) acc += u[j] * t.words(j, f);
    return acc;
}

}  // namespace

Mat aggregate_all(const Dataset& d, const std::vector<Vec>& u) {
    Mat z(d.size(), d.dim);
    for (Eigen::Index i = 0; i < d.size(); ++i) {
        const Tweet& t = d.tweets[static_cast<std::size_t>(i)];
        for (Eigen::Index f = 0; f < d.dim; ++f) {
            z(i, f) = word_sum(t, u[static_cast<std::size_t>(i)], f);
        }
    }
    return z;
}

double network_penalty(const LaplacianOperator& l, const Mat& z, const Vec& beta) {
    const Mat ld = dense_l(l);
    const Eigen::Index m = z.rows();
    double acc = 0.0;
    for (Eigen::Index a = 0; a < m; ++a) {
        double sa = 0.0;
        for (Eigen::Index f = 0; f < beta.size(); ++f) sa += beta[f] * z(a, f);
        for (Eigen::Index b = 0; b < m; ++b) {
            double sb = 0.0;
            for (Eigen::Index f = 0; f < beta.size(); ++f) sb += beta[f] * z(b, f);
            acc += ld(a, b) * sa * sb;
        }
    }
    return 0.5 * acc;
}

double smooth_loss(const Dataset& d, const LaplacianOperator* l, const ModelParams& p,
                   const Hyper& h) {
    double loss = 0.0;
    for (Eigen::Index i = 0; i < d.size(); ++i) {
        const Tweet& t = d.tweets[static_cast<std::size_t>(i)];
        double margin = 0.0;
        for (Eigen::Index f = 0; f < d.dim; ++f) {
            margin += p.beta[f] * word_sum(t, p.u[static_cast<std::size_t>(i)], f);
        }
        loss += log1p_exp(-static_cast<double>(t.label) * margin);
    }
    double l2 = 0.0;
    for (Eigen::Index f = 0; f < p.beta.size(); ++f) l2 += p.beta[f] * p.beta[f];
    loss += 0.5 * h.lambda1 * l2;
    if (h.lambda3 != 0.0 && l != nullptr && l->matrix.nonZeros() > 0) {
        loss += h.lambda3 * ri::ref::network_penalty(*l, ri::ref::aggregate_all(d, p.u), p.beta);
    }
    return loss;
}

double full_objective(const Dataset& d, const LaplacianOperator* l, const ModelParams& p,
                      const Hyper& h) {
    double l1 = 0.0;
    for (Eigen::Index f = 0; f < p.beta.size(); ++f) l1 += std::abs(p.beta[f]);
    return ri::ref::smooth_loss(d, l, p, h) + h.lambda2 * l1;
}

Vec grad_beta(const Dataset& d, const LaplacianOperator* l, const ModelParams& p,
              const Hyper& h) {
    const Mat z = ri::ref::aggregate_all(d, p.u);
    Vec g = Vec::Zero(d.dim);
    for (Eigen::Index i = 0; i < d.size(); ++i) {
        const double yi = static_cast<double>(d.tweets[static_cast<std::size_t>(i)].label);
        double margin = 0.0;
        for (Eigen::Index f = 0; f < d.dim; ++f) margin += p.beta[f] * z(i, f);
        const double c = sigmoid(-yi * margin) * (-yi);
        for (Eigen::Index f = 0; f < d.dim; ++f) g[f] += c * z(i, f);
    }
    for (Eigen::Index f = 0; f < d.dim; ++f) g[f] += h.lambda1 * p.beta[f];
    if (h.lambda3 != 0.0 && l != nullptr && l->matrix.nonZeros() > 0) {
        const Mat ld = dense_l(*l);
        const Eigen::Index m = d.size();
        // lambda3 * Z^T L Z beta, entry by entry
        Vec s = Vec::Zero(m);
        for (Eigen::Index a = 0; a < m; ++a) {
            for (Eigen::Index f = 0; f < d.dim; ++f) s[a] += z(a, f) * p.beta[f];
        }
        for (Eigen::Index f = 0; f < d.dim; ++f) {
            double acc = 0.0;
            for (Eigen::Index a = 0; a < m; ++a) {
                for (Eigen::Index b = 0; b < m; ++b) acc += z(a, f) * ld(a, b) * s[b];
            }
            g[f] += h.lambda3 * acc;
        }
    }
    return g;
}

Vec grad_u(const Dataset& d, const LaplacianOperator* l, const ModelParams& p,
           const Hyper& h, Eigen::Index i) {
    const Tweet& t = d.tweets[static_cast<std::size_t>(i)];
    const double yi = static_cast<double>(t.label);
    Vec scores(t.n_words());
    for (Eigen::Index j = 0; j < t.n_words(); ++j) {
        double acc = 0.0;
        for (Eigen::Index f = 0; f < d.dim; ++f) acc += p.beta[f] * t.words(j, f);
        scores[j] = acc;
    }
    double margin = 0.0;
    for (Eigen::Index j = 0; j < t.n_words(); ++j) {
        margin += scores[j] * p.u[static_cast<std::size_t>(i)][j];
    }
    double coeff = sigmoid(-yi * margin) * (-yi);
    if (h.lambda3 != 0.0 && l != nullptr && l->matrix.nonZeros() > 0) {
        const Mat z = ri::ref::aggregate_all(d, p.u);
        const Mat ld = dense_l(*l);
        double lsi = 0.0;
        for (Eigen::Index b = 0; b < d.size(); ++b) {
            double sb = 0.0;
            for (Eigen::Index f = 0; f < d.dim; ++f) sb += z(b, f) * p.beta[f];
            lsi += ld(i, b) * sb;
        }
        coeff += h.lambda3 * lsi;
    }
    Vec g(t.n_words());
    for (Eigen::Index j = 0; j < t.n_words(); ++j) g[j] = coeff * scores[j];
    return g;
}

}  // namespace ri::ref
