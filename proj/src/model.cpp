#include "ri/model.hpp"

#include "ri/kernels.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <fstream>
#include <numeric>

namespace ri {

using nlohmann::json;

namespace {

void check_shapes(const Dataset& d, const LaplacianOperator* l, const ModelParams& p,
                  const Hyper& h) {
    if (p.beta.size() != d.dim) throw io_error("model: beta dimension does not match dataset");
    if (static_cast<Eigen::Index>(p.u.size()) != d.size()) {
        throw io_error("model: one u vector per tweet required");
    }
    for (Eigen::Index i = 0; i < d.size(); ++i) {
        if (p.u[static_cast<std::size_t>(i)].size() != d.tweets[static_cast<std::size_t>(i)].n_words()) {
            throw io_error("model: u length mismatch at tweet " + std::to_string(i));
        }
    }
    if (h.lambda3 != 0.0 && l != nullptr && l->size() != d.size()) {
        throw io_error("model: laplacian size does not match dataset");
    }
}

bool use_network(const LaplacianOperator* l, const Hyper& h) {
    return h.lambda3 != 0.0 && l != nullptr && l->matrix.nonZeros() > 0;
}

}  // namespace

double smooth_loss(const Dataset& d, const LaplacianOperator* l, const ModelParams& p,
                   const Hyper& h) {
    check_shapes(d, l, p, h);
    Mat z;
    kernels::aggregate_all(d, p.u, z);
    Vec s;
    kernels::matvec(z, p.beta, s);
    double loss = kernels::logistic_loss(s, d.labels());
    loss += 0.5 * h.lambda1 * p.beta.squaredNorm();
    if (use_network(l, h)) {
        Vec ls;
        kernels::spmv(l->matrix, s, ls);
        loss += 0.5 * h.lambda3 * kernels::dot(s, ls);
    }
    return loss;
}

double full_objective(const Dataset& d, const LaplacianOperator* l, const ModelParams& p,
                      const Hyper& h) {
    return smooth_loss(d, l, p, h) + h.lambda2 * p.beta.lpNorm<1>();
}

Vec grad_beta(const Dataset& d, const LaplacianOperator* l, const ModelParams& p,
              const Hyper& h) {
    check_shapes(d, l, p, h);
    Mat z;
    kernels::aggregate_all(d, p.u, z);
    Vec s;
    kernels::matvec(z, p.beta, s);
    Vec c;
    kernels::logistic_coeffs(s, d.labels(), c);
    Vec g;
    kernels::gemv_transpose(z, c, g);
    g += h.lambda1 * p.beta;
    if (use_network(l, h)) {
        Vec ls, gnet;
        kernels::spmv(l->matrix, s, ls);
        kernels::gemv_transpose(z, ls, gnet);
        g += h.lambda3 * gnet;
    }
    return g;
}

Vec grad_u(const Dataset& d, const LaplacianOperator* l, const ModelParams& p,
           const Hyper& h, Eigen::Index i) {
    check_shapes(d, l, p, h);
    if (i < 0 || i >= d.size()) throw io_error("grad_u: tweet index out of range");
    const Tweet& t = d.tweets[static_cast<std::size_t>(i)];
    const Vec scores = t.words * p.beta;  // per-word scores X_i beta
    const double yi = static_cast<double>(t.label);
    const double si = scores.dot(p.u[static_cast<std::size_t>(i)]);
    double coeff = -yi * sigmoid(-yi * si);
    if (use_network(l, h)) {
        Mat z;
        kernels::aggregate_all(d, p.u, z);
        Vec s;
        kernels::matvec(z, p.beta, s);
        Vec ls;
        kernels::spmv(l->matrix, s, ls);
        coeff += h.lambda3 * ls[i];
    }
    return coeff * scores;
}

Vec prox_beta(const Vec& v, double alpha, const Hyper& h) {
    if (!(alpha > 0.0)) throw io_error("prox_beta: step must be positive");
    const double thresh = alpha * h.lambda2;
    Vec out(v.size());
    for (Eigen::Index j = 0; j < v.size(); ++j) {
        const double mag = std::abs(v[j]) - thresh;
        out[j] = mag > 0.0 ? (v[j] > 0.0 ? mag : -mag) : 0.0;
    }
    return out;
}

Vec project_l0(const Vec& v, Eigen::Index r) {
    if (r < 1) throw io_error("project_l0: r must be at least 1");
    const Eigen::Index n = v.size();
    if (r >= n) return v;
    std::vector<Eigen::Index> idx(static_cast<std::size_t>(n));
    std::iota(idx.begin(), idx.end(), 0);
    // Largest magnitude first; ties keep the lowest index.
    std::stable_sort(idx.begin(), idx.end(), [&](Eigen::Index a, Eigen::Index b) {
        return std::abs(v[a]) > std::abs(v[b]);
    });
    Vec out = Vec::Zero(n);
    for (Eigen::Index j = 0; j < r; ++j) out[idx[static_cast<std::size_t>(j)]] = v[idx[static_cast<std::size_t>(j)]];
    return out;
}

bool word_relevance(const Vec& beta, const Vec& word, double tau_word) {
    if (beta.size() != word.size()) throw io_error("word_relevance: dimension mismatch");
    return beta.dot(word) >= tau_word;
}

Prediction predict_tweet(const Vec& beta, const Tweet& t, const Hyper& h) {
    if (t.n_words() < 1) throw io_error("predict_tweet: empty tweet");
    const Vec scores = t.words * beta;
    Eigen::Index relevant = 0;
    for (Eigen::Index j = 0; j < scores.size(); ++j) {
        if (scores[j] >= h.tau_word) ++relevant;
    }
    Prediction pred;
    pred.proportion = static_cast<double>(relevant) / static_cast<double>(t.n_words());
    pred.label = pred.proportion >= h.tau_tweet ? +1 : -1;
    return pred;
}

void save_model(const ModelParams& p, const Hyper& h, bool bias, bool normalize,
                const std::string& path, const std::string& config_header, bool include_u) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot write model file: " + path);
    json j;
    if (!config_header.empty()) j["_config"] = config_header;
    j["k"] = p.beta.size();
    j["bias"] = bias;
    j["normalize"] = normalize;
    j["hyper"] = {{"lambda1", h.lambda1}, {"lambda2", h.lambda2}, {"lambda3", h.lambda3},
                  {"r", h.r},             {"tau_word", h.tau_word}, {"tau_tweet", h.tau_tweet}};
    json beta = json::array();
    for (Eigen::Index f = 0; f < p.beta.size(); ++f) beta.push_back(p.beta[f]);
    j["beta"] = std::move(beta);
    if (include_u) {
        json us = json::array();
        for (const auto& ui : p.u) {
            json rec;
            rec["n"] = ui.size();
            json idx = json::array();
            json val = json::array();
            for (Eigen::Index t = 0; t < ui.size(); ++t) {
                if (ui[t] != 0.0) {
                    idx.push_back(t);
                    val.push_back(ui[t]);
                }
            }
            rec["idx"] = std::move(idx);
            rec["val"] = std::move(val);
            us.push_back(std::move(rec));
        }
        j["u"] = std::move(us);
    }
    out << j.dump(2) << "\n";
}

LoadedModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open model file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw io_error(path + ": malformed model file: " + e.what());
    }
    LoadedModel m;
    const auto& hy = j.at("hyper");
    m.hyper.lambda1 = hy.at("lambda1").get<double>();
    m.hyper.lambda2 = hy.at("lambda2").get<double>();
    m.hyper.lambda3 = hy.at("lambda3").get<double>();
    m.hyper.r = hy.at("r").get<Eigen::Index>();
    m.hyper.tau_word = hy.at("tau_word").get<double>();
    m.hyper.tau_tweet = hy.at("tau_tweet").get<double>();
    m.bias = j.at("bias").get<bool>();
    m.normalize = j.value("normalize", false);
    const auto& beta = j.at("beta");
    m.params.beta.resize(static_cast<Eigen::Index>(beta.size()));
    for (std::size_t f = 0; f < beta.size(); ++f) {
        m.params.beta[static_cast<Eigen::Index>(f)] = beta[f].get<double>();
    }
    if (j.contains("u")) {
        for (const auto& rec : j.at("u")) {
            Vec ui = Vec::Zero(rec.at("n").get<Eigen::Index>());
            const auto& idx = rec.at("idx");
            const auto& val = rec.at("val");
            for (std::size_t t = 0; t < idx.size(); ++t) {
                ui[idx[t].get<Eigen::Index>()] = val[t].get<double>();
            }
            m.params.u.push_back(std::move(ui));
        }
    }
    return m;
}

}  // namespace ri
