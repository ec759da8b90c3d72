#include "ri/graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace ri {

UserGraph load_user_graph(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open user-graph file: " + path);
    UserGraph g;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        const auto tab1 = line.find('\t');
        const auto tab2 = tab1 == std::string::npos ? std::string::npos : line.find('\t', tab1 + 1);
        if (tab1 == std::string::npos || tab2 == std::string::npos) {
            throw io_error(path + ":" + std::to_string(line_no) +
                           ": expected src<TAB>dst<TAB>tweet_id");
        }
        UserGraph::Edge e{line.substr(0, tab1), line.substr(tab1 + 1, tab2 - tab1 - 1),
                          line.substr(tab2 + 1)};
        if (e.src.empty() || e.dst.empty() || e.tweet.empty()) {
            throw io_error(path + ":" + std::to_string(line_no) + ": empty field");
        }
        g.edges.push_back(std::move(e));
    }
    return g;
}

void save_user_graph(const UserGraph& g, const std::string& path, const std::string& config_header) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot write user-graph file: " + path);
    if (!config_header.empty()) out << "# " << config_header << "\n";
    for (const auto& e : g.edges) out << e.src << '\t' << e.dst << '\t' << e.tweet << '\n';
}

namespace {

TweetGraph convert_impl(const UserGraph& g, std::vector<std::string> ids,
                        const std::unordered_map<std::string, Eigen::Index>& index) {
    const Eigen::Index m = static_cast<Eigen::Index>(ids.size());
    const std::size_t n_edges = g.edges.size();

    // Edge indices grouped by incident user (src or dst, once per edge).
    std::unordered_map<std::string, std::vector<std::size_t>> by_user;
    for (std::size_t e = 0; e < n_edges; ++e) {
        by_user[g.edges[e].src].push_back(e);
        if (g.edges[e].dst != g.edges[e].src) by_user[g.edges[e].dst].push_back(e);
    }

    // Each qualifying edge pair counts once even when it shares both users.
    std::unordered_set<std::uint64_t> seen_pair;
    std::map<std::pair<Eigen::Index, Eigen::Index>, double> weight;
    for (const auto& [user, edges] : by_user) {
        for (std::size_t a = 0; a < edges.size(); ++a) {
            for (std::size_t b = a + 1; b < edges.size(); ++b) {
                const std::size_t lo = std::min(edges[a], edges[b]);
                const std::size_t hi = std::max(edges[a], edges[b]);
                if (!seen_pair.insert(static_cast<std::uint64_t>(lo) * n_edges + hi).second) continue;
                const Eigen::Index ti = index.at(g.edges[lo].tweet);
                const Eigen::Index tj = index.at(g.edges[hi].tweet);
                if (ti == tj) continue;
                weight[{std::min(ti, tj), std::max(ti, tj)}] += 1.0;
            }
        }
    }

    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(2 * weight.size());
    for (const auto& [key, w] : weight) {
        trips.emplace_back(key.first, key.second, w);
        trips.emplace_back(key.second, key.first, w);
    }
    TweetGraph h;
    h.ids = std::move(ids);
    h.adjacency.resize(m, m);
    h.adjacency.setFromTriplets(trips.begin(), trips.end());
    h.directed = false;
    return h;
}

}  // namespace

TweetGraph line_graph_convert(const UserGraph& g) {
    if (g.edges.empty()) throw io_error("line_graph_convert: empty user graph");
    std::vector<std::string> ids;
    std::unordered_map<std::string, Eigen::Index> index;
    for (const auto& e : g.edges) {
        if (index.emplace(e.tweet, static_cast<Eigen::Index>(ids.size())).second) ids.push_back(e.tweet);
    }
    return convert_impl(g, std::move(ids), index);
}

TweetGraph line_graph_convert(const UserGraph& g, const std::vector<std::string>& tweet_ids) {
    std::unordered_map<std::string, Eigen::Index> index;
    for (std::size_t i = 0; i < tweet_ids.size(); ++i) {
        if (!index.emplace(tweet_ids[i], static_cast<Eigen::Index>(i)).second) {
            throw io_error("line_graph_convert: duplicate tweet id '" + tweet_ids[i] + "'");
        }
    }
    for (const auto& e : g.edges) {
        if (!index.count(e.tweet)) {
            throw io_error("line_graph_convert: edge references unknown tweet id '" + e.tweet + "'");
        }
    }
    return convert_impl(g, tweet_ids, index);
}

Vec TransitionMatrix::left_apply(const Vec& pi) const {
    Vec out = base.transpose() * pi;
    if (teleport > 0.0) {
        out *= (1.0 - teleport);
        out.array() += teleport * pi.sum() / static_cast<double>(size());
    }
    return out;
}

Mat TransitionMatrix::dense() const {
    Mat P = Mat(base);
    if (teleport > 0.0) {
        P *= (1.0 - teleport);
        P.array() += teleport / static_cast<double>(size());
    }
    return P;
}

TransitionMatrix transition_matrix(const TweetGraph& h, double teleport, bool dangling_self_loop) {
    if (teleport < 0.0 || teleport >= 1.0) throw io_error("teleport must lie in [0, 1)");
    const Eigen::Index m = h.size();
    for (Eigen::Index i = 0; i < m; ++i) {
        for (SpMat::InnerIterator it(h.adjacency, i); it; ++it) {
            if (it.value() < 0.0) throw io_error("negative edge weight in tweet graph");
        }
    }

    Vec d_out = Vec::Zero(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        for (SpMat::InnerIterator it(h.adjacency, i); it; ++it) d_out[i] += it.value();
    }

    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(static_cast<std::size_t>(h.adjacency.nonZeros()) + static_cast<std::size_t>(m));
    const double uniform = 1.0 / static_cast<double>(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        if (d_out[i] <= 0.0) {
            if (dangling_self_loop) {
                trips.emplace_back(i, i, 1.0);
            } else if (teleport > 0.0) {
                for (Eigen::Index j = 0; j < m; ++j) trips.emplace_back(i, j, uniform);
            } else {
                throw numeric_error("transition_matrix: vertex " + std::to_string(i) +
                                    " has zero out-degree (teleport=0, no self-loop fix)");
            }
            continue;
        }
        for (SpMat::InnerIterator it(h.adjacency, i); it; ++it) {
            trips.emplace_back(i, it.col(), it.value() / d_out[i]);
        }
    }
    TransitionMatrix P;
    P.base.resize(m, m);
    P.base.setFromTriplets(trips.begin(), trips.end());
    P.teleport = teleport;
    return P;
}

Vec stationary_distribution(const TransitionMatrix& P, double tol, int max_iter) {
    const Eigen::Index m = P.size();
    Vec pi = Vec::Constant(m, 1.0 / static_cast<double>(m));
    double residual = std::numeric_limits<double>::infinity();
    for (int it = 0; it < max_iter; ++it) {
        Vec next = P.left_apply(pi);
        residual = (next - pi).lpNorm<1>();
        next /= next.sum();
        pi = next;
        if (residual <= tol) return pi;
    }
    std::ostringstream msg;
    msg << "stationary_distribution: no convergence after " << max_iter
        << " iterations (last residual " << residual << ")";
    throw numeric_error(msg.str());
}

namespace {

SpMat symmetrized(const SpMat& M) {
    SpMat Mt = SpMat(M.transpose());
    SpMat S = 0.5 * (M + Mt);
    S.prune(0.0);
    return S;
}

}  // namespace

LaplacianOperator laplacian(const TweetGraph& h, double teleport, double tol,
                            const LaplacianKind* force_kind) {
    const Eigen::Index m = h.size();
    const LaplacianKind kind =
        force_kind ? *force_kind
                   : (h.directed ? LaplacianKind::DirectedTheta : LaplacianKind::UndirectedDA);

    LaplacianOperator L;
    L.kind = kind;
    if (kind == LaplacianKind::UndirectedDA) {
        SpMat A = symmetrized(h.adjacency);
        std::vector<Eigen::Triplet<double>> trips;
        for (Eigen::Index i = 0; i < m; ++i) {
            double deg = 0.0;
            for (SpMat::InnerIterator it(A, i); it; ++it) {
                if (it.col() == i) continue;  // self-loops do not smooth
                deg += it.value();
                trips.emplace_back(i, it.col(), -it.value());
            }
            if (deg > 0.0) trips.emplace_back(i, i, deg);
        }
        L.matrix.resize(m, m);
        L.matrix.setFromTriplets(trips.begin(), trips.end());
        L.matrix = symmetrized(L.matrix);
        return L;
    }

    const TransitionMatrix P = transition_matrix(h, teleport);
    const Vec pi = stationary_distribution(P, tol);
    for (Eigen::Index i = 0; i < m; ++i) {
        if (!(pi[i] > 0.0)) {
            throw numeric_error("laplacian: stationary distribution has a zero entry; "
                                "use teleport > 0");
        }
    }
    const Mat Pd = P.dense();
    const Vec sq = pi.array().sqrt().matrix();
    const Vec isq = pi.array().rsqrt().matrix();
    // Theta = (Pi^1/2 P Pi^-1/2 + Pi^-1/2 P^T Pi^1/2) / 2
    Mat theta = 0.5 * (sq.asDiagonal() * Pd * isq.asDiagonal());
    theta += theta.transpose().eval();
    Mat Ld = Mat::Identity(m, m) - theta;
    Ld = 0.5 * (Ld + Ld.transpose().eval());
    L.matrix = Ld.sparseView(0.0, 0.0);
    return L;
}

double network_penalty(const LaplacianOperator& L, const Mat& Z, const Vec& beta) {
    if (Z.cols() != beta.size() || L.size() != Z.rows()) {
        throw io_error("network_penalty: shape mismatch");
    }
    const Vec s = Z * beta;
    return 0.5 * s.dot(L.matrix * s);
}

CategoryMixing category_mixing(const TweetGraph& h, const std::vector<int>& labels) {
    if (static_cast<Eigen::Index>(labels.size()) != h.size()) {
        throw io_error("category_mixing: label count does not match vertex count");
    }
    std::map<int, Eigen::Index> cats;
    for (int l : labels) cats.emplace(l, 0);
    Eigen::Index c = 0;
    for (auto& [label, idx] : cats) idx = c++;

    Mat e = Mat::Zero(c, c);
    double total = 0.0;
    for (Eigen::Index i = 0; i < h.size(); ++i) {
        for (SpMat::InnerIterator it(h.adjacency, i); it; ++it) {
            if (it.col() == i) continue;
            const Eigen::Index ci = cats.at(labels[static_cast<std::size_t>(i)]);
            const Eigen::Index cj = cats.at(labels[static_cast<std::size_t>(it.col())]);
            e(ci, cj) += it.value();
            total += it.value();
        }
    }
    if (total <= 0.0) throw io_error("category_mixing: graph has no edges");
    e /= total;
    CategoryMixing mix;
    mix.e = e;
    mix.a = e.rowwise().sum();
    mix.b = e.colwise().sum();
    return mix;
}

double assortativity(const CategoryMixing& mix) {
    const double tr = mix.e.trace();
    const double e2 = (mix.e * mix.e).sum();
    const double denom = 1.0 - e2;
    if (std::abs(denom) < 1e-12) throw numeric_error("assortativity: degenerate mixing");
    return (tr - e2) / denom;
}

double assortativity(const TweetGraph& h, const std::vector<int>& labels) {
    return assortativity(category_mixing(h, labels));
}

double modularity(const TweetGraph& h, const std::vector<int>& partition) {
    if (static_cast<Eigen::Index>(partition.size()) != h.size()) {
        throw io_error("modularity: partition size does not match vertex count");
    }
    SpMat B = h.directed ? symmetrized(h.adjacency) : h.adjacency;
    std::map<int, Eigen::Index> comms;
    for (int c : partition) comms.emplace(c, 0);
    Eigen::Index nc = 0;
    for (auto& [c, idx] : comms) idx = nc++;

    Vec within = Vec::Zero(nc);
    Vec degree_share = Vec::Zero(nc);
    double total = 0.0;
    for (Eigen::Index i = 0; i < h.size(); ++i) {
        const Eigen::Index ci = comms.at(partition[static_cast<std::size_t>(i)]);
        for (SpMat::InnerIterator it(B, i); it; ++it) {
            if (it.col() == i) continue;
            total += it.value();
            degree_share[ci] += it.value();
            if (comms.at(partition[static_cast<std::size_t>(it.col())]) == ci) within[ci] += it.value();
        }
    }
    if (total <= 0.0) throw io_error("modularity: graph has no edges");
    double q = 0.0;
    for (Eigen::Index c = 0; c < nc; ++c) {
        const double a = degree_share[c] / total;
        q += within[c] / total - a * a;
    }
    return q;
}

DegreeStats degree_stats(const TweetGraph& h) {
    const Eigen::Index m = h.size();
    DegreeStats st;
    st.in_degree.assign(static_cast<std::size_t>(m), 0);
    st.out_degree.assign(static_cast<std::size_t>(m), 0);
    for (Eigen::Index i = 0; i < m; ++i) {
        for (SpMat::InnerIterator it(h.adjacency, i); it; ++it) {
            if (it.value() == 0.0) continue;
            st.out_degree[static_cast<std::size_t>(i)] += 1;
            st.in_degree[static_cast<std::size_t>(it.col())] += 1;
        }
    }
    double sum = 0.0;
    for (Eigen::Index i = 0; i < m; ++i) {
        const Eigen::Index deg = h.directed
            ? st.in_degree[static_cast<std::size_t>(i)] + st.out_degree[static_cast<std::size_t>(i)]
            : st.out_degree[static_cast<std::size_t>(i)];
        st.histogram[deg] += 1;
        if (deg == 0) st.zero_degree += 1;
        sum += static_cast<double>(deg);
    }
    st.mean = m > 0 ? sum / static_cast<double>(m) : 0.0;
    return st;
}

void save_laplacian_coo(const LaplacianOperator& L, const std::string& path,
                        const std::string& config_header) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot write laplacian file: " + path);
    if (!config_header.empty()) out << "# " << config_header << "\n";
    out << "row,col,value\n";
    char buf[64];
    for (Eigen::Index i = 0; i < L.size(); ++i) {
        for (SpMat::InnerIterator it(L.matrix, i); it; ++it) {
            std::snprintf(buf, sizeof(buf), "%.17g", it.value());
            out << it.row() << ',' << it.col() << ',' << buf << '\n';
        }
    }
}

}  // namespace ri
