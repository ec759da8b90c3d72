#pragma once

#include "ri/common.hpp"

#include <map>
#include <string>
#include <vector>

namespace ri {

/// User-user behavior edges; each edge carries the tweet being retweeted
/// or replied to.
struct UserGraph {
    struct Edge {
        std::string src;
        std::string dst;
        std::string tweet;
    };
    std::vector<Edge> edges;
};

/// Tweet-tweet graph obtained from behavior edges. Weights count the edge
/// pairs that share an endpoint user. Symmetric unless `directed` is set.
struct TweetGraph {
    std::vector<std::string> ids;  // vertex -> tweet id
    SpMat adjacency;               // m x m, nonnegative
    bool directed = false;

    Eigen::Index size() const { return adjacency.rows(); }
};

/// Random-walk transition matrix, kept as the normalized base plus a
/// teleport weight so the dense uniform part is never materialized.
struct TransitionMatrix {
    SpMat base;       // row-stochastic, dangling rows already handled
    double teleport = 0.0;

    Eigen::Index size() const { return base.rows(); }
    /// pi^T P, returned as a column vector.
    Vec left_apply(const Vec& pi) const;
    Mat dense() const;
};

enum class LaplacianKind { UndirectedDA, DirectedTheta };

struct LaplacianOperator {
    SpMat matrix;
    LaplacianKind kind = LaplacianKind::UndirectedDA;

    Eigen::Index size() const { return matrix.rows(); }
};

/// Edge-fraction mixing matrix by endpoint category, with marginals.
struct CategoryMixing {
    Mat e;
    Vec a;  // row sums
    Vec b;  // column sums
};

struct DegreeStats {
    std::map<Eigen::Index, Eigen::Index> histogram;  // total degree -> count
    double mean = 0.0;
    Eigen::Index zero_degree = 0;
    std::vector<Eigen::Index> in_degree;
    std::vector<Eigen::Index> out_degree;
};

UserGraph load_user_graph(const std::string& path);
void save_user_graph(const UserGraph& g, const std::string& path,
                     const std::string& config_header = "");

/**
 * Converts user-behavior edges to the tweet-tweet graph: tweets i != j are
 * linked with weight equal to the number of edge pairs (one carrying i, one
 * carrying j) that share a start or end user. Vertex order is first
 * appearance in the edge list.
 */
TweetGraph line_graph_convert(const UserGraph& g);

/// Same conversion with the vertex set pinned to `tweet_ids` (dataset
/// order); edges naming unknown tweets are an error. Tweets carried by no
/// edge become isolated vertices.
TweetGraph line_graph_convert(const UserGraph& g, const std::vector<std::string>& tweet_ids);

/**
 * Row-stochastic random-walk matrix P(u,v) = H(u,v)/d_out(u), blended with
 * the uniform matrix by `teleport`. With `dangling_self_loop` (the default)
 * zero-out-degree vertices get a unit self-loop before normalization;
 * without it they are given a uniform row when teleport > 0 and are an
 * error when teleport == 0.
 */
TransitionMatrix transition_matrix(const TweetGraph& h, double teleport,
                                   bool dangling_self_loop = true);

/// Power iteration from the uniform start until ||pi^T P - pi^T||_1 <= tol.
Vec stationary_distribution(const TransitionMatrix& P, double tol = 1e-12,
                            int max_iter = 100000);

/**
 * Graph smoothing operator. Undirected graphs use D - A; directed graphs
 * use I - (Pi^1/2 P Pi^-1/2 + Pi^-1/2 P^T Pi^1/2)/2 with Pi the stationary
 * distribution of the teleported walk. The result is explicitly
 * symmetrized. `force_kind` overrides the directedness-based choice.
 */
LaplacianOperator laplacian(const TweetGraph& h, double teleport = 0.01, double tol = 1e-12,
                            const LaplacianKind* force_kind = nullptr);

/// (1/2) (Z beta)^T L (Z beta); Z stacks the aggregated tweets row-wise.
double network_penalty(const LaplacianOperator& L, const Mat& Z, const Vec& beta);

CategoryMixing category_mixing(const TweetGraph& h, const std::vector<int>& labels);

/// Newman's nominal assortativity r = (Tr e - ||e^2||) / (1 - ||e^2||).
double assortativity(const CategoryMixing& mix);
double assortativity(const TweetGraph& h, const std::vector<int>& labels);

/// Newman modularity of a supplied partition, on the undirected view.
double modularity(const TweetGraph& h, const std::vector<int>& partition);

DegreeStats degree_stats(const TweetGraph& h);

/// Coordinate-format text export (row, col, value per line).
void save_laplacian_coo(const LaplacianOperator& L, const std::string& path,
                        const std::string& config_header = "");

}  // namespace ri
