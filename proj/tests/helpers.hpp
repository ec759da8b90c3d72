#pragma once

#include "ri/common.hpp"
#include "ri/dataset.hpp"
#include "ri/graph.hpp"
#include "ri/model.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace rt {

inline std::string temp_path(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / "ri_tests";
    std::filesystem::create_directories(dir);
    return (dir / name).string();
}

inline ri::Vec random_vec(ri::Rng& rng, Eigen::Index n, double scale = 1.0) {
    ri::Vec v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = scale * rng.next_gaussian();
    return v;
}

/// Small labeled dataset with gaussian words, no bias column.
inline ri::Dataset random_dataset(ri::Rng& rng, Eigen::Index m, Eigen::Index k,
                                  Eigen::Index n_min = 2, Eigen::Index n_max = 6) {
    ri::Dataset d;
    d.dim = k;
    for (Eigen::Index i = 0; i < m; ++i) {
        ri::Tweet t;
        t.id = "t" + std::to_string(i);
        t.label = rng.next_double() < 0.5 ? +1 : -1;
        const Eigen::Index n =
            n_min + static_cast<Eigen::Index>(rng.next_below(static_cast<std::uint64_t>(n_max - n_min + 1)));
        t.words.resize(n, k);
        for (Eigen::Index j = 0; j < n; ++j) {
            for (Eigen::Index f = 0; f < k; ++f) t.words(j, f) = rng.next_gaussian();
        }
        d.tweets.push_back(std::move(t));
    }
    if (d.tweets.front().label == d.tweets.back().label && m >= 2) {
        d.tweets.back().label = -d.tweets.back().label;  // both classes present
    }
    return d;
}

inline ri::ModelParams random_params(ri::Rng& rng, const ri::Dataset& d, double beta_scale = 0.5,
                                     double u_scale = 0.5) {
    ri::ModelParams p;
    p.beta = random_vec(rng, d.dim, beta_scale);
    for (const auto& t : d.tweets) p.u.push_back(random_vec(rng, t.n_words(), u_scale));
    return p;
}

/// Random symmetric nonnegative adjacency over m vertices.
inline ri::TweetGraph random_undirected_graph(ri::Rng& rng, Eigen::Index m, double density = 0.3) {
    std::vector<Eigen::Triplet<double>> trips;
    for (Eigen::Index i = 0; i < m; ++i) {
        for (Eigen::Index j = i + 1; j < m; ++j) {
            if (rng.next_double() < density) {
                const double w = 0.5 + rng.next_double();
                trips.emplace_back(i, j, w);
                trips.emplace_back(j, i, w);
            }
        }
    }
    ri::TweetGraph h;
    h.adjacency.resize(m, m);
    h.adjacency.setFromTriplets(trips.begin(), trips.end());
    h.directed = false;
    for (Eigen::Index i = 0; i < m; ++i) h.ids.push_back("t" + std::to_string(i));
    return h;
}

inline ri::TweetGraph random_directed_graph(ri::Rng& rng, Eigen::Index m, double density = 0.4) {
    std::vector<Eigen::Triplet<double>> trips;
    for (Eigen::Index i = 0; i < m; ++i) {
        for (Eigen::Index j = 0; j < m; ++j) {
            if (i != j && rng.next_double() < density) {
                trips.emplace_back(i, j, 0.5 + rng.next_double());
            }
        }
    }
    ri::TweetGraph h;
    h.adjacency.resize(m, m);
    h.adjacency.setFromTriplets(trips.begin(), trips.end());
    h.directed = true;
    for (Eigen::Index i = 0; i < m; ++i) h.ids.push_back("t" + std::to_string(i));
    return h;
}

inline ri::LaplacianOperator random_laplacian(ri::Rng& rng, Eigen::Index m) {
    if (rng.next_double() < 0.5) {
        return ri::laplacian(random_undirected_graph(rng, m));
    }
    return ri::laplacian(random_directed_graph(rng, m), 0.05, 1e-13);
}

}  // namespace rt
