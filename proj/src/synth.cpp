#include "ri/synth.hpp"

#include <algorithm>
#include <cmath>

namespace ri {

SynthResult synth(const SynthSpec& spec) {
    if (!(spec.homophily >= 0.0 && spec.homophily <= 1.0)) {
        throw io_error("synth: homophily must lie in [0, 1]");
    }
    if (!(spec.edges_per_tweet >= 1.0)) {
        throw io_error("synth: edges_per_tweet must be at least 1");
    }

    PlantedData pd = generate_planted(spec.planted);
    const Eigen::Index m = pd.data.size();

    const Eigen::Index n_hubs = spec.hubs > 0 ? spec.hubs : std::max<Eigen::Index>(2, m / 16);
    const auto n_pos_hubs = std::clamp<Eigen::Index>(
        static_cast<Eigen::Index>(std::llround(spec.planted.positive_ratio * static_cast<double>(n_hubs))),
        1, n_hubs - 1);

    // Hub user names by category; tweet authors are unique, so edge pairs
    // share an endpoint exactly when they share a hub.
    std::vector<std::string> pos_hubs, neg_hubs;
    for (Eigen::Index hub = 0; hub < n_hubs; ++hub) {
        if (hub < n_pos_hubs) pos_hubs.push_back("hub_p" + std::to_string(hub));
        else neg_hubs.push_back("hub_n" + std::to_string(hub - n_pos_hubs));
    }

    Rng rng = Rng(spec.planted.seed).split(0x67726170 /* graph stream */);
    SynthResult res;
    res.data = std::move(pd.data);
    res.signal_flags = std::move(pd.signal_flags);

    const auto base_edges = static_cast<Eigen::Index>(std::llround(spec.edges_per_tweet));
    for (Eigen::Index i = 0; i < m; ++i) {
        const Tweet& t = res.data.tweets[static_cast<std::size_t>(i)];
        const std::string author = "author_" + t.id;
        const Eigen::Index n_e =
            std::max<Eigen::Index>(1, base_edges - 1 + static_cast<Eigen::Index>(rng.next_below(3)));
        for (Eigen::Index e = 0; e < n_e; ++e) {
            const bool same = rng.next_double() < spec.homophily;
            const bool pick_pos = (t.label == +1) == same;
            const auto& pool = pick_pos ? pos_hubs : neg_hubs;
            const std::string& hub = pool[static_cast<std::size_t>(rng.next_below(pool.size()))];
            res.behavior.edges.push_back({hub, author, t.id});
        }
    }
    return res;
}

}  // namespace ri
