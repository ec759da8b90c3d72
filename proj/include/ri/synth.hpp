#pragma once

#include "ri/dataset.hpp"
#include "ri/graph.hpp"

namespace ri {

/**
 * Desk-scale benchmark: planted dataset plus a behavior graph whose hub
 * users preferentially retweet same-label tweets, so the converted
 * tweet-tweet graph is label-assortative with strength `homophily`.
 */
struct SynthSpec {
    PlantedSpec planted;
    double homophily = 0.9;       // probability a retweet lands on a same-label hub
    double edges_per_tweet = 2.0; // mean behavior edges carrying each tweet
    Eigen::Index hubs = 0;        // retweeting users; 0 picks max(2, m/16)
};

struct SynthResult {
    Dataset data;
    std::vector<std::vector<bool>> signal_flags;
    UserGraph behavior;
};

SynthResult synth(const SynthSpec& spec);

}  // namespace ri
