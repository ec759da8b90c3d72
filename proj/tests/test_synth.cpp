#include "doctest.h"
#include "helpers.hpp"

#include "ri/synth.hpp"

#include <set>

using namespace ri;

TEST_CASE("synth builds a label-assortative behavior graph") {
    SynthSpec spec;
    spec.planted.m = 120;
    spec.planted.k = 6;
    spec.planted.seed = 13;

    SUBCASE("homophily 1 gives assortativity exactly 1") {
        spec.homophily = 1.0;
        const SynthResult res = synth(spec);
        std::vector<std::string> ids;
        for (const auto& t : res.data.tweets) ids.push_back(t.id);
        const TweetGraph h = line_graph_convert(res.behavior, ids);
        CHECK(assortativity(h, res.data.labels()) == doctest::Approx(1.0));
    }
    SUBCASE("high homophily beats low homophily") {
        spec.homophily = 0.9;
        const SynthResult strong = synth(spec);
        spec.homophily = 0.5;
        const SynthResult weak = synth(spec);
        auto assort = [](const SynthResult& r) {
            std::vector<std::string> ids;
            for (const auto& t : r.data.tweets) ids.push_back(t.id);
            return assortativity(line_graph_convert(r.behavior, ids), r.data.labels());
        };
        CHECK(assort(strong) > assort(weak));
    }
    SUBCASE("every tweet appears on at least one edge") {
        const SynthResult res = synth(spec);
        std::set<std::string> carried;
        for (const auto& e : res.behavior.edges) carried.insert(e.tweet);
        CHECK(carried.size() == static_cast<std::size_t>(spec.planted.m));
    }
    SUBCASE("deterministic given the seed") {
        const SynthResult a = synth(spec);
        const SynthResult b = synth(spec);
        REQUIRE(a.behavior.edges.size() == b.behavior.edges.size());
        for (std::size_t i = 0; i < a.behavior.edges.size(); ++i) {
            CHECK(a.behavior.edges[i].src == b.behavior.edges[i].src);
            CHECK(a.behavior.edges[i].dst == b.behavior.edges[i].dst);
            CHECK(a.behavior.edges[i].tweet == b.behavior.edges[i].tweet);
        }
    }
}
