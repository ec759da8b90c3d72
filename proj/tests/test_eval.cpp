#include "doctest.h"
#include "helpers.hpp"

#include "ri/eval.hpp"
#include "ri/synth.hpp"

#include <cmath>

using namespace ri;

namespace {

/// Regularized incomplete beta via the continued fraction (Lentz), used only
/// as the t-CDF oracle here.
double betacf(double a, double b, double x) {
    const double tiny = 1e-30;
    const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= 300; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-14) break;
    }
    return h;
}

double betai(double a, double b, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double ln = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) +
                      b * std::log(1.0 - x);
    const double front = std::exp(ln);
    if (x < (a + 1.0) / (a + b + 2.0)) return front * betacf(a, b, x) / a;
    return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

/// One-sided p for Student t with df degrees of freedom.
double t_sf_oracle(double t, double df) {
    const double p_two = betai(0.5 * df, 0.5, df / (df + t * t));
    return t >= 0.0 ? 0.5 * p_two : 1.0 - 0.5 * p_two;
}

}  // namespace

TEST_CASE("precision_recall_f1") {
    SUBCASE("perfect predictions") {
        const std::vector<int> y = {+1, -1, +1, -1};
        const MetricsReport r = precision_recall_f1(y, y);
        CHECK(r.precision == 1.0);
        CHECK(r.recall == 1.0);
        CHECK(r.f1 == 1.0);
    }
    SUBCASE("the reported operating point reproduces its F1") {
        // precision 0.844311, recall 0.884013 -> F1 0.863706
        const double p = 0.844311, r = 0.884013;
        const double f1 = 2.0 * p * r / (p + r);
        CHECK(std::abs(f1 - 0.863706) <= 1e-4);
    }
    SUBCASE("all negative predictions with real positives degrade to zero") {
        const std::vector<int> pred = {-1, -1, -1};
        const std::vector<int> truth = {+1, -1, +1};
        const MetricsReport r = precision_recall_f1(pred, truth);
        CHECK(r.recall == 0.0);
        CHECK(r.precision == 0.0);
        CHECK(r.f1 == 0.0);
    }
    SUBCASE("matches a naive confusion recount on random labels") {
        Rng rng(401);
        for (int trial = 0; trial < 50; ++trial) {
            const std::size_t n = 1 + rng.next_below(200);
            std::vector<int> pred, truth;
            for (std::size_t i = 0; i < n; ++i) {
                pred.push_back(rng.next_double() < 0.5 ? +1 : -1);
                truth.push_back(rng.next_double() < 0.5 ? +1 : -1);
            }
            long tp = 0, fp = 0, fn = 0, tn = 0;
            for (std::size_t i = 0; i < n; ++i) {
                if (truth[i] == +1 && pred[i] == +1) ++tp;
                if (truth[i] == -1 && pred[i] == +1) ++fp;
                if (truth[i] == +1 && pred[i] == -1) ++fn;
                if (truth[i] == -1 && pred[i] == -1) ++tn;
            }
            const MetricsReport r = precision_recall_f1(pred, truth);
            CHECK(r.tp == tp);
            CHECK(r.fp == fp);
            CHECK(r.fn == fn);
            CHECK(r.tn == tn);
            CHECK(r.tp + r.fp + r.fn + r.tn == static_cast<long>(n));
            if (r.precision > 0.0 && r.recall > 0.0) {
                CHECK(r.f1 <= 2.0 * std::min(r.precision, r.recall) + 1e-15);
                CHECK(r.f1 >= std::min(r.precision, r.recall) - 1e-15);
                CHECK(r.f1 <= std::max(r.precision, r.recall) + 1e-15);
            }
        }
    }
    SUBCASE("input validation") {
        CHECK_THROWS_AS(precision_recall_f1({}, {}), io_error);
        CHECK_THROWS_AS(precision_recall_f1({+1}, {+1, -1}), io_error);
        CHECK_THROWS_AS(precision_recall_f1({2}, {+1}), io_error);
    }
}

TEST_CASE("t_test") {
    SUBCASE("identical nonconstant groups") {
        const std::vector<double> a = {0.8, 0.9, 0.85, 0.95};
        const TTestResult r = t_test(a, a);
        CHECK(r.t == 0.0);
        CHECK(r.p == doctest::Approx(0.5).epsilon(1e-12));
        CHECK_FALSE(r.reject_at_005);
    }
    SUBCASE("extreme separation rejects") {
        const std::vector<double> a = {0.90, 0.91, 0.92, 0.905};
        const std::vector<double> b = {0.60, 0.61, 0.59, 0.605};
        const TTestResult r = t_test(a, b);
        CHECK(r.p < 0.05);
        CHECK(r.reject_at_005);
    }
    SUBCASE("fixed 5-vs-5 matches the closed-form Welch computation and the CDF oracle") {
        const std::vector<double> a = {0.86, 0.88, 0.85, 0.87, 0.89};
        const std::vector<double> b = {0.84, 0.83, 0.86, 0.82, 0.85};
        const TTestResult r = t_test(a, b);

        auto mean = [](const std::vector<double>& v) {
            double s = 0;
            for (double x : v) s += x;
            return s / static_cast<double>(v.size());
        };
        auto var = [&](const std::vector<double>& v) {
            const double m = mean(v);
            double s = 0;
            for (double x : v) s += (x - m) * (x - m);
            return s / static_cast<double>(v.size() - 1);
        };
        const double sa = var(a) / 5.0, sb = var(b) / 5.0;
        const double t_expect = (mean(a) - mean(b)) / std::sqrt(sa + sb);
        const double df_expect = (sa + sb) * (sa + sb) / (sa * sa / 4.0 + sb * sb / 4.0);
        CHECK(r.t == doctest::Approx(t_expect).epsilon(1e-12));
        CHECK(r.df == doctest::Approx(df_expect).epsilon(1e-12));
        CHECK(r.p == doctest::Approx(t_sf_oracle(t_expect, df_expect)).epsilon(1e-6));
    }
    SUBCASE("random groups match the CDF oracle") {
        Rng rng(409);
        for (int trial = 0; trial < 40; ++trial) {
            std::vector<double> a, b;
            const std::size_t na = 2 + rng.next_below(12), nb = 2 + rng.next_below(12);
            for (std::size_t i = 0; i < na; ++i) a.push_back(rng.next_gaussian());
            for (std::size_t i = 0; i < nb; ++i) b.push_back(0.3 + rng.next_gaussian());
            const TTestResult r = t_test(a, b);
            CHECK(r.p == doctest::Approx(t_sf_oracle(r.t, r.df)).epsilon(1e-6));
        }
    }
    SUBCASE("degenerate variances") {
        CHECK_THROWS_AS(t_test({1.0, 1.0}, {1.0, 1.0}), numeric_error);
        const TTestResult hi = t_test({2.0, 2.0}, {1.0, 1.0});
        CHECK(hi.p == 0.0);
        CHECK(hi.reject_at_005);
        const TTestResult lo = t_test({1.0, 1.0}, {2.0, 2.0});
        CHECK(lo.p == 1.0);
        CHECK_FALSE(lo.reject_at_005);
    }
    SUBCASE("group size validation") {
        CHECK_THROWS_AS(t_test({1.0}, {1.0, 2.0}), io_error);
    }
}

TEST_CASE("reference_elastic_net_lr") {
    Rng rng(411);
    SUBCASE("huge l1 weight shrinks to zero") {
        Dataset d = rt::random_dataset(rng, 20, 4);
        const Vec beta = reference_elastic_net_lr(d, 0.01, 1e4, 1e-10);
        CHECK(beta.norm() == 0.0);
    }
    SUBCASE("separable 1-D data recovers the class direction") {
        Dataset d;
        d.dim = 1;
        for (int i = 0; i < 10; ++i) {
            Tweet t;
            t.id = "t" + std::to_string(i);
            t.label = i < 5 ? +1 : -1;
            t.words = (Mat(1, 1) << (i < 5 ? 1.0 : -1.0)).finished();
            d.tweets.push_back(t);
        }
        const Vec beta = reference_elastic_net_lr(d, 0.01, 0.01, 1e-10);
        CHECK(beta[0] > 0.0);
    }
    SUBCASE("2-D objective within 1e-6 of a fine grid search") {
        Dataset d = rt::random_dataset(rng, 15, 2, 1, 3);
        const double l1 = 0.05, l2 = 0.08;
        const Vec beta = reference_elastic_net_lr(d, l1, l2, 1e-12);
        const double mine = reference_elastic_net_objective(d, beta, l1, l2);

        double best = std::numeric_limits<double>::infinity();
        const double span = 0.4;
        for (int i = -40; i <= 40; ++i) {
            for (int j = -40; j <= 40; ++j) {
                Vec cand(2);
                cand << beta[0] + span * i / 40.0, beta[1] + span * j / 40.0;
                best = std::min(best, reference_elastic_net_objective(d, cand, l1, l2));
            }
        }
        CHECK(mine <= best + 1e-6);
    }
}

TEST_CASE("evaluate_run") {
    SUBCASE("oracle direction on planted data scores f1 >= 0.9") {
        PlantedSpec spec;
        spec.m = 200;
        spec.k = 12;
        spec.noise_scale = 0.12;
        spec.signal_words_fraction = 0.7;
        spec.seed = 19;
        const PlantedData pd = generate_planted(spec);
        ModelParams params;
        params.beta = 2.0 * default_signal_direction(12);
        Hyper h;
        const EvalRun run = evaluate_run(params, h, pd.data);
        REQUIRE(run.has_report);
        CHECK(run.report.f1 >= 0.9);
    }
    SUBCASE("deterministic") {
        Rng rng(421);
        Dataset d = rt::random_dataset(rng, 10, 3);
        ModelParams params;
        params.beta = rt::random_vec(rng, 3);
        Hyper h;
        const EvalRun a = evaluate_run(params, h, d);
        const EvalRun b = evaluate_run(params, h, d);
        REQUIRE(a.scores.size() == b.scores.size());
        for (std::size_t i = 0; i < a.scores.size(); ++i) {
            CHECK(a.scores[i].proportion == b.scores[i].proportion);
            CHECK(a.scores[i].label == b.scores[i].label);
        }
    }
    SUBCASE("unlabeled tweets are scored but excluded from the report") {
        Rng rng(423);
        Dataset d = rt::random_dataset(rng, 6, 3);
        for (auto& t : d.tweets) t.label = kUnlabeled;
        d.tweets[0].label = +1;
        d.tweets[1].label = -1;
        ModelParams params;
        params.beta = rt::random_vec(rng, 3);
        Hyper h;
        const EvalRun run = evaluate_run(params, h, d);
        CHECK(run.scores.size() == 6);
        CHECK(run.has_report);
        CHECK(run.report.tp + run.report.fp + run.report.fn + run.report.tn == 2);

        for (auto& t : d.tweets) t.label = kUnlabeled;
        const EvalRun bare = evaluate_run(params, h, d);
        CHECK_FALSE(bare.has_report);
        CHECK(bare.scores.size() == 6);
    }
    SUBCASE("dimension mismatch") {
        Rng rng(427);
        Dataset d = rt::random_dataset(rng, 4, 3);
        ModelParams params;
        params.beta = Vec::Zero(5);
        Hyper h;
        CHECK_THROWS_AS(evaluate_run(params, h, d), io_error);
    }
}
