#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "scaladj/error.hpp"
#include "scaladj/metrics.hpp"
#include "scaladj/util.hpp"
#include "support/oracles.hpp"

using namespace scaladj;
namespace oracle = scaladj::testing;

TEST_CASE("mrr basics") {
    CHECK(mrr(std::vector<int>{1, 1, 1}) == 1.0);
    CHECK(mrr(std::vector<int>{2, 2}) == 0.5);
    CHECK(mrr(std::vector<int>{1, 2, 4}) == doctest::Approx(7.0 / 12.0).epsilon(1e-12));
    CHECK_THROWS_AS(mrr(std::vector<int>{}), ValidationError);
    CHECK_THROWS_AS(mrr(std::vector<int>{0}), ValidationError);
}

TEST_CASE("mrr is strictly decreasing in any single rank increase") {
    SplitMix64 rng(11);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<int> ranks;
        for (int i = 0; i < 6; ++i) ranks.push_back(1 + (int)rng.uniform_index(9));
        double before = mrr(ranks);
        std::size_t bump = rng.uniform_index(ranks.size());
        ranks[bump] += 1;
        CHECK(mrr(ranks) < before);
    }
}

TEST_CASE("mrr matches the reciprocal-rank oracle on random lists") {
    SplitMix64 rng(13);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<int> ranks;
        std::size_t n = 1 + rng.uniform_index(20);
        for (std::size_t i = 0; i < n; ++i) ranks.push_back(1 + (int)rng.uniform_index(50));
        CHECK(mrr(ranks) == oracle::oracle_mrr(ranks));
    }
}

TEST_CASE("pairwise accuracy pools outcomes") {
    std::vector<RankingPairOutcome> all_good(4, make_outcome(PairRelation::Less,
                                                             PredictedRelation::WeakLess));
    CHECK(pairwise_accuracy(all_good) == 1.0);

    std::vector<RankingPairOutcome> reversed(3, make_outcome(PairRelation::Less,
                                                             PredictedRelation::StrongLess));
    CHECK(pairwise_accuracy(reversed) == 0.0);

    std::vector<RankingPairOutcome> mixed = {
        make_outcome(PairRelation::Less, PredictedRelation::WeakLess),
        make_outcome(PairRelation::Less, PredictedRelation::Tie),
        make_outcome(PairRelation::Equal, PredictedRelation::Tie),
        make_outcome(PairRelation::Equal, PredictedRelation::WeakLess),
    };
    CHECK(pairwise_accuracy(mixed) == 0.5);
    CHECK_THROWS_AS(pairwise_accuracy(std::vector<RankingPairOutcome>{}), ValidationError);
}

TEST_CASE("correlations on clean rankings") {
    std::vector<double> gold = {0, 1, 2, 3};
    CHECK(kendall_tau_b(gold, gold) == 1.0);
    CHECK(spearman_rho(gold, gold) == 1.0);
    std::vector<double> reversed = {3, 2, 1, 0};
    CHECK(kendall_tau_b(gold, reversed) == -1.0);
    CHECK(spearman_rho(gold, reversed) == -1.0);
    std::vector<double> constant = {1, 1, 1, 1};
    CHECK(std::isnan(kendall_tau_b(gold, constant)));
    CHECK(std::isnan(spearman_rho(gold, constant)));
}

TEST_CASE("tau and rho agree with brute-force oracles on random tied data") {
    SplitMix64 rng(17);
    for (int trial = 0; trial < 500; ++trial) {
        auto scale = oracle::random_scale(rng, 5);
        std::vector<double> gold(scale.gold_levels.begin(), scale.gold_levels.end());
        double t = kendall_tau_b(gold, scale.pred_scores);
        double to = oracle::oracle_tau_b(gold, scale.pred_scores);
        double r = spearman_rho(gold, scale.pred_scores);
        double ro = oracle::oracle_spearman(gold, scale.pred_scores);
        CHECK(std::isnan(t) == std::isnan(to));
        if (!std::isnan(t)) CHECK(t == to);
        CHECK(std::isnan(r) == std::isnan(ro));
        if (!std::isnan(r)) CHECK(r == ro);
    }
}

TEST_CASE("correlations are invariant under strictly monotone score transforms") {
    SplitMix64 rng(19);
    for (int trial = 0; trial < 100; ++trial) {
        auto scale = oracle::random_scale(rng, 5);
        std::vector<double> gold(scale.gold_levels.begin(), scale.gold_levels.end());
        std::vector<double> transformed;
        for (double s : scale.pred_scores) transformed.push_back(std::exp(2.0 * s) + 7.0);
        double t1 = kendall_tau_b(gold, scale.pred_scores);
        double t2 = kendall_tau_b(gold, transformed);
        double r1 = spearman_rho(gold, scale.pred_scores);
        double r2 = spearman_rho(gold, transformed);
        CHECK(std::isnan(t1) == std::isnan(t2));
        if (!std::isnan(t1)) CHECK(t1 == doctest::Approx(t2).epsilon(1e-12));
        if (!std::isnan(r1)) CHECK(r1 == doctest::Approx(r2).epsilon(1e-12));
    }
}

TEST_CASE("rank_correlations averages per scale and excludes constants") {
    std::vector<std::pair<std::vector<double>, std::vector<double>>> scales = {
        {{0, 1, 2}, {0.1, 0.2, 0.3}},   // tau = rho = 1
        {{0, 1, 2}, {0.3, 0.2, 0.1}},   // tau = rho = -1
        {{0, 1, 2}, {0.5, 0.5, 0.5}},   // constant prediction: excluded
    };
    auto result = rank_correlations(scales);
    CHECK(result.used_scales == 2);
    CHECK(result.excluded_scales == 1);
    CHECK(result.tau == 0.0);
    CHECK(result.rho == 0.0);

    std::vector<std::pair<std::vector<double>, std::vector<double>>> all_constant = {
        {{1, 1}, {0.3, 0.9}}};
    CHECK_THROWS_AS(rank_correlations(all_constant), ValidationError);
}

TEST_CASE("macro f1 hand cases") {
    std::vector<bool> gold = {true, true, false, false};
    CHECK(macro_f1(gold, gold).value == 1.0);

    std::vector<bool> inverted = {false, false, true, true};
    CHECK(macro_f1(gold, inverted).value == 0.0);

    // constant-yes on 5 yes / 27 no: F1(yes) = 10/37, F1(no) = 0
    std::vector<bool> skewed_gold(32, false), all_yes(32, true);
    for (int i = 0; i < 5; ++i) skewed_gold[i] = true;
    auto r = macro_f1(skewed_gold, all_yes);
    CHECK(r.f1_yes == doctest::Approx(10.0 / 37.0).epsilon(1e-12));
    CHECK(r.f1_no == 0.0);
    CHECK(r.value == doctest::Approx(5.0 / 37.0).epsilon(1e-12));
}

TEST_CASE("macro f1 warns when a class is absent everywhere") {
    std::vector<bool> gold = {true, true};
    auto r = macro_f1(gold, gold);
    CHECK(r.value == 0.5);  // yes F1 = 1, absent no class contributes 0
    REQUIRE(r.warnings.size() == 1);
    CHECK(r.warnings[0].find("'no'") != std::string::npos);

    CHECK_THROWS_AS(macro_f1(gold, std::vector<bool>{true}), ValidationError);
}

TEST_CASE("metrics are invariant under item permutation") {
    SplitMix64 rng(23);
    std::vector<bool> gold, pred;
    for (int i = 0; i < 40; ++i) {
        gold.push_back(rng.uniform01() < 0.4);
        pred.push_back(rng.uniform01() < 0.6);
    }
    double before = macro_f1(gold, pred).value;
    std::vector<std::size_t> perm(gold.size());
    for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
    shuffle_in_place(perm, rng);
    std::vector<bool> gold2, pred2;
    for (std::size_t i : perm) {
        gold2.push_back(gold[i]);
        pred2.push_back(pred[i]);
    }
    CHECK(macro_f1(gold2, pred2).value == before);

    std::vector<int> ranks = {1, 3, 2, 8, 1};
    std::vector<int> shuffled = {8, 1, 1, 2, 3};
    CHECK(mrr(ranks) == mrr(shuffled));
}
