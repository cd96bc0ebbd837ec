#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "scaladj/corpus.hpp"

namespace scaladj {

enum class PredictedRelation { WeakLess, StrongLess, Tie };

struct RankingPairOutcome {
    PairRelation gold = PairRelation::Less;
    PredictedRelation predicted = PredictedRelation::WeakLess;
    bool correct = false;
};

inline RankingPairOutcome make_outcome(PairRelation gold, PredictedRelation predicted) {
    bool correct = (gold == PairRelation::Less && predicted == PredictedRelation::WeakLess) ||
                   (gold == PairRelation::Equal && predicted == PredictedRelation::Tie);
    return {gold, predicted, correct};
}

struct MetricReport {
    std::string name;
    double value = 0.0;
    std::map<std::string, double> per_scale;
    std::size_t n = 0;
};

/// Mean reciprocal rank over 1-based ranks.
double mrr(std::span<const int> ranks);

/// Fraction of correct pair outcomes, pooled over all scales.
double pairwise_accuracy(std::span<const RankingPairOutcome> outcomes);

/// Tie-corrected Kendall tau (tau-b). NaN when either side is constant.
double kendall_tau_b(std::span<const double> x, std::span<const double> y);

/// Spearman rho with average ranks for ties. NaN when either side is constant.
double spearman_rho(std::span<const double> x, std::span<const double> y);

struct CorrelationResult {
    double tau = 0.0;
    double rho = 0.0;
    std::size_t used_scales = 0;
    std::size_t excluded_scales = 0;  // constant gold or constant prediction
};

/// Per-scale tau/rho, arithmetic mean over scales with a defined value.
/// Each entry pairs gold intensity scores with predicted scores for one scale.
CorrelationResult rank_correlations(
    const std::vector<std::pair<std::vector<double>, std::vector<double>>>& per_scale);

struct MacroF1Result {
    double value = 0.0;
    double f1_yes = 0.0;
    double f1_no = 0.0;
    std::vector<std::string> warnings;
};

/// Unweighted mean of per-class F1 over {yes, no}. A class absent from both
/// gold and predictions contributes 0 with a warning.
MacroF1Result macro_f1(const std::vector<bool>& gold, const std::vector<bool>& predicted);

}  // namespace scaladj
