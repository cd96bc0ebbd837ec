#include "scaladj/metrics.hpp"

#include <cmath>
#include <limits>

#include "scaladj/error.hpp"

namespace scaladj {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}

double mrr(std::span<const int> ranks) {
    if (ranks.empty()) throw ValidationError("mrr: empty rank list");
    double sum = 0.0;
    for (int r : ranks) {
        if (r < 1) throw ValidationError("mrr: ranks must be >= 1");
        sum += 1.0 / static_cast<double>(r);
    }
    return sum / static_cast<double>(ranks.size());
}

double pairwise_accuracy(std::span<const RankingPairOutcome> outcomes) {
    if (outcomes.empty()) throw ValidationError("pairwise_accuracy: no pair outcomes");
    std::size_t correct = 0;
    for (const auto& o : outcomes) correct += o.correct ? 1 : 0;
    return static_cast<double>(correct) / static_cast<double>(outcomes.size());
}

double kendall_tau_b(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    if (n != y.size() || n < 2) return kNaN;
    long long concordant = 0, discordant = 0, ties_x = 0, ties_y = 0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            double dx = x[i] - x[j];
            double dy = y[i] - y[j];
            if (dx == 0.0 && dy == 0.0) continue;  // tied in both: drops out of all counts
            if (dx == 0.0) {
                ++ties_x;
            } else if (dy == 0.0) {
                ++ties_y;
            } else if ((dx > 0.0) == (dy > 0.0)) {
                ++concordant;
            } else {
                ++discordant;
            }
        }
    }
    double denom_x = static_cast<double>(concordant + discordant + ties_x);
    double denom_y = static_cast<double>(concordant + discordant + ties_y);
    if (denom_x == 0.0 || denom_y == 0.0) return kNaN;
    return static_cast<double>(concordant - discordant) / std::sqrt(denom_x * denom_y);
}

namespace {

// Average ranks (1-based, ties share the mean of their positions).
std::vector<double> average_ranks(std::span<const double> v) {
    const std::size_t n = v.size();
    std::vector<double> ranks(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t less = 0, equal = 0;
        for (std::size_t j = 0; j < n; ++j) {
            if (v[j] < v[i]) ++less;
            else if (v[j] == v[i]) ++equal;
        }
        ranks[i] = static_cast<double>(less) + (static_cast<double>(equal) + 1.0) / 2.0;
    }
    return ranks;
}

}  // namespace

double spearman_rho(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    if (n != y.size() || n < 2) return kNaN;
    auto rx = average_ranks(x);
    auto ry = average_ranks(y);
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += rx[i];
        my += ry[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double dx = rx[i] - mx, dy = ry[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) return kNaN;
    return sxy / std::sqrt(sxx * syy);
}

CorrelationResult rank_correlations(
    const std::vector<std::pair<std::vector<double>, std::vector<double>>>& per_scale) {
    CorrelationResult result;
    double tau_sum = 0.0, rho_sum = 0.0;
    for (const auto& [gold, pred] : per_scale) {
        if (gold.size() != pred.size() || gold.size() < 2)
            throw ValidationError("rank_correlations: each scale needs >= 2 paired scores");
        double t = kendall_tau_b(gold, pred);
        double r = spearman_rho(gold, pred);
        if (std::isnan(t) || std::isnan(r)) {
            ++result.excluded_scales;
            continue;
        }
        tau_sum += t;
        rho_sum += r;
        ++result.used_scales;
    }
    if (result.used_scales == 0)
        throw ValidationError("rank_correlations: all scales had a constant ranking");
    result.tau = tau_sum / static_cast<double>(result.used_scales);
    result.rho = rho_sum / static_cast<double>(result.used_scales);
    return result;
}

MacroF1Result macro_f1(const std::vector<bool>& gold, const std::vector<bool>& predicted) {
    if (gold.size() != predicted.size())
        throw ValidationError("macro_f1: gold/predicted length mismatch");
    if (gold.empty()) throw ValidationError("macro_f1: empty input");

    MacroF1Result r;
    for (bool positive : {true, false}) {
        std::size_t tp = 0, fp = 0, fn = 0, support = 0, predicted_count = 0;
        for (std::size_t i = 0; i < gold.size(); ++i) {
            bool g = gold[i] == positive;
            bool p = predicted[i] == positive;
            support += g ? 1 : 0;
            predicted_count += p ? 1 : 0;
            if (g && p) ++tp;
            else if (!g && p) ++fp;
            else if (g && !p) ++fn;
        }
        double f1 = 0.0;
        if (support == 0 && predicted_count == 0) {
            r.warnings.push_back(std::string("class '") + (positive ? "yes" : "no") +
                                 "' absent from gold and predictions; contributes F1 = 0");
        } else if (2 * tp + fp + fn > 0) {
            f1 = 2.0 * static_cast<double>(tp) / static_cast<double>(2 * tp + fp + fn);
        }
        (positive ? r.f1_yes : r.f1_no) = f1;
    }
    r.value = 0.5 * (r.f1_yes + r.f1_no);
    return r;
}

}  // namespace scaladj
