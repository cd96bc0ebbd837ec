#pragma once

#include <array>
#include <optional>

#include "scaladj/backend.hpp"
#include "scaladj/corpus.hpp"
#include "scaladj/metrics.hpp"

namespace scaladj {

struct DiversityPrompt {
    std::string item_id;
    std::string text;
};

inline constexpr std::array<const char*, 2> kAnswerWords = {"yes", "no"};

/// Fixed prompt, byte-exact: the utterance is quoted, the predicate inserted
/// before the question mark, answer slot left open after "Answer:".
DiversityPrompt build_prompt(const SIItem& item);

/// Six neutral prompts: every ordered pair of distinct fillers from
/// { "[N/A]", "", "[MASK]" } over the (utterance, predicate) slots.
std::array<DiversityPrompt, 6> neutral_prompts();

/// Normalized yes probability sy/(sy+sn). Throws on zero mass.
double compute_wy(double sy, double sn);

struct CalibrationState {
    double mean_neutral_wy = 0.5;
    std::vector<double> neutral_wys;  // one per neutral prompt

    // Diagonal weight matrix that maps the mean neutral distribution to
    // (0.5, 0.5) after renormalization.
    std::array<double, 2> weight_diag() const {
        return {0.5 / mean_neutral_wy, 0.5 / (1.0 - mean_neutral_wy)};
    }
};

/// Averages wy over the six neutral prompts.
CalibrationState fit_calibration(const Backend& backend);

/// Calibrated yes probability: renormalized W * (wy, 1-wy), first component.
double compute_cy(double wy, const CalibrationState& calibration);

enum class Strategy { Sy, Wy, Cy };

std::string strategy_name(Strategy s);
Strategy strategy_from_name(const std::string& name);

struct StrategyResult {
    std::string item_id;
    double sy = 0.0;
    double sn = 0.0;
    double wy = 0.0;
    std::optional<double> cy;
    bool decision_sy = false;
    bool decision_wy = false;
    std::optional<bool> decision_cy;
    bool gold = false;
    bool flagged = false;  // zero yes+no mass; excluded from the metric
};

struct DiversityResult {
    Strategy strategy = Strategy::Sy;
    std::vector<StrategyResult> items;
    MacroF1Result f1;
    std::optional<CalibrationState> calibration;
    std::vector<std::string> warnings;
};

/// Scores every item's prompt, thresholds the chosen strategy at 0.5
/// (inclusive), reports macro-F1 over {yes, no}. Strategy Cy requires a
/// fitted calibration state.
DiversityResult run_diversity(const Backend& backend, const SIDataset& dataset,
                              Strategy strategy,
                              std::optional<CalibrationState> calibration = std::nullopt,
                              int workers = 0);

/// -log P(strong adjective | context prefix); `context` marks the strong
/// word's position with the {ADJ} placeholder.
double string_surprisal(const Backend& backend, const SIItem& item, const std::string& context);

struct LRConfigResult {
    std::vector<std::string> train_datasets;
    double macro_f1 = 0.0;
    std::size_t train_items = 0;
    std::size_t eval_items = 0;
    std::size_t dropped_train = 0;  // items without surprisal features
    std::size_t dropped_eval = 0;
    std::vector<bool> predictions;
};

struct LRBaselineResult {
    std::vector<LRConfigResult> configs;
    std::size_t best_index = 0;
    std::vector<std::string> warnings;
};

/// Logistic-regression baseline on (string, concept) surprisal features.
/// Trains once per configuration: each training dataset alone, plus all of
/// them pooled when more than one is given.
LRBaselineResult lr_baseline(const std::vector<SIDataset>& train_sets, const SIDataset& eval_set,
                             double l2 = 1.0);

}  // namespace scaladj
