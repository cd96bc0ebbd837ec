#pragma once

#include <map>

#include "scaladj/backend.hpp"
#include "scaladj/corpus.hpp"
#include "scaladj/metrics.hpp"
#include "scaladj/templates.hpp"

namespace scaladj {

struct CompletionCase {
    std::string scale_id;
    std::string weak;
    std::vector<std::string> candidates;  // as returned by the backend
    bool correct = false;
};

struct CompletionResult {
    int template_id = 0;
    double accuracy = 0.0;
    std::vector<CompletionCase> cases;
};

/// Top-k completion membership probe. Every adjective outside the strongest
/// tie-group fills the ADJ_weak slot; masked encoders see the mask-plus-comma
/// instantiation, other families complete the prefix. A case is correct iff
/// some candidate is a scale-mate of the probe word and differs from it.
CompletionResult membership_completion(const Backend& backend, const ScaleDataset& dataset,
                                       const Template& tmpl, int k = 5, int workers = 0);

struct PairVerdict {
    std::string scale_id;
    Adjective weak_adj;
    Adjective strong_adj;
    PredictedRelation predicted = PredictedRelation::WeakLess;
    double perplexity_correct_order = 0.0;  // weak word in the ADJ_weak slot
    double perplexity_swapped_order = 0.0;
    bool correct = false;
};

struct MinimalPairResult {
    int template_id = 0;
    double accuracy = 0.0;
    std::vector<PairVerdict> verdicts;
};

/// Minimal-pair intensity probe: both slot orders are scored; lower
/// perplexity wins, relative differences below tie_epsilon are ties (a tie is
/// the correct verdict for equally intense gold pairs).
MinimalPairResult intensity_minimal_pair(const Backend& backend, const ScaleDataset& dataset,
                                         const Template& tmpl, double tie_epsilon = 1e-4,
                                         int workers = 0);

/// Scores per template per dataset, e.g. results[template_id][dataset_id].
using TemplateScores = std::map<int, std::map<std::string, double>>;

/// Template with the best mean score over every dataset except eval_dataset;
/// ties break toward the lowest template id.
int select_template_heldout(const TemplateScores& results, const std::string& eval_dataset);

/// Template with the best score on the eval dataset itself.
int best_template_in_dataset(const TemplateScores& results, const std::string& eval_dataset);

}  // namespace scaladj
