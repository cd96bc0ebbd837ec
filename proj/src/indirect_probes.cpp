#include "scaladj/indirect_probes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "scaladj/error.hpp"
#include "scaladj/util.hpp"

namespace scaladj {

namespace {

int resolve_workers(int workers) {
#ifdef _OPENMP
    return workers <= 0 ? omp_get_max_threads() : workers;
#else
    (void)workers;
    return 1;
#endif
}

void rethrow_first(const std::vector<std::string>& errors) {
    for (const auto& e : errors)
        if (!e.empty()) throw BackendError(e);
}

}  // namespace

CompletionResult membership_completion(const Backend& backend, const ScaleDataset& dataset,
                                       const Template& tmpl, int k, int workers) {
    if (tmpl.category != TemplateCategory::Membership)
        throw ConfigError("membership_completion needs a membership template");
    if (k < 1) throw ConfigError("k must be >= 1");

    const auto family = backend.descriptor().family;
    if (family == BackendFamily::StaticVector)
        throw BackendError("static-vector backends cannot produce completions");
    const bool masked = family == BackendFamily::MaskedEncoder;

    struct Case {
        const HalfScale* scale;
        const Adjective* weak;
    };
    std::vector<Case> cases;
    for (const auto& scale : dataset.scales) {
        // adjectives with something strictly stronger on the scale
        for (std::size_t gi = 0; gi + 1 < scale.groups.size(); ++gi)
            for (const auto& adj : scale.groups[gi]) cases.push_back({&scale, &adj});
    }

    CompletionResult result;
    result.template_id = tmpl.id;
    result.cases.resize(cases.size());

    const int nw = resolve_workers(workers);
    std::vector<std::string> errors(cases.size());
    const std::int64_t n = static_cast<std::int64_t>(cases.size());
#pragma omp parallel for schedule(dynamic) num_threads(nw) if (nw > 1)
    for (std::int64_t i = 0; i < n; ++i) {
        const auto& c = cases[static_cast<std::size_t>(i)];
        auto& out = result.cases[static_cast<std::size_t>(i)];
        out.scale_id = c.scale->scale_id;
        out.weak = c.weak->surface;
        try {
            std::vector<ScoredWord> candidates;
            if (masked) {
                std::string text = instantiate_masked(tmpl, c.weak->surface,
                                                      backend.descriptor().mask_token);
                candidates = backend.fill_mask_topk(text, k);
            } else {
                candidates = backend.topk_next_words(instantiate_prefix(tmpl, c.weak->surface), k);
            }
            for (const auto& cand : candidates) {
                out.candidates.push_back(cand.word);
                std::string normalized = normalize_candidate(cand.word);
                if (normalized == c.weak->surface) continue;  // trivial self-completion
                if (c.scale->level_of(Adjective{normalized}) >= 0) out.correct = true;
            }
        } catch (const std::exception& e) {
            errors[static_cast<std::size_t>(i)] = e.what();
        }
    }
    rethrow_first(errors);

    if (result.cases.empty())
        throw ValidationError("dataset has no completion cases (every scale is a single group)");
    std::size_t correct = 0;
    for (const auto& c : result.cases) correct += c.correct ? 1 : 0;
    result.accuracy = static_cast<double>(correct) / static_cast<double>(result.cases.size());
    return result;
}

MinimalPairResult intensity_minimal_pair(const Backend& backend, const ScaleDataset& dataset,
                                         const Template& tmpl, double tie_epsilon, int workers) {
    if (tmpl.category != TemplateCategory::Intensity)
        throw ConfigError("intensity_minimal_pair needs an intensity template");
    if (tie_epsilon < 0.0) throw ConfigError("tie_epsilon must be >= 0");

    struct Job {
        const HalfScale* scale;
        GoldPair pair;
    };
    std::vector<Job> jobs;
    for (const auto& scale : dataset.scales)
        for (auto& pair : enumerate_pairs(scale)) jobs.push_back({&scale, std::move(pair)});
    if (jobs.empty()) throw ValidationError("dataset has no adjective pairs");

    MinimalPairResult result;
    result.template_id = tmpl.id;
    result.verdicts.resize(jobs.size());

    const int nw = resolve_workers(workers);
    std::vector<std::string> errors(jobs.size());
    const std::int64_t n = static_cast<std::int64_t>(jobs.size());
#pragma omp parallel for schedule(dynamic) num_threads(nw) if (nw > 1)
    for (std::int64_t i = 0; i < n; ++i) {
        const auto& job = jobs[static_cast<std::size_t>(i)];
        auto& v = result.verdicts[static_cast<std::size_t>(i)];
        v.scale_id = job.scale->scale_id;
        v.weak_adj = job.pair.first;
        v.strong_adj = job.pair.second;
        try {
            double ppl_correct =
                backend.sequence_score(instantiate(tmpl, v.weak_adj.surface, v.strong_adj.surface))
                    .perplexity;
            double ppl_swapped =
                backend.sequence_score(instantiate(tmpl, v.strong_adj.surface, v.weak_adj.surface))
                    .perplexity;
            v.perplexity_correct_order = ppl_correct;
            v.perplexity_swapped_order = ppl_swapped;

            bool tie;
            if (std::isinf(ppl_correct) && std::isinf(ppl_swapped)) {
                tie = true;  // both unseen: equally unlikely
            } else if (std::isinf(ppl_correct) || std::isinf(ppl_swapped)) {
                tie = false;
            } else {
                double rel = std::abs(ppl_correct - ppl_swapped) /
                             std::max(std::abs(ppl_correct), std::abs(ppl_swapped));
                tie = rel <= tie_epsilon;
            }
            if (tie) v.predicted = PredictedRelation::Tie;
            else if (ppl_correct < ppl_swapped) v.predicted = PredictedRelation::WeakLess;
            else v.predicted = PredictedRelation::StrongLess;
            v.correct = make_outcome(job.pair.relation, v.predicted).correct;
        } catch (const std::exception& e) {
            errors[static_cast<std::size_t>(i)] = e.what();
        }
    }
    rethrow_first(errors);

    std::size_t correct = 0;
    for (const auto& v : result.verdicts) correct += v.correct ? 1 : 0;
    result.accuracy = static_cast<double>(correct) / static_cast<double>(result.verdicts.size());
    return result;
}

int select_template_heldout(const TemplateScores& results, const std::string& eval_dataset) {
    int best_id = 0;
    double best_score = -std::numeric_limits<double>::infinity();
    bool any = false;
    for (const auto& [template_id, per_dataset] : results) {
        double sum = 0.0;
        std::size_t n = 0;
        for (const auto& [dataset_id, score] : per_dataset) {
            if (dataset_id == eval_dataset) continue;  // held out
            sum += score;
            ++n;
        }
        if (n == 0) continue;
        double mean = sum / static_cast<double>(n);
        if (!any || mean > best_score) {
            any = true;
            best_score = mean;
            best_id = template_id;
        }
        // std::map iterates ids ascending, so ties keep the lowest id
    }
    if (!any)
        throw ValidationError("held-out selection needs scores on at least one other dataset");
    return best_id;
}

int best_template_in_dataset(const TemplateScores& results, const std::string& eval_dataset) {
    int best_id = 0;
    double best_score = -std::numeric_limits<double>::infinity();
    bool any = false;
    for (const auto& [template_id, per_dataset] : results) {
        auto it = per_dataset.find(eval_dataset);
        if (it == per_dataset.end()) continue;
        if (!any || it->second > best_score) {
            any = true;
            best_score = it->second;
            best_id = template_id;
        }
    }
    if (!any) throw ValidationError("no scores recorded for dataset '" + eval_dataset + "'");
    return best_id;
}

}  // namespace scaladj
