#include "scaladj/pragmatics.hpp"

#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "scaladj/error.hpp"
#include "scaladj/logistic_regression.hpp"
#include "scaladj/util.hpp"

namespace scaladj {

namespace {

constexpr std::array<const char*, 3> kNeutralFillers = {"[N/A]", "", "[MASK]"};

std::string prompt_text(const std::string& utterance, const std::string& predicate) {
    return "Question:Imagine that your friend Mary says, \"" + utterance +
           "\"\nWould you conclude from this that Mary thinks " + predicate +
           "?\nOnly answer yes or no.\nAnswer:";
}

int resolve_workers(int workers) {
#ifdef _OPENMP
    return workers <= 0 ? omp_get_max_threads() : workers;
#else
    (void)workers;
    return 1;
#endif
}

}  // namespace

DiversityPrompt build_prompt(const SIItem& item) {
    if (item.utterance.empty() || item.question_predicate.empty())
        throw ValidationError("item '" + item.item_id + "' has empty prompt fields");
    return {item.item_id, prompt_text(item.utterance, item.question_predicate)};
}

std::array<DiversityPrompt, 6> neutral_prompts() {
    std::array<DiversityPrompt, 6> prompts;
    std::size_t n = 0;
    for (const char* utterance : kNeutralFillers) {
        for (const char* predicate : kNeutralFillers) {
            if (std::string_view(utterance) == predicate) continue;
            prompts[n].item_id = "neutral-" + std::to_string(n);
            prompts[n].text = prompt_text(utterance, predicate);
            ++n;
        }
    }
    return prompts;
}

double compute_wy(double sy, double sn) {
    if (sy < 0.0 || sn < 0.0)
        throw ValidationError("answer probabilities must be non-negative");
    if (sy + sn == 0.0)
        throw ValidationError("undefined answer mass: sy + sn = 0");
    return sy / (sy + sn);
}

CalibrationState fit_calibration(const Backend& backend) {
    CalibrationState state;
    double sum = 0.0;
    for (const auto& prompt : neutral_prompts()) {
        std::array<std::string, 2> answers = {kAnswerWords[0], kAnswerWords[1]};
        auto probs = backend.answer_probabilities(prompt.text, answers);
        double wy;
        try {
            wy = compute_wy(probs["yes"], probs["no"]);
        } catch (const ValidationError&) {
            throw ValidationError("neutral prompt '" + prompt.item_id +
                                  "' yielded zero yes+no mass");
        }
        state.neutral_wys.push_back(wy);
        sum += wy;
    }
    state.mean_neutral_wy = sum / static_cast<double>(state.neutral_wys.size());
    return state;
}

double compute_cy(double wy, const CalibrationState& calibration) {
    const double m = calibration.mean_neutral_wy;
    if (!(m > 0.0 && m < 1.0))
        throw ValidationError("degenerate calibration: mean neutral wy = " + std::to_string(m));
    if (wy < 0.0 || wy > 1.0) throw ValidationError("wy must be in [0,1]");
    double yes_part = wy / m;
    double no_part = (1.0 - wy) / (1.0 - m);
    return yes_part / (yes_part + no_part);
}

std::string strategy_name(Strategy s) {
    switch (s) {
        case Strategy::Sy: return "sy";
        case Strategy::Wy: return "wy";
        case Strategy::Cy: return "cy";
    }
    return "sy";
}

Strategy strategy_from_name(const std::string& name) {
    if (name == "sy") return Strategy::Sy;
    if (name == "wy") return Strategy::Wy;
    if (name == "cy") return Strategy::Cy;
    throw ConfigError("unknown strategy '" + name + "' (expected sy, wy or cy)");
}

DiversityResult run_diversity(const Backend& backend, const SIDataset& dataset, Strategy strategy,
                              std::optional<CalibrationState> calibration, int workers) {
    if (dataset.items.empty()) throw ValidationError("empty scalar-implicature dataset");
    if (strategy == Strategy::Cy && !calibration)
        throw ValidationError("strategy cy requires a fitted calibration state");

    DiversityResult result;
    result.strategy = strategy;
    result.calibration = calibration;
    result.items.resize(dataset.items.size());

    const int nw = resolve_workers(workers);
    std::vector<std::string> errors(dataset.items.size());
    const std::int64_t n = static_cast<std::int64_t>(dataset.items.size());
#pragma omp parallel for schedule(dynamic) num_threads(nw) if (nw > 1)
    for (std::int64_t i = 0; i < n; ++i) {
        const auto& item = dataset.items[static_cast<std::size_t>(i)];
        auto& out = result.items[static_cast<std::size_t>(i)];
        out.item_id = item.item_id;
        out.gold = item.gold_label;
        try {
            auto prompt = build_prompt(item);
            std::array<std::string, 2> answers = {kAnswerWords[0], kAnswerWords[1]};
            auto probs = backend.answer_probabilities(prompt.text, answers);
            out.sy = probs["yes"];
            out.sn = probs["no"];
            out.decision_sy = out.sy >= 0.5;
            if (out.sy + out.sn == 0.0) {
                out.flagged = true;  // undefined wy; excluded from the metric
            } else {
                out.wy = compute_wy(out.sy, out.sn);
                out.decision_wy = out.wy >= 0.5;
                if (calibration) {
                    out.cy = compute_cy(out.wy, *calibration);
                    out.decision_cy = *out.cy >= 0.5;
                }
            }
        } catch (const std::exception& e) {
            errors[static_cast<std::size_t>(i)] = e.what();
        }
    }
    for (const auto& e : errors)
        if (!e.empty()) throw BackendError(e);

    std::vector<bool> gold, predicted;
    std::size_t flagged = 0;
    for (const auto& item : result.items) {
        if (item.flagged) {
            ++flagged;
            continue;
        }
        bool decision = false;
        switch (strategy) {
            case Strategy::Sy: decision = item.decision_sy; break;
            case Strategy::Wy: decision = item.decision_wy; break;
            case Strategy::Cy: decision = *item.decision_cy; break;
        }
        gold.push_back(item.gold);
        predicted.push_back(decision);
    }
    if (flagged > 0)
        result.warnings.push_back(std::to_string(flagged) +
                                  " items flagged (zero yes+no mass) and excluded");
    result.f1 = macro_f1(gold, predicted);
    result.warnings.insert(result.warnings.end(), result.f1.warnings.begin(),
                           result.f1.warnings.end());
    return result;
}

double string_surprisal(const Backend& backend, const SIItem& item, const std::string& context) {
    if (backend.descriptor().family != BackendFamily::Causal)
        throw BackendError("string surprisal needs a causal backend");
    auto marker = context.find(kAdjectivePlaceholder);
    if (marker == std::string::npos)
        throw ValidationError("context must mark the strong-word position with " +
                              std::string(kAdjectivePlaceholder));
    std::string prefix = context.substr(0, marker);
    while (!prefix.empty() && prefix.back() == ' ') prefix.pop_back();

    std::array<std::string, 1> answers = {item.strong_adj.surface};
    auto probs = backend.answer_probabilities(prefix, answers);
    double p = probs[item.strong_adj.surface];
    return -std::log(p);
}

LRBaselineResult lr_baseline(const std::vector<SIDataset>& train_sets, const SIDataset& eval_set,
                             double l2) {
    if (train_sets.empty())
        throw ValidationError("lr baseline needs at least one training dataset");
    for (const auto& ds : train_sets)
        if (ds.dataset_id == eval_set.dataset_id)
            throw ConfigError("training dataset '" + ds.dataset_id +
                              "' equals the evaluation dataset");

    auto usable = [](const SIItem& item) {
        return item.string_surprisal.has_value() && item.concept_surprisal.has_value();
    };

    std::vector<std::vector<double>> eval_x;
    std::vector<bool> eval_y;
    std::size_t dropped_eval = 0;
    for (const auto& item : eval_set.items) {
        if (!usable(item)) {
            ++dropped_eval;
            continue;
        }
        eval_x.push_back({*item.string_surprisal, *item.concept_surprisal});
        eval_y.push_back(item.gold_label);
    }
    if (eval_x.empty())
        throw ValidationError("evaluation dataset '" + eval_set.dataset_id +
                              "' has no items with surprisal features");

    LRBaselineResult result;

    std::vector<std::vector<const SIDataset*>> configurations;
    for (const auto& ds : train_sets) configurations.push_back({&ds});
    if (train_sets.size() > 1) {
        std::vector<const SIDataset*> all;
        for (const auto& ds : train_sets) all.push_back(&ds);
        configurations.push_back(std::move(all));
    }

    for (const auto& config : configurations) {
        LRConfigResult cfg;
        std::vector<std::vector<double>> x;
        std::vector<bool> y;
        for (const SIDataset* ds : config) {
            cfg.train_datasets.push_back(ds->dataset_id);
            for (const auto& item : ds->items) {
                if (!usable(item)) {
                    ++cfg.dropped_train;
                    continue;
                }
                x.push_back({*item.string_surprisal, *item.concept_surprisal});
                y.push_back(item.gold_label);
            }
        }
        cfg.train_items = x.size();
        cfg.eval_items = eval_x.size();
        cfg.dropped_eval = dropped_eval;

        auto model = fit_logistic_regression(x, y, l2);
        for (const auto& w : model.warnings) result.warnings.push_back(w);
        for (const auto& row : eval_x) cfg.predictions.push_back(model.predict(row));

        auto f1 = macro_f1(eval_y, cfg.predictions);
        for (const auto& w : f1.warnings) result.warnings.push_back(w);
        cfg.macro_f1 = f1.value;
        result.configs.push_back(std::move(cfg));
    }

    for (std::size_t i = 1; i < result.configs.size(); ++i)
        if (result.configs[i].macro_f1 > result.configs[result.best_index].macro_f1)
            result.best_index = i;
    return result;
}

}  // namespace scaladj
