// The OpenMP paths must reproduce the serial reference path bit for bit:
// per-unit results land in index-addressed slots and reductions run serially.

#include <cmath>

#include "doctest.h"
#include "scaladj/backends/mock.hpp"
#include "scaladj/direct_probes.hpp"
#include "scaladj/indirect_probes.hpp"
#include "scaladj/pragmatics.hpp"
#include "support/mock_backends.hpp"

using namespace scaladj;

namespace {

ScaleDataset synth_scales(const std::string& id, int count, int size, int salt) {
    ScaleDataset ds;
    ds.dataset_id = id;
    for (int s = 0; s < count; ++s) {
        HalfScale scale;
        scale.scale_id = id + "-s" + std::to_string(s);
        for (int a = 0; a < size; ++a)
            scale.groups.push_back(
                {Adjective{"w" + std::to_string(salt) + "q" + std::to_string(s) + "a" +
                           std::to_string(a)}});
        ds.scales.push_back(std::move(scale));
    }
    return ds;
}

ContextMap synth_contexts(const ScaleDataset& ds) {
    ContextMap map;
    for (const auto& scale : ds.scales) {
        ContextSet set;
        set.scale_id = scale.scale_id;
        for (std::size_t i = 0; i < kContextSentencesPerScale; ++i)
            set.sentences.push_back("filler " + std::to_string(i) + " reads {ADJ} indeed");
        map[scale.scale_id] = std::move(set);
    }
    return map;
}

bool same_values(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!(a[i] == b[i] || (std::isnan(a[i]) && std::isnan(b[i])))) return false;
    return true;
}

}  // namespace

TEST_CASE("membership probe: serial reference equals the parallel path") {
    HashEmbeddingBackend backend(24, 3, true);
    auto dataset = synth_scales("par", 18, 4, 1);
    auto contexts = synth_contexts(dataset);

    DirectProbeOptions serial;
    serial.seeds = {0, 1};
    serial.workers = 1;
    DirectProbeOptions parallel = serial;
    parallel.workers = 4;

    auto a = membership_mrr(backend, dataset, contexts, serial);
    auto b = membership_mrr(backend, dataset, contexts, parallel);
    REQUIRE(a.per_layer.size() == b.per_layer.size());
    for (std::size_t i = 0; i < a.per_layer.size(); ++i)
        CHECK(same_values(a.per_layer[i].per_seed, b.per_layer[i].per_seed));
    CHECK(a.best_layer == b.best_layer);
    REQUIRE(a.outcomes.size() == b.outcomes.size());
    for (std::size_t i = 0; i < a.outcomes.size(); ++i)
        CHECK(a.outcomes[i].rank_per_seed == b.outcomes[i].rank_per_seed);

    auto c = membership_all_members(backend, dataset, contexts, serial);
    auto d = membership_all_members(backend, dataset, contexts, parallel);
    CHECK(c.mean == d.mean);
    CHECK(c.stddev == d.stddev);
}

TEST_CASE("intensity probe: serial reference equals the parallel path") {
    HashEmbeddingBackend backend(24, 3, true);
    auto eval_set = synth_scales("pe", 14, 4, 2);
    auto dvec_set = synth_scales("pd", 9, 3, 3);

    DirectProbeOptions serial;
    serial.mode = RepMode::ShuffleBind;
    serial.seeds = {0, 1};
    serial.workers = 1;
    DirectProbeOptions parallel = serial;
    parallel.workers = 4;

    auto a = intensity_eval(backend, eval_set, dvec_set, nullptr, nullptr, serial);
    auto b = intensity_eval(backend, eval_set, dvec_set, nullptr, nullptr, parallel);
    for (std::size_t i = 0; i < a.pacc_per_layer.size(); ++i) {
        CHECK(same_values(a.pacc_per_layer[i].per_seed, b.pacc_per_layer[i].per_seed));
        CHECK(same_values(a.tau_per_layer[i].per_seed, b.tau_per_layer[i].per_seed));
        CHECK(same_values(a.rho_per_layer[i].per_seed, b.rho_per_layer[i].per_seed));
    }
    CHECK(a.best_layer == b.best_layer);
    REQUIRE(a.verdicts.size() == b.verdicts.size());
    for (std::size_t i = 0; i < a.verdicts.size(); ++i) {
        CHECK(a.verdicts[i].weak == b.verdicts[i].weak);
        CHECK(a.verdicts[i].correct == b.verdicts[i].correct);
    }
}

TEST_CASE("minimal-pair probe: aggregation is order-independent") {
    auto dataset = synth_scales("mp", 10, 4, 4);
    auto templates = load_templates(SCALADJ_SOURCE_DIR "/data/templates.tsv");
    GoldIntensityScorer scorer(dataset, templates);
    auto t = templates_in_category(templates, TemplateCategory::Intensity)[3];

    auto serial = intensity_minimal_pair(scorer, dataset, t, 1e-4, 1);
    auto parallel = intensity_minimal_pair(scorer, dataset, t, 1e-4, 4);
    CHECK(serial.accuracy == parallel.accuracy);
    REQUIRE(serial.verdicts.size() == parallel.verdicts.size());
    for (std::size_t i = 0; i < serial.verdicts.size(); ++i)
        CHECK(serial.verdicts[i].predicted == parallel.verdicts[i].predicted);
}

TEST_CASE("diversity probe: parallel item scoring matches serial") {
    SIDataset ds;
    ds.dataset_id = "par";
    for (int i = 0; i < 24; ++i) {
        SIItem item;
        item.item_id = "i" + std::to_string(i);
        item.utterance = "Utterance " + std::to_string(i) + ".";
        item.question_predicate = "predicate " + std::to_string(i);
        item.weak_adj = {"warm"};
        item.strong_adj = {"hot"};
        item.proportion_yes = (i % 4) / 4.0;
        item.gold_label = item.proportion_yes >= 0.5;
        ds.items.push_back(item);
    }
    HashAnswerBackend backend(1.3);
    auto calib = fit_calibration(backend);
    auto serial = run_diversity(backend, ds, Strategy::Cy, calib, 1);
    auto parallel = run_diversity(backend, ds, Strategy::Cy, calib, 4);
    CHECK(serial.f1.value == parallel.f1.value);
    for (std::size_t i = 0; i < serial.items.size(); ++i) {
        CHECK(serial.items[i].sy == parallel.items[i].sy);
        CHECK(serial.items[i].cy == parallel.items[i].cy);
    }
}
