#include <cmath>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "scaladj/backends/static_vectors.hpp"
#include "scaladj/direct_probes.hpp"
#include "scaladj/error.hpp"
#include "scaladj/util.hpp"
#include "support/mock_backends.hpp"
#include "support/oracles.hpp"

using namespace scaladj;
using scaladj::testing::PiecewiseLexicon;

namespace {

const char* kScales = SCALADJ_SOURCE_DIR "/data/synthetic/scales.tsv";
const char* kDvecScales = SCALADJ_SOURCE_DIR "/data/synthetic/dvec_scales.tsv";
const char* kContexts = SCALADJ_SOURCE_DIR "/data/synthetic/contexts.tsv";
const char* kVectors = SCALADJ_SOURCE_DIR "/data/synthetic/vectors.vec";

ScaleReps reps_from(const std::string& scale_id, const std::vector<Adjective>& adjectives,
                    const std::vector<std::vector<double>>& vectors, int layer_count = 1) {
    ScaleReps reps(scale_id, adjectives, layer_count, RepMode::ShuffleBind, 0);
    for (int layer = 1; layer <= layer_count; ++layer)
        for (std::size_t i = 0; i < adjectives.size(); ++i) reps.vec(layer, i) = vectors[i];
    return reps;
}

}  // namespace

TEST_CASE("scale vector sums the canonical endpoints") {
    auto ds = parse_scale_dataset("s\tadequate < fine < fitting < good\n", "mem");
    const auto& scale = ds.scales[0];
    auto reps = reps_from("s", scale.all_adjectives(),
                          {{1.0, 0.0}, {0.3, 0.3}, {0.4, 0.4}, {0.0, 1.0}});
    CHECK(build_scale_vector(reps, scale, 1) == std::vector<double>{1.0, 1.0});

    auto two = parse_scale_dataset("t\tbig < huge\n", "mem");
    auto two_reps = reps_from("t", two.scales[0].all_adjectives(), {{1.0, 2.0}, {3.0, 4.0}});
    CHECK(build_scale_vector(two_reps, two.scales[0], 1) == std::vector<double>{4.0, 6.0});

    // tied strongest group: the first-listed member is the canonical endpoint
    auto tied = parse_scale_dataset("u\tok < good = great\n", "mem");
    auto tied_reps =
        reps_from("u", tied.scales[0].all_adjectives(), {{1.0, 0.0}, {0.0, 2.0}, {9.0, 9.0}});
    CHECK(tied.scales[0].extreme().surface == "good");
    CHECK(build_scale_vector(tied_reps, tied.scales[0], 1) == std::vector<double>{1.0, 2.0});
}

TEST_CASE("rank_membership orders by cosine with worst-rank ties") {
    std::string ids[3] = {"first", "second", "third"};
    std::vector<std::vector<double>> vecs = {{1.0, 0.0}, {0.0, 1.0}, {1.0, 1.0}};
    std::vector<ScaleVectorEntry> entries;
    for (int i = 0; i < 3; ++i) entries.push_back({&ids[i], &vecs[i]});

    std::vector<double> own = {1.0, 0.0};
    CHECK(rank_membership(own, entries, "first") == 1);

    // cosines: first 1.0, third ~0.707, second 0.0 -> "second" ranks 3rd
    CHECK(rank_membership(own, entries, "second") == 3);

    // tie at the top: diag vector is equidistant from first and second
    std::vector<double> diag = {1.0, 1.0};
    CHECK(rank_membership(diag, entries, "third") == 1);
    std::vector<ScaleVectorEntry> two = {entries[0], entries[1]};
    CHECK(rank_membership(diag, two, "first") == 2);  // tied with "second": worst rank
    CHECK(rank_membership(diag, two, "second") == 2);

    std::vector<double> zero = {0.0, 0.0};
    CHECK(rank_membership(zero, entries, "first") == 0);  // flagged
    CHECK_THROWS_AS(rank_membership(own, entries, "absent"), ValidationError);
}

TEST_CASE("membership probe on the orthogonal fixture is perfect at every layer") {
    auto dataset = load_scale_dataset(kScales);
    auto contexts = load_context_sets(kContexts, dataset);
    auto backend = load_mock_lexicon(kVectors, 4);

    DirectProbeOptions opts;
    opts.seeds = {0, 1, 2};
    auto result = membership_mrr(*backend, dataset, contexts, opts);
    CHECK(result.per_layer.size() == 4);
    for (const auto& layer : result.per_layer) {
        CHECK(layer.mean == 1.0);
        CHECK(layer.stddev == 0.0);
    }
    CHECK(result.mean == 1.0);
    CHECK(result.outcomes.size() == dataset.total_adjectives());
    for (const auto& o : result.outcomes)
        for (int r : o.rank_per_seed) CHECK(r == 1);

    auto all_members = membership_all_members(*backend, dataset, contexts, opts);
    CHECK(all_members.mean == 1.0);
}

TEST_CASE("membership mrr matches hand-built rank expectations") {
    // two scales along different axes plus a shared direction: the probe word
    // of scale b is closer to scale a's vector
    PiecewiseLexicon backend({
        {"aa", {{1.0, 0.0, 0.0}}},
        {"ab", {{0.9, 0.0, 0.1}}},
        {"ba", {{0.8, 0.1, 0.0}}},
        {"bb", {{0.0, 1.0, 0.0}}},
        {"ctx", {{0.0, 0.0, 0.0}}},
    });
    auto dataset = parse_scale_dataset("a\taa < ab\nb\tba < bb\n", "mem");
    ContextMap contexts;
    for (const auto& s : dataset.scales) {
        ContextSet set;
        set.scale_id = s.scale_id;
        for (std::size_t i = 0; i < kContextSentencesPerScale; ++i)
            set.sentences.push_back("ctx {ADJ} ctx");
        contexts[s.scale_id] = set;
    }
    DirectProbeOptions opts;
    opts.seeds = {0};
    auto result = membership_mrr(backend, dataset, contexts, opts);
    // scale vectors: a = (1.9, 0, .1), b = (.8, 1.1, 0)
    // "ba" = (.8,.1,0): cos to a ≈ .988, cos to b ≈ .966 -> rank 2
    // everything else ranks its own scale first: ranks {1,1,2,1}
    CHECK(result.mean == doctest::Approx((1.0 + 1.0 + 0.5 + 1.0) / 4.0).epsilon(1e-12));
}

TEST_CASE("all-members variant skips the probed occurrence on its own scale") {
    // "loner" sits far from its scale-mate; with the self-skip the own-scale
    // score is cos to the mate alone
    PiecewiseLexicon backend({
        {"loner", {{1.0, 0.0}}},
        {"mate", {{0.0, 1.0}}},
        {"xa", {{0.9, 0.45}}},
        {"xb", {{0.9, 0.4}}},
        {"ctx", {{0.0, 0.0}}},
    });
    auto dataset = parse_scale_dataset("own\tloner < mate\nother\txa < xb\n", "mem");
    ContextMap contexts;
    for (const auto& s : dataset.scales) {
        ContextSet set;
        set.scale_id = s.scale_id;
        for (std::size_t i = 0; i < kContextSentencesPerScale; ++i)
            set.sentences.push_back("ctx {ADJ} ctx");
        contexts[s.scale_id] = set;
    }
    DirectProbeOptions opts;
    opts.seeds = {0};
    auto result = membership_all_members(backend, dataset, contexts, opts);
    // for "loner": own-scale score = cos(loner, mate) = 0; other-scale score
    // is the mean cosine to xa/xb (≈ .9) -> rank 2
    const MembershipOutcome* loner = nullptr;
    for (const auto& o : result.outcomes)
        if (o.adjective == "loner") loner = &o;
    REQUIRE(loner != nullptr);
    CHECK(loner->rank_per_seed[0] == 2);
}

TEST_CASE("dvec construction and preconditions") {
    auto src = parse_scale_dataset("p\tmild < strong\nq\tsoft < harsh\n", "mem", std::nullopt,
                                   "SRC");
    std::vector<ScaleReps> reps;
    reps.push_back(
        reps_from("p", src.scales[0].all_adjectives(), {{1.0, 0.0}, {2.0, 0.0}}));
    reps.push_back(
        reps_from("q", src.scales[1].all_adjectives(), {{0.0, 1.0}, {0.0, 2.0}}));
    // differences: (1,0) and (0,1) -> mean (0.5, 0.5)
    CHECK(build_dvec_from_reps(reps, src, 1) == std::vector<double>{0.5, 0.5});

    PiecewiseLexicon backend({{"mild", {{1.0, 0.0}}},
                              {"strong", {{2.0, 0.0}}},
                              {"soft", {{0.0, 1.0}}},
                              {"harsh", {{0.0, 2.0}}}});
    auto built = build_dvec(backend, src, "EVAL", RepMode::ShuffleBind, nullptr, 1,
                            PoolingMode::Mean, 0);
    CHECK(built.vector == std::vector<double>{0.5, 0.5});
    CHECK(built.source_dataset == "SRC");
    CHECK(built.excluded_dataset == "EVAL");

    CHECK_THROWS_AS(build_dvec(backend, src, "SRC", RepMode::ShuffleBind, nullptr, 1,
                               PoolingMode::Mean, 0),
                    ConfigError);

    // single source scale: dvec is the bare endpoint difference
    auto one = parse_scale_dataset("p\tmild < strong\n", "mem", std::nullopt, "ONE");
    std::vector<ScaleReps> one_reps;
    one_reps.push_back(reps_from("p", one.scales[0].all_adjectives(), {{1.0, 0.0}, {2.0, 0.0}}));
    CHECK(build_dvec_from_reps(one_reps, one, 1) == std::vector<double>{1.0, 0.0});
}

TEST_CASE("rank_intensity orders by cosine with exact ties") {
    auto ds = parse_scale_dataset("s\tca < cb < cc\n", "mem");
    const auto& scale = ds.scales[0];
    auto reps = reps_from("s", scale.all_adjectives(), {{1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}});
    IntensityVector dvec{"SRC", "EVAL", 1, {1.0, 0.0}};

    auto ranking = rank_intensity(scale, reps, dvec);
    // cosines: ca = 1, cb ≈ 0.707, cc = 0 -> strictly ordered, ca on top
    REQUIRE(ranking.groups.size() == 3);
    CHECK(ranking.groups[0][0].surface == "ca");
    CHECK(ranking.groups[1][0].surface == "cb");
    CHECK(ranking.groups[2][0].surface == "cc");
    CHECK(ranking.cosines[0] == doctest::Approx(1.0));
    CHECK(ranking.cosines[1] == doctest::Approx(std::sqrt(0.5)));
    CHECK(ranking.cosines[2] == doctest::Approx(0.0));

    // cosine is scale-invariant: (2,0) and (1,0) tie exactly
    auto tied_reps = reps_from("s", scale.all_adjectives(), {{2.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}});
    auto tied = rank_intensity(scale, tied_reps, dvec);
    REQUIRE(tied.groups.size() == 2);
    CHECK(tied.groups[0].size() == 2);

    // all equal cosines collapse to a single group
    auto same = reps_from("s", scale.all_adjectives(), {{1.0, 0.0}, {2.0, 0.0}, {3.0, 0.0}});
    CHECK(rank_intensity(scale, same, dvec).groups.size() == 1);
}

TEST_CASE("intensity_eval is perfect on the fixture and rejects source == eval") {
    auto eval_set = load_scale_dataset(kScales);
    auto dvec_set = load_scale_dataset(kDvecScales);
    auto backend = load_mock_lexicon(kVectors, 4);

    DirectProbeOptions opts;
    opts.mode = RepMode::ShuffleBind;
    opts.seeds = {0, 1};
    auto result = intensity_eval(*backend, eval_set, dvec_set, nullptr, nullptr, opts);
    CHECK(result.pacc_mean == 1.0);
    CHECK(result.tau_mean == 1.0);
    CHECK(result.rho_mean == 1.0);
    CHECK(result.pacc_std == 0.0);
    CHECK(result.verdicts.size() == 10);  // 3 + 6 + 1 gold pairs
    for (const auto& v : result.verdicts) CHECK(v.correct);

    CHECK_THROWS_AS(intensity_eval(*backend, eval_set, eval_set, nullptr, nullptr, opts), ConfigError);
}

TEST_CASE("intensity_eval separate-contexts mode matches on a context-free backend") {
    auto eval_set = load_scale_dataset(kScales);
    auto dvec_set = load_scale_dataset(kDvecScales);
    auto backend = load_mock_lexicon(kVectors, 2);
    auto eval_contexts = load_context_sets(kContexts, eval_set);
    // the dvec dataset needs its own context sets in this mode
    ContextMap dvec_contexts;
    for (const auto& s : dvec_set.scales) {
        ContextSet set;
        set.scale_id = s.scale_id;
        for (std::size_t i = 0; i < kContextSentencesPerScale; ++i)
            set.sentences.push_back("sample " + std::to_string(i) + " felt {ADJ} then");
        dvec_contexts[s.scale_id] = set;
    }

    DirectProbeOptions opts;
    opts.mode = RepMode::InContext;
    opts.seeds = {0};
    auto result =
        intensity_eval(*backend, eval_set, dvec_set, &eval_contexts, &dvec_contexts, opts);
    CHECK(result.pacc_mean == 1.0);
    CHECK(result.mode == RepMode::InContext);

    CHECK_THROWS_AS(intensity_eval(*backend, eval_set, dvec_set, nullptr, nullptr, opts),
                    ValidationError);
}

TEST_CASE("positive scaling of representations changes nothing downstream") {
    auto ds = parse_scale_dataset("s\tca < cb < cc\n", "mem");
    const auto& scale = ds.scales[0];
    std::vector<std::vector<double>> base = {{0.3, 0.1}, {0.5, 0.4}, {0.2, 0.9}};
    IntensityVector dvec{"SRC", "EVAL", 1, {0.7, 0.7}};

    auto plain = rank_intensity(scale, reps_from("s", scale.all_adjectives(), base), dvec);
    std::vector<std::vector<double>> scaled = base;
    for (auto& v : scaled) scale_inplace(v, 37.5);
    auto scaled_ranking =
        rank_intensity(scale, reps_from("s", scale.all_adjectives(), scaled), dvec);
    CHECK(plain.groups == scaled_ranking.groups);

    // scaling all endpoint reps by c scales dvec by c (linearity)
    auto src = parse_scale_dataset("p\tmild < strong\n", "mem", std::nullopt, "SRC");
    std::vector<ScaleReps> reps;
    reps.push_back(reps_from("p", src.scales[0].all_adjectives(), {{1.0, 2.0}, {4.0, 3.0}}));
    auto d1 = build_dvec_from_reps(reps, src, 1);
    std::vector<ScaleReps> reps_scaled;
    reps_scaled.push_back(
        reps_from("p", src.scales[0].all_adjectives(), {{2.0, 4.0}, {8.0, 6.0}}));
    auto d2 = build_dvec_from_reps(reps_scaled, src, 1);
    for (std::size_t i = 0; i < d1.size(); ++i) CHECK(d2[i] == doctest::Approx(2.0 * d1[i]));
}

TEST_CASE("zero-vector representations are flagged and excluded with warnings") {
    PiecewiseLexicon backend({
        {"za", {{0.0, 0.0}}},  // zero vector: cosine undefined
        {"zb", {{1.0, 0.0}}},
        {"ok", {{0.5, 0.5}}},
        {"okk", {{0.4, 0.6}}},
        {"ctx", {{0.0, 0.0}}},
    });
    auto dataset = parse_scale_dataset("z\tza < zb\nw\tok < okk\n", "mem");
    ContextMap contexts;
    for (const auto& s : dataset.scales) {
        ContextSet set;
        set.scale_id = s.scale_id;
        for (std::size_t i = 0; i < kContextSentencesPerScale; ++i)
            set.sentences.push_back("ctx {ADJ} ctx");
        contexts[s.scale_id] = set;
    }
    DirectProbeOptions opts;
    opts.seeds = {0};
    auto result = membership_mrr(backend, dataset, contexts, opts);
    bool flagged_warning = false;
    for (const auto& w : result.warnings)
        flagged_warning |= w.find("flagged") != std::string::npos;
    CHECK(flagged_warning);
    // the zero-vector occurrence carries rank 0 in the outcomes
    for (const auto& o : result.outcomes)
        if (o.adjective == "za") CHECK(o.rank_per_seed[0] == 0);
}

TEST_CASE("missing static vectors skip the scale with a warning") {
    auto dir = std::filesystem::temp_directory_path() / "scaladj_probe_tests";
    std::filesystem::create_directories(dir);
    auto vec_path = dir / "partial.vec";
    {
        std::ofstream out(vec_path, std::ios::trunc);
        out << "aa 1 0\nab 2 0\nctx 0 0\n";  // scale b's words missing
    }
    auto backend = load_static_vectors(vec_path);
    auto dataset = parse_scale_dataset("a\taa < ab\nb\tmissing < absent\n", "mem");
    ContextMap contexts;
    for (const auto& s : dataset.scales) {
        ContextSet set;
        set.scale_id = s.scale_id;
        for (std::size_t i = 0; i < kContextSentencesPerScale; ++i)
            set.sentences.push_back("ctx {ADJ} ctx");
        contexts[s.scale_id] = set;
    }
    DirectProbeOptions opts;
    opts.seeds = {0};
    auto result = membership_mrr(*backend, dataset, contexts, opts);
    REQUIRE(!result.warnings.empty());
    CHECK(result.warnings[0].find("skipped") != std::string::npos);
    // ranking happened over the one surviving scale
    CHECK(result.mean == 1.0);
}

TEST_CASE("best layer is selected by mean metric") {
    // layer 2 ranks perfectly, layer 1 is noise: scaled layer embeddings
    PiecewiseLexicon backend(
        {
            {"aa", {{1.0, 0.0, 0.02}}},
            {"ab", {{0.9, 0.0, 0.05}}},
            {"ba", {{0.0, 1.0, 0.02}}},
            {"bb", {{0.0, 0.9, 0.05}}},
            {"ctx", {{0.0, 0.0, 0.0}}},
        },
        2, {0.0, 1.0});  // layer 1 collapses everything to zero vectors
    auto dataset = parse_scale_dataset("a\taa < ab\nb\tba < bb\n", "mem");
    ContextMap contexts;
    for (const auto& s : dataset.scales) {
        ContextSet set;
        set.scale_id = s.scale_id;
        for (std::size_t i = 0; i < kContextSentencesPerScale; ++i)
            set.sentences.push_back("ctx {ADJ} ctx");
        contexts[s.scale_id] = set;
    }
    DirectProbeOptions opts;
    opts.seeds = {0};
    // layer 1 has no rankable occurrences at all (all zero vectors) ->
    // restrict to layer 2 via the layers option and confirm selection metadata
    opts.layers = {2};
    auto result = membership_mrr(backend, dataset, contexts, opts);
    CHECK(result.best_layer == 2);
    CHECK(result.mean == 1.0);
}
