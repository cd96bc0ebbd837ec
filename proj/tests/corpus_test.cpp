#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "scaladj/corpus.hpp"
#include "scaladj/error.hpp"
#include "scaladj/util.hpp"

using namespace scaladj;

namespace {

std::filesystem::path write_temp(const std::string& name, const std::string& content) {
    auto dir = std::filesystem::temp_directory_path() / "scaladj_corpus_tests";
    std::filesystem::create_directories(dir);
    auto path = dir / name;
    std::ofstream out(path, std::ios::trunc);
    out << content;
    return path;
}

const char* kFixtureScales = SCALADJ_SOURCE_DIR "/data/synthetic/scales.tsv";
const char* kFixtureContexts = SCALADJ_SOURCE_DIR "/data/synthetic/contexts.tsv";
const char* kFixtureSI = SCALADJ_SOURCE_DIR "/data/synthetic/si_items.csv";

}  // namespace

TEST_CASE("scale line parses groups and ties") {
    auto ds = parse_scale_dataset("quality\tgood < great = wonderful < awesome\n", "mem");
    REQUIRE(ds.scales.size() == 1);
    const auto& s = ds.scales[0];
    CHECK(s.scale_id == "quality");
    REQUIRE(s.groups.size() == 3);
    CHECK(s.groups[0] == std::vector<Adjective>{{"good"}});
    CHECK(s.groups[1] == std::vector<Adjective>{{"great"}, {"wonderful"}});
    CHECK(s.size() == 4);
    CHECK(s.mildest().surface == "good");
    CHECK(s.extreme().surface == "awesome");
}

TEST_CASE("scale parsing rejects bad input") {
    CHECK_THROWS_AS(parse_scale_dataset("x\tgood < good\n", "mem"), ParseError);
    CHECK_THROWS_AS(parse_scale_dataset("x\tgood\n", "mem"), ParseError);  // < 2 adjectives
    CHECK_THROWS_AS(parse_scale_dataset("x\tgood <\n", "mem"), ParseError);
    CHECK_THROWS_AS(parse_scale_dataset("x\t< good < great\n", "mem"), ParseError);
    CHECK_THROWS_AS(parse_scale_dataset("no-tab-here\n", "mem"), ParseError);
    CHECK_THROWS_AS(parse_scale_dataset("a\tgood < bad\nb\tok < fine\na\tx < y\n", "mem"),
                    ParseError);  // duplicate scale_id
    // multiword / uppercase tokens are rejected loudly, never normalized
    CHECK_THROWS_WITH_AS(parse_scale_dataset("x\tgood < very_good\n", "mem"),
                         doctest::Contains("very_good"), ParseError);
    CHECK_THROWS_AS(parse_scale_dataset("x\tGood < great\n", "mem"), ParseError);
}

TEST_CASE("hyphenated adjectives are accepted") {
    auto ds = parse_scale_dataset("x\tso-so < top-notch\n", "mem");
    CHECK(ds.scales[0].groups[0][0].surface == "so-so");
}

TEST_CASE("manifest mismatches fail loudly") {
    auto path = write_temp("wk.tsv", "a\tgood < great\nb\tbig < huge\n");
    CHECK_NOTHROW(load_scale_dataset(path, ScaleManifest{2, 2}));
    CHECK_THROWS_WITH_AS(load_scale_dataset(path, ScaleManifest{21, 61}),
                         doctest::Contains("manifest mismatch"), ValidationError);
    CHECK_THROWS_AS(load_scale_dataset(path, ScaleManifest{2, 61}), ValidationError);
}

TEST_CASE("dataset id defaults to the file stem") {
    auto path = write_temp("dm.tsv", "a\tgood < great\n");
    CHECK(load_scale_dataset(path).dataset_id == "dm");
    CHECK(load_scale_dataset(path, std::nullopt, "DM").dataset_id == "DM");
}

TEST_CASE("enumerate_pairs covers all combinations with relations") {
    auto ds = parse_scale_dataset("q\tgood < great = wonderful < awesome\n", "mem");
    auto pairs = enumerate_pairs(ds.scales[0]);
    CHECK(pairs.size() == 6);  // C(4,2)
    int equal = 0;
    for (const auto& p : pairs) equal += p.relation == PairRelation::Equal ? 1 : 0;
    CHECK(equal == 1);
    bool found_tie = false;
    for (const auto& p : pairs)
        found_tie |= p.first.surface == "great" && p.second.surface == "wonderful" &&
                     p.relation == PairRelation::Equal;
    CHECK(found_tie);

    auto two = parse_scale_dataset("t\tbig < huge\n", "mem");
    auto two_pairs = enumerate_pairs(two.scales[0]);
    REQUIRE(two_pairs.size() == 1);
    CHECK(two_pairs[0].relation == PairRelation::Less);
    CHECK(two_pairs[0].first.surface == "big");
}

TEST_CASE("pair count is C(n,2) on random scales") {
    SplitMix64 rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        std::size_t n = 2 + rng.uniform_index(7);
        HalfScale scale;
        scale.scale_id = "r";
        std::vector<Adjective> group;
        for (std::size_t i = 0; i < n; ++i) {
            group.push_back(Adjective{"w" + std::string(1, char('a' + i))});
            if (rng.uniform01() < 0.6 || i + 1 == n) {
                scale.groups.push_back(group);
                group.clear();
            }
        }
        CHECK(enumerate_pairs(scale).size() == n * (n - 1) / 2);
    }
}

TEST_CASE("distinct pairs deduplicate across scales") {
    auto ds = parse_scale_dataset("a\tgood < great\nb\tgood < great = fine\n", "mem");
    // per-scale pairs: (good,great) twice, (good,fine), (great,fine)
    CHECK(ds.distinct_pair_count() == 3);
}

TEST_CASE("serialize/load round-trips to a fixpoint") {
    std::string messy = "# comment\nq\t good <  great=wonderful  < awesome \nt\tbig<huge\n";
    auto ds = parse_scale_dataset(messy, "mem");
    std::string canonical = to_tsv(ds);
    auto reparsed = parse_scale_dataset(canonical, "mem2");
    CHECK(to_tsv(reparsed) == canonical);
    CHECK(canonical == "q\tgood < great = wonderful < awesome\nt\tbig < huge\n");
}

TEST_CASE("context sets load and validate against their scale dataset") {
    auto ds = load_scale_dataset(kFixtureScales);
    auto contexts = load_context_sets(kFixtureContexts, ds);
    REQUIRE(contexts.size() == 3);
    for (const auto& [id, set] : contexts) {
        CHECK(set.sentences.size() == kContextSentencesPerScale);
        CHECK(ds.find(id) != nullptr);
    }
}

TEST_CASE("context loader rejects bad placeholder counts and unknown scales") {
    auto ds = parse_scale_dataset("quality\tgood < great\n", "mem");
    auto no_placeholder = write_temp("ctx1.tsv", "quality\tno slot here\n");
    CHECK_THROWS_WITH_AS(load_context_sets(no_placeholder, ds), doctest::Contains("exactly once"),
                         ParseError);
    auto two_placeholders = write_temp("ctx2.tsv", "quality\t{ADJ} and {ADJ}\n");
    CHECK_THROWS_AS(load_context_sets(two_placeholders, ds), ParseError);
    auto unknown = write_temp("ctx3.tsv", "nope\tit is {ADJ} here\n");
    CHECK_THROWS_WITH_AS(load_context_sets(unknown, ds), doctest::Contains("unknown scale_id"),
                         ParseError);

    std::string nine;
    for (int i = 0; i < 9; ++i) nine += "quality\tsentence " + std::to_string(i) + " is {ADJ}\n";
    auto nine_path = write_temp("ctx4.tsv", nine);
    CHECK_THROWS_WITH_AS(load_context_sets(nine_path, ds), doctest::Contains("9 sentences"),
                         ValidationError);
}

TEST_CASE("substitution inserts the bare adjective and tracks its span") {
    auto sub = substitute_adjective("They are  {ADJ}  to sing.", Adjective{"thrilling"});
    CHECK(sub.text == "They are thrilling to sing.");
    CHECK(sub.text.substr(sub.span.begin, sub.span.end - sub.span.begin) == "thrilling");

    auto lead = substitute_adjective("{ADJ} weather ahead", Adjective{"hot"});
    CHECK(lead.text == "hot weather ahead");
    CHECK(lead.span.begin == 0);
}

TEST_CASE("si dataset loads with derived labels") {
    auto ds = load_si_dataset(kFixtureSI, SIManifest{10, 4, 6});
    CHECK(ds.items.size() == 10);
    CHECK(ds.yes_count() == 4);

    // boundary: exactly half the participants counts as yes
    const SIItem* boundary = nullptr;
    for (const auto& it : ds.items)
        if (it.item_id == "syn-03") boundary = &it;
    REQUIRE(boundary != nullptr);
    CHECK(boundary->proportion_yes == 0.5);
    CHECK(boundary->gold_label);

    // surprisal features all-or-none per item
    int with_features = 0;
    for (const auto& it : ds.items) with_features += it.string_surprisal.has_value() ? 1 : 0;
    CHECK(with_features == 9);
}

TEST_CASE("si loader rejects bad rows") {
    std::string header =
        "item_id,utterance,question_predicate,weak_adj,strong_adj,proportion_yes,"
        "string_surprisal,concept_surprisal\n";
    auto out_of_range = write_temp("si1.csv", header + "i1,\"u\",p,warm,hot,1.2,,\n");
    CHECK_THROWS_WITH_AS(load_si_dataset(out_of_range), doctest::Contains("out of range"),
                         ParseError);
    auto half_features = write_temp("si2.csv", header + "i1,\"u\",p,warm,hot,0.4,3.3,\n");
    CHECK_THROWS_WITH_AS(load_si_dataset(half_features), doctest::Contains("both present"),
                         ParseError);
    auto missing_column = write_temp("si3.csv", "item_id,utterance\ni1,u\n");
    CHECK_THROWS_WITH_AS(load_si_dataset(missing_column),
                         doctest::Contains("missing required column"), ParseError);
    auto dup =
        write_temp("si4.csv", header + "i1,\"u\",p,warm,hot,0.4,,\ni1,\"v\",q,big,huge,0.2,,\n");
    CHECK_THROWS_WITH_AS(load_si_dataset(dup), doctest::Contains("duplicate item_id"),
                         ValidationError);
}

TEST_CASE("si manifests catch drift") {
    CHECK_THROWS_WITH_AS(load_si_dataset(kFixtureSI, SIManifest{50, 13, 37}),
                         doctest::Contains("manifest mismatch"), ValidationError);
}

TEST_CASE("si json format loads the same fields") {
    auto json_path = write_temp("si.json", R"([
      {"item_id":"j1","utterance":"The soup is warm.","question_predicate":"the soup is not hot",
       "weak_adj":"warm","strong_adj":"hot","proportion_yes":0.5},
      {"item_id":"j2","utterance":"Fine.","question_predicate":"not good",
       "weak_adj":"fine","strong_adj":"good","proportion_yes":0.25,
       "string_surprisal":1.5,"concept_surprisal":2.5}
    ])");
    auto ds = load_si_dataset(json_path);
    REQUIRE(ds.items.size() == 2);
    CHECK(ds.items[0].gold_label);
    CHECK_FALSE(ds.items[1].gold_label);
    CHECK(ds.items[1].concept_surprisal == 2.5);
}

TEST_CASE("si csv round-trips through serialization") {
    auto ds = load_si_dataset(kFixtureSI);
    auto path = write_temp("si_rt.csv", to_csv(ds));
    auto reloaded = load_si_dataset(path);
    REQUIRE(reloaded.items.size() == ds.items.size());
    for (std::size_t i = 0; i < ds.items.size(); ++i) {
        CHECK(reloaded.items[i].item_id == ds.items[i].item_id);
        CHECK(reloaded.items[i].utterance == ds.items[i].utterance);
        CHECK(reloaded.items[i].proportion_yes == ds.items[i].proportion_yes);
        CHECK(reloaded.items[i].gold_label == ds.items[i].gold_label);
        CHECK(reloaded.items[i].string_surprisal == ds.items[i].string_surprisal);
    }
}

TEST_CASE("gold label is a pure threshold at 0.5 inclusive") {
    std::string header =
        "item_id,utterance,question_predicate,weak_adj,strong_adj,proportion_yes\n";
    auto path = write_temp("si_thresh.csv", header +
                                                "a,\"u\",p,warm,hot,0.4999\n"
                                                "b,\"u\",p,warm,hot,0.5\n"
                                                "c,\"u\",p,warm,hot,0.5001\n");
    auto ds = load_si_dataset(path);
    CHECK_FALSE(ds.items[0].gold_label);
    CHECK(ds.items[1].gold_label);
    CHECK(ds.items[2].gold_label);
}
