#pragma once

#include <compare>
#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace scaladj {

/// A single scalar adjective. Lowercase ASCII letters and hyphens only.
struct Adjective {
    std::string surface;
    auto operator<=>(const Adjective&) const = default;
};

/// Throws ValidationError unless `token` is a well-formed adjective.
Adjective make_adjective(const std::string& token);

/// One half-scale: tie-groups ordered from weakest to strongest. Adjectives
/// within a group are equally intense; groups are strictly ordered.
struct HalfScale {
    std::string scale_id;
    std::vector<std::vector<Adjective>> groups;

    std::vector<Adjective> all_adjectives() const;
    std::size_t size() const;

    // Canonical endpoints: first-listed member of the extreme groups.
    const Adjective& mildest() const { return groups.front().front(); }
    const Adjective& extreme() const { return groups.back().front(); }

    // Tie-group index of an adjective (0 = weakest), or -1 if absent.
    int level_of(const Adjective& a) const;
};

struct ScaleDataset {
    std::string dataset_id;
    std::vector<HalfScale> scales;

    const HalfScale* find(const std::string& scale_id) const;
    std::size_t total_adjectives() const;
    // Unordered surface-form pairs, deduplicated across scales.
    std::size_t distinct_pair_count() const;
};

struct ScaleManifest {
    std::size_t scale_count = 0;
    std::size_t distinct_pair_count = 0;
};

/// Sentence templates shared by all adjectives of one half-scale. Each
/// sentence contains the placeholder token exactly once.
struct ContextSet {
    std::string scale_id;
    std::vector<std::string> sentences;  // exactly kContextSentencesPerScale
};

inline constexpr const char* kAdjectivePlaceholder = "{ADJ}";
inline constexpr std::size_t kContextSentencesPerScale = 10;

using ContextMap = std::map<std::string, ContextSet>;

struct CharSpan {
    std::size_t begin = 0;
    std::size_t end = 0;  // exclusive
};

/// Placeholder replaced by the bare adjective; runs of spaces collapsed.
/// Returns the instantiated sentence and the character span of the adjective.
struct Substitution {
    std::string text;
    CharSpan span;
};
Substitution substitute_adjective(const std::string& sentence, const Adjective& adj);

/// One scalar-implicature trial.
struct SIItem {
    std::string item_id;
    std::string utterance;            // the speaker's weak claim
    std::string question_predicate;   // the "not STRONG" paraphrase
    Adjective weak_adj;
    Adjective strong_adj;
    double proportion_yes = 0.0;      // in [0,1]
    bool gold_label = false;          // derived: proportion_yes >= 0.5
    std::optional<double> string_surprisal;
    std::optional<double> concept_surprisal;
};

struct SIManifest {
    std::size_t total = 0;
    std::size_t yes = 0;
    std::size_t no = 0;
};

struct SIDataset {
    std::string dataset_id;
    std::vector<SIItem> items;

    std::size_t yes_count() const;
};

enum class PairRelation { Less, Equal };  // '<' / '=' between the listed pair

struct GoldPair {
    Adjective first;   // the weaker one for Less; listed order for Equal
    Adjective second;
    PairRelation relation = PairRelation::Less;
};

/// All unordered pairs on a scale with their gold relation. C(n,2) entries.
std::vector<GoldPair> enumerate_pairs(const HalfScale& scale);

// ---- loaders / serializers --------------------------------------------------
// All text formats are UTF-8; lines starting with '#' are ignored.

/// TSV, one half-scale per line: `scale_id<TAB>adj1 < adj2 = adj3 < adj4`.
/// `dataset_id` defaults to the file stem. A manifest, when given, is enforced.
ScaleDataset load_scale_dataset(const std::filesystem::path& path,
                                std::optional<ScaleManifest> manifest = std::nullopt,
                                std::string dataset_id = "");

/// TSV `scale_id<TAB>sentence with {ADJ}`; exactly 10 sentences per scale,
/// every scale_id must exist in `scales`.
ContextMap load_context_sets(const std::filesystem::path& path, const ScaleDataset& scales);

/// CSV (header row) or JSON array with the SIItem fields. gold_label is
/// derived from proportion_yes, never read from the file.
SIDataset load_si_dataset(const std::filesystem::path& path,
                          std::optional<SIManifest> manifest = std::nullopt,
                          std::string dataset_id = "");

std::string to_tsv(const ScaleDataset& dataset);
std::string to_tsv(const ContextMap& contexts);
std::string to_csv(const SIDataset& dataset);

ScaleDataset parse_scale_dataset(const std::string& text, const std::string& origin,
                                 std::optional<ScaleManifest> manifest = std::nullopt,
                                 std::string dataset_id = "");
SIDataset parse_si_csv(const std::string& text, const std::string& origin,
                       std::string dataset_id = "");

}  // namespace scaladj
