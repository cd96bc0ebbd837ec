#pragma once

#include <filesystem>
#include <unordered_map>

#include "scaladj/backend.hpp"

namespace scaladj {

/// Offline phrase-frequency backend (TSV `phrase<TAB>count`). Lookups are
/// total: an absent phrase scores frequency 0 / infinite perplexity.
class NgramTableBackend : public Backend {
public:
    explicit NgramTableBackend(const std::filesystem::path& path);

    const BackendDescriptor& descriptor() const override { return descriptor_; }

    SequenceScore sequence_score(const std::string& text) const override;
    std::vector<ScoredWord> topk_next_words(const std::string& prefix, int k) const override;

    double frequency(const std::string& phrase) const;

private:
    static std::string normalize(const std::string& phrase);

    BackendDescriptor descriptor_;
    std::unordered_map<std::string, double> counts_;
    // prefix (all words but the last) -> continuations, for completion probes
    std::unordered_map<std::string, std::vector<ScoredWord>> continuations_;
};

}  // namespace scaladj
