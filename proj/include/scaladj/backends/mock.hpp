#pragma once

#include <unordered_map>

#include "scaladj/backend.hpp"
#include "scaladj/templates.hpp"

namespace scaladj {

/// Sequence scorer built from a gold scale dataset: every felicitous template
/// instantiation of a gold pair scores perplexity 1, the swapped order 2, and
/// both orders of a tied pair score 1. Unknown strings are an error so probe
/// and table cannot drift apart silently.
class GoldIntensityScorer : public Backend {
public:
    GoldIntensityScorer(const ScaleDataset& dataset, const std::vector<Template>& templates);

    const BackendDescriptor& descriptor() const override { return descriptor_; }
    SequenceScore sequence_score(const std::string& text) const override;

private:
    BackendDescriptor descriptor_;
    std::unordered_map<std::string, double> perplexities_;
};

/// Deterministic pseudo-random embeddings; exists for benchmarks and property
/// tests that need a cheap context-sensitive encoder. Each token's vector is
/// derived from (word, layer) and, optionally, the surrounding text.
class HashEmbeddingBackend : public Backend {
public:
    HashEmbeddingBackend(int dims, int num_layers, bool context_sensitive);

    const BackendDescriptor& descriptor() const override { return descriptor_; }
    LayerEmbeddings embed_tokens(const std::string& text,
                                 std::span<const CharSpan> targets) const override;

private:
    BackendDescriptor descriptor_;
    bool context_sensitive_;
};

/// Deterministic yes/no answerer with a tunable yes-bias; stand-in for an
/// instruction-tuned model in smoke runs of the diversity probe.
class HashAnswerBackend : public Backend {
public:
    explicit HashAnswerBackend(double yes_bias = 1.0, std::uint64_t salt = 0);

    const BackendDescriptor& descriptor() const override { return descriptor_; }
    std::map<std::string, double> answer_probabilities(
        const std::string& prompt, std::span<const std::string> answers) const override;

private:
    BackendDescriptor descriptor_;
    double yes_bias_;
    std::uint64_t salt_;
};

}  // namespace scaladj
