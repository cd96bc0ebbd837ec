#pragma once

#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "scaladj/corpus.hpp"

namespace scaladj {

enum class BackendFamily { MaskedEncoder, Causal, Seq2Seq, StaticVector, NgramTable };

std::string family_name(BackendFamily f);
BackendFamily family_from_name(const std::string& name);

struct BackendDescriptor {
    std::string backend_id;
    BackendFamily family = BackendFamily::MaskedEncoder;
    int num_layers = 1;    // static-vector and ngram-table backends report 1
    int hidden_size = 1;
    std::string mask_token = "[MASK]";
    // When false the runner serializes every call to this backend.
    bool thread_safe = true;
};

/// Token indices covering one target occurrence in one tokenized input.
struct TokenSpan {
    std::size_t first = 0;
    std::size_t last = 0;  // inclusive
};

// embed_tokens result shape: [layer][target][token][dim].
using TokenMatrix = std::vector<std::vector<double>>;
using TargetEmbeddings = std::vector<TokenMatrix>;
using LayerEmbeddings = std::vector<TargetEmbeddings>;

struct ScoredWord {
    std::string word;
    double score = 0.0;
};

struct SequenceScore {
    double log_prob_per_token = 0.0;
    double perplexity = 1.0;  // exp(-log_prob_per_token)
    int num_tokens = 0;
};

/// Scoring contract shared by every backend family. Operations a family does
/// not support throw BackendError. All calls are deterministic and stateless.
class Backend {
public:
    virtual ~Backend() = default;

    virtual const BackendDescriptor& descriptor() const = 0;

    /// Per-layer vectors of the tokens covering each target character span.
    virtual LayerEmbeddings embed_tokens(const std::string& text,
                                         std::span<const CharSpan> targets) const;

    /// Top-k fillers for the single mask token in `text`, best first.
    virtual std::vector<ScoredWord> fill_mask_topk(const std::string& text, int k) const;

    /// k best complete-word continuations of `prefix`, best first. Only
    /// standalone lowercase alphabetic words are returned, so the list may be
    /// shorter than k.
    virtual std::vector<ScoredWord> topk_next_words(const std::string& prefix, int k) const;

    /// Likelihood of the whole text. Masked encoders mask each token in turn
    /// (pseudo-perplexity); n-gram tables report stored frequency (0 when the
    /// phrase is absent, mapped to infinite perplexity).
    virtual SequenceScore sequence_score(const std::string& text) const;

    /// Probability of each answer word as the immediate continuation of the
    /// prompt, summed over casing / leading-space variants.
    virtual std::map<std::string, double> answer_probabilities(
        const std::string& prompt, std::span<const std::string> answers) const;

protected:
    [[noreturn]] void unsupported(const std::string& op) const;
};

using BackendPtr = std::shared_ptr<const Backend>;

/// Whitespace/punctuation tokenizer used by the table-driven backends: tokens
/// are maximal runs of alphanumerics, apostrophes and hyphens.
struct SimpleToken {
    std::string text;
    CharSpan span;
};
std::vector<SimpleToken> simple_tokenize(const std::string& text);

/// Tokens whose span overlaps the target span. Empty result means the target
/// is misaligned with the tokenizer.
std::vector<std::size_t> tokens_covering(const std::vector<SimpleToken>& tokens, CharSpan target);

}  // namespace scaladj
