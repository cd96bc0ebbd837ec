#pragma once

#include <memory>
#include <mutex>

#include "scaladj/backend.hpp"

namespace scaladj {

/// Adapter for neural models served over a small JSON/HTTP protocol
/// (see tools/bridge_server.py for the reference server):
///   GET  /describe             -> descriptor fields
///   POST /embed_tokens         {text, targets:[[b,e],..]} -> {layers:[[[[f..]..]..]..]}
///   POST /fill_mask_topk       {text, k}        -> {candidates:[[word,p],..]}
///   POST /topk_next_words      {prefix, k}      -> {candidates:[[word,s],..]}
///   POST /sequence_logprobs    {text}           -> {token_logprobs:[..]}
///   POST /answer_probabilities {prompt, answers}-> {probabilities:{word:p,..}}
/// Perplexity / pseudo-perplexity aggregation happens client-side from the
/// per-token log-probs.
class HttpBackend : public Backend {
public:
    explicit HttpBackend(const std::string& base_url);
    ~HttpBackend() override;

    const BackendDescriptor& descriptor() const override { return descriptor_; }

    LayerEmbeddings embed_tokens(const std::string& text,
                                 std::span<const CharSpan> targets) const override;
    std::vector<ScoredWord> fill_mask_topk(const std::string& text, int k) const override;
    std::vector<ScoredWord> topk_next_words(const std::string& prefix, int k) const override;
    SequenceScore sequence_score(const std::string& text) const override;
    std::map<std::string, double> answer_probabilities(
        const std::string& prompt, std::span<const std::string> answers) const override;

private:
    std::string post(const std::string& route, const std::string& body) const;

    BackendDescriptor descriptor_;
    struct Client;
    std::unique_ptr<Client> client_;
    mutable std::mutex mutex_;  // one in-flight request at a time
};

/// Mean-log-prob and perplexity from per-token log-probabilities. Shared by
/// the HTTP adapter and the in-process masked mocks.
SequenceScore aggregate_token_logprobs(std::span<const double> token_logprobs);

}  // namespace scaladj
