#include "scaladj/backends/mock.hpp"

#include <cmath>

#include "scaladj/error.hpp"
#include "scaladj/util.hpp"

namespace scaladj {

GoldIntensityScorer::GoldIntensityScorer(const ScaleDataset& dataset,
                                         const std::vector<Template>& templates) {
    descriptor_.backend_id = "mock-gold-scorer:" + dataset.dataset_id;
    descriptor_.family = BackendFamily::Causal;
    descriptor_.num_layers = 1;

    auto add = [this](const std::string& text, double ppl) {
        auto [it, inserted] = perplexities_.emplace(text, ppl);
        if (!inserted && it->second != ppl) it->second = std::min(it->second, ppl);
    };
    for (const auto& t : templates) {
        if (t.category != TemplateCategory::Intensity) continue;
        for (const auto& scale : dataset.scales) {
            for (const auto& pair : enumerate_pairs(scale)) {
                const auto& weak = pair.first.surface;
                const auto& strong = pair.second.surface;
                // Slot assignment by role: the weak word fills the ADJ_weak
                // slot regardless of the slots' surface order.
                std::string felicitous = instantiate(t, weak, strong);
                std::string swapped = instantiate(t, strong, weak);
                if (pair.relation == PairRelation::Equal) {
                    add(felicitous, 1.0);
                    add(swapped, 1.0);
                } else {
                    add(felicitous, 1.0);
                    add(swapped, 2.0);
                }
            }
        }
    }
}

SequenceScore GoldIntensityScorer::sequence_score(const std::string& text) const {
    auto it = perplexities_.find(text);
    if (it == perplexities_.end())
        throw BackendError("gold scorer has no entry for: " + text);
    SequenceScore s;
    s.perplexity = it->second;
    s.log_prob_per_token = -std::log(it->second);
    s.num_tokens = static_cast<int>(split(text, ' ').size());
    return s;
}

HashEmbeddingBackend::HashEmbeddingBackend(int dims, int num_layers, bool context_sensitive)
    : context_sensitive_(context_sensitive) {
    if (dims < 1 || num_layers < 1)
        throw ValidationError("hash backend needs dims >= 1 and layers >= 1");
    descriptor_.backend_id = "mock-hash:dims=" + std::to_string(dims) +
                             "&layers=" + std::to_string(num_layers) +
                             "&context=" + (context_sensitive ? "1" : "0");
    descriptor_.family = BackendFamily::MaskedEncoder;
    descriptor_.num_layers = num_layers;
    descriptor_.hidden_size = dims;
}

LayerEmbeddings HashEmbeddingBackend::embed_tokens(const std::string& text,
                                                   std::span<const CharSpan> targets) const {
    auto tokens = simple_tokenize(text);
    std::uint64_t text_salt = context_sensitive_ ? fnv1a64(text) : 0;

    LayerEmbeddings layers(static_cast<std::size_t>(descriptor_.num_layers));
    for (int layer = 0; layer < descriptor_.num_layers; ++layer) {
        auto& per_target = layers[static_cast<std::size_t>(layer)];
        per_target.resize(targets.size());
        for (std::size_t t = 0; t < targets.size(); ++t) {
            auto covering = tokens_covering(tokens, targets[t]);
            if (covering.empty())
                throw BackendError("target span aligns to no token in: " + text);
            for (std::size_t ti : covering) {
                std::uint64_t base = fnv1a64(to_lower(tokens[ti].text)) ^ text_salt ^
                                     splitmix64(static_cast<std::uint64_t>(layer) + 1);
                if (context_sensitive_) base ^= splitmix64(ti + 0x51ed);
                std::vector<double> vec(static_cast<std::size_t>(descriptor_.hidden_size));
                SplitMix64 rng(base);
                for (double& x : vec) x = rng.uniform01() * 2.0 - 1.0;
                per_target[t].push_back(std::move(vec));
            }
        }
    }
    return layers;
}

HashAnswerBackend::HashAnswerBackend(double yes_bias, std::uint64_t salt)
    : yes_bias_(yes_bias), salt_(salt) {
    if (yes_bias <= 0.0) throw ValidationError("yes_bias must be positive");
    descriptor_.backend_id = "mock-answers:yes_bias=" + std::to_string(yes_bias);
    descriptor_.family = BackendFamily::Causal;
    descriptor_.num_layers = 1;
}

std::map<std::string, double> HashAnswerBackend::answer_probabilities(
    const std::string& prompt, std::span<const std::string> answers) const {
    std::map<std::string, double> out;
    double total = 1.0;  // reserve mass for "everything else" so the sum stays < 1
    std::map<std::string, double> raw;
    for (const auto& word : answers) {
        SplitMix64 rng(splitmix64(fnv1a64(prompt) ^ fnv1a64(word) ^ salt_));
        double mass = 0.05 + 0.95 * rng.uniform01();
        if (word == "yes") mass *= yes_bias_;
        raw[word] = mass;
        total += mass;
    }
    for (const auto& [word, mass] : raw) out[word] = mass / total;
    return out;
}

}  // namespace scaladj
