#include "scaladj/representations.hpp"

#include <algorithm>
#include <numeric>

#include "scaladj/error.hpp"
#include "scaladj/util.hpp"

namespace scaladj {

std::string pooling_name(PoolingMode m) {
    switch (m) {
        case PoolingMode::Mean: return "mean";
        case PoolingMode::Min: return "min";
        case PoolingMode::Max: return "max";
    }
    return "mean";
}

PoolingMode pooling_from_name(const std::string& name) {
    if (name == "mean") return PoolingMode::Mean;
    if (name == "min") return PoolingMode::Min;
    if (name == "max") return PoolingMode::Max;
    throw ConfigError("unknown pooling mode '" + name + "'");
}

std::string rep_mode_name(RepMode m) {
    return m == RepMode::InContext ? "in-context" : "shuffle-bind";
}

RepMode rep_mode_from_name(const std::string& name) {
    if (name == "in-context" || name == "g-and-a") return RepMode::InContext;
    if (name == "shuffle-bind" || name == "ours") return RepMode::ShuffleBind;
    throw ConfigError("unknown representation mode '" + name + "'");
}

ScaleReps::ScaleReps(std::string scale_id, std::vector<Adjective> adjectives, int num_layers,
                     RepMode mode, std::uint32_t seed)
    : scale_id_(std::move(scale_id)),
      adjectives_(std::move(adjectives)),
      layers_(static_cast<std::size_t>(num_layers)),
      mode_(mode),
      seed_(seed) {
    for (auto& layer : layers_) layer.resize(adjectives_.size());
}

std::vector<double>& ScaleReps::vec(int layer, std::size_t adj_index) {
    return layers_.at(static_cast<std::size_t>(layer - 1)).at(adj_index);
}

const std::vector<double>& ScaleReps::vec(int layer, std::size_t adj_index) const {
    return layers_.at(static_cast<std::size_t>(layer - 1)).at(adj_index);
}

std::size_t ScaleReps::index_of(const Adjective& adj) const {
    auto it = std::find(adjectives_.begin(), adjectives_.end(), adj);
    if (it == adjectives_.end())
        throw ValidationError("no representation for '" + adj.surface + "' on scale " + scale_id_);
    return static_cast<std::size_t>(it - adjectives_.begin());
}

const std::vector<double>& ScaleReps::vec(int layer, const Adjective& adj) const {
    return vec(layer, index_of(adj));
}

ContextualRep ScaleReps::rep(int layer, const Adjective& adj) const {
    return {adj, scale_id_, layer, vec(layer, adj), mode_, seed_};
}

std::vector<double> pool_tokens(const TokenMatrix& tokens, PoolingMode mode) {
    if (tokens.empty()) throw ValidationError("pool_tokens: no token vectors");
    std::vector<double> out = tokens.front();
    for (std::size_t t = 1; t < tokens.size(); ++t) {
        const auto& v = tokens[t];
        if (v.size() != out.size()) throw ValidationError("pool_tokens: ragged token vectors");
        for (std::size_t i = 0; i < out.size(); ++i) {
            switch (mode) {
                case PoolingMode::Mean: out[i] += v[i]; break;
                case PoolingMode::Min: out[i] = std::min(out[i], v[i]); break;
                case PoolingMode::Max: out[i] = std::max(out[i], v[i]); break;
            }
        }
    }
    if (mode == PoolingMode::Mean)
        scale_inplace(out, 1.0 / static_cast<double>(tokens.size()));
    return out;
}

ScaleReps represent_in_context(const Backend& backend, const HalfScale& scale,
                               const ContextSet& contexts, PoolingMode pooling,
                               std::uint32_t seed, int contexts_per_run) {
    const int num_layers = backend.descriptor().num_layers;
    const auto adjectives = scale.all_adjectives();
    if (contexts.sentences.size() != kContextSentencesPerScale)
        throw ValidationError("scale '" + scale.scale_id + "' has an incomplete context set");
    if (contexts_per_run < 1 ||
        contexts_per_run > static_cast<int>(contexts.sentences.size()))
        throw ConfigError("contexts_per_run must be in 1.." +
                          std::to_string(contexts.sentences.size()));

    ScaleReps reps(scale.scale_id, adjectives, num_layers, RepMode::InContext, seed);
    auto rng = scoped_rng(seed, scale.scale_id);

    for (std::size_t ai = 0; ai < adjectives.size(); ++ai) {
        // seeded partial shuffle -> first contexts_per_run distinct sentences
        std::vector<std::size_t> order(contexts.sentences.size());
        std::iota(order.begin(), order.end(), 0);
        for (int pick = 0; pick < contexts_per_run; ++pick) {
            std::size_t j = pick + rng.uniform_index(order.size() - pick);
            std::swap(order[pick], order[j]);
        }

        std::vector<std::vector<std::vector<double>>> pooled_per_layer(
            static_cast<std::size_t>(num_layers));
        for (int pick = 0; pick < contexts_per_run; ++pick) {
            auto sub = substitute_adjective(contexts.sentences[order[pick]], adjectives[ai]);
            CharSpan target = sub.span;
            auto layers = backend.embed_tokens(sub.text, std::span<const CharSpan>(&target, 1));
            for (int layer = 0; layer < num_layers; ++layer)
                pooled_per_layer[layer].push_back(pool_tokens(layers[layer][0], pooling));
        }
        for (int layer = 0; layer < num_layers; ++layer) {
            auto& samples = pooled_per_layer[layer];
            std::vector<double> acc = samples.front();
            for (std::size_t s = 1; s < samples.size(); ++s) add_inplace(acc, samples[s]);
            scale_inplace(acc, 1.0 / static_cast<double>(samples.size()));
            reps.vec(layer + 1, ai) = std::move(acc);
        }
    }
    return reps;
}

ScaleReps represent_shuffle_bind(const Backend& backend, const HalfScale& scale,
                                 PoolingMode pooling, std::uint32_t seed, int num_shuffles) {
    if (scale.size() < 2)
        throw ValidationError("shuffle-bind needs a scale with >= 2 adjectives");
    if (num_shuffles < 1) throw ConfigError("num_shuffles must be >= 1");

    const int num_layers = backend.descriptor().num_layers;
    const auto adjectives = scale.all_adjectives();
    ScaleReps reps(scale.scale_id, adjectives, num_layers, RepMode::ShuffleBind, seed);
    auto rng = scoped_rng(seed, scale.scale_id);

    std::vector<std::vector<std::vector<double>>> sums(static_cast<std::size_t>(num_layers));
    for (auto& layer : sums) layer.resize(adjectives.size());

    for (int shuffle = 0; shuffle < num_shuffles; ++shuffle) {
        std::vector<std::size_t> perm(adjectives.size());
        std::iota(perm.begin(), perm.end(), 0);
        shuffle_in_place(perm, rng);

        // bare lowercase adjectives joined by single spaces, no punctuation
        std::string input;
        std::vector<CharSpan> spans(adjectives.size());
        for (std::size_t p = 0; p < perm.size(); ++p) {
            if (p) input.push_back(' ');
            std::size_t begin = input.size();
            input += adjectives[perm[p]].surface;
            spans[perm[p]] = {begin, input.size()};
        }

        auto layers = backend.embed_tokens(input, spans);
        for (int layer = 0; layer < num_layers; ++layer) {
            for (std::size_t ai = 0; ai < adjectives.size(); ++ai) {
                auto pooled = pool_tokens(layers[layer][ai], pooling);
                if (sums[layer][ai].empty()) sums[layer][ai] = std::move(pooled);
                else add_inplace(sums[layer][ai], pooled);
            }
        }
    }

    for (int layer = 0; layer < num_layers; ++layer) {
        for (std::size_t ai = 0; ai < adjectives.size(); ++ai) {
            scale_inplace(sums[layer][ai], 1.0 / static_cast<double>(num_shuffles));
            reps.vec(layer + 1, ai) = std::move(sums[layer][ai]);
        }
    }
    return reps;
}

}  // namespace scaladj
