#pragma once

#include <cstdint>

#include "scaladj/backend.hpp"
#include "scaladj/corpus.hpp"

namespace scaladj {

enum class PoolingMode { Mean, Min, Max };
enum class RepMode { InContext, ShuffleBind };

std::string pooling_name(PoolingMode m);
PoolingMode pooling_from_name(const std::string& name);
std::string rep_mode_name(RepMode m);
RepMode rep_mode_from_name(const std::string& name);

/// One adjective's vector at one layer under one representation mode.
struct ContextualRep {
    Adjective adjective;
    std::string scale_id;
    int layer = 1;
    std::vector<double> vector;
    RepMode mode = RepMode::InContext;
    std::uint32_t seed = 0;
};

/// All layer-wise vectors for the adjectives of one half-scale in one run.
class ScaleReps {
public:
    ScaleReps(std::string scale_id, std::vector<Adjective> adjectives, int num_layers,
              RepMode mode, std::uint32_t seed);

    const std::string& scale_id() const { return scale_id_; }
    const std::vector<Adjective>& adjectives() const { return adjectives_; }
    int num_layers() const { return static_cast<int>(layers_.size()); }
    RepMode mode() const { return mode_; }
    std::uint32_t seed() const { return seed_; }

    std::vector<double>& vec(int layer, std::size_t adj_index);
    const std::vector<double>& vec(int layer, std::size_t adj_index) const;
    const std::vector<double>& vec(int layer, const Adjective& adj) const;
    std::size_t index_of(const Adjective& adj) const;

    ContextualRep rep(int layer, const Adjective& adj) const;

private:
    std::string scale_id_;
    std::vector<Adjective> adjectives_;
    std::vector<std::vector<std::vector<double>>> layers_;  // [layer-1][adj][dim]
    RepMode mode_;
    std::uint32_t seed_;
};

/// Pools a token matrix (tokens x dim) into one vector.
std::vector<double> pool_tokens(const TokenMatrix& tokens, PoolingMode mode);

/// Each adjective is substituted into `contexts_per_run` sentences sampled
/// (seeded, without replacement) from the scale's context set; its sub-token
/// vectors are pooled per sentence and averaged over sentences, per layer.
ScaleReps represent_in_context(const Backend& backend, const HalfScale& scale,
                               const ContextSet& contexts, PoolingMode pooling,
                               std::uint32_t seed, int contexts_per_run = 1);

/// All scale-mates joined into one space-separated input, `num_shuffles`
/// seeded permutations (drawn with replacement); each adjective's pooled
/// vector is averaged elementwise over the inputs, per layer.
ScaleReps represent_shuffle_bind(const Backend& backend, const HalfScale& scale,
                                 PoolingMode pooling, std::uint32_t seed,
                                 int num_shuffles = 10);

}  // namespace scaladj
