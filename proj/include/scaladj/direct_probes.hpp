#pragma once

#include "scaladj/backend.hpp"
#include "scaladj/corpus.hpp"
#include "scaladj/metrics.hpp"
#include "scaladj/representations.hpp"

namespace scaladj {

enum class MembershipVariant { EndpointsSum, AllMembers };

struct DirectProbeOptions {
    PoolingMode pooling = PoolingMode::Mean;
    RepMode mode = RepMode::InContext;
    std::vector<std::uint32_t> seeds = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
    std::vector<int> layers;  // empty = all layers of the backend
    int contexts_per_run = 1;
    int num_shuffles = 10;
    double cosine_tie_epsilon = 0.0;  // 0 = exact-equality ties
    int workers = 0;                  // 0 = all cores, 1 = serial reference path
};

/// Sum of the canonical endpoint representations (weakest + strongest).
std::vector<double> build_scale_vector(const ScaleReps& reps, const HalfScale& scale, int layer);

struct ScaleVectorEntry {
    const std::string* scale_id;
    const std::vector<double>* vector;
};

/// 1-based rank of the true scale under descending cosine similarity; tied
/// scales take the worst rank among the ties. Returns 0 (flagged) when the
/// adjective vector has no direction (zero norm).
int rank_membership(std::span<const double> adjective_vec,
                    std::span<const ScaleVectorEntry> scale_vectors,
                    const std::string& true_scale_id);

struct LayerStat {
    int layer = 1;
    std::vector<double> per_seed;
    double mean = 0.0;
    double stddev = 0.0;
};

struct MembershipOutcome {
    std::string scale_id;
    std::string adjective;
    std::vector<int> rank_per_seed;  // 0 marks a flagged/excluded occurrence
};

struct MembershipResult {
    MembershipVariant variant = MembershipVariant::EndpointsSum;
    std::vector<LayerStat> per_layer;  // MRR
    int best_layer = 1;
    double mean = 0.0;
    double stddev = 0.0;
    std::vector<MembershipOutcome> outcomes;  // at best layer
    std::vector<std::string> warnings;
};

/// Scale-membership probe: rank every adjective occurrence's true scale among
/// all scale vectors of the dataset, aggregate per-seed MRR per layer.
MembershipResult membership_mrr(const Backend& backend, const ScaleDataset& dataset,
                                const ContextMap& contexts, const DirectProbeOptions& options);

/// Variant ranking scales by mean cosine to each member representation,
/// skipping the probed occurrence when scoring its own scale.
MembershipResult membership_all_members(const Backend& backend, const ScaleDataset& dataset,
                                        const ContextMap& contexts,
                                        const DirectProbeOptions& options);

/// Global intensity direction: mean over source scales of (strongest - weakest).
struct IntensityVector {
    std::string source_dataset;
    std::string excluded_dataset;
    int layer = 1;
    std::vector<double> vector;
};

IntensityVector build_dvec(const Backend& backend, const ScaleDataset& source,
                           const std::string& excluded_dataset_id, RepMode mode,
                           const ContextMap* contexts, int layer, PoolingMode pooling,
                           std::uint32_t seed, int contexts_per_run = 1, int num_shuffles = 10);

/// dVec from representations already in hand; `reps` align with source.scales.
std::vector<double> build_dvec_from_reps(const std::vector<ScaleReps>& reps,
                                         const ScaleDataset& source, int layer);

/// Adjectives of one scale ordered by descending cosine to the intensity
/// vector; equal similarities share a tie-group.
struct IntensityRanking {
    std::string scale_id;
    std::vector<std::vector<Adjective>> groups;  // most intense first
    std::vector<double> cosines;                 // aligned with scale order
};

IntensityRanking rank_intensity(const HalfScale& scale, const ScaleReps& reps,
                                const IntensityVector& dvec, double tie_epsilon = 0.0);

struct PairVerdictRecord {
    std::string scale_id;
    std::string weak;
    std::string strong;
    PairRelation gold = PairRelation::Less;
    PredictedRelation predicted = PredictedRelation::WeakLess;
    double score_weak = 0.0;
    double score_strong = 0.0;
    bool correct = false;
};

struct IntensityResult {
    RepMode mode = RepMode::ShuffleBind;
    std::string dvec_source;
    std::vector<LayerStat> pacc_per_layer;
    std::vector<LayerStat> tau_per_layer;
    std::vector<LayerStat> rho_per_layer;
    int best_layer = 1;  // argmax mean pairwise accuracy
    double pacc_mean = 0.0, pacc_std = 0.0;
    double tau_mean = 0.0, tau_std = 0.0;
    double rho_mean = 0.0, rho_std = 0.0;
    std::vector<PairVerdictRecord> verdicts;  // best layer, first seed
    std::vector<std::string> warnings;
};

/// Intensity ranking probe. `options.mode` selects the representation style:
/// ShuffleBind is the bound-input method, InContext reproduces the
/// separate-contexts comparison (context maps required for the latter, one
/// per dataset since scale_ids may repeat across datasets). dVec is rebuilt
/// per (seed, layer) from the source dataset with the same settings.
IntensityResult intensity_eval(const Backend& backend, const ScaleDataset& eval_dataset,
                               const ScaleDataset& dvec_source, const ContextMap* eval_contexts,
                               const ContextMap* dvec_contexts,
                               const DirectProbeOptions& options);

}  // namespace scaladj
