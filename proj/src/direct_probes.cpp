#include "scaladj/direct_probes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "scaladj/error.hpp"
#include "scaladj/util.hpp"

namespace scaladj {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

int resolve_workers(int workers) {
#ifdef _OPENMP
    return workers <= 0 ? omp_get_max_threads() : workers;
#else
    (void)workers;
    return 1;
#endif
}

std::vector<int> resolve_layers(const std::vector<int>& requested, int num_layers) {
    std::vector<int> layers;
    if (requested.empty()) {
        layers.resize(static_cast<std::size_t>(num_layers));
        std::iota(layers.begin(), layers.end(), 1);
        return layers;
    }
    for (int l : requested) {
        if (l < 1 || l > num_layers)
            throw ConfigError("layer " + std::to_string(l) + " outside 1.." +
                              std::to_string(num_layers));
        layers.push_back(l);
    }
    return layers;
}

struct RepBuild {
    std::vector<std::optional<ScaleReps>> reps;  // nullopt = scale skipped
    std::vector<std::string> warnings;
};

RepBuild build_reps(const Backend& backend, const ScaleDataset& dataset,
                    const ContextMap* contexts, const DirectProbeOptions& options,
                    std::uint32_t seed) {
    const std::int64_t n = static_cast<std::int64_t>(dataset.scales.size());
    if (options.mode == RepMode::InContext) {
        if (contexts == nullptr)
            throw ValidationError("in-context representations need a context set");
        for (const auto& s : dataset.scales)
            if (!contexts->count(s.scale_id))
                throw ValidationError("no context set for scale '" + s.scale_id + "'");
    }

    RepBuild out;
    out.reps.resize(static_cast<std::size_t>(n));
    std::vector<std::string> skip_notes(static_cast<std::size_t>(n));
    std::vector<std::string> errors(static_cast<std::size_t>(n));

    const int nw = resolve_workers(options.workers);
#pragma omp parallel for schedule(dynamic) num_threads(nw) if (nw > 1)
    for (std::int64_t i = 0; i < n; ++i) {
        const auto& scale = dataset.scales[static_cast<std::size_t>(i)];
        try {
            if (options.mode == RepMode::InContext) {
                out.reps[i] = represent_in_context(backend, scale, contexts->at(scale.scale_id),
                                                   options.pooling, seed,
                                                   options.contexts_per_run);
            } else {
                out.reps[i] = represent_shuffle_bind(backend, scale, options.pooling, seed,
                                                     options.num_shuffles);
            }
        } catch (const MissingVectorError& e) {
            skip_notes[i] = "scale '" + scale.scale_id + "' skipped: " + e.what();
        } catch (const std::exception& e) {
            errors[i] = e.what();
        }
    }
    for (const auto& e : errors)
        if (!e.empty()) throw BackendError(e);
    for (auto& w : skip_notes)
        if (!w.empty()) out.warnings.push_back(std::move(w));
    return out;
}

// Worst rank among ties; NaN scores sort below everything.
int rank_from_scores(std::span<const double> scores, std::size_t true_index) {
    double own = scores[true_index];
    if (std::isnan(own)) return 0;  // flagged
    int rank = 1;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (i == true_index) continue;
        double s = std::isnan(scores[i]) ? kNegInf : scores[i];
        if (s >= own) ++rank;
    }
    return rank;
}

struct Occurrence {
    std::size_t scale_idx;
    std::size_t adj_idx;
};

MembershipResult membership_probe(const Backend& backend, const ScaleDataset& dataset,
                                  const ContextMap& contexts, MembershipVariant variant,
                                  const DirectProbeOptions& options) {
    if (options.seeds.empty()) throw ConfigError("membership probe needs at least one seed");
    if (dataset.scales.empty()) throw ValidationError("empty scale dataset");

    const auto layers = resolve_layers(options.layers, backend.descriptor().num_layers);
    const std::size_t num_scales = dataset.scales.size();

    std::vector<Occurrence> occurrences;
    for (std::size_t si = 0; si < num_scales; ++si)
        for (std::size_t ai = 0; ai < dataset.scales[si].size(); ++ai)
            occurrences.push_back({si, ai});

    MembershipResult result;
    result.variant = variant;

    // ranks[seed][layer][occurrence]; 0 = flagged/excluded
    std::vector<std::vector<std::vector<int>>> ranks(
        options.seeds.size(),
        std::vector<std::vector<int>>(layers.size(), std::vector<int>(occurrences.size(), 0)));

    const int nw = resolve_workers(options.workers);

    for (std::size_t seed_idx = 0; seed_idx < options.seeds.size(); ++seed_idx) {
        RepBuild built = build_reps(backend, dataset, &contexts, options, options.seeds[seed_idx]);
        if (seed_idx == 0)
            result.warnings.insert(result.warnings.end(), built.warnings.begin(),
                                   built.warnings.end());

        for (std::size_t layer_idx = 0; layer_idx < layers.size(); ++layer_idx) {
            const int layer = layers[layer_idx];

            // candidate scales = those with representations this run
            std::vector<std::size_t> candidates;
            for (std::size_t si = 0; si < num_scales; ++si)
                if (built.reps[si]) candidates.push_back(si);
            if (candidates.empty())
                throw ValidationError("all scales were skipped; nothing to rank");

            std::vector<std::vector<double>> scale_vectors;
            if (variant == MembershipVariant::EndpointsSum) {
                scale_vectors.reserve(candidates.size());
                for (std::size_t si : candidates)
                    scale_vectors.push_back(
                        build_scale_vector(*built.reps[si], dataset.scales[si], layer));
            }

            auto& layer_ranks = ranks[seed_idx][layer_idx];
            const std::int64_t occ_count = static_cast<std::int64_t>(occurrences.size());
#pragma omp parallel for schedule(static) num_threads(nw) if (nw > 1)
            for (std::int64_t oi = 0; oi < occ_count; ++oi) {
                const auto& occ = occurrences[static_cast<std::size_t>(oi)];
                if (!built.reps[occ.scale_idx]) continue;  // true scale skipped
                const auto& adj_vec = built.reps[occ.scale_idx]->vec(layer, occ.adj_idx);
                if (norm(adj_vec) == 0.0) continue;  // flagged: cosine undefined

                std::vector<double> scores(candidates.size());
                std::size_t true_pos = candidates.size();
                for (std::size_t c = 0; c < candidates.size(); ++c) {
                    std::size_t si = candidates[c];
                    if (si == occ.scale_idx) true_pos = c;
                    if (variant == MembershipVariant::EndpointsSum) {
                        scores[c] = cosine(adj_vec, scale_vectors[c]);
                    } else {
                        // mean cosine to every comparable member representation
                        const auto& member_reps = *built.reps[si];
                        double sum = 0.0;
                        int used = 0;
                        for (std::size_t mi = 0; mi < member_reps.adjectives().size(); ++mi) {
                            if (si == occ.scale_idx && mi == occ.adj_idx) continue;  // self-skip
                            double c2 = cosine(adj_vec, member_reps.vec(layer, mi));
                            if (std::isnan(c2)) continue;
                            sum += c2;
                            ++used;
                        }
                        scores[c] = used > 0 ? sum / used
                                             : std::numeric_limits<double>::quiet_NaN();
                    }
                }
                layer_ranks[static_cast<std::size_t>(oi)] =
                    rank_from_scores(scores, true_pos);
            }
        }
    }

    // aggregate
    std::size_t flagged = 0;
    for (std::size_t layer_idx = 0; layer_idx < layers.size(); ++layer_idx) {
        LayerStat stat;
        stat.layer = layers[layer_idx];
        for (std::size_t seed_idx = 0; seed_idx < options.seeds.size(); ++seed_idx) {
            std::vector<int> included;
            for (int r : ranks[seed_idx][layer_idx])
                if (r > 0) included.push_back(r);
            if (included.empty())
                throw ValidationError("no rankable occurrences at layer " +
                                      std::to_string(stat.layer));
            flagged += ranks[seed_idx][layer_idx].size() - included.size();
            stat.per_seed.push_back(mrr(included));
        }
        auto ms = mean_std(stat.per_seed);
        stat.mean = ms.mean;
        stat.stddev = ms.stddev;
        result.per_layer.push_back(std::move(stat));
    }
    if (flagged > 0)
        result.warnings.push_back(std::to_string(flagged) +
                                  " occurrence rankings flagged and excluded");

    const auto best = std::max_element(
        result.per_layer.begin(), result.per_layer.end(),
        [](const LayerStat& a, const LayerStat& b) { return a.mean < b.mean; });
    result.best_layer = best->layer;
    result.mean = best->mean;
    result.stddev = best->stddev;

    std::size_t best_idx = static_cast<std::size_t>(best - result.per_layer.begin());
    for (std::size_t oi = 0; oi < occurrences.size(); ++oi) {
        MembershipOutcome outcome;
        outcome.scale_id = dataset.scales[occurrences[oi].scale_idx].scale_id;
        outcome.adjective = dataset.scales[occurrences[oi].scale_idx]
                                .all_adjectives()[occurrences[oi].adj_idx]
                                .surface;
        for (std::size_t seed_idx = 0; seed_idx < options.seeds.size(); ++seed_idx)
            outcome.rank_per_seed.push_back(ranks[seed_idx][best_idx][oi]);
        result.outcomes.push_back(std::move(outcome));
    }
    return result;
}

}  // namespace

std::vector<double> build_scale_vector(const ScaleReps& reps, const HalfScale& scale, int layer) {
    std::vector<double> v = reps.vec(layer, scale.mildest());
    add_inplace(v, reps.vec(layer, scale.extreme()));
    return v;
}

int rank_membership(std::span<const double> adjective_vec,
                    std::span<const ScaleVectorEntry> scale_vectors,
                    const std::string& true_scale_id) {
    if (norm(adjective_vec) == 0.0) return 0;
    std::vector<double> scores(scale_vectors.size());
    std::size_t true_pos = scale_vectors.size();
    for (std::size_t i = 0; i < scale_vectors.size(); ++i) {
        if (*scale_vectors[i].scale_id == true_scale_id) true_pos = i;
        scores[i] = cosine(adjective_vec, *scale_vectors[i].vector);
    }
    if (true_pos == scale_vectors.size())
        throw ValidationError("true scale '" + true_scale_id + "' not among the candidates");
    return rank_from_scores(scores, true_pos);
}

MembershipResult membership_mrr(const Backend& backend, const ScaleDataset& dataset,
                                const ContextMap& contexts, const DirectProbeOptions& options) {
    return membership_probe(backend, dataset, contexts, MembershipVariant::EndpointsSum, options);
}

MembershipResult membership_all_members(const Backend& backend, const ScaleDataset& dataset,
                                        const ContextMap& contexts,
                                        const DirectProbeOptions& options) {
    return membership_probe(backend, dataset, contexts, MembershipVariant::AllMembers, options);
}

std::vector<double> build_dvec_from_reps(const std::vector<ScaleReps>& reps,
                                         const ScaleDataset& source, int layer) {
    if (reps.size() != source.scales.size())
        throw ValidationError("build_dvec: representation/scale count mismatch");
    if (reps.empty()) throw ValidationError("build_dvec: empty source dataset");

    std::vector<double> acc;
    for (std::size_t i = 0; i < reps.size(); ++i) {
        const auto& scale = source.scales[i];
        std::vector<double> diff = reps[i].vec(layer, scale.extreme());
        sub_inplace(diff, reps[i].vec(layer, scale.mildest()));
        if (acc.empty()) acc = std::move(diff);
        else add_inplace(acc, diff);
    }
    scale_inplace(acc, 1.0 / static_cast<double>(reps.size()));
    return acc;
}

IntensityVector build_dvec(const Backend& backend, const ScaleDataset& source,
                           const std::string& excluded_dataset_id, RepMode mode,
                           const ContextMap* contexts, int layer, PoolingMode pooling,
                           std::uint32_t seed, int contexts_per_run, int num_shuffles) {
    if (source.dataset_id == excluded_dataset_id)
        throw ConfigError("dVec source dataset must differ from the evaluated dataset ('" +
                          excluded_dataset_id + "')");
    std::vector<ScaleReps> reps;
    reps.reserve(source.scales.size());
    for (const auto& scale : source.scales) {
        if (mode == RepMode::InContext) {
            if (contexts == nullptr || !contexts->count(scale.scale_id))
                throw ValidationError("no context set for scale '" + scale.scale_id + "'");
            reps.push_back(represent_in_context(backend, scale, contexts->at(scale.scale_id),
                                                pooling, seed, contexts_per_run));
        } else {
            reps.push_back(represent_shuffle_bind(backend, scale, pooling, seed, num_shuffles));
        }
    }
    IntensityVector dvec;
    dvec.source_dataset = source.dataset_id;
    dvec.excluded_dataset = excluded_dataset_id;
    dvec.layer = layer;
    dvec.vector = build_dvec_from_reps(reps, source, layer);
    return dvec;
}

IntensityRanking rank_intensity(const HalfScale& scale, const ScaleReps& reps,
                                const IntensityVector& dvec, double tie_epsilon) {
    IntensityRanking ranking;
    ranking.scale_id = scale.scale_id;
    const auto adjectives = reps.adjectives();
    ranking.cosines.resize(adjectives.size());

    std::vector<std::size_t> order;
    for (std::size_t i = 0; i < adjectives.size(); ++i) {
        ranking.cosines[i] = cosine(reps.vec(dvec.layer, i), dvec.vector);
        if (!std::isnan(ranking.cosines[i])) order.push_back(i);  // zero vectors flagged out
    }
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return ranking.cosines[a] > ranking.cosines[b];
    });

    for (std::size_t k = 0; k < order.size(); ++k) {
        bool new_group = k == 0 || std::abs(ranking.cosines[order[k]] -
                                            ranking.cosines[order[k - 1]]) > tie_epsilon;
        if (new_group) ranking.groups.emplace_back();
        ranking.groups.back().push_back(adjectives[order[k]]);
    }
    return ranking;
}

IntensityResult intensity_eval(const Backend& backend, const ScaleDataset& eval_dataset,
                               const ScaleDataset& dvec_source, const ContextMap* eval_contexts,
                               const ContextMap* dvec_contexts,
                               const DirectProbeOptions& options) {
    if (eval_dataset.dataset_id == dvec_source.dataset_id)
        throw ConfigError("dVec source dataset must differ from the evaluated dataset ('" +
                          eval_dataset.dataset_id + "')");
    if (options.seeds.empty()) throw ConfigError("intensity probe needs at least one seed");

    const auto layers = resolve_layers(options.layers, backend.descriptor().num_layers);
    const std::size_t num_scales = eval_dataset.scales.size();
    const int nw = resolve_workers(options.workers);

    IntensityResult result;
    result.mode = options.mode;
    result.dvec_source = dvec_source.dataset_id;

    struct Cell {
        double pacc = std::numeric_limits<double>::quiet_NaN();
        double tau = std::numeric_limits<double>::quiet_NaN();
        double rho = std::numeric_limits<double>::quiet_NaN();
    };
    std::vector<std::vector<Cell>> cells(options.seeds.size(),
                                         std::vector<Cell>(layers.size()));
    // verdicts captured for the first seed at every layer; trimmed afterwards
    std::vector<std::vector<PairVerdictRecord>> first_seed_verdicts(layers.size());

    std::size_t excluded_pairs = 0, excluded_corr_scales = 0;

    for (std::size_t seed_idx = 0; seed_idx < options.seeds.size(); ++seed_idx) {
        const std::uint32_t seed = options.seeds[seed_idx];
        RepBuild eval_built = build_reps(backend, eval_dataset, eval_contexts, options, seed);
        RepBuild src_built = build_reps(backend, dvec_source, dvec_contexts, options, seed);
        if (seed_idx == 0) {
            result.warnings.insert(result.warnings.end(), eval_built.warnings.begin(),
                                   eval_built.warnings.end());
            result.warnings.insert(result.warnings.end(), src_built.warnings.begin(),
                                   src_built.warnings.end());
        }

        std::vector<const ScaleReps*> src_reps;
        std::vector<const HalfScale*> src_scales;
        for (std::size_t si = 0; si < dvec_source.scales.size(); ++si) {
            if (!src_built.reps[si]) continue;
            src_reps.push_back(&*src_built.reps[si]);
            src_scales.push_back(&dvec_source.scales[si]);
        }
        if (src_reps.empty())
            throw ValidationError("dVec source '" + dvec_source.dataset_id +
                                  "' has no usable scales");

        for (std::size_t layer_idx = 0; layer_idx < layers.size(); ++layer_idx) {
            const int layer = layers[layer_idx];

            std::vector<double> dvec;
            for (std::size_t i = 0; i < src_reps.size(); ++i) {
                std::vector<double> diff = src_reps[i]->vec(layer, src_scales[i]->extreme());
                sub_inplace(diff, src_reps[i]->vec(layer, src_scales[i]->mildest()));
                if (dvec.empty()) dvec = std::move(diff);
                else add_inplace(dvec, diff);
            }
            scale_inplace(dvec, 1.0 / static_cast<double>(src_reps.size()));

            struct ScaleEval {
                std::vector<PairVerdictRecord> verdicts;
                std::vector<double> gold_scores;
                std::vector<double> pred_scores;
                bool usable_for_corr = false;
                std::size_t excluded_pairs = 0;
            };
            std::vector<ScaleEval> per_scale(num_scales);

            const std::int64_t n = static_cast<std::int64_t>(num_scales);
#pragma omp parallel for schedule(static) num_threads(nw) if (nw > 1)
            for (std::int64_t si = 0; si < n; ++si) {
                if (!eval_built.reps[si]) continue;
                const auto& scale = eval_dataset.scales[static_cast<std::size_t>(si)];
                const auto& reps = *eval_built.reps[si];
                auto& ev = per_scale[static_cast<std::size_t>(si)];

                const auto adjectives = reps.adjectives();
                std::vector<double> cos_by_adj(adjectives.size());
                bool any_nan = false;
                for (std::size_t ai = 0; ai < adjectives.size(); ++ai) {
                    cos_by_adj[ai] = cosine(reps.vec(layer, ai), dvec);
                    any_nan |= std::isnan(cos_by_adj[ai]);
                }

                auto cos_of = [&](const Adjective& a) {
                    return cos_by_adj[reps.index_of(a)];
                };
                for (const auto& pair : enumerate_pairs(scale)) {
                    double cw = cos_of(pair.first);
                    double cs = cos_of(pair.second);
                    if (std::isnan(cw) || std::isnan(cs)) {
                        ++ev.excluded_pairs;
                        continue;
                    }
                    PredictedRelation predicted;
                    if (std::abs(cw - cs) <= options.cosine_tie_epsilon)
                        predicted = PredictedRelation::Tie;
                    else if (cw < cs)
                        predicted = PredictedRelation::WeakLess;
                    else
                        predicted = PredictedRelation::StrongLess;
                    auto outcome = make_outcome(pair.relation, predicted);
                    ev.verdicts.push_back({scale.scale_id, pair.first.surface,
                                           pair.second.surface, pair.relation, predicted, cw, cs,
                                           outcome.correct});
                }

                if (!any_nan && adjectives.size() >= 2) {
                    ev.usable_for_corr = true;
                    for (std::size_t ai = 0; ai < adjectives.size(); ++ai) {
                        ev.gold_scores.push_back(
                            static_cast<double>(scale.level_of(adjectives[ai])));
                        ev.pred_scores.push_back(cos_by_adj[ai]);
                    }
                }
            }

            // deterministic aggregation in scale order
            const bool count_exclusions = seed_idx == 0 && layer_idx == 0;
            std::vector<RankingPairOutcome> outcomes;
            std::vector<std::pair<std::vector<double>, std::vector<double>>> corr_input;
            for (auto& ev : per_scale) {
                if (count_exclusions) excluded_pairs += ev.excluded_pairs;
                for (const auto& v : ev.verdicts)
                    outcomes.push_back(make_outcome(v.gold, v.predicted));
                if (ev.usable_for_corr)
                    corr_input.emplace_back(std::move(ev.gold_scores), std::move(ev.pred_scores));
                else if (count_exclusions && (!ev.verdicts.empty() || ev.excluded_pairs > 0))
                    ++excluded_corr_scales;
            }
            if (outcomes.empty())
                throw ValidationError("no scoreable pairs at layer " + std::to_string(layer));

            Cell cell;
            cell.pacc = pairwise_accuracy(outcomes);
            try {
                auto corr = rank_correlations(corr_input);
                cell.tau = corr.tau;
                cell.rho = corr.rho;
                if (count_exclusions) excluded_corr_scales += corr.excluded_scales;
            } catch (const ValidationError&) {
                // every scale constant: tau/rho stay NaN for this cell
            }
            cells[seed_idx][layer_idx] = cell;

            if (seed_idx == 0) {
                auto& sink = first_seed_verdicts[layer_idx];
                for (auto& ev : per_scale)
                    sink.insert(sink.end(), ev.verdicts.begin(), ev.verdicts.end());
            }
        }
    }

    if (excluded_pairs > 0)
        result.warnings.push_back(std::to_string(excluded_pairs) +
                                  " pairs excluded (zero-vector representations)");
    if (excluded_corr_scales > 0)
        result.warnings.push_back(std::to_string(excluded_corr_scales) +
                                  " scale/correlation entries excluded (constant or flagged)");

    for (std::size_t layer_idx = 0; layer_idx < layers.size(); ++layer_idx) {
        LayerStat pacc, tau, rho;
        pacc.layer = tau.layer = rho.layer = layers[layer_idx];
        for (std::size_t seed_idx = 0; seed_idx < options.seeds.size(); ++seed_idx) {
            pacc.per_seed.push_back(cells[seed_idx][layer_idx].pacc);
            tau.per_seed.push_back(cells[seed_idx][layer_idx].tau);
            rho.per_seed.push_back(cells[seed_idx][layer_idx].rho);
        }
        auto fill = [](LayerStat& s) {
            auto ms = mean_std(s.per_seed);
            s.mean = ms.mean;
            s.stddev = ms.stddev;
        };
        fill(pacc);
        fill(tau);
        fill(rho);
        result.pacc_per_layer.push_back(std::move(pacc));
        result.tau_per_layer.push_back(std::move(tau));
        result.rho_per_layer.push_back(std::move(rho));
    }

    std::size_t best_idx = 0;
    for (std::size_t i = 1; i < result.pacc_per_layer.size(); ++i)
        if (result.pacc_per_layer[i].mean > result.pacc_per_layer[best_idx].mean) best_idx = i;
    result.best_layer = result.pacc_per_layer[best_idx].layer;
    result.pacc_mean = result.pacc_per_layer[best_idx].mean;
    result.pacc_std = result.pacc_per_layer[best_idx].stddev;
    result.tau_mean = result.tau_per_layer[best_idx].mean;
    result.tau_std = result.tau_per_layer[best_idx].stddev;
    result.rho_mean = result.rho_per_layer[best_idx].mean;
    result.rho_std = result.rho_per_layer[best_idx].stddev;
    result.verdicts = std::move(first_seed_verdicts[best_idx]);
    return result;
}

}  // namespace scaladj
