#include "scaladj/runner.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <set>

#include "scaladj/backends/registry.hpp"
#include "scaladj/corpus.hpp"
#include "scaladj/direct_probes.hpp"
#include "scaladj/error.hpp"
#include "scaladj/indirect_probes.hpp"
#include "scaladj/pragmatics.hpp"
#include "scaladj/util.hpp"
#include "scaladj/version.hpp"

namespace scaladj {

using nlohmann::json;

std::string probe_name(ProbeKind p) {
    switch (p) {
        case ProbeKind::MembershipDirect: return "membership-direct";
        case ProbeKind::MembershipIndirect: return "membership-indirect";
        case ProbeKind::IntensityDirect: return "intensity-direct";
        case ProbeKind::IntensityIndirect: return "intensity-indirect";
        case ProbeKind::Diversity: return "diversity";
        case ProbeKind::LrBaseline: return "lr-baseline";
    }
    return "membership-direct";
}

ProbeKind probe_from_name(const std::string& name) {
    for (ProbeKind p : {ProbeKind::MembershipDirect, ProbeKind::MembershipIndirect,
                        ProbeKind::IntensityDirect, ProbeKind::IntensityIndirect,
                        ProbeKind::Diversity, ProbeKind::LrBaseline}) {
        if (probe_name(p) == name) return p;
    }
    throw ConfigError("probe: unknown probe '" + name + "'");
}

namespace {

json default_config() {
    return json{{"probe", ""},
                {"backend", ""},
                {"scales", ""},
                {"contexts", ""},
                {"dvec_scales", ""},
                {"dvec_contexts", ""},
                {"heldout_scales", json::array()},
                {"si_data", ""},
                {"train_si_data", json::array()},
                {"templates", ""},
                {"template_selection", "in-dataset"},
                {"variant", "endpoints-sum"},
                {"layers", "all"},
                {"seeds", json::array({0, 1, 2, 3, 4, 5, 6, 7, 8, 9})},
                {"pooling", "mean"},
                {"mode", ""},
                {"strategy", "sy"},
                {"tie_epsilon", 1e-4},
                {"cosine_tie_epsilon", 0.0},
                {"contexts_per_run", 1},
                {"num_shuffles", 10},
                {"k", 5},
                {"lr_l2", 1.0},
                {"manifest", nullptr},
                {"si_manifest", nullptr},
                {"output_dir", "runs"},
                {"cache_dir", ""},
                {"workers", 0}};
}

void apply_override(json& config, const std::string& spec) {
    auto eq = spec.find('=');
    if (eq == std::string::npos)
        throw ConfigError("override '" + spec + "' is not key=value");
    std::string key = spec.substr(0, eq);
    std::string value = spec.substr(eq + 1);

    json parsed;
    try {
        parsed = json::parse(value);
    } catch (const json::exception&) {
        parsed = value;  // plain string
    }

    json* slot = &config;
    for (const auto& part : split(key, '.')) {
        if (!slot->is_object()) throw ConfigError("override key '" + key + "' has no slot");
        slot = &(*slot)[part];
    }
    *slot = parsed;
}

void require(bool ok, const std::string& field, const std::string& message) {
    if (!ok) throw ConfigError(field + ": " + message);
}

std::string str_at(const json& config, const std::string& key) {
    if (!config.at(key).is_string())
        throw ConfigError(key + ": expected a string");
    return config.at(key).get<std::string>();
}

// Resolved representation mode; empty config value falls back per probe.
RepMode effective_mode(const json& config, ProbeKind probe) {
    std::string mode = str_at(config, "mode");
    if (mode.empty())
        return probe == ProbeKind::IntensityDirect ? RepMode::ShuffleBind : RepMode::InContext;
    return rep_mode_from_name(mode);
}

void validate_config(const json& config) {
    const json defaults = default_config();
    for (const auto& [key, value] : config.items()) {
        if (!defaults.contains(key)) throw ConfigError(key + ": unknown config key");
        (void)value;
    }
    ProbeKind probe = probe_from_name(str_at(config, "probe"));

    auto nonempty = [&](const char* key) { return !str_at(config, key).empty(); };
    switch (probe) {
        case ProbeKind::MembershipDirect: {
            require(nonempty("backend"), "backend", "required for membership-direct");
            require(nonempty("scales"), "scales", "required for membership-direct");
            if (effective_mode(config, probe) == RepMode::InContext)
                require(nonempty("contexts"), "contexts",
                        "required for in-context representations");
            std::string variant = str_at(config, "variant");
            require(variant == "endpoints-sum" || variant == "all-members", "variant",
                    "must be endpoints-sum or all-members");
            break;
        }
        case ProbeKind::MembershipIndirect:
            require(nonempty("backend"), "backend", "required for membership-indirect");
            require(nonempty("scales"), "scales", "required for membership-indirect");
            require(nonempty("templates"), "templates", "required for membership-indirect");
            break;
        case ProbeKind::IntensityDirect: {
            require(nonempty("backend"), "backend", "required for intensity-direct");
            require(nonempty("scales"), "scales", "required for intensity-direct");
            require(nonempty("dvec_scales"), "dvec_scales", "required for intensity-direct");
            if (effective_mode(config, probe) == RepMode::InContext) {
                require(nonempty("contexts"), "contexts", "required in in-context mode");
                require(nonempty("dvec_contexts"), "dvec_contexts",
                        "required in in-context mode");
            }
            break;
        }
        case ProbeKind::IntensityIndirect: {
            require(nonempty("backend"), "backend", "required for intensity-indirect");
            require(nonempty("scales"), "scales", "required for intensity-indirect");
            require(nonempty("templates"), "templates", "required for intensity-indirect");
            std::string sel = str_at(config, "template_selection");
            bool fixed = sel.rfind("fixed:", 0) == 0;
            require(sel == "in-dataset" || sel == "held-out" || fixed, "template_selection",
                    "must be in-dataset, held-out or fixed:<id>");
            if (sel == "held-out")
                require(!config.at("heldout_scales").empty(), "heldout_scales",
                        "held-out selection needs at least one other dataset");
            break;
        }
        case ProbeKind::Diversity:
            require(nonempty("backend"), "backend", "required for diversity");
            require(nonempty("si_data"), "si_data", "required for diversity");
            strategy_from_name(str_at(config, "strategy"));
            break;
        case ProbeKind::LrBaseline:
            require(nonempty("si_data"), "si_data", "required for lr-baseline");
            require(!config.at("train_si_data").empty(), "train_si_data",
                    "lr-baseline needs at least one training dataset");
            break;
    }

    const auto& seeds = config.at("seeds");
    if (!seeds.is_array()) throw ConfigError("seeds: expected an array");
    if ((probe == ProbeKind::MembershipDirect || probe == ProbeKind::IntensityDirect) &&
        seeds.empty())
        throw ConfigError("seeds: direct probes need at least one seed");
    const auto& layers = config.at("layers");
    if (!(layers.is_array() || (layers.is_string() && layers.get<std::string>() == "all")))
        throw ConfigError("layers: expected \"all\" or an array of 1-based layers");
    pooling_from_name(str_at(config, "pooling"));
    if (!str_at(config, "mode").empty()) rep_mode_from_name(str_at(config, "mode"));
}

std::optional<ScaleManifest> manifest_from(const json& config) {
    const auto& m = config.at("manifest");
    if (m.is_null()) return std::nullopt;
    return ScaleManifest{m.at("scales").get<std::size_t>(), m.at("pairs").get<std::size_t>()};
}

std::optional<SIManifest> si_manifest_from(const json& config) {
    const auto& m = config.at("si_manifest");
    if (m.is_null()) return std::nullopt;
    return SIManifest{m.at("total").get<std::size_t>(), m.at("yes").get<std::size_t>(),
                      m.at("no").get<std::size_t>()};
}

}  // namespace

ProbeKind ExperimentConfig::probe() const { return probe_from_name(raw.at("probe")); }

std::string ExperimentConfig::backend_spec() const { return raw.at("backend"); }

ExperimentConfig ExperimentConfig::from_json(json user, std::filesystem::path base_dir) {
    json merged = default_config();
    if (!user.is_object()) throw ConfigError("config root must be a JSON object");
    for (const auto& [key, value] : user.items()) {
        if (!merged.contains(key)) throw ConfigError(key + ": unknown config key");
        merged[key] = value;
    }
    if (const char* env = std::getenv("SCALADJ_CACHE_DIR"); env && *env)
        merged["cache_dir"] = env;
    validate_config(merged);
    ExperimentConfig config;
    config.raw = std::move(merged);
    config.base_dir = std::move(base_dir);
    return config;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& file,
                                        const std::vector<std::string>& overrides) {
    std::ifstream in(file);
    if (!in) throw ConfigError("cannot open config file: " + file.string());
    json user;
    try {
        user = json::parse(in, nullptr, true, /*ignore_comments=*/true);
    } catch (const json::exception& e) {
        throw ConfigError(file.string() + ": " + e.what());
    }
    for (const auto& o : overrides) apply_override(user, o);
    auto base = file.has_parent_path() ? file.parent_path() : std::filesystem::path(".");
    return from_json(std::move(user), base);
}

std::string ExperimentConfig::config_hash() const {
    json hashed = raw;
    hashed.erase("output_dir");
    hashed.erase("cache_dir");
    hashed.erase("workers");
    return sha256_hex(hashed.dump()).substr(0, 16);
}

std::filesystem::path ExperimentConfig::resolve_path(const std::string& key) const {
    std::filesystem::path p = str_at(raw, key);
    if (p.empty()) throw ConfigError(key + ": empty path");
    return p.is_absolute() ? p : base_dir / p;
}

RunRecord RunRecord::load(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw ValidationError("cannot open record: " + file.string());
    RunRecord rec;
    try {
        rec.document = json::parse(in);
    } catch (const json::exception& e) {
        throw ValidationError(file.string() + ": " + e.what());
    }
    if (!rec.document.contains("schema_version") ||
        rec.document["schema_version"].get<int>() != kRunRecordSchemaVersion)
        throw ValidationError(file.string() + ": record schema version " +
                              (rec.document.contains("schema_version")
                                   ? rec.document["schema_version"].dump()
                                   : std::string("(missing)")) +
                              " is not the supported version " +
                              std::to_string(kRunRecordSchemaVersion));
    return rec;
}

void RunRecord::save(const std::filesystem::path& file) const {
    std::filesystem::create_directories(file.parent_path());
    std::ofstream out(file, std::ios::trunc);
    if (!out) throw ValidationError("cannot write record: " + file.string());
    out << document.dump(2) << "\n";
}

namespace {

json layer_stat_json(const LayerStat& s) {
    return json{{"layer", s.layer},
                {"mean", s.mean},
                {"std", s.stddev},
                {"per_seed", s.per_seed}};
}

DirectProbeOptions options_from(const ExperimentConfig& config, ProbeKind probe) {
    const json& raw = config.raw;
    DirectProbeOptions opts;
    opts.pooling = pooling_from_name(raw.at("pooling"));
    opts.mode = effective_mode(raw, probe);
    opts.seeds.clear();
    for (const auto& s : raw.at("seeds")) opts.seeds.push_back(s.get<std::uint32_t>());
    if (raw.at("layers").is_array())
        opts.layers = raw.at("layers").get<std::vector<int>>();
    opts.contexts_per_run = raw.at("contexts_per_run").get<int>();
    opts.num_shuffles = raw.at("num_shuffles").get<int>();
    opts.cosine_tie_epsilon = raw.at("cosine_tie_epsilon").get<double>();
    opts.workers = raw.at("workers").get<int>();
    return opts;
}

void run_membership_direct(const ExperimentConfig& config, json& rec) {
    auto dataset = load_scale_dataset(config.resolve_path("scales"), manifest_from(config.raw));
    auto backend = make_backend(config.backend_spec(), config.base_dir,
                                config.raw.at("cache_dir").get<std::string>());
    auto opts = options_from(config, ProbeKind::MembershipDirect);

    ContextMap contexts;
    if (opts.mode == RepMode::InContext)
        contexts = load_context_sets(config.resolve_path("contexts"), dataset);

    bool all_members = config.raw.at("variant") == "all-members";
    MembershipResult result = all_members
                                  ? membership_all_members(*backend, dataset, contexts, opts)
                                  : membership_mrr(*backend, dataset, contexts, opts);

    rec["backend_id"] = backend->descriptor().backend_id;
    rec["dataset_id"] = dataset.dataset_id;
    json metrics;
    metrics["variant"] = config.raw.at("variant");
    metrics["mode"] = rep_mode_name(opts.mode);
    metrics["mrr"] = json{{"mean", result.mean},
                          {"std", result.stddev},
                          {"best_layer", result.best_layer}};
    json per_layer = json::array();
    for (const auto& s : result.per_layer) per_layer.push_back(layer_stat_json(s));
    metrics["per_layer"] = per_layer;
    rec["metrics"] = metrics;

    json items = json::array();
    for (const auto& o : result.outcomes)
        items.push_back(json{{"scale_id", o.scale_id},
                             {"adjective", o.adjective},
                             {"rank_per_seed", o.rank_per_seed}});
    rec["items"] = items;
    rec["warnings"] = result.warnings;
}

void run_intensity_direct(const ExperimentConfig& config, json& rec) {
    auto eval_set = load_scale_dataset(config.resolve_path("scales"), manifest_from(config.raw));
    auto dvec_set = load_scale_dataset(config.resolve_path("dvec_scales"));
    auto backend = make_backend(config.backend_spec(), config.base_dir,
                                config.raw.at("cache_dir").get<std::string>());
    auto opts = options_from(config, ProbeKind::IntensityDirect);

    ContextMap eval_contexts, dvec_contexts;
    if (opts.mode == RepMode::InContext) {
        eval_contexts = load_context_sets(config.resolve_path("contexts"), eval_set);
        dvec_contexts = load_context_sets(config.resolve_path("dvec_contexts"), dvec_set);
    }

    IntensityResult result =
        intensity_eval(*backend, eval_set, dvec_set,
                       eval_contexts.empty() ? nullptr : &eval_contexts,
                       dvec_contexts.empty() ? nullptr : &dvec_contexts, opts);

    rec["backend_id"] = backend->descriptor().backend_id;
    rec["dataset_id"] = eval_set.dataset_id;
    json metrics;
    metrics["mode"] = rep_mode_name(opts.mode);
    metrics["dvec_source"] = result.dvec_source;
    metrics["best_layer"] = result.best_layer;
    metrics["pacc"] = json{{"mean", result.pacc_mean}, {"std", result.pacc_std}};
    metrics["tau"] = json{{"mean", result.tau_mean}, {"std", result.tau_std}};
    metrics["rho"] = json{{"mean", result.rho_mean}, {"std", result.rho_std}};
    json per_layer = json::array();
    for (std::size_t i = 0; i < result.pacc_per_layer.size(); ++i) {
        per_layer.push_back(json{{"layer", result.pacc_per_layer[i].layer},
                                 {"pacc", layer_stat_json(result.pacc_per_layer[i])},
                                 {"tau", layer_stat_json(result.tau_per_layer[i])},
                                 {"rho", layer_stat_json(result.rho_per_layer[i])}});
    }
    metrics["per_layer"] = per_layer;
    rec["metrics"] = metrics;

    json items = json::array();
    for (const auto& v : result.verdicts) {
        items.push_back(json{{"scale_id", v.scale_id},
                             {"weak", v.weak},
                             {"strong", v.strong},
                             {"gold", v.gold == PairRelation::Less ? "<" : "="},
                             {"predicted", v.predicted == PredictedRelation::Tie
                                               ? "="
                                               : (v.predicted == PredictedRelation::WeakLess
                                                      ? "<"
                                                      : ">")},
                             {"correct", v.correct}});
    }
    rec["items"] = items;
    rec["warnings"] = result.warnings;
}

void run_indirect(const ExperimentConfig& config, json& rec, ProbeKind probe) {
    auto eval_set = load_scale_dataset(config.resolve_path("scales"), manifest_from(config.raw));
    auto backend = make_backend(config.backend_spec(), config.base_dir,
                                config.raw.at("cache_dir").get<std::string>());
    auto all_templates = load_templates(config.resolve_path("templates"));
    const bool membership = probe == ProbeKind::MembershipIndirect;
    auto templates = templates_in_category(
        all_templates, membership ? TemplateCategory::Membership : TemplateCategory::Intensity);
    if (templates.empty()) throw ValidationError("template file has no templates of this category");

    const int k = config.raw.at("k").get<int>();
    const double tie_eps = config.raw.at("tie_epsilon").get<double>();
    const int workers = config.raw.at("workers").get<int>();

    auto score_on = [&](const ScaleDataset& ds, const Template& t) {
        return membership ? membership_completion(*backend, ds, t, k, workers).accuracy
                          : intensity_minimal_pair(*backend, ds, t, tie_eps, workers).accuracy;
    };

    TemplateScores scores;
    for (const auto& t : templates) scores[t.id][eval_set.dataset_id] = score_on(eval_set, t);

    std::string selection = config.raw.at("template_selection").get<std::string>();
    int chosen;
    if (selection.rfind("fixed:", 0) == 0) {
        chosen = std::stoi(selection.substr(6));
        template_by_id(templates, chosen);
    } else if (selection == "held-out") {
        for (const auto& path : config.raw.at("heldout_scales")) {
            auto held = load_scale_dataset(config.base_dir / path.get<std::string>());
            if (held.dataset_id == eval_set.dataset_id)
                throw ConfigError("heldout_scales: dataset '" + held.dataset_id +
                                  "' equals the eval dataset");
            for (const auto& t : templates) scores[t.id][held.dataset_id] = score_on(held, t);
        }
        chosen = select_template_heldout(scores, eval_set.dataset_id);
    } else {
        chosen = best_template_in_dataset(scores, eval_set.dataset_id);
    }

    rec["backend_id"] = backend->descriptor().backend_id;
    rec["dataset_id"] = eval_set.dataset_id;

    json metrics;
    metrics["selection"] = selection;
    metrics["template_id"] = chosen;
    metrics["accuracy"] = scores.at(chosen).at(eval_set.dataset_id);
    metrics["in_dataset_best_template"] = best_template_in_dataset(scores, eval_set.dataset_id);
    metrics["in_dataset_best_accuracy"] =
        scores.at(metrics["in_dataset_best_template"].get<int>()).at(eval_set.dataset_id);
    json per_template = json::object();
    for (const auto& [id, per_dataset] : scores)
        per_template[std::to_string(id)] = per_dataset;
    metrics["per_template"] = per_template;
    rec["metrics"] = metrics;

    // per-item outcomes for the chosen template
    json items = json::array();
    const Template& t = template_by_id(templates, chosen);
    if (membership) {
        auto result = membership_completion(*backend, eval_set, t, k, workers);
        for (const auto& c : result.cases)
            items.push_back(json{{"scale_id", c.scale_id},
                                 {"weak", c.weak},
                                 {"candidates", c.candidates},
                                 {"correct", c.correct}});
    } else {
        auto result = intensity_minimal_pair(*backend, eval_set, t, tie_eps, workers);
        for (const auto& v : result.verdicts)
            items.push_back(json{{"scale_id", v.scale_id},
                                 {"weak", v.weak_adj.surface},
                                 {"strong", v.strong_adj.surface},
                                 {"predicted", v.predicted == PredictedRelation::Tie
                                                   ? "="
                                                   : (v.predicted == PredictedRelation::WeakLess
                                                          ? "<"
                                                          : ">")},
                                 {"correct", v.correct}});
    }
    rec["items"] = items;
    rec["warnings"] = json::array();
}

void run_diversity_probe(const ExperimentConfig& config, json& rec) {
    auto dataset = load_si_dataset(config.resolve_path("si_data"), si_manifest_from(config.raw));
    auto backend = make_backend(config.backend_spec(), config.base_dir,
                                config.raw.at("cache_dir").get<std::string>());
    Strategy strategy = strategy_from_name(config.raw.at("strategy"));
    const int workers = config.raw.at("workers").get<int>();

    std::optional<CalibrationState> calibration;
    if (strategy == Strategy::Cy) calibration = fit_calibration(*backend);

    auto result = run_diversity(*backend, dataset, strategy, calibration, workers);

    rec["backend_id"] = backend->descriptor().backend_id;
    rec["dataset_id"] = dataset.dataset_id;
    json metrics;
    metrics["strategy"] = strategy_name(strategy);
    metrics["macro_f1"] = result.f1.value;
    metrics["f1_yes"] = result.f1.f1_yes;
    metrics["f1_no"] = result.f1.f1_no;
    if (calibration)
        metrics["calibration"] = json{{"mean_neutral_wy", calibration->mean_neutral_wy},
                                      {"neutral_wys", calibration->neutral_wys}};
    rec["metrics"] = metrics;

    json items = json::array();
    for (const auto& item : result.items) {
        json j{{"item_id", item.item_id}, {"sy", item.sy},   {"sn", item.sn},
               {"wy", item.wy},           {"gold", item.gold}, {"flagged", item.flagged},
               {"decision_sy", item.decision_sy}, {"decision_wy", item.decision_wy}};
        if (item.cy) j["cy"] = *item.cy;
        if (item.decision_cy) j["decision_cy"] = *item.decision_cy;
        items.push_back(j);
    }
    rec["items"] = items;
    rec["warnings"] = result.warnings;
}

void run_lr_baseline(const ExperimentConfig& config, json& rec) {
    auto eval_set = load_si_dataset(config.resolve_path("si_data"), si_manifest_from(config.raw));
    std::vector<SIDataset> train_sets;
    for (const auto& path : config.raw.at("train_si_data"))
        train_sets.push_back(load_si_dataset(config.base_dir / path.get<std::string>()));

    auto result = lr_baseline(train_sets, eval_set, config.raw.at("lr_l2").get<double>());

    rec["backend_id"] = "lr-baseline";
    rec["dataset_id"] = eval_set.dataset_id;
    json metrics;
    json configs = json::array();
    for (const auto& cfg : result.configs) {
        configs.push_back(json{{"train", cfg.train_datasets},
                               {"macro_f1", cfg.macro_f1},
                               {"train_items", cfg.train_items},
                               {"eval_items", cfg.eval_items},
                               {"dropped_train", cfg.dropped_train},
                               {"dropped_eval", cfg.dropped_eval}});
    }
    metrics["configs"] = configs;
    metrics["macro_f1"] = result.configs[result.best_index].macro_f1;
    metrics["best_train"] = result.configs[result.best_index].train_datasets;
    rec["metrics"] = metrics;

    json items = json::array();
    const auto& best = result.configs[result.best_index];
    std::size_t pi = 0;
    for (const auto& item : eval_set.items) {
        if (!item.string_surprisal || !item.concept_surprisal) continue;
        items.push_back(json{{"item_id", item.item_id},
                             {"gold", item.gold_label},
                             {"predicted", static_cast<bool>(best.predictions[pi])}});
        ++pi;
    }
    rec["items"] = items;
    rec["warnings"] = result.warnings;
}

std::string summary_line(const json& rec) {
    const auto& m = rec.at("metrics");
    std::string metric;
    if (m.contains("mrr"))
        metric = "mrr=" + std::to_string(m["mrr"]["mean"].get<double>());
    else if (m.contains("pacc"))
        metric = "pacc=" + std::to_string(m["pacc"]["mean"].get<double>());
    else if (m.contains("accuracy"))
        metric = "accuracy=" + std::to_string(m["accuracy"].get<double>());
    else if (m.contains("macro_f1"))
        metric = "macro_f1=" + std::to_string(m["macro_f1"].get<double>());
    return rec["probe"].get<std::string>() + " backend=" + rec["backend_id"].get<std::string>() +
           " dataset=" + rec["dataset_id"].get<std::string>() + " " + metric;
}

}  // namespace

RunRecord run(const ExperimentConfig& config) {
    json rec;
    rec["schema_version"] = kRunRecordSchemaVersion;
    rec["toolkit_version"] = kToolkitVersion;
    rec["probe"] = config.raw.at("probe");
    rec["config"] = config.raw;
    rec["config_hash"] = config.config_hash();
    rec["started_at"] = utc_timestamp();

    switch (config.probe()) {
        case ProbeKind::MembershipDirect: run_membership_direct(config, rec); break;
        case ProbeKind::IntensityDirect: run_intensity_direct(config, rec); break;
        case ProbeKind::MembershipIndirect:
            run_indirect(config, rec, ProbeKind::MembershipIndirect);
            break;
        case ProbeKind::IntensityIndirect:
            run_indirect(config, rec, ProbeKind::IntensityIndirect);
            break;
        case ProbeKind::Diversity: run_diversity_probe(config, rec); break;
        case ProbeKind::LrBaseline: run_lr_baseline(config, rec); break;
    }
    rec["finished_at"] = utc_timestamp();

    std::filesystem::path out_dir = config.raw.at("output_dir").get<std::string>();
    if (out_dir.is_relative()) out_dir = config.base_dir / out_dir;
    auto record_path = out_dir / config.config_hash() / "record.json";
    RunRecord record{rec};
    record.save(record_path);
    std::cout << summary_line(rec) << " -> " << record_path.string() << "\n";
    return record;
}

std::vector<std::filesystem::path> expand_glob(const std::string& pattern) {
    namespace fs = std::filesystem;
    // explicit bool: vector<bool> indexing yields a proxy that must not
    // outlive the table
    auto match = [](const std::string& name, const std::string& pat) -> bool {
        // '*' within one component
        std::size_t n = name.size(), p = pat.size();
        std::vector<std::vector<bool>> dp(n + 1, std::vector<bool>(p + 1, false));
        dp[0][0] = true;
        for (std::size_t j = 1; j <= p; ++j)
            if (pat[j - 1] == '*') dp[0][j] = dp[0][j - 1];
        for (std::size_t i = 1; i <= n; ++i)
            for (std::size_t j = 1; j <= p; ++j)
                dp[i][j] = pat[j - 1] == '*'
                               ? (dp[i - 1][j] || dp[i][j - 1])
                               : (dp[i - 1][j - 1] && (pat[j - 1] == '?' ||
                                                       pat[j - 1] == name[i - 1]));
        return dp[n][p];
    };

    fs::path pat(pattern);
    std::vector<fs::path> frontier;
    frontier.push_back(pat.is_absolute() ? fs::path("/") : fs::path("."));
    bool first = true;
    for (const auto& component : pat) {
        std::string comp = component.string();
        if (comp == "/" || comp.empty()) continue;
        std::vector<fs::path> next;
        for (const auto& base : frontier) {
            if (comp.find('*') == std::string::npos && comp.find('?') == std::string::npos) {
                fs::path candidate = (first && !pat.is_absolute() && comp == ".")
                                         ? base
                                         : base / comp;
                if (fs::exists(candidate)) next.push_back(candidate);
            } else {
                if (!fs::is_directory(base)) continue;
                std::vector<fs::path> entries;
                for (const auto& e : fs::directory_iterator(base)) entries.push_back(e.path());
                std::sort(entries.begin(), entries.end());
                for (const auto& e : entries)
                    if (match(e.filename().string(), comp)) next.push_back(e);
            }
        }
        frontier = std::move(next);
        first = false;
    }
    std::sort(frontier.begin(), frontier.end());
    return frontier;
}

}  // namespace scaladj
