#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

namespace scaladj {

enum class ProbeKind {
    MembershipDirect,
    MembershipIndirect,
    IntensityDirect,
    IntensityIndirect,
    Diversity,
    LrBaseline,
};

std::string probe_name(ProbeKind p);
ProbeKind probe_from_name(const std::string& name);

/// Declarative experiment description. Loaded from a JSON file, overridable
/// key-by-key from the command line; unknown keys are rejected.
struct ExperimentConfig {
    nlohmann::json raw;  // normalized: defaults applied, keys validated

    ProbeKind probe() const;
    std::string backend_spec() const;
    std::filesystem::path base_dir;  // config file's directory; resolves relative paths

    static ExperimentConfig load(const std::filesystem::path& file,
                                 const std::vector<std::string>& overrides = {});
    static ExperimentConfig from_json(nlohmann::json raw, std::filesystem::path base_dir);

    /// Content hash of the result-relevant fields (output/cache/worker knobs
    /// excluded), used as the run directory name.
    std::string config_hash() const;

    std::filesystem::path resolve_path(const std::string& key) const;
};

struct RunRecord {
    nlohmann::json document;

    static RunRecord load(const std::filesystem::path& file);
    void save(const std::filesystem::path& file) const;
};

/// Executes the configured probe, writes `<output_dir>/<hash>/record.json`,
/// returns the record. Prints a one-line summary to stdout.
RunRecord run(const ExperimentConfig& config);

/// Renders a markdown summary table from a set of run records.
///   T2  direct membership (MRR mean +- std)
///   T4  direct intensity (pairwise accuracy, dVec source subscript)
///   T5  indirect intensity (best template subscript)
///   T7  scalar diversity (macro-F1, strategy subscript)
///   A8  direct intensity with tau/rho columns
std::string report(const std::vector<RunRecord>& records, const std::string& table);

/// Minimal glob for record discovery: '*' matches within one path component.
std::vector<std::filesystem::path> expand_glob(const std::string& pattern);

}  // namespace scaladj
