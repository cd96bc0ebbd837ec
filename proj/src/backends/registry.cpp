#include "scaladj/backends/registry.hpp"

#include <map>

#include "scaladj/backends/cache.hpp"
#include "scaladj/backends/http_backend.hpp"
#include "scaladj/backends/mock.hpp"
#include "scaladj/backends/ngram_table.hpp"
#include "scaladj/backends/static_vectors.hpp"
#include "scaladj/error.hpp"
#include "scaladj/templates.hpp"
#include "scaladj/util.hpp"

namespace scaladj {

namespace {

std::map<std::string, std::string> parse_params(const std::string& query) {
    std::map<std::string, std::string> params;
    if (query.empty()) return params;
    for (const auto& kv : split(query, '&')) {
        auto eq = kv.find('=');
        if (eq == std::string::npos)
            throw ConfigError("bad backend parameter '" + kv + "' (expected key=value)");
        params[kv.substr(0, eq)] = kv.substr(eq + 1);
    }
    return params;
}

int int_param(const std::map<std::string, std::string>& params, const std::string& key,
              int fallback) {
    auto it = params.find(key);
    if (it == params.end()) return fallback;
    try {
        return std::stoi(it->second);
    } catch (...) {
        throw ConfigError("backend parameter '" + key + "' must be an integer");
    }
}

std::filesystem::path resolve(const std::string& p, const std::filesystem::path& base) {
    std::filesystem::path path(p);
    return path.is_absolute() ? path : base / path;
}

}  // namespace

BackendPtr make_backend(const std::string& spec, const std::filesystem::path& base_dir,
                        const std::filesystem::path& cache_dir) {
    if (spec.empty()) throw ConfigError("backend spec is empty");

    BackendPtr backend;
    if (spec.starts_with("http://") || spec.starts_with("https://")) {
        backend = std::make_shared<HttpBackend>(spec);
    } else {
        auto colon = spec.find(':');
        std::string kind = colon == std::string::npos ? spec : spec.substr(0, colon);
        std::string rest = colon == std::string::npos ? "" : spec.substr(colon + 1);
        auto qmark = rest.find('?');
        std::string arg = qmark == std::string::npos ? rest : rest.substr(0, qmark);
        auto params = parse_params(qmark == std::string::npos ? "" : rest.substr(qmark + 1));

        if (kind == "static-vectors") {
            backend = load_static_vectors(resolve(arg, base_dir));
        } else if (kind == "ngram-table") {
            backend = std::make_shared<NgramTableBackend>(resolve(arg, base_dir));
        } else if (kind == "mock-lexicon") {
            backend = load_mock_lexicon(resolve(arg, base_dir), int_param(params, "layers", 1));
        } else if (kind == "mock-gold-scorer") {
            auto it = params.find("templates");
            if (it == params.end())
                throw ConfigError("mock-gold-scorer needs ?templates=<file>");
            auto dataset = load_scale_dataset(resolve(arg, base_dir));
            auto templates = load_templates(resolve(it->second, base_dir));
            backend = std::make_shared<GoldIntensityScorer>(dataset, templates);
        } else if (kind == "mock-hash") {
            auto params2 = parse_params(rest);
            backend = std::make_shared<HashEmbeddingBackend>(int_param(params2, "dims", 16),
                                                             int_param(params2, "layers", 4),
                                                             int_param(params2, "context", 1) != 0);
        } else if (kind == "mock-answers") {
            auto params2 = parse_params(rest);
            double bias = 1.0;
            if (auto it2 = params2.find("yes_bias"); it2 != params2.end()) bias = std::stod(it2->second);
            backend = std::make_shared<HashAnswerBackend>(bias);
        } else {
            throw ConfigError("unknown backend spec '" + spec + "'");
        }
    }

    if (!backend->descriptor().thread_safe)
        backend = std::make_shared<SerializingBackend>(backend);
    if (!cache_dir.empty()) backend = std::make_shared<CachingBackend>(backend, cache_dir);
    return backend;
}

}  // namespace scaladj
