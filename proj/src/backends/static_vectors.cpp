#include "scaladj/backends/static_vectors.hpp"

#include <fstream>
#include <sstream>

#include "scaladj/error.hpp"
#include "scaladj/util.hpp"

namespace scaladj {

LexiconBackend::LexiconBackend(BackendDescriptor descriptor,
                               std::unordered_map<std::string, std::vector<double>> vectors)
    : descriptor_(std::move(descriptor)), vectors_(std::move(vectors)) {
    if (descriptor_.family == BackendFamily::StaticVector && descriptor_.num_layers != 1)
        throw ValidationError("static-vector backends must report num_layers = 1");
}

LayerEmbeddings LexiconBackend::embed_tokens(const std::string& text,
                                             std::span<const CharSpan> targets) const {
    auto tokens = simple_tokenize(text);

    // Resolve all targets first so every missing word is reported at once.
    std::vector<TokenMatrix> per_target(targets.size());
    std::vector<std::string> missing;
    for (std::size_t t = 0; t < targets.size(); ++t) {
        auto covering = tokens_covering(tokens, targets[t]);
        if (covering.empty())
            throw BackendError("target span [" + std::to_string(targets[t].begin) + "," +
                               std::to_string(targets[t].end) + ") aligns to no token in: " + text);
        for (std::size_t ti : covering) {
            std::string key = to_lower(tokens[ti].text);
            auto it = vectors_.find(key);
            if (it == vectors_.end()) {
                missing.push_back(key);
                continue;
            }
            per_target[t].push_back(it->second);
        }
    }
    if (!missing.empty()) throw MissingVectorError(std::move(missing));

    LayerEmbeddings layers(static_cast<std::size_t>(descriptor_.num_layers));
    for (auto& layer : layers) layer = per_target;
    return layers;
}

namespace {

std::shared_ptr<LexiconBackend> load_lexicon_file(const std::filesystem::path& path,
                                                  BackendDescriptor desc) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open vector file: " + path.string());

    std::unordered_map<std::string, std::vector<double>> vectors;
    std::vector<std::string> warnings;
    std::string line;
    std::size_t line_no = 0;
    int dim = -1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line.front() == '#') continue;
        std::istringstream ss(line);
        std::string word;
        ss >> word;
        std::vector<double> vec;
        double v;
        while (ss >> v) vec.push_back(v);

        // fastText-style header: `vocab_size dim` on the first data line
        if (line_no == 1 && vec.size() == 1 && !word.empty() &&
            word.find_first_not_of("0123456789") == std::string::npos) {
            continue;
        }
        if (vec.empty()) throw ParseError(path.string(), line_no, "no vector components");
        if (dim < 0) dim = static_cast<int>(vec.size());
        if (static_cast<int>(vec.size()) != dim)
            throw ParseError(path.string(), line_no,
                             "dimension mismatch: expected " + std::to_string(dim) + ", got " +
                                 std::to_string(vec.size()));
        std::string key = to_lower(word);
        if (vectors.count(key))
            warnings.push_back("duplicate word '" + key + "' at line " + std::to_string(line_no) +
                               "; keeping last occurrence");
        vectors[key] = std::move(vec);
    }
    if (vectors.empty()) throw ValidationError(path.string() + ": no vectors loaded");

    desc.hidden_size = dim;
    auto backend = std::make_shared<LexiconBackend>(std::move(desc), std::move(vectors));
    for (auto& w : warnings) backend->add_warning(std::move(w));
    return backend;
}

}  // namespace

std::shared_ptr<LexiconBackend> load_static_vectors(const std::filesystem::path& path) {
    BackendDescriptor desc;
    desc.backend_id = "static-vectors:" + path.filename().string();
    desc.family = BackendFamily::StaticVector;
    desc.num_layers = 1;
    return load_lexicon_file(path, std::move(desc));
}

std::shared_ptr<LexiconBackend> load_mock_lexicon(const std::filesystem::path& path,
                                                  int num_layers) {
    if (num_layers < 1) throw ValidationError("mock lexicon needs num_layers >= 1");
    BackendDescriptor desc;
    desc.backend_id = "mock-lexicon:" + path.filename().string() + "?layers=" +
                      std::to_string(num_layers);
    desc.family = BackendFamily::MaskedEncoder;
    desc.num_layers = num_layers;
    return load_lexicon_file(path, std::move(desc));
}

}  // namespace scaladj
