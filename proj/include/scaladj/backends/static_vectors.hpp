#pragma once

#include <filesystem>
#include <unordered_map>

#include "scaladj/backend.hpp"

namespace scaladj {

/// Context-free word-vector backend. Every token of a target span resolves to
/// the word's stored vector; layers (when more than one) are identical.
class LexiconBackend : public Backend {
public:
    LexiconBackend(BackendDescriptor descriptor,
                   std::unordered_map<std::string, std::vector<double>> vectors);

    const BackendDescriptor& descriptor() const override { return descriptor_; }

    LayerEmbeddings embed_tokens(const std::string& text,
                                 std::span<const CharSpan> targets) const override;

    const std::vector<std::string>& load_warnings() const { return warnings_; }
    void add_warning(std::string w) { warnings_.push_back(std::move(w)); }

private:
    BackendDescriptor descriptor_;
    std::unordered_map<std::string, std::vector<double>> vectors_;
    std::vector<std::string> warnings_;
};

/// Loads a `word v1 ... vd` text file (optional `count dim` header line).
/// Duplicate words keep the last occurrence with a warning; inconsistent
/// dimensions are an error.
std::shared_ptr<LexiconBackend> load_static_vectors(const std::filesystem::path& path);

/// Same file format, but presented as a multi-layer contextual encoder whose
/// layers all return the stored vector. Used as the deterministic mock for
/// end-to-end runs on bundled fixtures.
std::shared_ptr<LexiconBackend> load_mock_lexicon(const std::filesystem::path& path,
                                                  int num_layers);

}  // namespace scaladj
