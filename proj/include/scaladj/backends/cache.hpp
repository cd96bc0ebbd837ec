#pragma once

#include <array>
#include <filesystem>
#include <functional>
#include <mutex>

#include "scaladj/backend.hpp"

namespace scaladj {

/// Content-addressed disk cache around any backend. One JSON file per
/// (backend_id, operation, input) key; concurrent readers are lock-free,
/// writers go through a temp file plus atomic rename.
class CachingBackend : public Backend {
public:
    CachingBackend(BackendPtr inner, std::filesystem::path cache_dir);

    const BackendDescriptor& descriptor() const override { return inner_->descriptor(); }

    LayerEmbeddings embed_tokens(const std::string& text,
                                 std::span<const CharSpan> targets) const override;
    std::vector<ScoredWord> fill_mask_topk(const std::string& text, int k) const override;
    std::vector<ScoredWord> topk_next_words(const std::string& prefix, int k) const override;
    SequenceScore sequence_score(const std::string& text) const override;
    std::map<std::string, double> answer_probabilities(
        const std::string& prompt, std::span<const std::string> answers) const override;

private:
    std::string fetch(const std::string& op, const std::string& input_json,
                      const std::function<std::string()>& compute) const;

    BackendPtr inner_;
    std::filesystem::path dir_;
    mutable std::array<std::mutex, 16> write_locks_;  // sharded per-key writer locks
};

/// Serializes every operation behind one mutex; wraps backends that declare
/// thread_safe = false so probe loops can stay parallel.
class SerializingBackend : public Backend {
public:
    explicit SerializingBackend(BackendPtr inner);

    const BackendDescriptor& descriptor() const override { return descriptor_; }

    LayerEmbeddings embed_tokens(const std::string& text,
                                 std::span<const CharSpan> targets) const override;
    std::vector<ScoredWord> fill_mask_topk(const std::string& text, int k) const override;
    std::vector<ScoredWord> topk_next_words(const std::string& prefix, int k) const override;
    SequenceScore sequence_score(const std::string& text) const override;
    std::map<std::string, double> answer_probabilities(
        const std::string& prompt, std::span<const std::string> answers) const override;

private:
    BackendPtr inner_;
    BackendDescriptor descriptor_;
    mutable std::mutex mutex_;
};

}  // namespace scaladj
