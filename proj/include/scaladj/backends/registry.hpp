#pragma once

#include <filesystem>

#include "scaladj/backend.hpp"

namespace scaladj {

/// Builds a backend from a spec string:
///   static-vectors:<path>
///   ngram-table:<path>
///   mock-lexicon:<path>?layers=N
///   mock-gold-scorer:<scales.tsv>?templates=<templates.tsv>
///   mock-hash:dims=D&layers=L&context=0|1
///   mock-answers:yes_bias=B
///   http://host:port  (bridge server)
/// Relative paths resolve against `base_dir`. When `cache_dir` is nonempty the
/// backend is wrapped in the disk cache; non-thread-safe backends are wrapped
/// so concurrent probe loops serialize their calls.
BackendPtr make_backend(const std::string& spec, const std::filesystem::path& base_dir = ".",
                        const std::filesystem::path& cache_dir = "");

}  // namespace scaladj
