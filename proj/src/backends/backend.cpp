#include "scaladj/backend.hpp"

#include <cctype>

#include "scaladj/error.hpp"

namespace scaladj {

std::string family_name(BackendFamily f) {
    switch (f) {
        case BackendFamily::MaskedEncoder: return "masked-encoder";
        case BackendFamily::Causal: return "causal";
        case BackendFamily::Seq2Seq: return "seq2seq";
        case BackendFamily::StaticVector: return "static-vector";
        case BackendFamily::NgramTable: return "ngram-table";
    }
    return "unknown";
}

BackendFamily family_from_name(const std::string& name) {
    if (name == "masked-encoder") return BackendFamily::MaskedEncoder;
    if (name == "causal") return BackendFamily::Causal;
    if (name == "seq2seq") return BackendFamily::Seq2Seq;
    if (name == "static-vector") return BackendFamily::StaticVector;
    if (name == "ngram-table") return BackendFamily::NgramTable;
    throw ValidationError("unknown backend family '" + name + "'");
}

void Backend::unsupported(const std::string& op) const {
    throw BackendError("backend '" + descriptor().backend_id + "' (" +
                       family_name(descriptor().family) + ") does not support " + op);
}

LayerEmbeddings Backend::embed_tokens(const std::string&, std::span<const CharSpan>) const {
    unsupported("embed_tokens");
}

std::vector<ScoredWord> Backend::fill_mask_topk(const std::string&, int) const {
    unsupported("fill_mask_topk");
}

std::vector<ScoredWord> Backend::topk_next_words(const std::string&, int) const {
    unsupported("topk_next_words");
}

SequenceScore Backend::sequence_score(const std::string&) const {
    unsupported("sequence_score");
}

std::map<std::string, double> Backend::answer_probabilities(
    const std::string&, std::span<const std::string>) const {
    unsupported("answer_probabilities");
}

std::vector<SimpleToken> simple_tokenize(const std::string& text) {
    std::vector<SimpleToken> tokens;
    auto is_word_char = [](unsigned char c) {
        return std::isalnum(c) || c == '-' || c == '\'' || c == '[' || c == ']' || c == '_';
    };
    std::size_t i = 0;
    while (i < text.size()) {
        if (!is_word_char(static_cast<unsigned char>(text[i]))) {
            ++i;
            continue;
        }
        std::size_t begin = i;
        while (i < text.size() && is_word_char(static_cast<unsigned char>(text[i]))) ++i;
        tokens.push_back({text.substr(begin, i - begin), {begin, i}});
    }
    return tokens;
}

std::vector<std::size_t> tokens_covering(const std::vector<SimpleToken>& tokens, CharSpan target) {
    std::vector<std::size_t> hits;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (tokens[i].span.begin < target.end && target.begin < tokens[i].span.end)
            hits.push_back(i);
    }
    return hits;
}

}  // namespace scaladj
