#include "scaladj/backends/ngram_table.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include "scaladj/error.hpp"
#include "scaladj/util.hpp"

namespace scaladj {

std::string NgramTableBackend::normalize(const std::string& phrase) {
    return collapse_spaces(trim(phrase));
}

NgramTableBackend::NgramTableBackend(const std::filesystem::path& path) {
    descriptor_.backend_id = "ngram-table:" + path.filename().string();
    descriptor_.family = BackendFamily::NgramTable;
    descriptor_.num_layers = 1;
    descriptor_.hidden_size = 1;

    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open ngram table: " + path.string());
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty() || line.front() == '#') continue;
        auto tab = line.find('\t');
        if (tab == std::string::npos)
            throw ParseError(path.string(), line_no, "expected `phrase<TAB>count`");
        std::string phrase = normalize(line.substr(0, tab));
        double count = 0.0;
        try {
            count = std::stod(trim(line.substr(tab + 1)));
        } catch (...) {
            throw ParseError(path.string(), line_no, "bad count");
        }
        if (count < 0) throw ParseError(path.string(), line_no, "negative count");
        counts_[phrase] += count;

        auto last_space = phrase.rfind(' ');
        if (last_space != std::string::npos) {
            std::string prefix = phrase.substr(0, last_space);
            std::string word = phrase.substr(last_space + 1);
            continuations_[prefix].push_back({word, count});
        }
    }
    for (auto& [prefix, words] : continuations_) {
        std::stable_sort(words.begin(), words.end(),
                         [](const ScoredWord& a, const ScoredWord& b) { return a.score > b.score; });
    }
}

double NgramTableBackend::frequency(const std::string& phrase) const {
    auto it = counts_.find(normalize(phrase));
    return it == counts_.end() ? 0.0 : it->second;
}

SequenceScore NgramTableBackend::sequence_score(const std::string& text) const {
    std::string phrase = normalize(text);
    if (phrase.empty()) throw BackendError("sequence_score: empty text");
    double freq = frequency(phrase);
    SequenceScore s;
    s.num_tokens = static_cast<int>(split(phrase, ' ').size());
    if (freq > 0.0) {
        s.log_prob_per_token = std::log(freq);
        s.perplexity = 1.0 / freq;
    } else {
        s.log_prob_per_token = -std::numeric_limits<double>::infinity();
        s.perplexity = std::numeric_limits<double>::infinity();
    }
    return s;
}

std::vector<ScoredWord> NgramTableBackend::topk_next_words(const std::string& prefix, int k) const {
    auto it = continuations_.find(normalize(prefix));
    std::vector<ScoredWord> out;
    if (it == continuations_.end()) return out;
    for (const auto& cand : it->second) {
        if (!is_lower_alpha_word(cand.word)) continue;
        if (std::any_of(out.begin(), out.end(),
                        [&](const ScoredWord& w) { return w.word == cand.word; }))
            continue;
        out.push_back(cand);
        if (static_cast<int>(out.size()) == k) break;
    }
    return out;
}

}  // namespace scaladj
