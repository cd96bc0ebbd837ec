#include "scaladj/backends/cache.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>

#include "json.hpp"
#include "scaladj/error.hpp"
#include "scaladj/util.hpp"

namespace scaladj {

using nlohmann::json;

namespace {

// JSON has no literal for non-finite doubles; scores of absent n-gram phrases
// are +inf, so encode those as strings.
json encode_double(double v) {
    if (std::isfinite(v)) return v;
    if (std::isnan(v)) return "nan";
    return v > 0 ? "inf" : "-inf";
}

double decode_double(const json& j) {
    if (j.is_number()) return j.get<double>();
    std::string s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    return std::numeric_limits<double>::quiet_NaN();
}

json score_to_json(const SequenceScore& s) {
    return json{{"log_prob_per_token", encode_double(s.log_prob_per_token)},
                {"perplexity", encode_double(s.perplexity)},
                {"num_tokens", s.num_tokens}};
}

SequenceScore score_from_json(const json& j) {
    SequenceScore s;
    s.log_prob_per_token = decode_double(j.at("log_prob_per_token"));
    s.perplexity = decode_double(j.at("perplexity"));
    s.num_tokens = j.at("num_tokens").get<int>();
    return s;
}

json words_to_json(const std::vector<ScoredWord>& ws) {
    json arr = json::array();
    for (const auto& w : ws) arr.push_back(json::array({w.word, w.score}));
    return arr;
}

std::vector<ScoredWord> words_from_json(const json& j) {
    std::vector<ScoredWord> out;
    for (const auto& e : j) out.push_back({e[0].get<std::string>(), e[1].get<double>()});
    return out;
}

}  // namespace

CachingBackend::CachingBackend(BackendPtr inner, std::filesystem::path cache_dir)
    : inner_(std::move(inner)), dir_(std::move(cache_dir)) {
    std::filesystem::create_directories(dir_);
}

std::string CachingBackend::fetch(const std::string& op, const std::string& input_json,
                                  const std::function<std::string()>& compute) const {
    std::string key = inner_->descriptor().backend_id + "\x1f" + op + "\x1f" + input_json;
    std::string hash = sha256_hex(key);
    auto path = dir_ / (hash + ".json");

    {
        std::ifstream in(path, std::ios::binary);
        if (in) {
            std::ostringstream ss;
            ss << in.rdbuf();
            try {
                json payload = json::parse(ss.str());
                if (payload.at("key").get<std::string>() == key)
                    return payload.at("value").dump();
            } catch (const json::exception&) {
                // corrupt entry: fall through and recompute
            }
        }
    }

    std::string value = compute();
    json payload{{"key", key}, {"value", json::parse(value)}};

    auto& lock = write_locks_[fnv1a64(hash) % write_locks_.size()];
    std::lock_guard<std::mutex> guard(lock);
    auto tmp = dir_ / (hash + ".tmp." + std::to_string(reinterpret_cast<std::uintptr_t>(&lock)));
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        out << payload.dump();
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) std::filesystem::remove(tmp, ec);
    return value;
}

LayerEmbeddings CachingBackend::embed_tokens(const std::string& text,
                                             std::span<const CharSpan> targets) const {
    json input{{"text", text}, {"targets", json::array()}};
    for (const auto& t : targets) input["targets"].push_back(json::array({t.begin, t.end}));
    std::string raw = fetch("embed_tokens", input.dump(), [&] {
        auto layers = inner_->embed_tokens(text, targets);
        return json(layers).dump();
    });
    return json::parse(raw).get<LayerEmbeddings>();
}

std::vector<ScoredWord> CachingBackend::fill_mask_topk(const std::string& text, int k) const {
    json input{{"text", text}, {"k", k}};
    std::string raw = fetch("fill_mask_topk", input.dump(),
                            [&] { return words_to_json(inner_->fill_mask_topk(text, k)).dump(); });
    return words_from_json(json::parse(raw));
}

std::vector<ScoredWord> CachingBackend::topk_next_words(const std::string& prefix, int k) const {
    json input{{"prefix", prefix}, {"k", k}};
    std::string raw = fetch("topk_next_words", input.dump(), [&] {
        return words_to_json(inner_->topk_next_words(prefix, k)).dump();
    });
    return words_from_json(json::parse(raw));
}

SequenceScore CachingBackend::sequence_score(const std::string& text) const {
    json input{{"text", text}};
    std::string raw = fetch("sequence_score", input.dump(), [&] {
        return score_to_json(inner_->sequence_score(text)).dump();
    });
    return score_from_json(json::parse(raw));
}

std::map<std::string, double> CachingBackend::answer_probabilities(
    const std::string& prompt, std::span<const std::string> answers) const {
    json input{{"prompt", prompt}, {"answers", std::vector<std::string>(answers.begin(), answers.end())}};
    std::string raw = fetch("answer_probabilities", input.dump(), [&] {
        return json(inner_->answer_probabilities(prompt, answers)).dump();
    });
    return json::parse(raw).get<std::map<std::string, double>>();
}

SerializingBackend::SerializingBackend(BackendPtr inner) : inner_(std::move(inner)) {
    descriptor_ = inner_->descriptor();
    descriptor_.thread_safe = true;
}

LayerEmbeddings SerializingBackend::embed_tokens(const std::string& text,
                                                 std::span<const CharSpan> targets) const {
    std::lock_guard<std::mutex> g(mutex_);
    return inner_->embed_tokens(text, targets);
}

std::vector<ScoredWord> SerializingBackend::fill_mask_topk(const std::string& text, int k) const {
    std::lock_guard<std::mutex> g(mutex_);
    return inner_->fill_mask_topk(text, k);
}

std::vector<ScoredWord> SerializingBackend::topk_next_words(const std::string& prefix,
                                                            int k) const {
    std::lock_guard<std::mutex> g(mutex_);
    return inner_->topk_next_words(prefix, k);
}

SequenceScore SerializingBackend::sequence_score(const std::string& text) const {
    std::lock_guard<std::mutex> g(mutex_);
    return inner_->sequence_score(text);
}

std::map<std::string, double> SerializingBackend::answer_probabilities(
    const std::string& prompt, std::span<const std::string> answers) const {
    std::lock_guard<std::mutex> g(mutex_);
    return inner_->answer_probabilities(prompt, answers);
}

}  // namespace scaladj
