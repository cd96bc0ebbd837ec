#include "scaladj/backends/http_backend.hpp"

#include <cmath>

#include "httplib.h"
#include "json.hpp"
#include "scaladj/error.hpp"

namespace scaladj {

using nlohmann::json;

SequenceScore aggregate_token_logprobs(std::span<const double> token_logprobs) {
    if (token_logprobs.empty()) throw BackendError("sequence_score: empty tokenization");
    double sum = 0.0;
    for (double lp : token_logprobs) sum += lp;
    SequenceScore s;
    s.num_tokens = static_cast<int>(token_logprobs.size());
    s.log_prob_per_token = sum / static_cast<double>(s.num_tokens);
    s.perplexity = std::exp(-s.log_prob_per_token);
    return s;
}

struct HttpBackend::Client {
    explicit Client(const std::string& url) : http(url.c_str()) {
        http.set_read_timeout(600, 0);
        http.set_connection_timeout(10, 0);
    }
    httplib::Client http;
};

HttpBackend::HttpBackend(const std::string& base_url) : client_(std::make_unique<Client>(base_url)) {
    auto res = client_->http.Get("/describe");
    if (!res || res->status != 200)
        throw BackendError("bridge at " + base_url + " not reachable (GET /describe failed)");
    json j;
    try {
        j = json::parse(res->body);
        descriptor_.backend_id = j.at("backend_id").get<std::string>();
        descriptor_.family = family_from_name(j.at("family").get<std::string>());
        descriptor_.num_layers = j.at("num_layers").get<int>();
        descriptor_.hidden_size = j.at("hidden_size").get<int>();
        if (j.contains("mask_token")) descriptor_.mask_token = j["mask_token"].get<std::string>();
    } catch (const std::exception& e) {
        throw BackendError("bad /describe payload from " + base_url + ": " + e.what());
    }
    descriptor_.thread_safe = true;  // requests serialize on mutex_
}

HttpBackend::~HttpBackend() = default;

std::string HttpBackend::post(const std::string& route, const std::string& body) const {
    std::lock_guard<std::mutex> guard(mutex_);
    auto res = client_->http.Post(route.c_str(), body, "application/json");
    if (!res) throw BackendError("bridge request failed: POST " + route);
    if (res->status != 200)
        throw BackendError("bridge error " + std::to_string(res->status) + " on " + route + ": " +
                           res->body);
    return res->body;
}

LayerEmbeddings HttpBackend::embed_tokens(const std::string& text,
                                          std::span<const CharSpan> targets) const {
    json req{{"text", text}, {"targets", json::array()}};
    for (const auto& t : targets) req["targets"].push_back(json::array({t.begin, t.end}));
    json res = json::parse(post("/embed_tokens", req.dump()));
    auto layers = res.at("layers").get<LayerEmbeddings>();
    if (static_cast<int>(layers.size()) != descriptor_.num_layers)
        throw BackendError("bridge returned " + std::to_string(layers.size()) +
                           " layers, descriptor says " + std::to_string(descriptor_.num_layers));
    return layers;
}

std::vector<ScoredWord> HttpBackend::fill_mask_topk(const std::string& text, int k) const {
    if (descriptor_.family != BackendFamily::MaskedEncoder) unsupported("fill_mask_topk");
    json res = json::parse(post("/fill_mask_topk", json{{"text", text}, {"k", k}}.dump()));
    std::vector<ScoredWord> out;
    for (const auto& c : res.at("candidates"))
        out.push_back({c[0].get<std::string>(), c[1].get<double>()});
    return out;
}

std::vector<ScoredWord> HttpBackend::topk_next_words(const std::string& prefix, int k) const {
    if (descriptor_.family != BackendFamily::Causal && descriptor_.family != BackendFamily::Seq2Seq)
        unsupported("topk_next_words");
    json res = json::parse(post("/topk_next_words", json{{"prefix", prefix}, {"k", k}}.dump()));
    std::vector<ScoredWord> out;
    for (const auto& c : res.at("candidates"))
        out.push_back({c[0].get<std::string>(), c[1].get<double>()});
    return out;
}

SequenceScore HttpBackend::sequence_score(const std::string& text) const {
    json res = json::parse(post("/sequence_logprobs", json{{"text", text}}.dump()));
    auto lps = res.at("token_logprobs").get<std::vector<double>>();
    return aggregate_token_logprobs(lps);
}

std::map<std::string, double> HttpBackend::answer_probabilities(
    const std::string& prompt, std::span<const std::string> answers) const {
    if (descriptor_.family != BackendFamily::Causal && descriptor_.family != BackendFamily::Seq2Seq)
        unsupported("answer_probabilities");
    json req{{"prompt", prompt},
             {"answers", std::vector<std::string>(answers.begin(), answers.end())}};
    json res = json::parse(post("/answer_probabilities", req.dump()));
    std::map<std::string, double> out;
    for (const auto& [word, p] : res.at("probabilities").items()) out[word] = p.get<double>();
    return out;
}

}  // namespace scaladj
