#include "scaladj/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "scaladj/error.hpp"
#include "scaladj/util.hpp"

namespace scaladj {

namespace {

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open file: " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string default_dataset_id(const std::filesystem::path& path, const std::string& given) {
    return given.empty() ? path.stem().string() : given;
}

bool is_comment_or_blank(const std::string& line) {
    std::string t = trim(line);
    return t.empty() || t.front() == '#';
}

// Minimal RFC4180-style CSV: quoted fields, "" escapes, embedded separators.
std::vector<std::vector<std::string>> parse_csv(const std::string& text, const std::string& origin) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string field;
    bool in_quotes = false;
    bool row_started = false;
    std::size_t line_no = 1;

    auto end_field = [&] {
        row.push_back(field);
        field.clear();
    };
    auto end_row = [&] {
        if (row_started || !row.empty() || !field.empty()) {
            end_field();
            // rows whose first cell starts with '#' are comments; blank rows dropped
            bool comment = !row[0].empty() && row[0][0] == '#';
            bool blank = row.size() == 1 && trim(row[0]).empty();
            if (!comment && !blank) rows.push_back(row);
            row.clear();
        }
        row_started = false;
    };

    for (std::size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                field.push_back(c);
            }
            continue;
        }
        switch (c) {
            case '"':
                if (!field.empty()) throw ParseError(origin, line_no, "stray quote in field");
                in_quotes = true;
                row_started = true;
                break;
            case ',':
                end_field();
                row_started = true;
                break;
            case '\r':
                break;
            case '\n':
                end_row();
                ++line_no;
                break;
            default:
                field.push_back(c);
                row_started = true;
        }
    }
    if (in_quotes) throw ParseError(origin, line_no, "unterminated quoted field");
    end_row();
    return rows;
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out.push_back(c);
    }
    out += "\"";
    return out;
}

}  // namespace

Adjective make_adjective(const std::string& token) {
    if (token.empty()) throw ValidationError("empty adjective");
    for (unsigned char c : token) {
        if (std::isspace(c))
            throw ValidationError("adjective '" + token + "' contains whitespace");
        if (!((c >= 'a' && c <= 'z') || c == '-'))
            throw ValidationError("adjective '" + token +
                                  "' rejected: only lowercase letters and hyphens are accepted");
    }
    return Adjective{token};
}

std::vector<Adjective> HalfScale::all_adjectives() const {
    std::vector<Adjective> out;
    for (const auto& g : groups)
        for (const auto& a : g) out.push_back(a);
    return out;
}

std::size_t HalfScale::size() const {
    std::size_t n = 0;
    for (const auto& g : groups) n += g.size();
    return n;
}

int HalfScale::level_of(const Adjective& a) const {
    for (std::size_t i = 0; i < groups.size(); ++i) {
        if (std::find(groups[i].begin(), groups[i].end(), a) != groups[i].end())
            return static_cast<int>(i);
    }
    return -1;
}

const HalfScale* ScaleDataset::find(const std::string& scale_id) const {
    for (const auto& s : scales)
        if (s.scale_id == scale_id) return &s;
    return nullptr;
}

std::size_t ScaleDataset::total_adjectives() const {
    std::size_t n = 0;
    for (const auto& s : scales) n += s.size();
    return n;
}

std::size_t ScaleDataset::distinct_pair_count() const {
    std::set<std::pair<std::string, std::string>> seen;
    for (const auto& s : scales) {
        for (const auto& p : enumerate_pairs(s)) {
            auto a = p.first.surface, b = p.second.surface;
            if (b < a) std::swap(a, b);
            seen.emplace(a, b);
        }
    }
    return seen.size();
}

std::size_t SIDataset::yes_count() const {
    std::size_t n = 0;
    for (const auto& it : items) n += it.gold_label ? 1 : 0;
    return n;
}

std::vector<GoldPair> enumerate_pairs(const HalfScale& scale) {
    std::vector<GoldPair> pairs;
    const auto& gs = scale.groups;
    for (std::size_t gi = 0; gi < gs.size(); ++gi) {
        // ties within a group
        for (std::size_t i = 0; i < gs[gi].size(); ++i)
            for (std::size_t j = i + 1; j < gs[gi].size(); ++j)
                pairs.push_back({gs[gi][i], gs[gi][j], PairRelation::Equal});
        // strictly ordered across groups (weaker listed first)
        for (std::size_t gj = gi + 1; gj < gs.size(); ++gj)
            for (const auto& a : gs[gi])
                for (const auto& b : gs[gj]) pairs.push_back({a, b, PairRelation::Less});
    }
    return pairs;
}

ScaleDataset parse_scale_dataset(const std::string& text, const std::string& origin,
                                 std::optional<ScaleManifest> manifest, std::string dataset_id) {
    ScaleDataset ds;
    ds.dataset_id = std::move(dataset_id);
    std::set<std::string> seen_ids;

    std::size_t line_no = 0;
    for (const auto& raw : split(text, '\n')) {
        ++line_no;
        if (is_comment_or_blank(raw)) continue;
        std::string line = raw;
        if (!line.empty() && line.back() == '\r') line.pop_back();

        auto tab = line.find('\t');
        if (tab == std::string::npos)
            throw ParseError(origin, line_no, "expected `scale_id<TAB>adjectives`");
        HalfScale scale;
        scale.scale_id = trim(line.substr(0, tab));
        if (scale.scale_id.empty()) throw ParseError(origin, line_no, "empty scale_id");
        if (!seen_ids.insert(scale.scale_id).second)
            throw ParseError(origin, line_no, "duplicate scale_id '" + scale.scale_id + "'");

        // body: `a < b = c < d`, '<' starts a new intensity level, '=' a tie
        std::set<Adjective> members;
        std::vector<Adjective> group;
        std::istringstream body(line.substr(tab + 1));
        std::string tok;
        bool expect_adjective = true;
        while (body >> tok) {
            if (tok == "<" || tok == "=") {
                if (expect_adjective)
                    throw ParseError(origin, line_no, "misplaced '" + tok + "'");
                if (tok == "<") {
                    scale.groups.push_back(std::move(group));
                    group.clear();
                }
                expect_adjective = true;
                continue;
            }
            if (!expect_adjective)
                throw ParseError(origin, line_no,
                                 "expected '<' or '=' before '" + tok + "'");
            Adjective adj;
            try {
                adj = make_adjective(tok);
            } catch (const ValidationError& e) {
                throw ParseError(origin, line_no, e.what());
            }
            if (!members.insert(adj).second)
                throw ParseError(origin, line_no,
                                 "duplicate adjective '" + adj.surface + "' in scale '" +
                                     scale.scale_id + "'");
            group.push_back(adj);
            expect_adjective = false;
        }
        if (expect_adjective)
            throw ParseError(origin, line_no, "scale '" + scale.scale_id + "' ends mid-expression");
        scale.groups.push_back(std::move(group));
        if (members.size() < 2)
            throw ParseError(origin, line_no,
                             "scale '" + scale.scale_id + "' needs at least 2 adjectives");
        ds.scales.push_back(std::move(scale));
    }

    if (manifest) {
        if (ds.scales.size() != manifest->scale_count)
            throw ValidationError(origin + ": manifest mismatch: expected " +
                                  std::to_string(manifest->scale_count) + " scales, found " +
                                  std::to_string(ds.scales.size()));
        std::size_t pairs = ds.distinct_pair_count();
        if (pairs != manifest->distinct_pair_count)
            throw ValidationError(origin + ": manifest mismatch: expected " +
                                  std::to_string(manifest->distinct_pair_count) +
                                  " distinct pairs, found " + std::to_string(pairs));
    }
    return ds;
}

ScaleDataset load_scale_dataset(const std::filesystem::path& path,
                                std::optional<ScaleManifest> manifest, std::string dataset_id) {
    return parse_scale_dataset(read_file(path), path.string(), manifest,
                               default_dataset_id(path, dataset_id));
}

Substitution substitute_adjective(const std::string& sentence, const Adjective& adj) {
    auto pos = sentence.find(kAdjectivePlaceholder);
    if (pos == std::string::npos)
        throw ValidationError("sentence has no " + std::string(kAdjectivePlaceholder) +
                              " placeholder: " + sentence);
    std::string raw = sentence.substr(0, pos) + adj.surface +
                      sentence.substr(pos + std::string(kAdjectivePlaceholder).size());

    // collapse space runs while tracking where the adjective lands
    Substitution out;
    std::size_t adj_begin_raw = pos;
    bool pending_space = false;
    for (std::size_t i = 0; i < raw.size(); ++i) {
        if (i == adj_begin_raw) out.span.begin = out.text.size() + (pending_space && !out.text.empty() ? 1 : 0);
        if (raw[i] == ' ') {
            pending_space = true;
            continue;
        }
        if (pending_space && !out.text.empty()) out.text.push_back(' ');
        pending_space = false;
        out.text.push_back(raw[i]);
    }
    out.span.end = out.span.begin + adj.surface.size();
    return out;
}

ContextMap load_context_sets(const std::filesystem::path& path, const ScaleDataset& scales) {
    std::string text = read_file(path);
    const std::string origin = path.string();
    ContextMap map;

    std::size_t line_no = 0;
    for (const auto& raw : split(text, '\n')) {
        ++line_no;
        if (is_comment_or_blank(raw)) continue;
        std::string line = raw;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        auto tab = line.find('\t');
        if (tab == std::string::npos)
            throw ParseError(origin, line_no, "expected `scale_id<TAB>sentence`");
        std::string scale_id = trim(line.substr(0, tab));
        std::string sentence = trim(line.substr(tab + 1));
        if (scales.find(scale_id) == nullptr)
            throw ParseError(origin, line_no, "unknown scale_id '" + scale_id + "'");

        std::size_t count = 0;
        for (std::size_t p = sentence.find(kAdjectivePlaceholder); p != std::string::npos;
             p = sentence.find(kAdjectivePlaceholder, p + 1))
            ++count;
        if (count != 1)
            throw ParseError(origin, line_no,
                             "sentence must contain " + std::string(kAdjectivePlaceholder) +
                                 " exactly once (found " + std::to_string(count) + ")");

        auto& set = map[scale_id];
        set.scale_id = scale_id;
        set.sentences.push_back(sentence);
    }

    for (const auto& [id, set] : map) {
        if (set.sentences.size() != kContextSentencesPerScale)
            throw ValidationError(origin + ": scale '" + id + "' has " +
                                  std::to_string(set.sentences.size()) + " sentences, expected " +
                                  std::to_string(kContextSentencesPerScale));
    }
    return map;
}

namespace {

SIItem make_si_item(const std::string& origin, std::size_t row_no, const std::string& item_id,
                    const std::string& utterance, const std::string& predicate,
                    const std::string& weak, const std::string& strong, double proportion,
                    std::optional<double> string_surprisal,
                    std::optional<double> concept_surprisal) {
    auto fail = [&](const std::string& msg) -> void {
        throw ParseError(origin, row_no, "item '" + item_id + "': " + msg);
    };
    SIItem item;
    item.item_id = item_id;
    item.utterance = utterance;
    item.question_predicate = predicate;
    if (item.item_id.empty()) fail("missing item_id");
    if (item.utterance.empty()) fail("missing utterance");
    if (item.question_predicate.empty()) fail("missing question_predicate");
    try {
        item.weak_adj = make_adjective(weak);
        item.strong_adj = make_adjective(strong);
    } catch (const ValidationError& e) {
        fail(e.what());
    }
    if (!(proportion >= 0.0 && proportion <= 1.0))
        fail("proportion_yes out of range [0,1]: " + std::to_string(proportion));
    item.proportion_yes = proportion;
    item.gold_label = proportion >= 0.5;
    if (string_surprisal.has_value() != concept_surprisal.has_value())
        fail("surprisal features must be both present or both absent");
    item.string_surprisal = string_surprisal;
    item.concept_surprisal = concept_surprisal;
    return item;
}

SIDataset parse_si_json(const std::string& text, const std::string& origin,
                        std::string dataset_id) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text, nullptr, true, /*ignore_comments=*/true);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(origin + ": " + e.what());
    }
    if (!doc.is_array()) throw ParseError(origin + ": expected a JSON array of items");
    SIDataset ds;
    ds.dataset_id = std::move(dataset_id);
    std::size_t row = 0;
    for (const auto& j : doc) {
        ++row;
        auto opt = [&](const char* key) -> std::optional<double> {
            if (!j.contains(key) || j[key].is_null()) return std::nullopt;
            return j[key].get<double>();
        };
        auto req = [&](const char* key) -> std::string {
            if (!j.contains(key))
                throw ParseError(origin, row, std::string("missing required field '") + key + "'");
            return j[key].get<std::string>();
        };
        if (!j.contains("proportion_yes"))
            throw ParseError(origin, row, "missing required field 'proportion_yes'");
        ds.items.push_back(make_si_item(origin, row, req("item_id"), req("utterance"),
                                        req("question_predicate"), req("weak_adj"),
                                        req("strong_adj"), j["proportion_yes"].get<double>(),
                                        opt("string_surprisal"), opt("concept_surprisal")));
    }
    return ds;
}

}  // namespace

SIDataset parse_si_csv(const std::string& text, const std::string& origin,
                       std::string dataset_id) {
    auto rows = parse_csv(text, origin);
    if (rows.empty()) throw ParseError(origin + ": empty file");
    const auto& header = rows.front();
    auto col = [&](const std::string& name) -> int {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (trim(header[i]) == name) return static_cast<int>(i);
        return -1;
    };
    int c_id = col("item_id"), c_utt = col("utterance"), c_pred = col("question_predicate");
    int c_weak = col("weak_adj"), c_strong = col("strong_adj"), c_prop = col("proportion_yes");
    int c_ss = col("string_surprisal"), c_cs = col("concept_surprisal");
    for (auto [c, name] : {std::pair{c_id, "item_id"}, {c_utt, "utterance"},
                           {c_pred, "question_predicate"}, {c_weak, "weak_adj"},
                           {c_strong, "strong_adj"}, {c_prop, "proportion_yes"}}) {
        if (c < 0) throw ParseError(origin + ": missing required column '" + std::string(name) + "'");
    }

    SIDataset ds;
    ds.dataset_id = std::move(dataset_id);
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        auto cell = [&](int c) -> std::string {
            return (c >= 0 && c < static_cast<int>(row.size())) ? trim(row[c]) : std::string();
        };
        auto opt_cell = [&](int c) -> std::optional<double> {
            std::string v = cell(c);
            if (v.empty()) return std::nullopt;
            try {
                return std::stod(v);
            } catch (...) {
                throw ParseError(origin, r + 1, "bad numeric value '" + v + "'");
            }
        };
        std::string prop = cell(c_prop);
        if (prop.empty()) throw ParseError(origin, r + 1, "missing required field 'proportion_yes'");
        double p = 0.0;
        try {
            p = std::stod(prop);
        } catch (...) {
            throw ParseError(origin, r + 1, "bad proportion_yes '" + prop + "'");
        }
        ds.items.push_back(make_si_item(origin, r + 1, cell(c_id), cell(c_utt), cell(c_pred),
                                        cell(c_weak), cell(c_strong), p, opt_cell(c_ss),
                                        opt_cell(c_cs)));
    }
    return ds;
}

SIDataset load_si_dataset(const std::filesystem::path& path, std::optional<SIManifest> manifest,
                          std::string dataset_id) {
    std::string text = read_file(path);
    std::string id = default_dataset_id(path, dataset_id);
    SIDataset ds = path.extension() == ".json" ? parse_si_json(text, path.string(), id)
                                               : parse_si_csv(text, path.string(), id);
    std::set<std::string> ids;
    for (const auto& it : ds.items)
        if (!ids.insert(it.item_id).second)
            throw ValidationError(path.string() + ": duplicate item_id '" + it.item_id + "'");

    if (manifest) {
        std::size_t yes = ds.yes_count();
        std::size_t no = ds.items.size() - yes;
        if (ds.items.size() != manifest->total || yes != manifest->yes || no != manifest->no)
            throw ValidationError(path.string() + ": manifest mismatch: expected " +
                                  std::to_string(manifest->total) + " items (" +
                                  std::to_string(manifest->yes) + " yes / " +
                                  std::to_string(manifest->no) + " no), found " +
                                  std::to_string(ds.items.size()) + " (" + std::to_string(yes) +
                                  " yes / " + std::to_string(no) + " no)");
    }
    return ds;
}

std::string to_tsv(const ScaleDataset& dataset) {
    std::string out;
    for (const auto& s : dataset.scales) {
        out += s.scale_id;
        out += '\t';
        for (std::size_t gi = 0; gi < s.groups.size(); ++gi) {
            if (gi) out += " < ";
            for (std::size_t i = 0; i < s.groups[gi].size(); ++i) {
                if (i) out += " = ";
                out += s.groups[gi][i].surface;
            }
        }
        out += '\n';
    }
    return out;
}

std::string to_tsv(const ContextMap& contexts) {
    std::string out;
    for (const auto& [id, set] : contexts)
        for (const auto& s : set.sentences) out += id + "\t" + s + "\n";
    return out;
}

std::string to_csv(const SIDataset& dataset) {
    std::string out =
        "item_id,utterance,question_predicate,weak_adj,strong_adj,proportion_yes,"
        "string_surprisal,concept_surprisal\n";
    for (const auto& it : dataset.items) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.10g", it.proportion_yes);
        out += csv_escape(it.item_id) + "," + csv_escape(it.utterance) + "," +
               csv_escape(it.question_predicate) + "," + it.weak_adj.surface + "," +
               it.strong_adj.surface + "," + buf + ",";
        if (it.string_surprisal) {
            std::snprintf(buf, sizeof(buf), "%.10g", *it.string_surprisal);
            out += buf;
        }
        out += ",";
        if (it.concept_surprisal) {
            std::snprintf(buf, sizeof(buf), "%.10g", *it.concept_surprisal);
            out += buf;
        }
        out += "\n";
    }
    return out;
}

}  // namespace scaladj
