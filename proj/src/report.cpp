#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>

#include "scaladj/error.hpp"
#include "scaladj/runner.hpp"

namespace scaladj {

using nlohmann::json;

namespace {

std::string fmt(double v, int digits = 3) {
    if (std::isnan(v)) return "nan";
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
    return buf;
}

struct Cell {
    std::string text;
    double value = std::nan("");
};

// Ordered table: rows/columns keep first-appearance order.
struct Grid {
    std::vector<std::string> rows, cols;
    std::map<std::pair<std::string, std::string>, Cell> cells;

    void put(const std::string& row, const std::string& col, Cell cell) {
        if (std::find(rows.begin(), rows.end(), row) == rows.end()) rows.push_back(row);
        if (std::find(cols.begin(), cols.end(), col) == cols.end()) cols.push_back(col);
        cells[{row, col}] = std::move(cell);
    }

    std::string render(const std::string& row_header) const {
        std::string out = "| " + row_header + " |";
        for (const auto& c : cols) out += " " + c + " |";
        out += "\n|" + std::string(" --- |");
        for (std::size_t i = 0; i < cols.size(); ++i) out += " --- |";
        out += "\n";

        // best (max) value per column gets bolded
        std::map<std::string, double> best;
        for (const auto& [key, cell] : cells) {
            if (std::isnan(cell.value)) continue;
            auto it = best.find(key.second);
            if (it == best.end() || cell.value > it->second) best[key.second] = cell.value;
        }
        for (const auto& r : rows) {
            out += "| " + r + " |";
            for (const auto& c : cols) {
                auto it = cells.find({r, c});
                if (it == cells.end()) {
                    out += " \xE2\x80\x94 |";  // em dash for missing cells
                    continue;
                }
                bool bold = !std::isnan(it->second.value) && best.count(c) &&
                            it->second.value == best[c];
                out += bold ? " **" + it->second.text + "** |" : " " + it->second.text + " |";
            }
            out += "\n";
        }
        return out;
    }
};

std::string probe_of(const RunRecord& r) { return r.document.at("probe").get<std::string>(); }

std::string t2(const std::vector<RunRecord>& records) {
    Grid grid;
    for (const auto& r : records) {
        if (probe_of(r) != "membership-direct") continue;
        const auto& m = r.document.at("metrics");
        if (m.at("variant") != "endpoints-sum") continue;
        double mean = m.at("mrr").at("mean").get<double>();
        double std_ = m.at("mrr").at("std").get<double>();
        std::string text = fmt(mean);
        if (std_ > 0.0) text += " ±" + fmt(std_);
        grid.put(r.document.at("backend_id"), r.document.at("dataset_id"), {text, mean});
    }
    return "### Direct scale membership (MRR, best layer, mean ± std over seeds)\n\n" +
           grid.render("backend");
}

std::string t4(const std::vector<RunRecord>& records) {
    Grid grid;
    for (const auto& r : records) {
        if (probe_of(r) != "intensity-direct") continue;
        const auto& m = r.document.at("metrics");
        std::string method = m.at("mode") == "shuffle-bind" ? "bound-input" : "separate-contexts";
        std::string row = r.document.at("backend_id").get<std::string>() + " / " + method;
        double mean = m.at("pacc").at("mean").get<double>();
        std::string text = fmt(mean) + " (" + m.at("dvec_source").get<std::string>() + ")";
        grid.put(row, r.document.at("dataset_id"), {text, mean});
    }
    return "### Direct intensity ranking (pairwise accuracy, best layer; dVec source in "
           "parentheses)\n\n" +
           grid.render("backend / method");
}

std::string t5(const std::vector<RunRecord>& records, const std::string& probe) {
    Grid grid;
    for (const auto& r : records) {
        if (probe_of(r) != probe) continue;
        const auto& m = r.document.at("metrics");
        double acc = m.at("accuracy").get<double>();
        std::string text =
            fmt(acc) + " [" + std::to_string(m.at("template_id").get<int>()) + "]";
        grid.put(r.document.at("backend_id"), r.document.at("dataset_id"), {text, acc});
    }
    std::string title = probe == "intensity-indirect"
                            ? "### Indirect intensity ranking (pairwise accuracy, template id in "
                              "brackets)\n\n"
                            : "### Indirect scale membership (top-k completion accuracy, template "
                              "id in brackets)\n\n";
    return title + grid.render("backend");
}

std::string t7(const std::vector<RunRecord>& records) {
    Grid grid;
    std::map<std::string, std::vector<double>> row_values;  // for the Avg column
    for (const auto& r : records) {
        std::string probe = probe_of(r);
        if (probe != "diversity" && probe != "lr-baseline") continue;
        const auto& m = r.document.at("metrics");
        double f1 = m.at("macro_f1").get<double>();
        std::string row, text;
        if (probe == "diversity") {
            row = r.document.at("backend_id").get<std::string>();
            text = fmt(f1) + " (" + m.at("strategy").get<std::string>() + ")";
        } else {
            row = "LR";
            std::string train;
            for (const auto& t : m.at("best_train")) {
                if (!train.empty()) train += "+";
                train += t.get<std::string>();
            }
            text = fmt(f1) + " (" + train + ")";
        }
        grid.put(row, r.document.at("dataset_id"), {text, f1});
        row_values[row].push_back(f1);
    }
    for (const auto& [row, values] : row_values) {
        double sum = 0.0;
        for (double v : values) sum += v;
        double avg = sum / static_cast<double>(values.size());
        grid.put(row, "Avg", {fmt(avg), avg});
    }
    return "### Scalar diversity (macro-F1; strategy or training set in parentheses)\n\n" +
           grid.render("model");
}

std::string a8(const std::vector<RunRecord>& records) {
    Grid grid;
    for (const auto& r : records) {
        if (probe_of(r) != "intensity-direct") continue;
        const auto& m = r.document.at("metrics");
        std::string method = m.at("mode") == "shuffle-bind" ? "bound-input" : "separate-contexts";
        std::string row = r.document.at("backend_id").get<std::string>() + " / " + method +
                          " (dVec " + m.at("dvec_source").get<std::string>() + ")";
        std::string ds = r.document.at("dataset_id").get<std::string>();
        for (const char* metric : {"pacc", "tau", "rho"}) {
            double mean = m.at(metric).at("mean").get<double>();
            grid.put(row, ds + " " + (metric == std::string("pacc") ? "P-ACC" : metric),
                     {fmt(mean), mean});
        }
    }
    return "### Direct intensity ranking with rank correlations (best layer)\n\n" +
           grid.render("backend / method");
}

}  // namespace

std::string report(const std::vector<RunRecord>& records, const std::string& table) {
    if (table == "T2") return t2(records);
    if (table == "T4") return t4(records);
    if (table == "T5") return t5(records, "intensity-indirect");
    if (table == "T3") return t5(records, "membership-indirect");
    if (table == "T7") return t7(records);
    if (table == "A8") return a8(records);
    throw ConfigError("unknown table '" + table + "' (expected T2, T3, T4, T5, T7 or A8)");
}

}  // namespace scaladj
