#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "scaladj/error.hpp"
#include "scaladj/runner.hpp"
#include "scaladj/version.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitBackend = 2;

int guarded(const std::function<void()>& body) {
    try {
        body();
        return kExitOk;
    } catch (const scaladj::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const scaladj::BackendError& e) {
        std::cerr << "backend error: " << e.what() << "\n";
        return kExitBackend;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBackend;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"scalar-adjective probing toolkit"};
    app.set_version_flag("--version", scaladj::kToolkitVersion);
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> overrides;
    auto* run_cmd = app.add_subcommand("run", "execute an experiment config");
    run_cmd->add_option("--config", config_path, "experiment config (JSON)")->required();
    run_cmd->add_option("--override", overrides, "key=value config override (repeatable)");

    std::string validate_path;
    auto* validate_cmd = app.add_subcommand("validate", "check a config without running it");
    validate_cmd->add_option("--config", validate_path, "experiment config (JSON)")->required();

    std::string table, runs_glob, out_path;
    auto* report_cmd = app.add_subcommand("report", "summarize run records as a markdown table");
    report_cmd->add_option("--table", table, "table layout: T2, T3, T4, T5, T7 or A8")->required();
    report_cmd->add_option("--runs", runs_glob, "glob over record.json files")->required();
    report_cmd->add_option("--out", out_path, "write the table to a file instead of stdout");

    CLI11_PARSE(app, argc, argv);

    if (run_cmd->parsed()) {
        return guarded([&] {
            auto config = scaladj::ExperimentConfig::load(config_path, overrides);
            scaladj::run(config);
        });
    }
    if (validate_cmd->parsed()) {
        return guarded([&] {
            scaladj::ExperimentConfig::load(validate_path);
            std::cout << "config ok\n";
        });
    }
    return guarded([&] {
        std::vector<scaladj::RunRecord> records;
        for (const auto& path : scaladj::expand_glob(runs_glob))
            records.push_back(scaladj::RunRecord::load(path));
        std::string rendered = scaladj::report(records, table);
        if (out_path.empty()) {
            std::cout << rendered;
        } else {
            std::ofstream out(out_path, std::ios::trunc);
            if (!out) throw scaladj::ValidationError("cannot write " + out_path);
            out << rendered;
            std::cout << "wrote " << out_path << "\n";
        }
    });
}
