#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace scaladj {

// Bad input files or configs. CLI maps these to exit code 1.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

class ParseError : public ValidationError {
public:
    ParseError(const std::string& file, std::size_t line, const std::string& what)
        : ValidationError(file + ":" + std::to_string(line) + ": " + what) {}
    explicit ParseError(const std::string& what) : ValidationError(what) {}
};

class ConfigError : public ValidationError {
public:
    explicit ConfigError(const std::string& what) : ValidationError(what) {}
};

// Scoring-backend failures. CLI maps these to exit code 2.
class BackendError : public std::runtime_error {
public:
    explicit BackendError(const std::string& what) : std::runtime_error(what) {}
};

// Lookup failures for specific words in a vector backend. Probes catch this
// to skip the affected scale with a warning instead of aborting the run.
class MissingVectorError : public BackendError {
public:
    explicit MissingVectorError(std::vector<std::string> missing)
        : BackendError(join(missing)), words(std::move(missing)) {}

    std::vector<std::string> words;

private:
    static std::string join(const std::vector<std::string>& ws) {
        std::string msg = "missing vector for:";
        for (const auto& w : ws) msg += " '" + w + "'";
        return msg;
    }
};

}  // namespace scaladj
