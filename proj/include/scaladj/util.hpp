#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <vector>

namespace scaladj {

// ---- deterministic hashing / RNG ----------------------------------------
// Self-contained so sampling is reproducible across standard libraries.

constexpr std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        state_ += 0x9e3779b97f4a7c15ull;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // Uniform in [0, n). Modulo bias is negligible for the small n used here
    // and keeps the draw identical on every platform.
    std::size_t uniform_index(std::size_t n) { return static_cast<std::size_t>(next() % n); }

    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

private:
    std::uint64_t state_;
};

// One RNG stream per (run seed, scale); keeps per-scale work order-independent.
inline SplitMix64 scoped_rng(std::uint32_t seed, std::string_view scope) {
    return SplitMix64(splitmix64(static_cast<std::uint64_t>(seed) ^ fnv1a64(scope)));
}

template <typename T>
void shuffle_in_place(std::vector<T>& items, SplitMix64& rng) {
    for (std::size_t i = items.size(); i > 1; --i) {
        std::swap(items[i - 1], items[rng.uniform_index(i)]);
    }
}

// ---- vector math ----------------------------------------------------------

inline double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

// NaN when either vector has zero norm; callers flag/exclude those items.
inline double cosine(std::span<const double> a, std::span<const double> b) {
    double na = norm(a), nb = norm(b);
    if (na == 0.0 || nb == 0.0) return std::numeric_limits<double>::quiet_NaN();
    return dot(a, b) / (na * nb);
}

inline void add_inplace(std::vector<double>& acc, std::span<const double> v) {
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += v[i];
}

inline void sub_inplace(std::vector<double>& acc, std::span<const double> v) {
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] -= v[i];
}

inline void scale_inplace(std::vector<double>& v, double c) {
    for (double& x : v) x *= c;
}

struct MeanStd {
    double mean = 0.0;
    double stddev = 0.0;  // population form
};

inline MeanStd mean_std(std::span<const double> xs) {
    MeanStd r;
    if (xs.empty()) return r;
    for (double x : xs) r.mean += x;
    r.mean /= static_cast<double>(xs.size());
    double acc = 0.0;
    for (double x : xs) acc += (x - r.mean) * (x - r.mean);
    r.stddev = std::sqrt(acc / static_cast<double>(xs.size()));
    return r;
}

// ---- strings ----------------------------------------------------------------

inline std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

inline std::string collapse_spaces(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    bool in_space = false;
    for (char c : s) {
        if (c == ' ') {
            in_space = true;
            continue;
        }
        if (in_space && !out.empty()) out.push_back(' ');
        in_space = false;
        out.push_back(c);
    }
    return out;
}

inline std::string to_lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

inline std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= s.size(); ++i) {
        if (i == s.size() || s[i] == sep) {
            parts.emplace_back(s.substr(start, i - start));
            start = i + 1;
        }
    }
    return parts;
}

inline bool is_lower_alpha_word(std::string_view w) {
    if (w.empty()) return false;
    return std::all_of(w.begin(), w.end(),
                       [](unsigned char c) { return c >= 'a' && c <= 'z'; });
}

// Strips leading/trailing ASCII punctuation, lowercases. Used when matching
// generated completion candidates against scale members.
inline std::string normalize_candidate(std::string_view w) {
    std::size_t b = 0, e = w.size();
    auto is_word_char = [](unsigned char c) { return std::isalnum(c) || c == '-'; };
    while (b < e && !is_word_char(static_cast<unsigned char>(w[b]))) ++b;
    while (e > b && !is_word_char(static_cast<unsigned char>(w[e - 1]))) --e;
    return to_lower(w.substr(b, e - b));
}

// SHA-256 hex digest (OpenSSL); used for cache keys and run directories.
std::string sha256_hex(std::string_view data);

// UTC timestamp like 2026-01-02T03:04:05Z.
std::string utc_timestamp();

}  // namespace scaladj
