// Times the probe evaluation kernels with the serial reference path
// (workers=1) against the OpenMP path, on a synthetic dataset scored by the
// deterministic hash backend, and checks that both paths agree bit-for-bit.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "CLI11.hpp"
#include "scaladj/backends/mock.hpp"
#include "scaladj/direct_probes.hpp"

using namespace scaladj;

namespace {

ScaleDataset synth_dataset(const std::string& id, int num_scales, int adjs_per_scale, int salt) {
    ScaleDataset ds;
    ds.dataset_id = id;
    for (int s = 0; s < num_scales; ++s) {
        HalfScale scale;
        scale.scale_id = id + "-s" + std::to_string(s);
        for (int a = 0; a < adjs_per_scale; ++a) {
            std::string word = "w" + std::to_string(salt) + "x" + std::to_string(s) + "x" +
                               std::to_string(a);
            scale.groups.push_back({Adjective{word}});
        }
        ds.scales.push_back(std::move(scale));
    }
    return ds;
}

ContextMap synth_contexts(const ScaleDataset& ds) {
    ContextMap map;
    for (const auto& scale : ds.scales) {
        ContextSet set;
        set.scale_id = scale.scale_id;
        for (std::size_t i = 0; i < kContextSentencesPerScale; ++i)
            set.sentences.push_back("sentence number " + std::to_string(i) +
                                    " says it is {ADJ} here");
        map[scale.scale_id] = std::move(set);
    }
    return map;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// bitwise equality, except NaN == NaN
bool same_values(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!(a[i] == b[i] || (std::isnan(a[i]) && std::isnan(b[i])))) return false;
    return true;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"serial vs OpenMP benchmark for the probe kernels"};
    int num_scales = 120, adjs = 5, dims = 256, layers = 8, seeds = 3, threads = 0;
    app.add_option("--scales", num_scales, "scales per dataset");
    app.add_option("--adjs", adjs, "adjectives per scale");
    app.add_option("--dims", dims, "embedding width");
    app.add_option("--layers", layers, "layers");
    app.add_option("--seeds", seeds, "seeds");
    app.add_option("--threads", threads, "parallel worker count (0 = all cores)");
    CLI11_PARSE(app, argc, argv);

#ifdef _OPENMP
    int max_threads = threads > 0 ? threads : omp_get_max_threads();
#else
    int max_threads = 1;
    std::printf("built without OpenMP; parallel run degenerates to serial\n");
#endif

    HashEmbeddingBackend backend(dims, layers, /*context_sensitive=*/true);
    auto eval_set = synth_dataset("bench-eval", num_scales, adjs, 1);
    auto dvec_set = synth_dataset("bench-dvec", num_scales / 2 + 1, adjs, 2);
    auto contexts = synth_contexts(eval_set);

    DirectProbeOptions opts;
    opts.seeds.clear();
    for (int s = 0; s < seeds; ++s) opts.seeds.push_back(static_cast<std::uint32_t>(s));
    opts.mode = RepMode::InContext;

    std::printf("dataset: %d scales x %d adjectives, %d dims, %d layers, %d seeds\n", num_scales,
                adjs, dims, layers, seeds);

    // membership kernel
    opts.workers = 1;
    auto t0 = std::chrono::steady_clock::now();
    auto serial = membership_mrr(backend, eval_set, contexts, opts);
    double serial_s = seconds_since(t0);

    opts.workers = max_threads;
    t0 = std::chrono::steady_clock::now();
    auto parallel = membership_mrr(backend, eval_set, contexts, opts);
    double parallel_s = seconds_since(t0);

    bool equal = serial.per_layer.size() == parallel.per_layer.size();
    for (std::size_t i = 0; equal && i < serial.per_layer.size(); ++i)
        equal = same_values(serial.per_layer[i].per_seed, parallel.per_layer[i].per_seed);
    std::printf("membership   serial %.3fs | %d threads %.3fs | speedup %.2fx | %s\n", serial_s,
                max_threads, parallel_s, serial_s / parallel_s,
                equal ? "bit-identical" : "MISMATCH");

    // intensity kernel
    opts.mode = RepMode::ShuffleBind;
    opts.workers = 1;
    t0 = std::chrono::steady_clock::now();
    auto iserial = intensity_eval(backend, eval_set, dvec_set, nullptr, nullptr, opts);
    double iserial_s = seconds_since(t0);

    opts.workers = max_threads;
    t0 = std::chrono::steady_clock::now();
    auto iparallel = intensity_eval(backend, eval_set, dvec_set, nullptr, nullptr, opts);
    double iparallel_s = seconds_since(t0);

    bool iequal = iserial.pacc_per_layer.size() == iparallel.pacc_per_layer.size();
    for (std::size_t i = 0; iequal && i < iserial.pacc_per_layer.size(); ++i)
        iequal = same_values(iserial.pacc_per_layer[i].per_seed,
                             iparallel.pacc_per_layer[i].per_seed) &&
                 same_values(iserial.tau_per_layer[i].per_seed,
                             iparallel.tau_per_layer[i].per_seed);
    std::printf("intensity    serial %.3fs | %d threads %.3fs | speedup %.2fx | %s\n", iserial_s,
                max_threads, iparallel_s, iserial_s / iparallel_s,
                iequal ? "bit-identical" : "MISMATCH");

    return (equal && iequal) ? 0 : 1;
}
