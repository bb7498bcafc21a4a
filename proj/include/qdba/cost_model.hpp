#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "qdba/errors.hpp"
#include "qdba/qudit_channel.hpp"
#include "qdba/rng.hpp"

namespace qdba {

enum class Scheme { SingleQudit, QkdLists, EntangledState };

NLOHMANN_JSON_SERIALIZE_ENUM(Scheme, {{Scheme::SingleQudit, "single-qudit"},
                                      {Scheme::QkdLists, "qkd-lists"},
                                      {Scheme::EntangledState, "entangled-state"}})

struct CostModel
{
    Scheme scheme = Scheme::SingleQudit;
    int m = 3;
    double eta = 1.0;

    void validate() const
    {
        if (eta < 0.0 || eta > 1.0) throw ConfigError("eta must lie in [0,1]");
        if (m < 2) throw ConfigError("m must be >= 2");
        if (scheme == Scheme::EntangledState && m < 3) throw ConfigError("entangled-state comparison needs m >= 3");
    }
};

inline int ceil_log2(int m)
{
    int bits = 0;
    while ((1 << bits) < m) ++bits;
    return bits;
}

/// One channel of a distribution scheme and the detections it needs per list element.
struct ChannelCost
{
    std::string channel;
    int detections = 0;
};

/// Per-channel detection accounting for one list element.
inline std::vector<ChannelCost> detection_budget(Scheme scheme, int m)
{
    std::vector<ChannelCost> out;
    switch (scheme) {
    case Scheme::SingleQudit:
        out.push_back({"qudit P1->...->P" + std::to_string(m), 1});
        break;
    case Scheme::QkdLists:
        out.push_back({"qkd P" + std::to_string(m) + "-P1", ceil_log2(m)});
        for (int l = 2; l <= m - 1; ++l) out.push_back({"qkd P" + std::to_string(m) + "-P" + std::to_string(l), 1});
        break;
    case Scheme::EntangledState:
        for (int l = 1; l <= m - 1; ++l)
            out.push_back({"qkd channel " + std::to_string(l), ceil_log2(m)});
        break;
    }
    return out;
}

inline int detections_per_element(Scheme scheme, int m)
{
    int total = 0;
    for (const auto& c : detection_budget(scheme, m)) total += c.detections;
    return total;
}

/// eta, eta^{m-2+ceil(log2 m)} or eta^{(m-1) ceil(log2 m)}.
inline double p_success(const CostModel& model)
{
    model.validate();
    return std::pow(model.eta, detections_per_element(model.scheme, model.m));
}

struct EfficiencyEstimate
{
    std::size_t trials = 0;
    std::size_t successes = 0;
    std::size_t rounds = 0; // qudit rounds simulated (SingleQudit only)

    double rate() const { return trials ? static_cast<double>(successes) / static_cast<double>(trials) : 0.0; }
};

/// Success fraction of list-element distribution under detector efficiency
/// eta, conditional on the run being acceptable with ideal detectors.
inline EfficiencyEstimate monte_carlo_efficiency(Scheme scheme, int m, double eta, std::size_t trials, Rng& rng)
{
    CostModel{scheme, m, eta}.validate();
    if (trials < 1) throw ConfigError("trials must be >= 1");
    EfficiencyEstimate est;
    est.trials = trials;
    if (scheme == Scheme::SingleQudit) {
        for (std::size_t t = 0; t < trials; ++t) {
            // draw rounds until one would be post-selected by a perfect detector
            for (;;) {
                const auto rec = run_distribution_round(m, eta, rng);
                ++est.rounds;
                if (rec.basis_sum(m) != 0 || rec.value_sum(m) != 0) continue;
                if (rec.detected) ++est.successes;
                break;
            }
        }
        return est;
    }
    const int detections = detections_per_element(scheme, m);
    for (std::size_t t = 0; t < trials; ++t) {
        bool all = true;
        for (int d = 0; d < detections; ++d) all = rng.bernoulli(eta) && all;
        if (all) ++est.successes;
    }
    return est;
}

struct ListTypeCount
{
    std::uint64_t correlated_lists = 0;  // 2^{m-1}
    std::uint64_t permutation_lists = 0; // m!
};

inline ListTypeCount list_type_count(int m)
{
    if (m < 2 || m > 20) throw ConfigError("list_type_count supports 2 <= m <= 20");
    std::uint64_t fact = 1;
    for (int i = 2; i <= m; ++i) fact *= static_cast<std::uint64_t>(i);
    return {std::uint64_t{1} << (m - 1), fact};
}

/// Runs fn(i) for i in [0, n) over worker threads; results land at index i.
template <typename Fn>
auto parallel_trials(std::size_t n, Fn fn, unsigned workers = std::thread::hardware_concurrency())
{
    using R = decltype(fn(std::size_t{0}));
    std::vector<R> out(n);
    workers = std::max(1U, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
    if (workers == 1) {
        for (std::size_t i = 0; i < n; ++i) out[i] = fn(i);
        return out;
    }
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < n; i += workers) out[i] = fn(i);
        });
    for (auto& t : pool) t.join();
    return out;
}

} // namespace qdba
