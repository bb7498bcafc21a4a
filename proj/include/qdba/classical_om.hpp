#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "qdba/errors.hpp"
#include "qdba/sim_harness.hpp"
#include "qdba/types.hpp"

namespace qdba {

/// Oral-messages algorithm OM(n) over m processes. Values are plain integers
/// so the same recursion carries bits or clock differences.
struct OmConfig
{
    int m = 4;
    int n = 1;
    std::int64_t default_value = 0;

    void validate() const
    {
        if (n < 0) throw ConfigError("OM depth n must be >= 0");
        if (m < n + 2) throw ConfigError("OM needs m >= n + 2");
    }
};

struct OmResult
{
    std::map<ProcessId, std::int64_t> decisions; // every lieutenant, faulty ones included
    std::size_t messages = 0;
};

/// Lower median: element floor((k-1)/2) of the sorted values.
inline std::int64_t lower_median(std::vector<std::int64_t> values)
{
    if (values.empty()) throw ConfigError("median of an empty set");
    const auto mid = values.begin() + static_cast<std::ptrdiff_t>((values.size() - 1) / 2);
    std::nth_element(values.begin(), mid, values.end());
    return *mid;
}

namespace detail {

/// What `from` actually transmits to `to` at recursion depth `depth`; nullopt is silence.
inline std::optional<std::int64_t> om_transmit(const FaultProfile& prof, int depth, ProcessId from, ProcessId to,
                                               std::int64_t value)
{
    return std::visit(
        [&](const auto& s) -> std::optional<std::int64_t> {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Honest>) {
                return value;
            } else if constexpr (std::is_same_v<T, Crash>) {
                if (depth >= s.round) return std::nullopt;
                return value;
            } else if constexpr (std::is_same_v<T, SplitBroadcast>) {
                const auto it = s.values.find(to);
                if (it == s.values.end()) return value;
                if (!it->second) return std::nullopt;
                return static_cast<std::int64_t>(*it->second);
            } else if constexpr (std::is_same_v<T, FlipRelayForgedList> || std::is_same_v<T, FlipRelayRandomList>) {
                return 1 - value;
            } else if constexpr (std::is_same_v<T, BotAlways>) {
                return std::nullopt;
            } else if constexpr (std::is_same_v<T, LieClockDifferences>) {
                const auto it = s.offsets.find(to);
                return value + (it == s.offsets.end() ? 0 : it->second);
            } else {
                for (const auto& msg : s.script)
                    if (msg.round == depth && msg.from == from && msg.to == to)
                        if (const auto* c = std::get_if<Claim>(&msg.payload)) return static_cast<std::int64_t>(c->value);
                return std::nullopt;
            }
        },
        prof.strategy);
}

struct OmRecursion
{
    const FaultPlan& plan;
    std::int64_t default_value;
    std::size_t messages = 0;

    /// Returns, for each lieutenant, the value it settles on for `commander`'s value.
    std::map<ProcessId, std::int64_t> run(int n, int depth, ProcessId commander, std::int64_t value,
                                          const std::vector<ProcessId>& lieutenants)
    {
        std::map<ProcessId, std::int64_t> received;
        const auto& prof = profile_of(plan, commander);
        for (ProcessId l : lieutenants) {
            ++messages;
            received[l] = om_transmit(prof, depth, commander, l, value).value_or(default_value);
        }
        if (n == 0) return received;

        // relayed[i][j]: value j obtains from lieutenant i's sub-run
        std::map<ProcessId, std::map<ProcessId, std::int64_t>> relayed;
        for (ProcessId i : lieutenants) {
            std::vector<ProcessId> rest;
            for (ProcessId j : lieutenants)
                if (j != i) rest.push_back(j);
            relayed[i] = run(n - 1, depth + 1, i, received[i], rest);
        }

        std::map<ProcessId, std::int64_t> decided;
        for (ProcessId j : lieutenants) {
            std::vector<std::int64_t> values{received[j]};
            for (ProcessId i : lieutenants)
                if (i != j) values.push_back(relayed[i][j]);
            decided[j] = lower_median(std::move(values));
        }
        return decided;
    }
};

} // namespace detail

inline OmResult om(const OmConfig& cfg, std::int64_t commander_value, const FaultPlan& plan, ProcessId commander = 1)
{
    cfg.validate();
    validate_plan(plan, cfg.m);
    std::vector<ProcessId> lieutenants;
    for (ProcessId p = 1; p <= cfg.m; ++p)
        if (p != commander) lieutenants.push_back(p);
    detail::OmRecursion rec{plan, cfg.default_value};
    OmResult out;
    out.decisions = rec.run(cfg.n, 0, commander, commander_value, lieutenants);
    out.messages = rec.messages;
    return out;
}

/// M(0, m) = m - 1;  M(n, m) = (m - 1) * (1 + M(n - 1, m - 1)).
inline std::uint64_t om_message_count(int n, int m)
{
    OmConfig{m, n, 0}.validate();
    if (n == 0) return static_cast<std::uint64_t>(m - 1);
    return static_cast<std::uint64_t>(m - 1) * (1 + om_message_count(n - 1, m - 1));
}

/// Honest lieutenants agree with each other and, if honest, with the commander.
inline bool om_agreement_holds(const OmResult& r, const FaultPlan& plan, ProcessId commander,
                               std::int64_t commander_value)
{
    std::optional<std::int64_t> agreed;
    if (profile_of(plan, commander).honest()) agreed = commander_value;
    for (const auto& [p, v] : r.decisions) {
        if (!profile_of(plan, p).honest()) continue;
        if (!agreed)
            agreed = v;
        else if (*agreed != v)
            return false;
    }
    return true;
}

} // namespace qdba
