#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qdba/classical_om.hpp"
#include "qdba/dba_engine.hpp"
#include "qdba/errors.hpp"
#include "qdba/list_store.hpp"
#include "qdba/qudit_channel.hpp"
#include "qdba/rng.hpp"
#include "qdba/sim_harness.hpp"

namespace qdba {

enum class ListBackend { Quantum, Dealer };

NLOHMANN_JSON_SERIALIZE_ENUM(ListBackend, {{ListBackend::Quantum, "quantum"}, {ListBackend::Dealer, "dealer"}})

/// Fresh correlated lists from either backend.
inline CorrelatedListSet make_list_set(ListBackend backend, int m, std::size_t length, double eta, Rng& rng)
{
    if (backend == ListBackend::Dealer) return dealer_generate(m, length, rng);
    return generate_list_set(m, length, eta, rng).lists;
}

/// List length giving an expected honest claim length of `per_claim` positions.
inline std::size_t list_length_for(int m, std::size_t per_claim = 64)
{
    return per_claim << (m - 1);
}

// Clocks are drift-free: every offset is an integer tick count relative to a
// global reference and every clock runs at rate 1, so offsets stay constant
// while the protocol executes.
using Offsets = std::vector<std::int64_t>;

struct SyncConfig
{
    int bit_width = 16;
    double resolution = 1e-3; // seconds per tick
    std::vector<ProcessId> rotation; // empty: 1..m
    std::size_t list_length = 0;     // 0: list_length_for(m)
    ListBackend backend = ListBackend::Dealer;
    double eta = 1.0;
    std::int64_t triangle_tolerance = 0; // ticks
    bool fresh_lists_per_bit = true;

    void validate(int m) const
    {
        if (m < 2 || m > 16) throw ConfigError("clock sync supports 2 <= m <= 16");
        if (bit_width < 2 || bit_width > 62) throw ConfigError("bit width must be in [2, 62]");
        if (resolution <= 0.0) throw ConfigError("resolution must be positive");
        if (!fresh_lists_per_bit) throw ConfigError("each bit needs its own fresh list set");
        if (triangle_tolerance < 0) throw ConfigError("triangle tolerance must be >= 0");
        if (!rotation.empty()) {
            auto r = rotation;
            std::sort(r.begin(), r.end());
            for (int i = 0; i < m; ++i)
                if (r.size() != static_cast<std::size_t>(m) || r[i] != i + 1)
                    throw ConfigError("rotation must list every process once");
        }
    }

    std::vector<ProcessId> rotation_for(int m) const
    {
        if (!rotation.empty()) return rotation;
        std::vector<ProcessId> r;
        for (ProcessId p = 1; p <= m; ++p) r.push_back(p);
        return r;
    }
};

/// Honest reading offset_x - offset_y.
inline std::int64_t read_difference(ProcessId x, ProcessId y, const Offsets& offsets)
{
    return offsets.at(static_cast<std::size_t>(x - 1)) - offsets.at(static_cast<std::size_t>(y - 1));
}

inline std::int64_t difference_limit(int bits)
{
    return std::int64_t{1} << (bits - 1);
}

/// Two's complement, most significant bit first.
inline std::vector<Bit> encode_difference(std::int64_t delta, int bits)
{
    if (bits < 2 || bits > 62) throw ConfigError("bit width must be in [2, 62]");
    const auto lim = difference_limit(bits);
    if (delta < -lim || delta >= lim) throw std::out_of_range("difference not representable in " + std::to_string(bits) + " bits");
    const auto u = static_cast<std::uint64_t>(delta);
    std::vector<Bit> out(static_cast<std::size_t>(bits));
    for (int i = 0; i < bits; ++i) out[static_cast<std::size_t>(i)] = static_cast<Bit>((u >> (bits - 1 - i)) & 1U);
    return out;
}

inline std::int64_t decode_difference(const std::vector<Bit>& bits)
{
    const auto n = static_cast<int>(bits.size());
    if (n < 2 || n > 62) throw ConfigError("bit width must be in [2, 62]");
    std::uint64_t u = 0;
    for (Bit b : bits) u = (u << 1) | (b & 1U);
    if (bits.front()) return static_cast<std::int64_t>(u) - (std::int64_t{1} << n);
    return static_cast<std::int64_t>(u);
}

struct ClockCheck
{
    bool c1 = false; // honest offsets equal after sync
    bool c2 = false; // every honest |adjustment| <= max honest pairwise |difference| before
    std::int64_t max_adjustment = 0;
    std::int64_t bound = 0;
};

inline ClockCheck check_c1_c2(const Offsets& before, const Offsets& after, const std::vector<ProcessId>& honest)
{
    ClockCheck out;
    out.c1 = true;
    for (ProcessId p : honest) {
        const auto i = static_cast<std::size_t>(p - 1);
        if (after[i] != after[static_cast<std::size_t>(honest.front() - 1)]) out.c1 = false;
        out.max_adjustment = std::max(out.max_adjustment, std::abs(after[i] - before[i]));
        for (ProcessId q : honest) out.bound = std::max(out.bound, std::abs(read_difference(p, q, before)));
    }
    out.c2 = out.max_adjustment <= out.bound;
    return out;
}

struct RotationReport
{
    ProcessId source = 0;
    std::size_t qb_runs = 0;
    std::size_t messages = 0;
    std::vector<ProcessId> aborted_at; // honest processes that aborted some bit
    std::string status;                // accepted | suspected | aborted (first honest view)
};

struct SyncReport
{
    std::vector<RotationReport> per_rotation;
    std::map<ProcessId, std::int64_t> adjustments; // honest processes
    std::vector<ProcessId> accepted;                // first honest process's accepted sources
    bool views_unanimous = true;
    bool c1 = false;
    bool c2 = false;
    bool aborted = false;
};

inline void to_json(nlohmann::json& j, const SyncReport& r)
{
    auto rot = nlohmann::json::array();
    for (const auto& x : r.per_rotation)
        rot.push_back({{"source", x.source}, {"qb_runs", x.qb_runs}, {"messages", x.messages},
                       {"aborted_at", x.aborted_at}, {"status", x.status}});
    auto adj = nlohmann::json::array();
    for (const auto& [p, a] : r.adjustments) adj.push_back({{"process", p}, {"adjustment", a}});
    j = nlohmann::json{{"per_rotation", rot}, {"adjustments", adj},   {"accepted", r.accepted},
                       {"c1", r.c1},            {"c2", r.c2},          {"aborted", r.aborted},
                       {"views_unanimous", r.views_unanimous}};
}

struct SyncOutcome
{
    Offsets offsets;
    SyncReport report;
};

/// View of one process: source -> agreed difference vector (index y-1 holds
/// D_x[y]); nullopt when any bit of that rotation aborted.
using SyncView = std::map<ProcessId, std::optional<std::vector<std::int64_t>>>;

inline bool triangle_consistent(const std::vector<std::int64_t>& dx, ProcessId y, const std::vector<std::int64_t>& dy,
                                std::int64_t tol)
{
    const auto dxy = dx[static_cast<std::size_t>(y - 1)];
    for (std::size_t z = 0; z < dx.size(); ++z)
        if (std::abs(dx[z] - (dxy + dy[z])) > tol) return false;
    return true;
}

/// Largest set of sources whose vectors are pairwise triangle-consistent;
/// ties go to the lexicographically smallest id set.
inline std::vector<ProcessId> accepted_sources(const SyncView& view, std::int64_t tol)
{
    std::vector<ProcessId> cand;
    for (const auto& [x, d] : view)
        if (d) cand.push_back(x);
    const auto n = cand.size();
    std::vector<std::vector<bool>> ok(n, std::vector<bool>(n, true));
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            if (a != b) ok[a][b] = triangle_consistent(*view.at(cand[a]), cand[b], *view.at(cand[b]), tol);

    std::vector<ProcessId> best;
    for (std::uint32_t mask = 1; mask < (1U << n); ++mask) {
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < n; ++i)
            if (mask & (1U << i)) members.push_back(i);
        if (members.size() < best.size()) continue;
        bool clique = true;
        for (auto a : members)
            for (auto b : members)
                if (a != b && !ok[a][b]) clique = false;
        if (!clique) continue;
        std::vector<ProcessId> ids;
        for (auto i : members) ids.push_back(cand[i]);
        if (ids.size() > best.size() || ids < best) best = ids;
    }
    return best;
}

/// m rotated broadcasts of difference vectors, each entry as bit_width
/// independent QB runs, then a median adjustment over the accepted sources.
inline SyncOutcome run_sync(const Offsets& offsets, const FaultPlan& plan, const SyncConfig& cfg, const Rng& rng,
                            Transcript* transcript = nullptr)
{
    const int m = static_cast<int>(offsets.size());
    cfg.validate(m);
    validate_plan(plan, m);
    const auto honest = honest_ids(plan);
    const auto lim = difference_limit(cfg.bit_width);
    for (ProcessId x = 1; x <= m; ++x)
        for (ProcessId y = 1; y <= m; ++y)
            if (std::abs(read_difference(x, y, offsets)) >= lim)
                throw ConfigError("clock offsets exceed the encodable difference range");

    const std::size_t length = cfg.list_length ? cfg.list_length : list_length_for(m);
    const int bits = cfg.bit_width;
    std::map<ProcessId, SyncView> views;
    SyncReport report;

    for (ProcessId x : cfg.rotation_for(m)) {
        RotationReport rot;
        rot.source = x;
        const auto& prof = profile_of(plan, x);

        std::vector<std::int64_t> truth(static_cast<std::size_t>(m), 0);
        std::vector<std::int64_t> reported(static_cast<std::size_t>(m), 0);
        for (ProcessId y = 1; y <= m; ++y) {
            truth[y - 1] = read_difference(x, y, offsets);
            reported[y - 1] = truth[y - 1];
            if (const auto* lie = std::get_if<LieClockDifferences>(&prof.strategy); lie && y != x) {
                const auto it = lie->offsets.find(y);
                if (it != lie->offsets.end()) reported[y - 1] = std::clamp(truth[y - 1] + it->second, -lim, lim - 1);
            }
        }

        // received[k][y-1][b]: P_k's verdict on bit b of D_x[y]
        std::map<ProcessId, std::vector<std::vector<std::optional<Bit>>>> received;
        for (ProcessId y = 1; y <= m; ++y) {
            if (y == x) continue;
            const auto enc = encode_difference(reported[y - 1], bits);
            for (int b = 0; b < bits; ++b) {
                const auto stream =
                    (static_cast<std::uint64_t>(x) * (m + 1) + static_cast<std::uint64_t>(y)) * bits + b;
                Rng list_rng = rng.split(2 * stream);
                const auto lists = make_list_set(cfg.backend, m, length, cfg.eta, list_rng);
                QbConfig qcfg{x, default_window(length, m), false};
                const auto run = run_qb(lists, enc[b], plan, qcfg, rng.split(2 * stream + 1), transcript, stream);
                ++rot.qb_runs;
                rot.messages += run.messages;
                for (const auto& [k, v] : run.verdicts) {
                    auto& slot = received[k];
                    if (slot.empty())
                        slot.assign(static_cast<std::size_t>(m), std::vector<std::optional<Bit>>(bits));
                    slot[y - 1][b] = v.value;
                }
            }
        }

        for (ProcessId k : honest) {
            if (k == x) {
                views[k][x] = truth;
                continue;
            }
            std::vector<std::int64_t> d(static_cast<std::size_t>(m), 0);
            bool complete = true;
            for (ProcessId y = 1; y <= m && complete; ++y) {
                if (y == x) continue;
                std::vector<Bit> word;
                for (const auto& bit : received[k][y - 1]) {
                    if (!bit) {
                        complete = false;
                        break;
                    }
                    word.push_back(*bit);
                }
                if (complete) d[y - 1] = decode_difference(word);
            }
            if (complete)
                views[k][x] = d;
            else {
                views[k][x] = std::nullopt;
                rot.aborted_at.push_back(k);
            }
        }
        report.per_rotation.push_back(std::move(rot));
    }

    Offsets after = offsets;
    bool failed = false;
    std::map<ProcessId, std::vector<ProcessId>> accepted;
    for (ProcessId k : honest) {
        const auto& view = views[k];
        const bool learned = std::any_of(view.begin(), view.end(), [&](const auto& e) { return e.first != k && e.second; });
        if (m > 1 && !learned) failed = true;
        accepted[k] = accepted_sources(view, cfg.triangle_tolerance);
        if (accepted[k].empty()) failed = true;
    }

    if (!honest.empty()) {
        const auto& first = accepted[honest.front()];
        report.accepted = first;
        for (ProcessId k : honest)
            if (accepted[k] != first) report.views_unanimous = false;
        for (auto& rot : report.per_rotation) {
            const auto& v = views[honest.front()][rot.source];
            if (!v)
                rot.status = "aborted";
            else
                rot.status = std::count(first.begin(), first.end(), rot.source) ? "accepted" : "suspected";
        }
    }

    if (!failed) {
        for (ProcessId k : honest) {
            std::vector<std::int64_t> entries;
            for (ProcessId x : accepted[k]) entries.push_back((*views[k][x])[static_cast<std::size_t>(k - 1)]);
            after[k - 1] = offsets[k - 1] + lower_median(std::move(entries));
        }
    }
    report.aborted = failed;
    for (ProcessId k : honest) report.adjustments[k] = after[k - 1] - offsets[k - 1];
    const auto check = check_c1_c2(offsets, after, honest);
    report.c1 = check.c1;
    report.c2 = check.c2;
    return {after, report};
}

} // namespace qdba
