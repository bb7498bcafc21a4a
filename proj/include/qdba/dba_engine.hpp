#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "qdba/errors.hpp"
#include "qdba/list_store.hpp"
#include "qdba/rng.hpp"
#include "qdba/sim_harness.hpp"
#include "qdba/types.hpp"

namespace qdba {

/// Which row of the decision table fired. IicUnequal and BotPath extend the
/// table: the former is an inconsistent relay plus unequal consistent values,
/// the latter is the rule for a process that itself relayed BOT.
enum class TableCase { Iia, Iib, Iic, Iid, Iie, IicUnequal, BotPath };

inline const char* to_string(TableCase c)
{
    switch (c) {
    case TableCase::Iia: return "iia";
    case TableCase::Iib: return "iib";
    case TableCase::Iic: return "iic";
    case TableCase::Iid: return "iid";
    case TableCase::Iie: return "iie";
    case TableCase::IicUnequal: return "iic-unequal";
    case TableCase::BotPath: return "bot-path";
    }
    return "?";
}

struct Verdict
{
    ProcessId process = 0;
    std::optional<Bit> value; // nullopt means abort
    std::set<ProcessId> suspected;
    TableCase table_case = TableCase::Iia;
    /// Set for the last relay under the QKD-hub amendment.
    bool advisory = false;

    bool aborted() const { return !value.has_value(); }
};

inline void to_json(nlohmann::json& j, const Verdict& v)
{
    j = nlohmann::json{{"process", v.process},
                       {"decision", v.value ? nlohmann::json(*v.value) : nlohmann::json("abort")},
                       {"suspected", v.suspected},
                       {"case", to_string(v.table_case)},
                       {"advisory", v.advisory}};
}

struct QbConfig
{
    ProcessId source = 1;
    LengthWindow window;
    /// The last relay announces its value without a list and its verdict is
    /// advisory (lists distributed over QKD channels hubbed at P_m).
    bool hub_exemption = false;

    std::size_t target_length() const
    {
        return static_cast<std::size_t>(std::max(0L, std::lround(window.expected)));
    }
};

inline QbConfig default_qb_config(int m, std::size_t length)
{
    return {1, default_window(length, m), false};
}

struct RelayMessage
{
    ProcessId sender = 0;
    Payload payload;
};

/// Honest source: the same {value, positions_of(l_1, value)} to every other process.
inline std::map<ProcessId, Claim> source_broadcast(int m, std::span<const Symbol> source_list, Bit value,
                                                   ProcessId source = 1)
{
    if (value > 1) throw ConfigError("broadcast value must be a bit");
    const Claim claim{value, positions_of(source_list, value)};
    std::map<ProcessId, Claim> out;
    for (ProcessId p = 1; p <= m; ++p)
        if (p != source) out.emplace(p, claim);
    return out;
}

/// Forward the source's claim verbatim if it checks out, otherwise BOT.
inline RelayMessage relay(ProcessId sender, const Payload& from_source, std::span<const Symbol> own_list,
                          const LengthWindow& window)
{
    if (const auto* c = std::get_if<Claim>(&from_source))
        if (consistent(*c, own_list, window)) return {sender, *c};
    return {sender, Bot{}};
}

/// Decision of process `self` from its own check of the source's claim and the
/// relayed messages of every other non-source process.
inline Verdict decide(ProcessId self, const Payload& from_source, const std::map<ProcessId, Payload>& inbox,
                      std::span<const Symbol> own_list, int m, const QbConfig& cfg)
{
    Verdict v;
    v.process = self;

    std::vector<Bit> values;
    std::set<ProcessId> inconsistent_senders;
    std::set<ProcessId> bot_senders;

    const auto* own = std::get_if<Claim>(&from_source);
    const bool own_ok = own && consistent(*own, own_list, cfg.window);
    if (own_ok) values.push_back(own->value);

    for (ProcessId j = 1; j <= m; ++j) {
        if (j == self || j == cfg.source) continue;
        const auto it = inbox.find(j);
        if (it == inbox.end())
            throw ProtocolViolation("process " + std::to_string(self) + " has no message from " + std::to_string(j));
        const auto& p = it->second;
        if (std::holds_alternative<Announcement>(p)) continue;
        if (const auto* c = std::get_if<Claim>(&p)) {
            if (consistent(*c, own_list, cfg.window))
                values.push_back(c->value);
            else
                inconsistent_senders.insert(j);
        } else {
            bot_senders.insert(j);
        }
    }

    const bool nonempty = !values.empty();
    const bool equal = nonempty && std::all_of(values.begin(), values.end(), [&](Bit b) { return b == values[0]; });
    auto adopt = [&] { v.value = values[0]; };

    if (!own_ok) {
        v.table_case = TableCase::BotPath;
        v.suspected = inconsistent_senders;
        v.suspected.insert(cfg.source);
        if (equal) adopt();
        return v;
    }

    if (inconsistent_senders.empty() && bot_senders.empty()) {
        if (equal) {
            v.table_case = TableCase::Iia;
            adopt();
        } else {
            v.table_case = TableCase::Iib;
            v.suspected = {cfg.source};
        }
    } else if (!inconsistent_senders.empty()) {
        v.suspected = inconsistent_senders;
        if (equal) {
            v.table_case = TableCase::Iic;
            adopt();
        } else {
            v.table_case = bot_senders.empty() ? TableCase::IicUnequal : TableCase::Iie;
            v.suspected.insert(cfg.source);
        }
    } else {
        if (equal) {
            v.table_case = TableCase::Iid;
            adopt();
        } else {
            v.table_case = TableCase::Iie;
            v.suspected = {cfg.source};
        }
    }
    return v;
}

struct QbRun
{
    std::map<ProcessId, Verdict> verdicts; // every non-source process
    std::size_t messages = 0;
    std::size_t deviations = 0; // messages a strategy altered or suppressed
    std::size_t rejected = 0;
};

/// Index into the list set for process p when `source` holds l_1: the other
/// processes take l_2..l_m in ascending id order.
inline std::size_t list_index(ProcessId p, ProcessId source)
{
    if (p == source) return 0;
    return static_cast<std::size_t>(p < source ? p : p - 1);
}

inline ProcessId last_relay(int m, ProcessId source)
{
    return source == m ? m - 1 : m;
}

/// One QB execution: broadcast round, relay round, local decisions.
inline QbRun run_qb(const CorrelatedListSet& lists, Bit source_value, const FaultPlan& plan, const QbConfig& cfg,
                    const Rng& rng, Transcript* transcript = nullptr, std::uint64_t trial = 0)
{
    const int m = lists.m;
    if (m < 2 || lists.lists.size() != static_cast<std::size_t>(m)) throw ConfigError("list set does not match m");
    if (cfg.source < 1 || cfg.source > m) throw ConfigError("source id out of range");
    if (source_value > 1) throw ConfigError("source value must be a bit");
    validate_plan(plan, m);

    const ProcessId s = cfg.source;
    const auto own_list = [&](ProcessId p) -> std::span<const Symbol> { return lists.lists[list_index(p, s)]; };
    std::vector<Rng> proc_rng;
    for (ProcessId p = 1; p <= m; ++p) proc_rng.push_back(rng.split(static_cast<std::uint64_t>(p)));

    Network net(m, transcript, trial);
    QbRun run;

    auto send_scripted = [&](int round) {
        for (const auto& f : plan)
            if (const auto* a = std::get_if<Arbitrary>(&f.strategy)) {
                ++run.deviations;
                for (const auto& msg : a->script)
                    if (msg.round == round) net.send(f.id, {msg.round, msg.from, msg.to, msg.payload});
            }
    };

    auto transmit = [&](const FaultProfile& prof, Message intended, StrategyContext& ctx) {
        if (std::holds_alternative<Arbitrary>(prof.strategy)) return;
        const auto actual = apply_strategy(prof, intended, ctx);
        if (!actual || !(*actual == intended.payload)) ++run.deviations;
        if (actual) net.send(intended.from, {intended.round, intended.from, intended.to, *actual});
    };

    // round 0: source broadcast
    const auto& src_prof = profile_of(plan, s);
    const auto claims = source_broadcast(m, own_list(s), source_value, s);
    std::vector<std::pair<ProcessId, ProcessId>> round0;
    for (const auto& [to, claim] : claims) {
        StrategyContext ctx{true, own_list(s), std::nullopt, cfg.target_length(), &proc_rng[s - 1]};
        transmit(src_prof, {0, s, to, claim}, ctx);
        round0.emplace_back(s, to);
    }
    send_scripted(0);
    auto inbox0 = net.deliver(0, round0);

    // round 1: relays
    const ProcessId hub = last_relay(m, s);
    std::vector<std::pair<ProcessId, ProcessId>> round1;
    for (ProcessId k = 1; k <= m; ++k) {
        if (k == s) continue;
        const Payload& received = inbox0[k].at(s);
        Payload intended = relay(k, received, own_list(k), cfg.window).payload;
        if (cfg.hub_exemption && k == hub) {
            const auto* c = std::get_if<Claim>(&intended);
            intended = Announcement{c ? std::optional<Bit>(c->value) : std::nullopt};
        }
        for (ProcessId j = 1; j <= m; ++j) {
            if (j == k || j == s) continue;
            StrategyContext ctx{false, own_list(k), received, cfg.target_length(), &proc_rng[k - 1]};
            transmit(profile_of(plan, k), {1, k, j, intended}, ctx);
            round1.emplace_back(k, j);
        }
    }
    send_scripted(1);
    auto inbox1 = net.deliver(1, round1);

    for (ProcessId k = 1; k <= m; ++k) {
        if (k == s) continue;
        auto v = decide(k, inbox0[k].at(s), inbox1[k], own_list(k), m, cfg);
        v.advisory = cfg.hub_exemption && k == hub;
        nlohmann::json summary;
        to_json(summary, v);
        net.log(2, k, k, "verdict", summary, to_string(v.table_case));
        run.verdicts.emplace(k, std::move(v));
    }
    run.messages = net.delivered();
    run.rejected = net.rejected();
    return run;
}

/// Agreement: honest, non-advisory verdicts are all Value(v) for one v, or all abort.
inline bool agreement_holds(const QbRun& run, const FaultPlan& plan)
{
    std::optional<Verdict> first;
    for (const auto& [p, v] : run.verdicts) {
        if (!profile_of(plan, p).honest() || v.advisory) continue;
        if (!first) {
            first = v;
            continue;
        }
        if (v.value != first->value) return false;
    }
    return true;
}

/// Validity: with an honest source every honest non-advisory verdict is Value(source_value).
inline bool validity_holds(const QbRun& run, const FaultPlan& plan, ProcessId source, Bit source_value)
{
    if (!profile_of(plan, source).honest()) return true;
    for (const auto& [p, v] : run.verdicts) {
        if (!profile_of(plan, p).honest() || v.advisory) continue;
        if (v.value != std::optional<Bit>(source_value)) return false;
    }
    return true;
}

} // namespace qdba
