#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <map>
#include <numeric>
#include <optional>
#include <ostream>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "qdba/errors.hpp"
#include "qdba/list_store.hpp"
#include "qdba/rng.hpp"
#include "qdba/types.hpp"

namespace qdba {

// ---------------------------------------------------------------------------
// Payloads

/// "I have received inconsistent data." Also stands in for a missing message.
struct Bot
{
    friend bool operator==(const Bot&, const Bot&) = default;
};

/// List-free value announcement (last relay under the QKD-hub amendment).
struct Announcement
{
    std::optional<Bit> value;
    friend bool operator==(const Announcement&, const Announcement&) = default;
};

using Payload = std::variant<Claim, Bot, Announcement>;

struct Message
{
    int round = 0;
    ProcessId from = 0;
    ProcessId to = 0;
    Payload payload;
};

inline std::uint64_t fnv1a(std::string_view bytes)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::string hex64(std::uint64_t v)
{
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

inline void to_json(nlohmann::json& j, const Payload& p)
{
    if (const auto* c = std::get_if<Claim>(&p))
        j = *c;
    else if (const auto* a = std::get_if<Announcement>(&p))
        j = nlohmann::json{{"announce", a->value ? nlohmann::json(*a->value) : nlohmann::json(nullptr)}};
    else
        j = "bot";
}

inline void from_json(const nlohmann::json& j, Payload& p)
{
    if (j.is_string() && j.get<std::string>() == "bot")
        p = Bot{};
    else if (j.is_object() && j.contains("announce"))
        p = Announcement{j.at("announce").is_null() ? std::nullopt : std::optional<Bit>(j.at("announce").get<Bit>())};
    else
        p = j.get<Claim>();
}

/// Compact transcript form: positions are replaced by count and digest.
inline nlohmann::json summarize(const Payload& p)
{
    if (const auto* c = std::get_if<Claim>(&p)) {
        std::string bytes;
        for (auto pos : c->positions) bytes += std::to_string(pos) + ',';
        return {{"value", c->value}, {"count", c->positions.size()}, {"digest", hex64(fnv1a(bytes))}};
    }
    nlohmann::json j;
    to_json(j, p);
    return j;
}

inline const char* kind_of(const Payload& p)
{
    if (std::holds_alternative<Claim>(p)) return "claim";
    if (std::holds_alternative<Announcement>(p)) return "announce";
    return "bot";
}

// ---------------------------------------------------------------------------
// Fault strategies

struct Honest
{
};

/// Sends nothing from `round` on (0 = broadcast round, 1 = relay round).
struct Crash
{
    int round = 0;
};

/// Broadcast-round equivocation: recipient -> value. A mapped nullopt sends a
/// claim with random positions. Relays holding this profile forward honestly.
struct SplitBroadcast
{
    std::map<ProcessId, std::optional<Bit>> values;
};

/// Flipped bit; positions sampled from the sender's own list where it holds the flipped value.
struct FlipRelayForgedList
{
};

/// Flipped bit; uniformly random positions of the target length.
struct FlipRelayRandomList
{
};

struct BotAlways
{
};

/// Subject id -> ticks added to the reported difference.
struct LieClockDifferences
{
    std::map<ProcessId, std::int64_t> offsets;
};

struct ScriptedMessage
{
    int round = 0;
    ProcessId from = 0; // declared sender; must equal the scripted process to be delivered
    ProcessId to = 0;
    Payload payload;
};

/// Replaces all of the process's traffic with the script.
struct Arbitrary
{
    std::vector<ScriptedMessage> script;
};

using Strategy = std::variant<Honest, Crash, SplitBroadcast, FlipRelayForgedList, FlipRelayRandomList,
                              BotAlways, LieClockDifferences, Arbitrary>;

struct FaultProfile
{
    ProcessId id = 0;
    Strategy strategy = Honest{};

    bool honest() const { return std::holds_alternative<Honest>(strategy); }
};

using FaultPlan = std::vector<FaultProfile>;

inline std::string strategy_name(const Strategy& s)
{
    static const char* names[] = {"Honest", "Crash", "SplitBroadcast", "FlipRelayForgedList",
                                  "FlipRelayRandomList", "BotAlways", "LieClockDifferences", "Arbitrary"};
    return names[s.index()];
}

inline FaultPlan all_honest(int m)
{
    FaultPlan plan;
    for (ProcessId p = 1; p <= m; ++p) plan.push_back({p, Honest{}});
    return plan;
}

/// Honest plan with the given profiles substituted.
inline FaultPlan make_plan(int m, const std::vector<FaultProfile>& faults)
{
    auto plan = all_honest(m);
    for (const auto& f : faults) {
        if (f.id < 1 || f.id > m) throw ConfigError("fault profile for unknown process " + std::to_string(f.id));
        plan[static_cast<std::size_t>(f.id - 1)] = f;
    }
    return plan;
}

inline void validate_plan(const FaultPlan& plan, int m)
{
    if (plan.size() != static_cast<std::size_t>(m)) throw ConfigError("need exactly one fault profile per process");
    for (std::size_t i = 0; i < plan.size(); ++i)
        if (plan[i].id != static_cast<ProcessId>(i + 1)) throw ConfigError("fault profiles must be ordered by id");
}

inline const FaultProfile& profile_of(const FaultPlan& plan, ProcessId p)
{
    return plan.at(static_cast<std::size_t>(p - 1));
}

inline std::vector<ProcessId> honest_ids(const FaultPlan& plan)
{
    std::vector<ProcessId> out;
    for (const auto& f : plan)
        if (f.honest()) out.push_back(f.id);
    return out;
}

// JSON: {"id": 2, "strategy": "Crash", "round": 1}, etc.
inline void to_json(nlohmann::json& j, const FaultProfile& f)
{
    j = nlohmann::json{{"id", f.id}, {"strategy", strategy_name(f.strategy)}};
    std::visit(
        [&](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Crash>) {
                j["round"] = s.round;
            } else if constexpr (std::is_same_v<T, SplitBroadcast>) {
                nlohmann::json v = nlohmann::json::object();
                for (const auto& [to, b] : s.values)
                    v[std::to_string(to)] = b ? nlohmann::json(*b) : nlohmann::json(nullptr);
                j["values"] = v;
            } else if constexpr (std::is_same_v<T, LieClockDifferences>) {
                nlohmann::json v = nlohmann::json::object();
                for (const auto& [y, d] : s.offsets) v[std::to_string(y)] = d;
                j["offsets"] = v;
            } else if constexpr (std::is_same_v<T, Arbitrary>) {
                auto arr = nlohmann::json::array();
                for (const auto& msg : s.script) {
                    nlohmann::json p;
                    to_json(p, msg.payload);
                    arr.push_back({{"round", msg.round}, {"from", msg.from}, {"to", msg.to}, {"payload", p}});
                }
                j["script"] = arr;
            }
        },
        f.strategy);
}

inline void from_json(const nlohmann::json& j, FaultProfile& f)
{
    j.at("id").get_to(f.id);
    const auto name = j.at("strategy").get<std::string>();
    if (name == "Honest") {
        f.strategy = Honest{};
    } else if (name == "Crash") {
        f.strategy = Crash{j.value("round", 0)};
    } else if (name == "SplitBroadcast") {
        SplitBroadcast s;
        for (const auto& [k, v] : j.at("values").items())
            s.values[std::stoi(k)] = v.is_null() ? std::nullopt : std::optional<Bit>(v.get<Bit>());
        f.strategy = s;
    } else if (name == "FlipRelayForgedList") {
        f.strategy = FlipRelayForgedList{};
    } else if (name == "FlipRelayRandomList") {
        f.strategy = FlipRelayRandomList{};
    } else if (name == "BotAlways") {
        f.strategy = BotAlways{};
    } else if (name == "LieClockDifferences") {
        LieClockDifferences s;
        if (j.contains("offsets"))
            for (const auto& [k, v] : j.at("offsets").items()) s.offsets[std::stoi(k)] = v.get<std::int64_t>();
        f.strategy = s;
    } else if (name == "Arbitrary") {
        Arbitrary s;
        for (const auto& e : j.at("script")) {
            ScriptedMessage msg;
            e.at("round").get_to(msg.round);
            e.at("from").get_to(msg.from);
            e.at("to").get_to(msg.to);
            from_json(e.at("payload"), msg.payload);
            s.script.push_back(std::move(msg));
        }
        f.strategy = s;
    } else {
        throw ConfigError("unknown strategy '" + name + "'");
    }
}

/// What a sender knows when its strategy rewrites an intended message.
struct StrategyContext
{
    bool is_source = false;
    std::span<const Symbol> own_list;
    /// For relays: the payload received from the source.
    std::optional<Payload> received;
    std::size_t target_length = 0;
    Rng* rng = nullptr;
};

namespace detail {

inline std::vector<std::size_t> sample_sorted(const std::vector<std::size_t>& pool, std::size_t k, Rng& rng)
{
    std::vector<std::size_t> out;
    out.reserve(std::min(k, pool.size()));
    // selection sampling keeps the input order, so the output is ascending
    std::sample(pool.begin(), pool.end(), std::back_inserter(out), k, rng.engine());
    return out;
}

inline Bit flipped_value(const Message& intended, const StrategyContext& ctx)
{
    if (ctx.received)
        if (const auto* c = std::get_if<Claim>(&*ctx.received)) return static_cast<Bit>(1 - c->value);
    if (const auto* c = std::get_if<Claim>(&intended.payload)) return static_cast<Bit>(1 - c->value);
    return static_cast<Bit>(ctx.rng->uniform_int(0, 1));
}

} // namespace detail

/// Claim of `value` whose positions are drawn from where own_list holds it.
inline Claim forge_from_own_list(Bit value, std::span<const Symbol> own_list, std::size_t target, Rng& rng)
{
    return {value, detail::sample_sorted(positions_of(own_list, value), target, rng)};
}

inline Claim random_claim(Bit value, std::size_t length, std::size_t target, Rng& rng)
{
    std::vector<std::size_t> all(length);
    std::iota(all.begin(), all.end(), std::size_t{0});
    return {value, detail::sample_sorted(all, target, rng)};
}

/// Rewrites one intended protocol message according to the sender's profile.
/// nullopt means the message is suppressed. Arbitrary profiles are scripted at
/// the network level and never reach this function.
inline std::optional<Payload> apply_strategy(const FaultProfile& profile, const Message& intended,
                                             StrategyContext& ctx)
{
    return std::visit(
        [&](const auto& s) -> std::optional<Payload> {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Honest> || std::is_same_v<T, LieClockDifferences>) {
                return intended.payload;
            } else if constexpr (std::is_same_v<T, Crash>) {
                if (intended.round >= s.round) return std::nullopt;
                return intended.payload;
            } else if constexpr (std::is_same_v<T, SplitBroadcast>) {
                if (!ctx.is_source) return intended.payload;
                const auto it = s.values.find(intended.to);
                if (it == s.values.end()) return intended.payload;
                if (!it->second)
                    return random_claim(detail::flipped_value(intended, ctx), ctx.own_list.size(),
                                        ctx.target_length, *ctx.rng);
                return Claim{*it->second, positions_of(ctx.own_list, *it->second)};
            } else if constexpr (std::is_same_v<T, FlipRelayForgedList>) {
                return forge_from_own_list(detail::flipped_value(intended, ctx), ctx.own_list,
                                           ctx.target_length, *ctx.rng);
            } else if constexpr (std::is_same_v<T, FlipRelayRandomList>) {
                return random_claim(detail::flipped_value(intended, ctx), ctx.own_list.size(),
                                    ctx.target_length, *ctx.rng);
            } else if constexpr (std::is_same_v<T, BotAlways>) {
                return Bot{};
            } else {
                throw ProtocolViolation("scripted profiles bypass apply_strategy");
            }
        },
        profile.strategy);
}

// ---------------------------------------------------------------------------
// Transcript

inline constexpr const char* kTranscriptVersion = "qdba-transcript/1";

struct TranscriptEvent
{
    std::uint64_t trial = 0;
    int round = 0;
    ProcessId from = 0;
    ProcessId to = 0;
    std::string kind;
    nlohmann::json payload;
    std::string table_case;
    std::uint64_t t = 0; // logical timestamp, total order within the transcript
};

inline nlohmann::json to_json_line(const TranscriptEvent& e)
{
    return {{"t", e.t},       {"trial", e.trial}, {"round", e.round},   {"from", e.from},
            {"to", e.to},     {"kind", e.kind},   {"payload", e.payload}, {"case", e.table_case}};
}

/// Append-only event log with a header carrying version, seed and config.
class Transcript
{
public:
    Transcript() = default;
    Transcript(std::string command, std::uint64_t seed, nlohmann::json config)
        : command_(std::move(command)), seed_(seed), config_(std::move(config))
    {
    }

    void append(TranscriptEvent e)
    {
        e.t = events_.size();
        events_.push_back(std::move(e));
    }

    const std::vector<TranscriptEvent>& events() const { return events_; }
    const nlohmann::json& config() const { return config_; }
    const std::string& command() const { return command_; }
    std::uint64_t seed() const { return seed_; }
    const std::string& version() const { return version_; }

    std::string config_hash() const { return hex64(fnv1a(config_.dump())); }

    nlohmann::json header() const
    {
        return {{"version", version_}, {"command", command_}, {"seed", seed_},
                {"config_hash", config_hash()}, {"config", config_}};
    }

    void write_jsonl(std::ostream& os) const
    {
        os << header().dump() << '\n';
        for (const auto& e : events_) os << to_json_line(e).dump() << '\n';
    }

    std::string to_jsonl() const
    {
        std::ostringstream os;
        write_jsonl(os);
        return os.str();
    }

    /// Event lines only (header excluded), for replay comparison.
    std::vector<std::string> event_lines() const
    {
        std::vector<std::string> out;
        out.reserve(events_.size());
        for (const auto& e : events_) out.push_back(to_json_line(e).dump());
        return out;
    }

    static Transcript read_jsonl(std::istream& is)
    {
        std::string line;
        if (!std::getline(is, line)) throw ReplayError("empty transcript");
        const auto h = nlohmann::json::parse(line);
        Transcript tr(h.at("command").get<std::string>(), h.at("seed").get<std::uint64_t>(), h.at("config"));
        tr.version_ = h.at("version").get<std::string>();
        if (tr.version_ != kTranscriptVersion)
            throw ReplayError("transcript version " + tr.version_ + " is not " + kTranscriptVersion);
        if (tr.config_hash() != h.at("config_hash").get<std::string>())
            throw ReplayError("config hash does not match the stored config");
        while (std::getline(is, line)) {
            if (line.empty()) continue;
            const auto j = nlohmann::json::parse(line);
            TranscriptEvent e;
            j.at("t").get_to(e.t);
            j.at("trial").get_to(e.trial);
            j.at("round").get_to(e.round);
            j.at("from").get_to(e.from);
            j.at("to").get_to(e.to);
            j.at("kind").get_to(e.kind);
            e.payload = j.at("payload");
            j.at("case").get_to(e.table_case);
            tr.events_.push_back(std::move(e));
        }
        return tr;
    }

private:
    std::string version_ = kTranscriptVersion;
    std::string command_;
    std::uint64_t seed_ = 0;
    nlohmann::json config_ = nlohmann::json::object();
    std::vector<TranscriptEvent> events_;
};

// ---------------------------------------------------------------------------
// Network

/// Received payloads: receiver -> sender -> payload.
using Inbox = std::map<ProcessId, std::map<ProcessId, Payload>>;

/// Synchronous network of m processes with pairwise authenticated channels.
/// Each directed channel carries at most one message per round; a channel
/// expected to carry a message that stays silent delivers BOT.
class Network
{
public:
    explicit Network(int m, Transcript* transcript = nullptr, std::uint64_t trial = 0)
        : m_(m), transcript_(transcript), trial_(trial)
    {
        if (m < 2) throw ConfigError("network needs m >= 2");
    }

    int size() const { return m_; }
    std::size_t channel_count() const { return static_cast<std::size_t>(m_) * (m_ - 1); }

    /// Queue a message sent by `origin`. Impersonation, self-sends and
    /// duplicates on a channel are rejected.
    bool send(ProcessId origin, Message msg)
    {
        const char* reason = nullptr;
        if (msg.from != origin)
            reason = "impersonation";
        else if (msg.to < 1 || msg.to > m_ || msg.to == origin)
            reason = "bad-recipient";
        else if (pending_.count({msg.round, msg.from, msg.to}))
            reason = "duplicate";
        if (reason) {
            ++rejected_;
            log(msg.round, origin, msg.to, "rejected", {{"reason", reason}, {"declared_from", msg.from}}, "");
            return false;
        }
        pending_.emplace(Key{msg.round, msg.from, msg.to}, std::move(msg.payload));
        return true;
    }

    /// Delivers `round` on the given channels (sender, receiver). Silent
    /// channels deliver BOT; traffic on channels not in the list is dropped.
    Inbox deliver(int round, const std::vector<std::pair<ProcessId, ProcessId>>& channels)
    {
        Inbox inbox;
        for (const auto& [from, to] : channels) {
            auto it = pending_.find({round, from, to});
            Payload p = Bot{};
            std::string kind;
            if (it == pending_.end()) {
                kind = "silent";
            } else {
                p = std::move(it->second);
                pending_.erase(it);
                kind = kind_of(p);
            }
            log(round, from, to, kind, summarize(p), "");
            inbox[to].emplace(from, std::move(p));
            ++delivered_;
        }
        for (auto it = pending_.begin(); it != pending_.end();) {
            if (std::get<0>(it->first) == round) {
                ++rejected_;
                log(round, std::get<1>(it->first), std::get<2>(it->first), "rejected",
                    {{"reason", "unexpected-channel"}}, "");
                it = pending_.erase(it);
            } else {
                ++it;
            }
        }
        return inbox;
    }

    std::size_t delivered() const { return delivered_; }
    std::size_t rejected() const { return rejected_; }

    void log(int round, ProcessId from, ProcessId to, std::string kind, nlohmann::json payload,
             std::string table_case)
    {
        if (!transcript_) return;
        transcript_->append({trial_, round, from, to, std::move(kind), std::move(payload), std::move(table_case), 0});
    }

private:
    using Key = std::tuple<int, ProcessId, ProcessId>;

    int m_;
    Transcript* transcript_;
    std::uint64_t trial_;
    std::map<Key, Payload> pending_;
    std::size_t delivered_ = 0;
    std::size_t rejected_ = 0;
};

} // namespace qdba
