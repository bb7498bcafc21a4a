// qdba: command-line front end for list distribution, agreement runs, the
// classical baseline, clock synchronization, efficiency studies and replay.
#include "qdba/qdba.hpp"

#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

using namespace qdba;
using nlohmann::json;

namespace
{

enum Exit { kOk = 0, kConfig = 2, kAbort = 3, kBudget = 4 };

struct Settings
{
    int m = 4;
    std::uint64_t seed = 1;
    double eta = 1.0;
    std::size_t trials = 1;
    ListBackend backend = ListBackend::Dealer;
    std::string out;
    std::string transcript;
    std::size_t length = 0; // 0: 64 expected claim positions
    std::size_t budget = 0; // 0: default round budget
    int value = 0;
    int source = 1;
    bool hub_exemption = false;
    int depth = 1;
    std::vector<std::int64_t> offsets;
    int bit_width = 16;
    double resolution = 1e-3;
    std::int64_t triangle_tolerance = 0;
    std::vector<Scheme> schemes{Scheme::SingleQudit, Scheme::QkdLists};
    std::vector<int> grid_m{3, 4, 8};
    std::vector<double> grid_eta{0.6, 0.8, 0.95};
    FaultPlan faults;
    unsigned workers = 1;

    std::size_t list_length() const { return length ? length : list_length_for(m); }
};

/// Everything that determines a run; paths are left out so a moved transcript still replays.
json to_config(const Settings& s)
{
    json faults = json::array();
    for (const auto& f : s.faults) faults.push_back(f);
    return {{"m", s.m},
            {"seed", s.seed},
            {"eta", s.eta},
            {"trials", s.trials},
            {"backend", s.backend},
            {"length", s.length},
            {"budget", s.budget},
            {"value", s.value},
            {"source", s.source},
            {"hub_exemption", s.hub_exemption},
            {"depth", s.depth},
            {"offsets", s.offsets},
            {"bit_width", s.bit_width},
            {"resolution", s.resolution},
            {"triangle_tolerance", s.triangle_tolerance},
            {"schemes", s.schemes},
            {"grid_m", s.grid_m},
            {"grid_eta", s.grid_eta},
            {"faults", faults},
            {"workers", s.workers}};
}

Strategy parse_strategy(const std::string& name, const std::string& args)
{
    // "2=0,3=1,4=?" style argument lists
    auto pairs = [&] {
        std::vector<std::pair<ProcessId, std::string>> out;
        std::stringstream ss(args);
        std::string item;
        while (std::getline(ss, item, ',')) {
            const auto eq = item.find('=');
            if (eq == std::string::npos) throw ConfigError("expected id=value in '" + item + "'");
            out.emplace_back(std::stoi(item.substr(0, eq)), item.substr(eq + 1));
        }
        return out;
    };
    if (name == "Honest") return Honest{};
    if (name == "Crash") return Crash{args.empty() ? 0 : std::stoi(args)};
    if (name == "BotAlways") return BotAlways{};
    if (name == "FlipRelayForgedList") return FlipRelayForgedList{};
    if (name == "FlipRelayRandomList") return FlipRelayRandomList{};
    if (name == "SplitBroadcast") {
        SplitBroadcast s;
        for (const auto& [id, v] : pairs()) {
            if (v == "?")
                s.values[id] = std::nullopt;
            else if (v == "0" || v == "1")
                s.values[id] = static_cast<Bit>(v[0] - '0');
            else
                throw ConfigError("SplitBroadcast values are 0, 1 or ?");
        }
        return s;
    }
    if (name == "LieClockDifferences") {
        LieClockDifferences l;
        for (const auto& [id, v] : pairs()) l.offsets[id] = std::stoll(v);
        return l;
    }
    throw ConfigError("unknown strategy '" + name + "' (Arbitrary scripts go in the config file)");
}

/// "ID:Strategy[:args]"
FaultProfile parse_fault(const std::string& spec)
{
    const auto a = spec.find(':');
    if (a == std::string::npos) throw ConfigError("fault must look like ID:Strategy[:args], got '" + spec + "'");
    const auto b = spec.find(':', a + 1);
    const auto name = spec.substr(a + 1, b == std::string::npos ? std::string::npos : b - a - 1);
    const auto args = b == std::string::npos ? std::string() : spec.substr(b + 1);
    try {
        return {std::stoi(spec.substr(0, a)), parse_strategy(name, args)};
    } catch (const std::logic_error& e) {
        if (dynamic_cast<const ConfigError*>(&e)) throw;
        throw ConfigError("cannot parse fault '" + spec + "'");
    }
}

void apply_config(Settings& s, const json& j)
{
    static const std::set<std::string> known{
        "m",     "seed",   "eta",           "trials",  "backend",   "out",        "transcript",
        "length", "budget", "value",        "source",  "hub_exemption", "depth",  "offsets",
        "bit_width", "resolution", "triangle_tolerance", "schemes", "grid_m", "grid_eta", "faults", "workers"};
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    for (const auto& [k, v] : j.items())
        if (!known.count(k)) throw ConfigError("unknown config key '" + k + "'");

    auto get = [&](const char* key, auto& field) {
        if (j.contains(key)) j.at(key).get_to(field);
    };
    get("m", s.m);
    get("seed", s.seed);
    get("eta", s.eta);
    get("trials", s.trials);
    get("out", s.out);
    get("transcript", s.transcript);
    get("length", s.length);
    get("budget", s.budget);
    get("value", s.value);
    get("source", s.source);
    get("hub_exemption", s.hub_exemption);
    get("depth", s.depth);
    get("offsets", s.offsets);
    get("bit_width", s.bit_width);
    get("resolution", s.resolution);
    get("triangle_tolerance", s.triangle_tolerance);
    get("grid_m", s.grid_m);
    get("grid_eta", s.grid_eta);
    get("workers", s.workers);
    if (j.contains("backend")) {
        const auto b = j.at("backend").get<std::string>();
        if (b != "quantum" && b != "dealer") throw ConfigError("backend must be quantum or dealer");
        s.backend = j.at("backend").get<ListBackend>();
    }
    if (j.contains("schemes")) {
        s.schemes.clear();
        for (const auto& x : j.at("schemes")) {
            const auto name = x.get<std::string>();
            if (name != "single-qudit" && name != "qkd-lists" && name != "entangled-state")
                throw ConfigError("unknown scheme '" + name + "'");
            s.schemes.push_back(x.get<Scheme>());
        }
    }
    if (j.contains("faults")) {
        s.faults.clear();
        for (const auto& f : j.at("faults"))
            s.faults.push_back(f.is_string() ? parse_fault(f.get<std::string>()) : f.get<FaultProfile>());
    }
}

void check_common(const Settings& s)
{
    if (s.m < 2 || s.m > kMaxProcesses) throw ConfigError("--m must be in [2, 255]");
    if (s.eta < 0.0 || s.eta > 1.0) throw ConfigError("--eta must lie in [0, 1]");
    if (s.trials < 1) throw ConfigError("--trials must be >= 1");
    if (s.workers < 1) throw ConfigError("--workers must be >= 1");
    if (s.m > 20 && s.length == 0) throw ConfigError("pass --length explicitly for m > 20");
}

FaultPlan plan_for(const Settings& s)
{
    return make_plan(s.m, s.faults);
}

// ---------------------------------------------------------------------------
// Output

void emit(const Settings& s, const json& report)
{
    if (s.out.empty()) {
        std::cout << report.dump(2) << '\n';
        return;
    }
    std::ofstream f(s.out);
    if (!f) throw ConfigError("cannot write " + s.out);
    f << report.dump(2) << '\n';
}

void write_transcript(const Settings& s, const Transcript& tr)
{
    if (s.transcript.empty()) return;
    std::ofstream f(s.transcript);
    if (!f) throw ConfigError("cannot write " + s.transcript);
    tr.write_jsonl(f);
}

void table_row(const std::vector<std::string>& cells)
{
    for (const auto& c : cells) std::fprintf(stderr, "%-16s", c.c_str());
    std::fprintf(stderr, "\n");
}

std::string decision_text(const std::optional<std::int64_t>& v)
{
    return v ? std::to_string(*v) : "abort";
}

// ---------------------------------------------------------------------------
// Commands. Each returns an exit code and fills the report; those that talk
// over the simulated network also fill the transcript.

struct Run
{
    int code = kOk;
    json report;
};

Run cmd_distribute(const Settings& s, Transcript&)
{
    Rng rng(s.seed);
    const auto L = s.list_length();
    CorrelatedListSet set;
    std::size_t rounds = 0;
    if (s.backend == ListBackend::Quantum) {
        auto gen = generate_list_set(s.m, L, s.eta, rng, s.budget ? std::optional(s.budget) : std::nullopt);
        set = std::move(gen.lists);
        rounds = gen.rounds;
    } else {
        set = dealer_generate(s.m, L, rng);
    }
    const auto v = validate_list_set(set);
    std::vector<std::size_t> counts(static_cast<std::size_t>(s.m), 0);
    for (auto x : set.source_list()) ++counts[x];

    table_row({"backend", "m", "L", "rounds", "valid"});
    table_row({s.backend == ListBackend::Quantum ? "quantum" : "dealer", std::to_string(s.m), std::to_string(L),
               std::to_string(rounds), v.ok() ? "yes" : "no"});
    return {v.ok() ? kOk : kAbort,
            {{"command", "distribute"},
             {"rounds", rounds},
             {"keep_rate", rounds ? double(L) / double(rounds) : 1.0},
             {"source_symbol_counts", counts},
             {"valid", v.ok()},
             {"violations", v.violations.size()},
             {"lists", set}}};
}

bool global_abort(const QbRun& r, const FaultPlan& plan)
{
    bool any = false;
    for (const auto& [p, v] : r.verdicts) {
        if (!profile_of(plan, p).honest() || v.advisory) continue;
        any = true;
        if (!v.aborted()) return false;
    }
    return any;
}

Run cmd_dba(const Settings& s, Transcript& tr)
{
    if (s.value != 0 && s.value != 1) throw ConfigError("--value must be 0 or 1 for dba");
    const auto plan = plan_for(s);
    QbConfig cfg = default_qb_config(s.m, s.list_length());
    cfg.source = s.source;
    cfg.hub_exemption = s.hub_exemption;
    const Rng root(s.seed);

    struct Trial
    {
        QbRun run;
        Transcript tr;
    };
    const auto trials = parallel_trials(
        s.trials,
        [&](std::size_t t) {
            Rng rng = root.split(t);
            const auto lists = make_list_set(s.backend, s.m, s.list_length(), s.eta, rng);
            Trial out;
            out.run = run_qb(lists, static_cast<Bit>(s.value), plan, cfg, rng.split(1), &out.tr, t);
            return out;
        },
        s.workers);

    json runs = json::array();
    std::size_t aborts = 0, agreement = 0, validity = 0;
    table_row({"trial", "process", "decision", "case", "suspected"});
    for (std::size_t t = 0; t < trials.size(); ++t) {
        const auto& r = trials[t].run;
        for (const auto& e : trials[t].tr.events()) tr.append(e);
        const bool ga = global_abort(r, plan);
        aborts += ga;
        agreement += agreement_holds(r, plan);
        validity += validity_holds(r, plan, cfg.source, static_cast<Bit>(s.value));
        json verdicts = json::array();
        for (const auto& [p, v] : r.verdicts) {
            verdicts.push_back(v);
            if (t < 5) {
                std::string sus;
                for (auto q : v.suspected) sus += (sus.empty() ? "" : ",") + std::to_string(q);
                table_row({std::to_string(t), std::to_string(p),
                           decision_text(v.value ? std::optional<std::int64_t>(*v.value) : std::nullopt),
                           to_string(v.table_case), sus.empty() ? "-" : sus});
            }
        }
        runs.push_back({{"trial", t},
                        {"verdicts", verdicts},
                        {"messages", r.messages},
                        {"deviations", r.deviations},
                        {"global_abort", ga}});
    }
    std::fprintf(stderr, "trials %zu  agreement %zu  validity %zu  global aborts %zu\n", trials.size(), agreement,
                 validity, aborts);
    return {aborts ? kAbort : kOk,
            {{"command", "dba"},
             {"list_length", s.list_length()},
             {"window", {{"expected", cfg.window.expected}, {"tolerance", cfg.window.tolerance}}},
             {"agreement", agreement},
             {"validity", validity},
             {"global_aborts", aborts},
             {"runs", runs}}};
}

Run cmd_om(const Settings& s, Transcript&)
{
    const auto plan = plan_for(s);
    const OmConfig cfg{s.m, s.depth, 0};
    const auto r = om(cfg, s.value, plan, s.source);
    const bool agree = om_agreement_holds(r, plan, s.source, s.value);
    table_row({"lieutenant", "decision", "honest"});
    for (const auto& [p, v] : r.decisions)
        table_row({std::to_string(p), std::to_string(v), profile_of(plan, p).honest() ? "yes" : "no"});
    std::fprintf(stderr, "messages %zu (closed form %llu)  agreement %s\n", r.messages,
                 static_cast<unsigned long long>(om_message_count(s.depth, s.m)), agree ? "yes" : "no");
    json decisions = json::array();
    for (const auto& [p, v] : r.decisions) decisions.push_back({{"process", p}, {"decision", v}});
    return {kOk,
            {{"command", "om"},
             {"decisions", decisions},
             {"messages", r.messages},
             {"expected_messages", om_message_count(s.depth, s.m)},
             {"agreement", agree}}};
}

Run cmd_clocksync(const Settings& s, Transcript& tr)
{
    const auto plan = plan_for(s);
    SyncConfig cfg;
    cfg.bit_width = s.bit_width;
    cfg.resolution = s.resolution;
    cfg.list_length = s.length;
    cfg.backend = s.backend;
    cfg.eta = s.eta;
    cfg.triangle_tolerance = s.triangle_tolerance;
    cfg.validate(s.m);
    if (!s.offsets.empty() && s.offsets.size() != static_cast<std::size_t>(s.m))
        throw ConfigError("--offsets needs exactly m values");

    const Rng root(s.seed);
    const auto lim = difference_limit(s.bit_width);
    json runs = json::array();
    std::size_t aborted = 0, c1 = 0, c2 = 0;
    table_row({"trial", "process", "before", "after"});
    for (std::size_t t = 0; t < s.trials; ++t) {
        Rng rng = root.split(t);
        Offsets before = s.offsets;
        if (before.empty()) {
            before.resize(static_cast<std::size_t>(s.m));
            for (auto& x : before) x = rng.uniform_int(-(lim / 2) + 1, lim / 2 - 1);
        }
        Transcript local;
        const auto out = run_sync(before, plan, cfg, rng.split(1), &local);
        for (auto e : local.events()) {
            e.trial = t;
            tr.append(std::move(e));
        }
        aborted += out.report.aborted;
        c1 += out.report.c1;
        c2 += out.report.c2;
        if (t < 3)
            for (ProcessId p = 1; p <= s.m; ++p)
                table_row({std::to_string(t), std::to_string(p), std::to_string(before[p - 1]),
                           std::to_string(out.offsets[p - 1])});
        json rep = out.report;
        runs.push_back({{"trial", t}, {"before", before}, {"after", out.offsets}, {"report", rep}});
    }
    std::fprintf(stderr, "trials %zu  C1 %zu  C2 %zu  aborted %zu  (tick = %g s)\n", s.trials, c1, c2, aborted,
                 s.resolution);
    return {aborted ? kAbort : kOk,
            {{"command", "clocksync"}, {"c1", c1}, {"c2", c2}, {"aborted", aborted}, {"runs", runs}}};
}

Run cmd_efficiency(const Settings& s, Transcript&)
{
    json rows = json::array();
    table_row({"scheme", "m", "eta", "closed form", "monte carlo"});
    const Rng root(s.seed);
    std::uint64_t stream = 0;
    for (Scheme scheme : s.schemes)
        for (int m : s.grid_m)
            for (double eta : s.grid_eta) {
                if (scheme == Scheme::EntangledState && m < 3) continue;
                Rng rng = root.split(stream++);
                const CostModel model{scheme, m, eta};
                const double p = p_success(model);
                const auto est = monte_carlo_efficiency(scheme, m, eta, s.trials, rng);
                const double sigma = std::sqrt(p * (1 - p) / double(s.trials));
                json name = scheme;
                table_row({name.get<std::string>(), std::to_string(m), std::to_string(eta), std::to_string(p),
                           std::to_string(est.rate())});
                rows.push_back({{"scheme", scheme},
                                {"m", m},
                                {"eta", eta},
                                {"closed_form", p},
                                {"detections_per_element", detections_per_element(scheme, m)},
                                {"rate", est.rate()},
                                {"trials", est.trials},
                                {"sigma", sigma},
                                {"within_3_sigma", std::abs(est.rate() - p) <= 3 * sigma + 1e-12}});
            }
    json types = json::array();
    for (int m : s.grid_m) {
        const auto c = list_type_count(m);
        types.push_back({{"m", m}, {"correlated_lists", c.correlated_lists}, {"permutation_lists", c.permutation_lists}});
    }
    return {kOk, {{"command", "efficiency"}, {"rows", rows}, {"list_types", types}}};
}

using Command = std::function<Run(const Settings&, Transcript&)>;

const std::map<std::string, Command>& commands()
{
    static const std::map<std::string, Command> c{{"distribute", cmd_distribute}, {"dba", cmd_dba},
                                                  {"om", cmd_om},                 {"clocksync", cmd_clocksync},
                                                  {"efficiency", cmd_efficiency}};
    return c;
}

Run execute(const std::string& name, const Settings& s, Transcript& tr)
{
    check_common(s);
    return commands().at(name)(s, tr);
}

Run cmd_replay(const std::string& path)
{
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot read " + path);
    const auto stored = Transcript::read_jsonl(f);
    if (!commands().count(stored.command())) throw ReplayError("transcript has unknown command " + stored.command());
    Settings s;
    apply_config(s, stored.config());
    Transcript again(stored.command(), stored.seed(), stored.config());
    execute(stored.command(), s, again);

    const auto a = stored.event_lines(), b = again.event_lines();
    std::size_t first_diff = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i)
        if (a[i] != b[i]) {
            first_diff = i;
            break;
        }
    const bool same = a == b;
    std::fprintf(stderr, "replayed %s: %zu stored events, %zu regenerated, %s\n", stored.command().c_str(), a.size(),
                 b.size(), same ? "identical" : "DIVERGED");
    json report{{"command", "replay"}, {"replayed", stored.command()}, {"events", a.size()}, {"identical", same}};
    if (!same) report["first_difference"] = first_diff;
    return {same ? kOk : kAbort, report};
}

// ---------------------------------------------------------------------------
// Flags

struct Flags
{
    Settings v;
    std::string config;
    std::string backend;
    std::vector<std::string> faults;
    std::vector<std::string> schemes;
    std::vector<std::pair<CLI::Option*, std::function<void(Settings&)>>> bound;
};

template <typename T>
void bind_setting(CLI::App* app, Flags& f, const std::string& name, T Settings::*field, const std::string& help)
{
    CLI::Option* opt = nullptr;
    if constexpr (std::is_same_v<T, bool>)
        opt = app->add_flag(name, f.v.*field, help);
    else
        opt = app->add_option(name, f.v.*field, help);
    f.bound.emplace_back(opt, [&f, field](Settings& s) { s.*field = f.v.*field; });
}

void add_common(CLI::App* app, Flags& f)
{
    bind_setting(app, f, "--m", &Settings::m, "number of processes");
    bind_setting(app, f, "--seed", &Settings::seed, "global seed");
    bind_setting(app, f, "--eta", &Settings::eta, "detector efficiency");
    bind_setting(app, f, "--trials", &Settings::trials, "independent trials");
    bind_setting(app, f, "--out", &Settings::out, "write the JSON report here instead of stdout");
    bind_setting(app, f, "--workers", &Settings::workers, "worker threads for independent trials");
    auto* b = app->add_option("--backend", f.backend, "list backend")->check(CLI::IsMember({"quantum", "dealer"}));
    f.bound.emplace_back(b, [&f](Settings& s) { s.backend = json(f.backend).get<ListBackend>(); });
    auto* fa = app->add_option("--fault", f.faults, "fault profile ID:Strategy[:args], repeatable");
    f.bound.emplace_back(fa, [&f](Settings& s) {
        s.faults.clear();
        for (const auto& x : f.faults) s.faults.push_back(parse_fault(x));
    });
    app->add_option("--config", f.config, "JSON config; flags override its values");
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Detectable Byzantine agreement with correlated lists: simulations and studies"};
    app.require_subcommand(1);
    Flags f;

    auto* distribute = app.add_subcommand("distribute", "generate one correlated list set");
    auto* dba = app.add_subcommand("dba", "run the list-based broadcast");
    auto* omc = app.add_subcommand("om", "run the classical oral-messages baseline");
    auto* clock = app.add_subcommand("clocksync", "synchronize clocks over list-based broadcasts");
    auto* eff = app.add_subcommand("efficiency", "detector-efficiency cost study");
    auto* replay = app.add_subcommand("replay", "re-run a transcript and compare events byte for byte");

    for (auto* sc : {distribute, dba, omc, clock, eff}) add_common(sc, f);
    for (auto* sc : {distribute, dba, clock}) {
        bind_setting(sc, f, "--length", &Settings::length, "list length L (0: 64 expected claim positions)");
    }
    bind_setting(distribute, f, "--budget", &Settings::budget, "round budget for the quantum backend (0: default)");
    for (auto* sc : {dba, omc}) {
        bind_setting(sc, f, "--value", &Settings::value, "source / commander value");
        bind_setting(sc, f, "--source", &Settings::source, "source / commander id");
    }
    for (auto* sc : {dba, clock}) bind_setting(sc, f, "--transcript", &Settings::transcript, "write a JSONL transcript");
    bind_setting(dba, f, "--hub-exemption", &Settings::hub_exemption, "last relay announces without a list");
    bind_setting(omc, f, "--depth", &Settings::depth, "recursion depth n of OM(n)");
    bind_setting(clock, f, "--offsets", &Settings::offsets, "initial clock offsets in ticks (default: random)");
    bind_setting(clock, f, "--bits", &Settings::bit_width, "two's-complement width per difference");
    bind_setting(clock, f, "--resolution", &Settings::resolution, "seconds per tick");
    bind_setting(clock, f, "--triangle-tolerance", &Settings::triangle_tolerance, "ticks of slack in the triangle check");
    bind_setting(eff, f, "--grid-m", &Settings::grid_m, "process counts to study");
    bind_setting(eff, f, "--grid-eta", &Settings::grid_eta, "detector efficiencies to study");
    auto* sch = eff->add_option("--scheme", f.schemes, "single-qudit | qkd-lists | entangled-state")
                    ->check(CLI::IsMember({"single-qudit", "qkd-lists", "entangled-state"}));
    f.bound.emplace_back(sch, [&f](Settings& s) {
        s.schemes.clear();
        for (const auto& x : f.schemes) s.schemes.push_back(json(x).get<Scheme>());
    });
    std::string replay_path;
    replay->add_option("transcript", replay_path, "transcript file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kConfig;
    }

    try {
        Run run;
        Settings s;
        if (replay->parsed()) {
            run = cmd_replay(replay_path);
        } else {
            if (!f.config.empty()) {
                std::ifstream in(f.config);
                if (!in) throw ConfigError("cannot read " + f.config);
                apply_config(s, json::parse(in));
            }
            for (auto& [opt, set] : f.bound)
                if (opt->count() > 0) set(s);
            const std::string name = app.get_subcommands().front()->get_name();
            Transcript tr(name, s.seed, to_config(s));
            run = execute(name, s, tr);
            write_transcript(s, tr);
        }
        emit(s, run.report);
        return run.code;
    } catch (const BudgetExhausted& e) {
        std::fprintf(stderr, "budget exhausted: %s\n", e.what());
        return kBudget;
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "invalid config: %s\n", e.what());
        return kConfig;
    } catch (const ReplayError& e) {
        std::fprintf(stderr, "replay refused: %s\n", e.what());
        return kConfig;
    } catch (const json::exception& e) {
        std::fprintf(stderr, "invalid config: %s\n", e.what());
        return kConfig;
    } catch (const std::out_of_range& e) {
        std::fprintf(stderr, "invalid config: %s\n", e.what());
        return kConfig;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
