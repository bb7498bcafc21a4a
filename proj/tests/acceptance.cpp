// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fail.
#include "qdba/qdba.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>

#include "test_support.hpp"

using namespace qdba;
namespace qt = qdba::testing;

namespace
{

struct Outcome
{
    bool pass = true;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args)
{
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

// ---------------------------------------------------------------------------

Outcome post_selection_soundness()
{
    const auto t0 = Clock::now();
    double worst = 0.0;
    std::size_t tuples = 0, kept_bad = 0;
    for (int m : {2, 3, 4}) {
        qt::enumerate_rounds(m, [&](const std::vector<int>& c, const std::vector<int>& n, double) {
            ++tuples;
            auto state = prepare_initial(m);
            long long C = 0, S = 0;
            for (int k = 0; k < m; ++k) {
                state = apply_encoding(apply_basis_phase(std::move(state), c[k]), n[k]);
                C += c[k];
                S += n[k];
            }
            const double pass = std::norm(overlap_with_initial(state));
            worst = std::max(worst, std::abs(pass - qt::dense_pass_probability(m, c, n)));
            if (S % m == 0) {
                const auto closed = (1.0 + double(m - 1) * qt::omega(m, C)) / double(m);
                worst = std::max(worst, std::abs(pass - std::norm(closed)));
            }
            // a round is kept only with C = 0 and a nonzero pass probability
            if (C % m == 0 && pass > 1e-9 && S % m != 0) ++kept_bad;
        });
    }
    Rng rng(101);
    for (int i = 0; i < 20000; ++i) {
        const auto rec = run_distribution_round(3, 1.0, rng);
        if (rec.kept && rec.value_sum(3) != 0) ++kept_bad;
    }
    const double secs = seconds_since(t0);
    return {worst < 1e-9 && kept_bad == 0 && secs < 1.0,
            fmt("%zu tuples, max deviation %.2e, kept rounds with sum != 0: %zu, %.3f s", tuples, worst, kept_bad,
                secs)};
}

Outcome keep_rate()
{
    const auto t0 = Clock::now();
    const double oracle = qt::exhaustive_keep_rate(3);
    const std::size_t n = 20000;
    Rng rng(202);
    std::size_t kept = 0;
    for (std::size_t i = 0; i < n; ++i) kept += run_distribution_round(3, 1.0, rng).kept;
    const double rate = double(kept) / double(n);
    const double sigma = qt::binomial_sigma(oracle, double(n));
    const double secs = seconds_since(t0);
    const bool ok = std::abs(rate - oracle) <= 3 * sigma && std::abs(oracle - 1.0 / 9.0) < 1e-12 && secs < 5.0;
    return {ok, fmt("oracle %.6f, empirical %.6f over %zu rounds (3 sigma = %.4f), %.3f s", oracle, rate, n,
                    3 * sigma, secs)};
}

Outcome list_correlation()
{
    const int m = 4;
    std::size_t positions = 0, invalid = 0;
    double worst_chi = 0.0;
    const double critical = qt::chi_square_critical(2);
    // the three relay patterns with two ones
    const std::vector<std::vector<Symbol>> patterns{{1, 1, 0}, {1, 0, 1}, {0, 1, 1}};
    std::vector<std::size_t> counted;
    for (int backend = 0; backend < 2; ++backend) {
        Rng rng(303 + backend);
        std::vector<double> obs(3, 0.0);
        std::size_t n2 = 0;
        while (n2 < 12000) {
            const auto set = backend == 0 ? dealer_generate(m, 4096, rng) : generate_list_set(m, 4096, 1.0, rng).lists;
            const auto report = validate_list_set(set);
            positions += set.length;
            invalid += report.violations.size() + report.structural.size();
            for (std::size_t j = 0; j < set.length; ++j) {
                if (set.lists[0][j] != 2) continue;
                ++n2;
                const std::vector<Symbol> bits{set.lists[1][j], set.lists[2][j], set.lists[3][j]};
                for (std::size_t k = 0; k < 3; ++k) obs[k] += bits == patterns[k];
            }
        }
        counted.push_back(n2);
        worst_chi = std::max(worst_chi, qt::chi_square_statistic(obs, {1.0 / 3, 1.0 / 3, 1.0 / 3}));
    }
    return {invalid == 0 && worst_chi < critical,
            fmt("%zu positions validated, %zu invalid; N=2 samples dealer %zu quantum %zu; max chi2 %.3f < %.3f",
                positions, invalid, counted[0], counted[1], worst_chi, critical)};
}

// ---------------------------------------------------------------------------
// Agreement and validity

std::vector<Strategy> source_options(int m)
{
    std::vector<Strategy> out{Honest{}, Crash{0}, BotAlways{}, FlipRelayForgedList{}, FlipRelayRandomList{}};
    const std::vector<std::optional<Bit>> choices{Bit{0}, Bit{1}, std::nullopt};
    std::vector<std::size_t> idx(m - 1, 0);
    for (;;) {
        SplitBroadcast s;
        for (int k = 0; k < m - 1; ++k) s.values[k + 2] = choices[idx[k]];
        out.push_back(s);
        int k = 0;
        for (; k < m - 1; ++k) {
            if (++idx[k] < choices.size()) break;
            idx[k] = 0;
        }
        if (k == m - 1) break;
    }
    return out;
}

std::vector<Strategy> relay_options()
{
    return {Honest{}, Crash{1}, BotAlways{}, FlipRelayForgedList{}, FlipRelayRandomList{}, SplitBroadcast{}};
}

struct DbaTally
{
    std::size_t runs = 0, agreement = 0, validity = 0, budget = 0, with_m_minus_2 = 0;

    void add(const QbRun& r, const FaultPlan& plan, Bit value, int m)
    {
        ++runs;
        agreement += !agreement_holds(r, plan);
        validity += !validity_holds(r, plan, 1, value);
        budget += r.messages != std::size_t((m - 1) * (m - 1));
        std::size_t faulty = 0;
        for (const auto& f : plan) faulty += !f.honest();
        with_m_minus_2 += faulty == std::size_t(m - 2);
    }
};

DbaTally& dba_tally()
{
    static DbaTally t;
    static bool done = false;
    if (done) return t;
    done = true;

    for (int m : {3, 4}) {
        const std::size_t L = list_length_for(m);
        const auto cfg = default_qb_config(m, L);
        const auto src = source_options(m);
        const auto rel = relay_options();
        std::size_t combos = src.size();
        for (int k = 1; k < m; ++k) combos *= rel.size();
        for (std::size_t code = 0; code < combos; ++code) {
            FaultPlan plan = all_honest(m);
            std::size_t c = code;
            plan[0].strategy = src[c % src.size()];
            c /= src.size();
            for (int k = 1; k < m; ++k) {
                plan[k].strategy = rel[c % rel.size()];
                c /= rel.size();
            }
            for (Bit v : {Bit{0}, Bit{1}}) {
                Rng rng = Rng(std::uint64_t(m)).split(code * 2 + v);
                const auto lists = dealer_generate(m, L, rng);
                t.add(run_qb(lists, v, plan, cfg, rng.split(99)), plan, v, m);
            }
        }
    }

    for (int m : {5, 6, 7}) {
        const std::size_t L = list_length_for(m);
        const auto cfg = default_qb_config(m, L);
        const auto src = source_options(m);
        const auto rel = relay_options();
        Rng rng(4000 + m);
        for (int trial = 0; trial < 1500; ++trial) {
            FaultPlan plan = all_honest(m);
            // a third of the trials have exactly m-2 faulty processes
            const std::size_t faulty = trial % 3 == 0 ? std::size_t(m - 2) : rng.index(std::size_t(m));
            std::vector<ProcessId> ids(m);
            std::iota(ids.begin(), ids.end(), 1);
            std::shuffle(ids.begin(), ids.end(), rng.engine());
            for (std::size_t i = 0; i < faulty; ++i) {
                const ProcessId p = ids[i];
                plan[p - 1].strategy = p == 1 ? src[rng.index(src.size())] : rel[1 + rng.index(rel.size() - 2)];
            }
            const Bit v = static_cast<Bit>(rng.uniform_int(0, 1));
            const auto lists = dealer_generate(m, L, rng);
            t.add(run_qb(lists, v, plan, cfg, rng.split(std::uint64_t(trial))), plan, v, m);
        }
    }
    return t;
}

Outcome dba_agreement_validity()
{
    const auto& t = dba_tally();
    return {t.agreement == 0 && t.validity == 0 && t.with_m_minus_2 > 0,
            fmt("%zu runs (%zu with m-2 faulty): %zu agreement and %zu validity violations", t.runs,
                t.with_m_minus_2, t.agreement, t.validity)};
}

Outcome message_budget()
{
    const auto& t = dba_tally();
    bool om_ok = om_message_count(1, 4) == 9;
    std::size_t om_checked = 0;
    for (int n = 0; n <= 3; ++n)
        for (int m = n + 2; m <= 9; ++m) {
            ++om_checked;
            om_ok = om_ok && om({m, n, 0}, 1, all_honest(m)).messages == om_message_count(n, m);
        }
    return {t.budget == 0 && om_ok,
            fmt("%zu QB runs off-budget: %zu; om_message_count(1,4) = %llu; %zu OM instrumented counts %s", t.runs,
                t.budget, (unsigned long long)om_message_count(1, 4), om_checked, om_ok ? "match" : "MISMATCH")};
}

Outcome classical_bound()
{
    std::vector<Strategy> faults{Crash{0}, Crash{1}, BotAlways{}, FlipRelayForgedList{}};
    const std::vector<std::optional<Bit>> choices{Bit{0}, Bit{1}, std::nullopt};
    for (auto a : choices)
        for (auto b : choices)
            for (auto c : choices) faults.push_back(SplitBroadcast{{{1, a}, {2, b}, {3, c}, {4, a}}});

    std::size_t runs = 0, violations4 = 0;
    for (ProcessId bad = 1; bad <= 4; ++bad)
        for (const auto& s : faults) {
            // the map is keyed by recipient; fold the faulty process's own slot away
            Strategy st = s;
            if (auto* sb = std::get_if<SplitBroadcast>(&st)) sb->values.erase(bad);
            const auto plan = make_plan(4, {{bad, st}});
            for (std::int64_t v : {0, 1}) {
                ++runs;
                violations4 += !om_agreement_holds(om({4, 1, 0}, v, plan), plan, 1, v);
            }
        }

    std::size_t violations3 = 0, runs3 = 0;
    for (ProcessId bad = 1; bad <= 3; ++bad)
        for (auto a : choices)
            for (auto b : choices) {
                SplitBroadcast sb;
                int k = 0;
                for (ProcessId p = 1; p <= 3; ++p)
                    if (p != bad) sb.values[p] = k++ == 0 ? a : b;
                const auto plan = make_plan(3, {{bad, sb}});
                for (std::int64_t v : {0, 1}) {
                    ++runs3;
                    violations3 += !om_agreement_holds(om({3, 1, 0}, v, plan), plan, 1, v);
                }
            }
    const auto witness = make_plan(3, {{3, SplitBroadcast{{{2, Bit{0}}}}}});
    const bool witness_breaks = !om_agreement_holds(om({3, 1, 0}, 1, witness), witness, 1, 1);
    return {violations4 == 0 && violations3 > 0 && witness_breaks,
            fmt("m=4: %zu violations in %zu single-fault runs; m=3: %zu of %zu SplitBroadcast runs violate", violations4,
                runs, violations3, runs3)};
}

Outcome efficiency()
{
    const std::size_t n = 20000;
    bool ok = true;
    double worst = 0.0;
    std::string spread;
    for (double eta : {0.6, 0.8, 0.95}) {
        std::vector<double> single;
        for (int m : {3, 4, 8}) {
            Rng rng(Rng::mix(std::uint64_t(m * 1000 + eta * 100)));
            const auto sq = monte_carlo_efficiency(Scheme::SingleQudit, m, eta, n, rng).rate();
            const auto qkd = monte_carlo_efficiency(Scheme::QkdLists, m, eta, n, rng).rate();
            const double p_sq = p_success({Scheme::SingleQudit, m, eta});
            const double p_qkd = p_success({Scheme::QkdLists, m, eta});
            const double z_sq = std::abs(sq - p_sq) / qt::binomial_sigma(p_sq, double(n));
            const double z_qkd = std::abs(qkd - p_qkd) / qt::binomial_sigma(p_qkd, double(n));
            worst = std::max({worst, z_sq, z_qkd});
            ok = ok && z_sq <= 3 && z_qkd <= 3;
            single.push_back(sq);
        }
        const double sigma_diff = std::sqrt(2.0) * qt::binomial_sigma(eta, double(n));
        const double range = *std::max_element(single.begin(), single.end()) -
                             *std::min_element(single.begin(), single.end());
        ok = ok && range <= 3 * sigma_diff;
        spread += fmt(" %.2f:%.4f", eta, range);
    }
    return {ok, fmt("9 grid points x %zu trials, max |z| %.2f; single-qudit spread across m by eta%s", n, worst,
                    spread.c_str())};
}

Outcome clock_sync()
{
    const int m = 4;
    SyncConfig cfg;
    cfg.bit_width = 10;
    const auto lim = difference_limit(cfg.bit_width);
    Rng rng(808);
    std::size_t honest_runs = 0, c1_fail = 0, c2_fail = 0;
    for (int t = 0; t < 1000; ++t) {
        Offsets o(m);
        for (auto& x : o) x = rng.uniform_int(-(lim / 2) + 1, lim / 2 - 1);
        const auto out = run_sync(o, all_honest(m), cfg, rng.split(std::uint64_t(t)));
        ++honest_runs;
        const auto chk = check_c1_c2(o, out.offsets, honest_ids(all_honest(m)));
        c1_fail += !chk.c1 || out.report.aborted;
        c2_fail += !chk.c2;
    }
    std::size_t liar_runs = 0, completed = 0, liar_c1_fail = 0;
    for (int t = 0; t < 1000; ++t) {
        Offsets o(m);
        for (auto& x : o) x = rng.uniform_int(-(lim / 2) + 1, lim / 2 - 1);
        const ProcessId liar = static_cast<ProcessId>(rng.uniform_int(1, m));
        LieClockDifferences lie;
        for (ProcessId y = 1; y <= m; ++y)
            if (y != liar && rng.bernoulli(0.7)) lie.offsets[y] = rng.uniform_int(-40, 40);
        const auto plan = make_plan(m, {{liar, lie}});
        const auto out = run_sync(o, plan, cfg, rng.split(std::uint64_t(5000 + t)));
        ++liar_runs;
        if (out.report.aborted) continue;
        ++completed;
        liar_c1_fail += !check_c1_c2(o, out.offsets, honest_ids(plan)).c1;
    }
    return {c1_fail == 0 && c2_fail == 0 && liar_c1_fail == 0 && completed > 0,
            fmt("honest: %zu runs, C1 failures %zu, C2 failures %zu; one liar: %zu of %zu completed, C1 failures %zu",
                honest_runs, c1_fail, c2_fail, completed, liar_runs, liar_c1_fail)};
}

Outcome forgery_decay()
{
    const int m = 3;
    const std::size_t n = 10000;
    std::vector<double> raw, exact;
    std::string series;
    for (std::size_t L : {30u, 60u, 90u, 120u}) {
        Rng rng(900 + L);
        const auto window = default_window(L, m);
        const auto target = static_cast<std::size_t>(std::lround(window.expected));
        std::size_t passed = 0;
        double expected_pass = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const auto set = dealer_generate(m, L, rng);
            // honest source sends 0; relay P2 forges a claim of 1 towards P3
            const Message intended{1, 2, 3, Claim{0, positions_of(set.source_list(), 0)}};
            StrategyContext ctx{false, set.list_of(2), intended.payload, target, &rng};
            const auto forged = apply_strategy({2, FlipRelayForgedList{}}, intended, ctx);
            passed += consistent(std::get<Claim>(*forged), set.list_of(3), window);

            // probability that a uniformly sampled forgery of that size passes, given these lists
            const auto cand = positions_of(set.list_of(2), 1);
            std::size_t good = 0;
            for (auto p : cand) good += set.list_of(3)[p] == 1;
            const auto k = std::min(target, cand.size());
            if (!window.contains(k)) continue;
            double p = 1.0;
            for (std::size_t t = 0; t < k; ++t) p *= double(good - std::min(good, t)) / double(cand.size() - t);
            expected_pass += p;
        }
        raw.push_back(double(passed) / double(n));
        exact.push_back(expected_pass / double(n));
        series += fmt(" L=%zu:%.2e/%.2e", L, raw.back(), exact.back());
    }
    bool ok = raw[2] < 0.01 && exact[2] < 0.01;
    for (std::size_t i = 1; i < raw.size(); ++i) ok = ok && exact[i] < exact[i - 1] && raw[i] <= raw[i - 1];
    return {ok, fmt("%zu forgeries per length, empirical/exact pass:%s", n, series.c_str())};
}

} // namespace

int main()
{
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"post-selection soundness", post_selection_soundness},
        {"keep rate", keep_rate},
        {"list correlation", list_correlation},
        {"agreement and validity", dba_agreement_validity},
        {"message budget", message_budget},
        {"classical bound", classical_bound},
        {"efficiency comparison", efficiency},
        {"clock synchronization", clock_sync},
        {"forgery decay", forgery_decay},
    };
    int failed = 0;
    int index = 0;
    for (const auto& [name, fn] : criteria) {
        ++index;
        Outcome o;
        const auto t0 = Clock::now();
        try {
            o = fn();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        std::printf("%s %d %s: %s [%.2f s]\n", o.pass ? "PASS" : "FAIL", index, name, o.detail.c_str(),
                    seconds_since(t0));
        std::fflush(stdout);
        failed += !o.pass;
    }
    return failed == 0 ? 0 : 1;
}
