#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "qdba/errors.hpp"
#include "qdba/list_store.hpp"
#include "qdba/rng.hpp"
#include "qdba/types.hpp"

namespace qdba {

inline constexpr double kAmplitudeTolerance = 1e-9;

/// State vector of the travelling m-level system.
class QuditState
{
public:
    using Amplitude = std::complex<double>;

    QuditState(int dim, std::vector<Amplitude> amplitudes)
        : dim_(dim), amplitudes_(std::move(amplitudes))
    {
        if (dim_ < 2) throw ConfigError("qudit dimension must be >= 2");
        if (amplitudes_.size() != static_cast<std::size_t>(dim_))
            throw ConfigError("amplitude count must equal the dimension");
    }

    int dim() const { return dim_; }
    const std::vector<Amplitude>& amplitudes() const { return amplitudes_; }
    Amplitude operator[](std::size_t j) const { return amplitudes_[j]; }

    double norm_squared() const
    {
        double s = 0.0;
        for (const auto& a : amplitudes_) s += std::norm(a);
        return s;
    }

    /// omega^k with omega = exp(2 pi i / dim).
    Amplitude omega_power(long long k) const
    {
        const long long r = ((k % dim_) + dim_) % dim_;
        const double phase = 2.0 * std::numbers::pi * static_cast<double>(r) / dim_;
        return std::polar(1.0, phase);
    }

    bool approx_equal(const QuditState& other, double tol = kAmplitudeTolerance) const
    {
        if (dim_ != other.dim_) return false;
        for (std::size_t j = 0; j < amplitudes_.size(); ++j)
            if (std::abs(amplitudes_[j] - other.amplitudes_[j]) > tol) return false;
        return true;
    }

private:
    friend QuditState apply_basis_phase(QuditState, int);
    friend QuditState apply_encoding(QuditState, int);

    int dim_;
    std::vector<Amplitude> amplitudes_;
};

/// Uniform superposition over the m computational basis states.
inline QuditState prepare_initial(int m)
{
    if (m < 2) throw ConfigError("prepare_initial: m must be >= 2");
    const double a = 1.0 / std::sqrt(static_cast<double>(m));
    return QuditState(m, std::vector<QuditState::Amplitude>(m, {a, 0.0}));
}

/// Basis choice c: phase omega^c on every level except |0>.
inline QuditState apply_basis_phase(QuditState state, int c)
{
    if (c < 0 || c >= state.dim_) throw ConfigError("basis choice out of range");
    if (c == 0) return state;
    const auto w = state.omega_power(c);
    for (std::size_t k = 1; k < state.amplitudes_.size(); ++k) state.amplitudes_[k] *= w;
    return state;
}

/// Value encoding N: phase omega^{jN} on level j.
inline QuditState apply_encoding(QuditState state, int n)
{
    if (n < 0 || n >= state.dim_) throw ConfigError("encoded value out of range");
    if (n == 0) return state;
    for (std::size_t j = 0; j < state.amplitudes_.size(); ++j)
        state.amplitudes_[j] *= state.omega_power(static_cast<long long>(j) * n);
    return state;
}

/// <psi_0|state>
inline QuditState::Amplitude overlap_with_initial(const QuditState& state)
{
    QuditState::Amplitude s{0.0, 0.0};
    for (const auto& a : state.amplitudes()) s += a;
    return s / std::sqrt(static_cast<double>(state.dim()));
}

enum class Detection { NoDetection, Orthogonal, Initial };

/// Projective test "is it |psi_0>?" behind a detector of efficiency eta.
inline Detection measure_initial_projection(const QuditState& state, double eta, Rng& rng)
{
    if (eta < 0.0 || eta > 1.0) throw ConfigError("detector efficiency must lie in [0,1]");
    if (!rng.bernoulli(eta)) return Detection::NoDetection;
    const double pass = std::min(1.0, std::norm(overlap_with_initial(state)));
    return rng.bernoulli(pass) ? Detection::Initial : Detection::Orthogonal;
}

struct RoundRecord
{
    std::vector<int> basis_choices;  // c_1..c_m
    std::vector<int> encoded_values; // N_1..N_m
    bool detected = false;
    bool projected_initial = false;
    bool basis_sum_ok = false;
    bool kept = false;
    /// Processes in the order they revealed their basis; empty unless P_m saw |psi_0>.
    std::vector<ProcessId> reveal_order;

    int basis_sum(int m) const
    {
        long long s = 0;
        for (int c : basis_choices) s += c;
        return static_cast<int>(s % m);
    }
    int value_sum(int m) const
    {
        long long s = 0;
        for (int n : encoded_values) s += n;
        return static_cast<int>(s % m);
    }
};

/// One pass of the qudit around P_1..P_m followed by P_m's measurement and
/// the basis reveal.
inline RoundRecord run_distribution_round(int m, double eta, Rng& rng)
{
    if (m < 2 || m > kMaxProcesses) throw ConfigError("run_distribution_round: m out of range");
    RoundRecord rec;
    rec.basis_choices.resize(m);
    rec.encoded_values.resize(m);

    auto state = prepare_initial(m);
    for (int k = 0; k < m; ++k) {
        const int c = static_cast<int>(rng.uniform_int(0, m - 1));
        const int n = k == 0 ? static_cast<int>(rng.uniform_int(0, m - 1))
                             : static_cast<int>(rng.uniform_int(0, 1));
        rec.basis_choices[k] = c;
        rec.encoded_values[k] = n;
        state = apply_encoding(apply_basis_phase(std::move(state), c), n);
    }

    const auto outcome = measure_initial_projection(state, eta, rng);
    rec.detected = outcome != Detection::NoDetection;
    rec.projected_initial = outcome == Detection::Initial;
    if (rec.projected_initial) {
        for (ProcessId p = m; p >= 1; --p) rec.reveal_order.push_back(p);
        rec.basis_sum_ok = rec.basis_sum(m) == 0;
    }
    rec.kept = rec.detected && rec.projected_initial && rec.basis_sum_ok;
    return rec;
}

inline std::size_t default_round_budget(int m, std::size_t length)
{
    return 100 * static_cast<std::size_t>(m) * static_cast<std::size_t>(m) * length;
}

struct ListGeneration
{
    CorrelatedListSet lists;
    std::size_t rounds = 0;
};

/// Repeats distribution rounds until `length` rounds are kept; position j of
/// l_k is N_k of the j-th kept round.
inline ListGeneration generate_list_set(int m, std::size_t length, double eta, Rng& rng,
                                        std::optional<std::size_t> budget = std::nullopt)
{
    if (length < 1) throw ConfigError("generate_list_set: L must be >= 1");
    const std::size_t limit = budget.value_or(default_round_budget(m, length));
    ListGeneration out{{m, length, Provenance::Quantum, std::vector<List>(m)}, 0};
    for (auto& l : out.lists.lists) l.reserve(length);

    while (out.lists.lists[0].size() < length) {
        if (out.rounds >= limit)
            throw BudgetExhausted("round budget exhausted after " + std::to_string(out.rounds) +
                                      " rounds with " + std::to_string(out.lists.lists[0].size()) +
                                      " of " + std::to_string(length) + " positions kept",
                                  out.rounds);
        const auto rec = run_distribution_round(m, eta, rng);
        ++out.rounds;
        if (!rec.kept) continue;
        for (int k = 0; k < m; ++k) out.lists.lists[k].push_back(static_cast<Symbol>(rec.encoded_values[k]));
    }
    return out;
}

} // namespace qdba
