#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "qdba/errors.hpp"
#include "qdba/rng.hpp"
#include "qdba/types.hpp"

namespace qdba {

enum class Provenance { Quantum, Dealer };

NLOHMANN_JSON_SERIALIZE_ENUM(Provenance, {{Provenance::Quantum, "quantum"},
                                          {Provenance::Dealer, "dealer"}})

/// The m private lists. lists[0] is the source list l_1; lists[k-1] belongs to P_k.
struct CorrelatedListSet
{
    int m = 0;
    std::size_t length = 0;
    Provenance provenance = Provenance::Dealer;
    std::vector<List> lists;

    const List& source_list() const { return lists.at(0); }
    const List& list_of(ProcessId p) const { return lists.at(static_cast<std::size_t>(p - 1)); }
};

inline void to_json(nlohmann::json& j, const CorrelatedListSet& s)
{
    j = nlohmann::json{{"m", s.m}, {"L", s.length}, {"provenance", s.provenance}, {"lists", s.lists}};
}

inline void from_json(const nlohmann::json& j, CorrelatedListSet& s)
{
    j.at("m").get_to(s.m);
    j.at("L").get_to(s.length);
    j.at("provenance").get_to(s.provenance);
    s.lists = j.at("lists").get<std::vector<List>>();
}

struct ValidationReport
{
    std::vector<std::size_t> violations; // positions breaking a correlation rule
    std::vector<std::string> structural; // shape problems (list count, lengths, ranges)

    bool ok() const { return violations.empty() && structural.empty(); }
};

inline ValidationReport validate_list_set(const CorrelatedListSet& set)
{
    ValidationReport report;
    const int m = set.m;
    if (m < 2) report.structural.push_back("m must be >= 2");
    if (set.lists.size() != static_cast<std::size_t>(std::max(m, 0))) {
        report.structural.push_back("expected one list per process");
        return report;
    }
    for (std::size_t k = 0; k < set.lists.size(); ++k) {
        if (set.lists[k].size() != set.length)
            report.structural.push_back("list " + std::to_string(k + 1) + " has wrong length");
    }
    if (!report.structural.empty()) return report;

    for (std::size_t j = 0; j < set.length; ++j) {
        const int n = set.lists[0][j];
        bool bad = n >= m;
        int relay_sum = 0;
        for (int k = 1; k < m; ++k) {
            const int b = set.lists[k][j];
            if (b > 1) bad = true;
            relay_sum += b;
            if (n <= 1 && b != n) bad = true;
        }
        if (n >= 2 && relay_sum != m - n) bad = true;
        if (bad) report.violations.push_back(j);
    }
    return report;
}

/// Indices where list holds value, ascending.
inline std::vector<std::size_t> positions_of(std::span<const Symbol> list, Bit value)
{
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j < list.size(); ++j)
        if (list[j] == value) out.push_back(j);
    return out;
}

/// Trusted-dealer backend. Each position draws the m-1 relay bits uniformly
/// and sets l_1 = (m - popcount) mod m, which is exactly the joint law of the
/// kept rounds of the qudit protocol.
inline CorrelatedListSet dealer_generate(int m, std::size_t length, Rng& rng)
{
    if (m < 2 || m > kMaxProcesses) throw ConfigError("dealer_generate: m out of range");
    if (length < 1) throw ConfigError("dealer_generate: L must be >= 1");
    CorrelatedListSet set{m, length, Provenance::Dealer, std::vector<List>(m, List(length))};
    for (std::size_t j = 0; j < length; ++j) {
        int ones = 0;
        for (int k = 1; k < m; ++k) {
            const auto b = static_cast<Symbol>(rng.uniform_int(0, 1));
            set.lists[k][j] = b;
            ones += b;
        }
        set.lists[0][j] = static_cast<Symbol>((m - ones) % m);
    }
    return set;
}

/// Probability that a position of l_1 holds a given bit value: 2^{-(m-1)}.
inline double claim_fraction(int m)
{
    return std::ldexp(1.0, -(m - 1));
}

// ---------------------------------------------------------------------------
// Claims

/// {message bit, position list}. Positions are strictly ascending and 0-based.
struct Claim
{
    Bit value = 0;
    std::vector<std::size_t> positions;

    friend bool operator==(const Claim&, const Claim&) = default;
};

inline void to_json(nlohmann::json& j, const Claim& c)
{
    j = nlohmann::json{{"value", c.value}, {"positions", c.positions}};
}

inline void from_json(const nlohmann::json& j, Claim& c)
{
    j.at("value").get_to(c.value);
    j.at("positions").get_to(c.positions);
}

/// Acceptable claim length: |count - expected| <= tolerance.
struct LengthWindow
{
    double expected = 0.0;
    double tolerance = 0.0;

    bool contains(std::size_t count) const
    {
        return std::abs(static_cast<double>(count) - expected) <= tolerance;
    }
};

inline constexpr double kDefaultToleranceSigmas = 5.0;

/// ceil(sigmas * sqrt(L p (1-p))): a multiple of the binomial standard deviation.
inline double binomial_tolerance(std::size_t length, double p, double sigmas = kDefaultToleranceSigmas)
{
    return std::ceil(sigmas * std::sqrt(static_cast<double>(length) * p * (1.0 - p)));
}

/// Window centred on the honest claim length L * 2^{-(m-1)}.
inline LengthWindow default_window(std::size_t length, int m)
{
    const double p = claim_fraction(m);
    return {static_cast<double>(length) * p, binomial_tolerance(length, p)};
}

/// Window centred on L/m with an explicit tolerance.
inline LengthWindow uniform_window(std::size_t length, int m, double tolerance)
{
    return {static_cast<double>(length) / m, tolerance};
}

enum class ClaimStatus { Consistent, Malformed, Length, Mismatch };

inline const char* to_string(ClaimStatus s)
{
    switch (s) {
    case ClaimStatus::Consistent: return "consistent";
    case ClaimStatus::Malformed: return "malformed";
    case ClaimStatus::Length: return "length";
    case ClaimStatus::Mismatch: return "mismatch";
    }
    return "?";
}

inline bool well_formed(const Claim& claim, std::size_t length)
{
    if (claim.value > 1) return false;
    for (std::size_t i = 0; i < claim.positions.size(); ++i) {
        if (claim.positions[i] >= length) return false;
        if (i > 0 && claim.positions[i] <= claim.positions[i - 1]) return false;
    }
    return true;
}

/// Checks a claim against the receiver's own list.
inline ClaimStatus check_claim(const Claim& claim, std::span<const Symbol> own_list, const LengthWindow& window)
{
    if (!well_formed(claim, own_list.size())) return ClaimStatus::Malformed;
    if (!window.contains(claim.positions.size())) return ClaimStatus::Length;
    for (auto p : claim.positions)
        if (own_list[p] != claim.value) return ClaimStatus::Mismatch;
    return ClaimStatus::Consistent;
}

inline bool consistent(const Claim& claim, std::span<const Symbol> own_list, const LengthWindow& window)
{
    return check_claim(claim, own_list, window) == ClaimStatus::Consistent;
}

} // namespace qdba
