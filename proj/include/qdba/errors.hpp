#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qdba {

/// Invalid parameters or configuration (CLI exit code 2).
class ConfigError : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

/// A round budget ran out before the requested work completed (CLI exit code 4).
class BudgetExhausted : public std::runtime_error
{
public:
    BudgetExhausted(const std::string& what, std::size_t rounds)
        : std::runtime_error(what), rounds_(rounds) {}

    std::size_t rounds() const { return rounds_; }

private:
    std::size_t rounds_;
};

/// The simulated network or engine saw something the protocol forbids.
class ProtocolViolation : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// A transcript cannot be replayed by this build.
class ReplayError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

} // namespace qdba
