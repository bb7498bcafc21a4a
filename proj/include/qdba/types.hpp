#pragma once

#include <cstdint>
#include <vector>

namespace qdba {

/// 1-based process label; P_1 is the broadcasting source by convention.
using ProcessId = int;

using Bit = std::uint8_t;

/// One list entry. Source lists hold values in {0..m-1}, relay lists {0,1}.
using Symbol = std::uint8_t;

using List = std::vector<Symbol>;

/// Largest supported process count (Symbol range).
inline constexpr int kMaxProcesses = 255;

} // namespace qdba
