#pragma once

#include <cstdint>
#include <string>

namespace dtnsat {

using NodeId = std::uint32_t;
// Dense index into the scenario's message table; printed as "M<index+1>".
using MessageIndex = std::uint32_t;
using Bytes = std::uint64_t;

// Simulation times are multiples of the tick length computed in floating
// point; deadlines count as reached within this slack.
constexpr double kTimeEpsilon = 1e-9;

inline bool reached(double now, double deadline) { return now >= deadline - kTimeEpsilon; }

inline std::string node_name(NodeId n) { return "n" + std::to_string(n); }
inline std::string message_name(MessageIndex m) { return "M" + std::to_string(m + 1); }

}  // namespace dtnsat
