#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace lendgraph::timeutil {

// Parses "YYYY-MM-DD", "YYYY-MM-DDTHH:MM:SS" or "YYYY-MM-DDTHH:MM:SSZ"
// into unix seconds (UTC). Returns nullopt on malformed input.
std::optional<std::int64_t> parse_iso8601(const std::string& s);

std::string format_iso8601(std::int64_t unix_seconds);

}  // namespace lendgraph::timeutil
