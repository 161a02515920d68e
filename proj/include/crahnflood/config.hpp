#pragma once

#include <cstdint>
#include <string>

#include "crahnflood/params.hpp"

namespace crahn {

// Flat key=value config files. '#' starts a comment, blank lines are skipped,
// keys are exactly the SystemParams field names. Unknown or duplicate keys are
// errors; missing keys keep their defaults.
SystemParams parse_config(const std::string& text, const std::string& origin);
SystemParams load_config(const std::string& path);

// Canonical serialization (sorted keys, full precision); hash input and the
// config echo used by CSV comment lines.
std::string canonical_config(const SystemParams& p);
std::uint64_t config_hash(const SystemParams& p);

}  // namespace crahn
