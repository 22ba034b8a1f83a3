#pragma once

#include <string>
#include <vector>

#include "diqkd/protocol.hpp"
#include "diqkd/security.hpp"

namespace diqkd {

// Fixed 12-significant-digit decimal formatting; all numeric output goes
// through this so repeated runs produce byte-identical files.
std::string format_sig(double x);

// Reads and validates a protocol configuration. Syntax errors carry
// line:column positions; schema errors name the offending field.
// Throws ConfigError.
ProtocolConfig load_protocol_config(const std::string& path);
ProtocolConfig parse_protocol_config(const std::string& text, const std::string& origin);

// ProtocolStats as a JSON object with fixed field names. NaN renders as null.
std::string stats_to_json(const ProtocolStats& stats);

// CSV with header round,alice_basis,bob_basis,alice_bit,bob_bit.
std::string records_to_csv(const std::vector<RoundRecord>& records);

struct KeyRateRow {
    KeyRateResult point;
    bool threshold = false;  // the bisection zero-rate row
};

// Inclusive sweep of `steps` points plus the zero-rate threshold row inserted
// in order (when it falls inside the range). Range must lie within [2, 2 sqrt 2].
std::vector<KeyRateRow> keyrate_table(double s_lo, double s_hi, int steps);

std::string keyrate_to_csv(const std::vector<KeyRateRow>& rows);
std::string keyrate_to_json(const std::vector<KeyRateRow>& rows);

}  // namespace diqkd
