#pragma once

#include <string>

#include <json.hpp>

namespace horokit {

// Fixed 17-significant-digit decimal rendering of a double ("%.17g").
// Enough digits to round-trip IEEE doubles exactly, and byte-stable across
// runs, which the default shortest-representation dump of the JSON library
// is not required to be.
std::string format_double17(double v);

// Serializes a report document.  Identical documents produce identical bytes:
// object keys keep insertion order, floating values use format_double17,
// indentation is fixed at two spaces.  Non-finite numbers are rejected
// (reports must encode absence/∞ explicitly, e.g. with null or flags).
std::string dump_report(const nlohmann::ordered_json& doc);

void write_text_file(const std::string& path, const std::string& content);

inline constexpr int kReportFormatVersion = 1;

}  // namespace horokit
