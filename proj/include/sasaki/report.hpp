#pragma once

// Command reports. Numeric leaves carry precision metadata:
//   {"value": x, "precision": "float64"}                  plain double
//   {"value": x, "precision": "iterative", "tolerance": t} solver output
//   {"value": x, "precision": "extrapolated", "error_bar": e}
//   {"exact": "p/q", "value": x, "precision": "exact"}    rational
// Vectors use "values" (and "exact") in place of "value".

#include "sasaki/arith.hpp"
#include "sasaki/volume.hpp"

#include "json.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sasaki {

using Json = nlohmann::ordered_json;

struct Warning {
  std::string code;     // also the ledger key
  std::string message;
  bool operator==(const Warning&) const = default;
};

struct ReportError {
  std::string kind;
  std::string message;
  bool operator==(const ReportError&) const = default;
};

struct Report {
  std::string command;
  std::string input_digest;
  Json results = Json::object();
  std::vector<Warning> warnings;
  std::optional<ReportError> error;
  double timing_ms = 0.0;

  bool operator==(const Report&) const = default;
};

Json to_json(const Report& r);
Report report_from_json(const Json& j);

/// Nested "key: value" text with two-space indentation; scalar arrays inline.
std::string to_text(const Report& r);
std::string to_text(const Json& j);

/// The report without its timing field, for determinism comparisons.
std::string body_without_timing(const Report& r);

/// 64-bit FNV-1a, rendered as 16 hex digits by fnv1a_hex.
std::uint64_t fnv1a(std::string_view bytes, std::uint64_t seed = 0xcbf29ce484222325ULL);
std::string fnv1a_hex(std::uint64_t h);

Json real(double x, const char* precision = "float64");
Json iterative(double x, double tolerance);
Json extrapolated(double x, double error_bar);
Json exact(const Rational& q);
Json exact(const Integer& z);
Json reals(const std::vector<double>& xs, const char* precision = "float64");
Json exacts(const RatVec& xs);
Json integers(const IntVec& xs);
Json integer_rows(const IntMatrix& m);
/// Exact when xi.exact is set, float64 otherwise.
Json reeb(const ReebVector& xi);

/// Comma-separated reals, each parsed exactly by parse_rational.
ReebVector parse_reeb(std::string_view text);
std::vector<double> parse_reals(std::string_view text);

}  // namespace sasaki
