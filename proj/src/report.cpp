#include "sasaki/report.hpp"

#include "sasaki/errors.hpp"

#include <cctype>
#include <cstdio>
#include <sstream>

namespace sasaki {

namespace {

bool is_scalar_array(const Json& j) {
  if (!j.is_array()) return false;
  for (const auto& x : j)
    if (x.is_structured()) return false;
  return true;
}

std::string scalar_text(const Json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (!j.is_array()) return j.dump();
  std::string out = "[";
  for (std::size_t i = 0; i < j.size(); ++i) out += (i ? ", " : "") + scalar_text(j[i]);
  return out + "]";
}

void write_text(std::string& out, const Json& j, int indent);

void write_entry(std::string& out, const std::string& key, const Json& v, int indent) {
  const std::string pad(static_cast<std::size_t>(indent), ' ');
  if (!v.is_structured() || is_scalar_array(v)) {
    out += pad + key + ": " + scalar_text(v) + "\n";
  } else if (v.empty()) {
    out += pad + key + (v.is_object() ? ": {}\n" : ": []\n");
  } else {
    out += pad + key + ":\n";
    write_text(out, v, indent + 2);
  }
}

void write_text(std::string& out, const Json& j, int indent) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) write_entry(out, k, v, indent);
    return;
  }
  const std::string pad(static_cast<std::size_t>(indent), ' ');
  for (const auto& item : j) {
    if (!item.is_structured() || is_scalar_array(item)) {
      out += pad + "- " + scalar_text(item) + "\n";
      continue;
    }
    // First line of the nested block takes the "- " marker.
    std::string block;
    write_text(block, item, indent + 2);
    block.replace(static_cast<std::size_t>(indent), 2, "- ");
    out += block;
  }
}

}  // namespace

Json to_json(const Report& r) {
  Json j;
  j["command"] = r.command;
  j["input_digest"] = r.input_digest;
  if (r.error) j["error"] = {{"kind", r.error->kind}, {"message", r.error->message}};
  j["results"] = r.results;
  Json w = Json::array();
  for (const auto& x : r.warnings) w.push_back({{"code", x.code}, {"message", x.message}});
  j["warnings"] = w;
  j["timing_ms"] = r.timing_ms;
  return j;
}

Report report_from_json(const Json& j) {
  Report r;
  try {
    r.command = j.at("command").get<std::string>();
    r.input_digest = j.at("input_digest").get<std::string>();
    if (j.contains("error")) r.error = ReportError{j["error"].at("kind"), j["error"].at("message")};
    r.results = j.at("results");
    for (const auto& w : j.at("warnings")) r.warnings.push_back({w.at("code"), w.at("message")});
    r.timing_ms = j.at("timing_ms").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed report: ") + e.what());
  }
  return r;
}

std::string to_text(const Json& j) {
  std::string out;
  write_text(out, j, 0);
  return out;
}

std::string to_text(const Report& r) { return to_text(to_json(r)); }

std::string body_without_timing(const Report& r) {
  Json j = to_json(r);
  j.erase("timing_ms");
  return j.dump();
}

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t seed) {
  std::uint64_t h = seed;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string fnv1a_hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Json real(double x, const char* precision) { return {{"value", x}, {"precision", precision}}; }

Json iterative(double x, double tolerance) {
  return {{"value", x}, {"precision", "iterative"}, {"tolerance", tolerance}};
}

Json extrapolated(double x, double error_bar) {
  return {{"value", x}, {"precision", "extrapolated"}, {"error_bar", error_bar}};
}

Json exact(const Rational& q) { return {{"exact", to_string(q)}, {"value", to_double(q)}, {"precision", "exact"}}; }

Json exact(const Integer& z) {
  // Machine-sized integers stay JSON numbers; larger ones become strings.
  if (z >= INT64_MIN && z <= INT64_MAX) return z.convert_to<std::int64_t>();
  return z.str();
}

Json reals(const std::vector<double>& xs, const char* precision) {
  return {{"values", xs}, {"precision", precision}};
}

Json exacts(const RatVec& xs) {
  Json e = Json::array(), v = Json::array();
  for (const auto& x : xs) {
    e.push_back(to_string(x));
    v.push_back(to_double(x));
  }
  return {{"exact", e}, {"values", v}, {"precision", "exact"}};
}

Json integers(const IntVec& xs) {
  Json out = Json::array();
  for (const auto& x : xs) out.push_back(exact(x));
  return out;
}

Json integer_rows(const IntMatrix& m) {
  Json out = Json::array();
  for (const auto& row : m) out.push_back(integers(row));
  return out;
}

Json reeb(const ReebVector& xi) { return xi.exact ? exacts(*xi.exact) : reals(xi.components); }

ReebVector parse_reeb(std::string_view text) {
  RatVec xs;
  std::size_t start = 0;
  while (true) {
    const auto comma = text.find(',', start);
    xs.push_back(parse_rational(std::string(text.substr(start, comma == std::string_view::npos ? comma : comma - start))));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return ReebVector::from_exact(std::move(xs));
}

std::vector<double> parse_reals(std::string_view text) { return parse_reeb(text).components; }

}  // namespace sasaki
