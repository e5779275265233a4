#pragma once

// JSON and CSV serialization of scalars, tree functions and sequences.

#include <charconv>
#include <fstream>
#include <string>
#include <system_error>
#include <utility>
#include <vector>

#include "json.hpp"
#include "treewave/tree_function.hpp"

namespace treewave {

using Json = nlohmann::ordered_json;

/// Shortest round-trip decimal form of a double.
inline std::string format_double(double x) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, x);
  if (ec != std::errc()) return std::to_string(x);
  return std::string(buf, p);
}

inline Json to_json(const QSurd& x) {
  return Json{{"a", x.rational_part().get_str()}, {"b", x.surd_part().get_str()}};
}

inline Json to_json(double x) { return Json(x); }

/// {"a": "p/r", "b": "s/t"} at the given q.
inline QSurd qsurd_from_json(const Json& j, int q) {
  if (!j.is_object() || !j.contains("a")) throw ParameterError("scalar JSON needs an object with key \"a\"");
  Rational a = parse_rational(j.at("a").get<std::string>());
  Rational b = j.contains("b") ? parse_rational(j.at("b").get<std::string>()) : Rational(0);
  return QSurd(q, a, b);
}

template <WaveScalar T>
T scalar_from_json(const Json& j, int q) {
  if constexpr (std::is_same_v<T, double>) {
    if (j.is_number()) return j.get<double>();
    return qsurd_from_json(j, q).to_double();
  } else {
    if (j.is_number_integer()) return QSurd(q, Rational(j.get<long>()), 0);
    return qsurd_from_json(j, q);
  }
}

/// Exact columns (a, b) of a scalar; empty in float mode.
template <WaveScalar T>
std::pair<std::string, std::string> exact_columns(const T& x) {
  if constexpr (std::is_same_v<T, QSurd>) {
    return {x.rational_part().get_str(), x.surd_part().get_str()};
  } else {
    (void)x;
    return {"", ""};
  }
}

/// Quotes a CSV field when it contains a separator or quote.
inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

template <WaveScalar T>
Json to_json(const TreeFunction<T>& f, std::size_t expansion_limit = 1u << 20) {
  Json entries = Json::array();
  for (const auto& [x, v] : f.explicit_entries(expansion_limit)) {
    entries.push_back(Json{{"vertex", x.to_string()}, {"value", to_json(v)}});
  }
  return Json{{"q", f.q()}, {"entries", entries}};
}

template <WaveScalar T>
TreeFunction<T> tree_function_from_json(const Json& j, int expected_q = 0) {
  int q = j.at("q").get<int>();
  if (expected_q != 0 && q != expected_q) {
    throw ParameterError("initial data has q=" + std::to_string(q) + ", expected q=" + std::to_string(expected_q));
  }
  TreeFunction<T> f(q, 0);
  for (const auto& e : j.at("entries")) {
    VertexAddress x = VertexAddress::parse(e.at("vertex").get<std::string>());
    T v = scalar_from_json<T>(e.at("value"), q);
    f.set(x, f.at(x) + v);
  }
  return f;
}

template <class Seq>
Json sequence_to_json(const Seq& s) {
  Json entries = Json::array();
  for (const auto& [i, v] : s.values()) entries.push_back(Json{{"index", i}, {"value", to_json(v)}});
  return Json{{"q", s.q()}, {"entries", entries}};
}

template <WaveScalar T>
RadialProfile<T> radial_profile_from_json(const Json& j) {
  RadialProfile<T> p(j.at("q").get<int>());
  for (const auto& e : j.at("entries")) p.set(e.at("index").get<int>(), scalar_from_json<T>(e.at("value"), p.q()));
  return p;
}

template <WaveScalar T>
HeightSequence<T> height_sequence_from_json(const Json& j) {
  HeightSequence<T> s(j.at("q").get<int>());
  for (const auto& e : j.at("entries")) s.set(e.at("index").get<int>(), scalar_from_json<T>(e.at("value"), s.q()));
  return s;
}

/// Rows of a snapshot: one per vertex when the support has at most `limit`
/// vertices, otherwise one per stored cell, labelled "anchor/*k" for all
/// descendants of `anchor` at depth k.
template <WaveScalar T>
std::vector<std::pair<std::string, T>> snapshot_rows(const TreeFunction<T>& u, std::size_t limit) {
  std::vector<std::pair<std::string, T>> rows;
  BigInt total = 0;
  for (const auto& [c, v] : u.cells()) total += u.multiplicity(c);
  if (total <= BigInt(static_cast<unsigned long>(limit))) {
    for (auto& [x, v] : u.explicit_entries(limit)) rows.emplace_back(x.to_string(), std::move(v));
    return rows;
  }
  for (const auto& [c, v] : u.cells()) {
    rows.emplace_back(c.depth == 0 ? c.anchor.to_string() : c.anchor.to_string() + "/*" + std::to_string(c.depth), v);
  }
  return rows;
}

/// Snapshot CSV: vertex, value_a, value_b, float.
template <WaveScalar T>
void write_snapshot_csv(std::ostream& os, const TreeFunction<T>& u, std::size_t limit) {
  os << "vertex,value_a,value_b,float\n";
  for (const auto& [label, v] : snapshot_rows(u, limit)) {
    auto [a, b] = exact_columns(v);
    os << csv_field(label) << ',' << a << ',' << b << ',' << format_double(to_double(v)) << '\n';
  }
}

/// Transform CSV: h, exact_value_a, exact_value_b, float_value.
template <class Seq>
void write_sequence_csv(std::ostream& os, const Seq& s) {
  os << "h,exact_value_a,exact_value_b,float_value\n";
  for (const auto& [i, v] : s.values()) {
    auto [a, b] = exact_columns(v);
    os << i << ',' << a << ',' << b << ',' << format_double(to_double(v)) << '\n';
  }
}

}  // namespace treewave
