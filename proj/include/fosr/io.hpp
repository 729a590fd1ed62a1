#pragma once

#include <charconv>
#include <cstdio>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "fosr/error.hpp"
#include "fosr/graph.hpp"
#include "fosr/rewire.hpp"

namespace fosr {

/// Shortest decimal text that parses back to the same double.
inline std::string format_double(double value) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc{}) return "nan";
  return std::string(buf, end);
}

/// Human-facing value: 12 significant digits, always with a decimal point
/// or exponent, e.g. "2.0" and "0.0769230769231".
inline std::string format_report(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  std::string text(buf);
  if (text.find_first_of(".eEin") == std::string::npos) text += ".0";
  return text;
}

// ---------------------------------------------------------------------------
// Edge-list files:
//   # comment
//   n <node_count>
//   <u> <v> [<rel>]        rel is 1 (original, default) or 2 (added)
// ---------------------------------------------------------------------------

namespace detail {

inline std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

inline unsigned long long parse_uint(std::string_view token, std::size_t line_no) {
  unsigned long long value = 0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size()) {
    throw Error(ErrorKind::ParseError,
                "line " + std::to_string(line_no) + ": expected a non-negative integer, got '" + std::string(token) + "'");
  }
  return value;
}

}  // namespace detail

inline Graph read_edge_list(std::istream& in) {
  std::optional<Graph> g;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto tokens = detail::split_ws(line);
    if (tokens.empty() || tokens.front().front() == '#') continue;
    if (!g) {
      if (tokens.size() != 2 || tokens[0] != "n") {
        throw Error(ErrorKind::ParseError, "line " + std::to_string(line_no) + ": expected header 'n <count>'");
      }
      const auto n = detail::parse_uint(tokens[1], line_no);
      if (n == 0) throw Error(ErrorKind::ParseError, "node count must be positive");
      g.emplace(static_cast<std::size_t>(n));
      continue;
    }
    if (tokens.size() != 2 && tokens.size() != 3) {
      throw Error(ErrorKind::ParseError, "line " + std::to_string(line_no) + ": expected '<u> <v> [<rel>]'");
    }
    const auto u = detail::parse_uint(tokens[0], line_no);
    const auto v = detail::parse_uint(tokens[1], line_no);
    const auto rel = tokens.size() == 3 ? detail::parse_uint(tokens[2], line_no) : 1ULL;
    try {
      g->add_edge(static_cast<Node>(u), static_cast<Node>(v), relation_from_int(static_cast<long>(rel)));
    } catch (const Error& e) {
      throw Error(e.kind(), "line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (!g) throw Error(ErrorKind::ParseError, "missing header 'n <count>'");
  return std::move(*g);
}

/// Writes edges in canonical (u, v) order, so equal graphs give equal bytes.
inline void write_edge_list(std::ostream& out, const Graph& g) {
  out << "n " << g.node_count() << '\n';
  for (const Edge& e : g.edges()) out << e.u << ' ' << e.v << ' ' << static_cast<int>(e.tag) << '\n';
}

// ---------------------------------------------------------------------------
// Trajectory CSV: iter,u,v,score,rayleigh,gap (missing values left empty)
// ---------------------------------------------------------------------------

inline constexpr std::string_view kTrajectoryHeader = "iter,u,v,score,rayleigh,gap";

inline void write_trajectory_csv(std::ostream& out, std::span<const TrajectoryRecord> trajectory) {
  auto opt = [](const std::optional<double>& value) { return value ? format_double(*value) : std::string(); };
  out << kTrajectoryHeader << '\n';
  for (const TrajectoryRecord& r : trajectory) {
    out << r.iter << ',' << r.u << ',' << r.v << ',' << opt(r.score) << ',' << opt(r.rayleigh) << ','
        << opt(r.gap) << '\n';
  }
}

}  // namespace fosr
