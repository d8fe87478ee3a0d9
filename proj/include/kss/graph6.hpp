#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "kss/graph.hpp"
#include "json.hpp"

namespace kss {

/// Malformed graph6 input; `offset` is the byte position of the problem.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : std::runtime_error(what + " at byte " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

/// graph6 line without the trailing newline. Bits follow the upper-triangle code order.
inline std::string graph6_encode(const Graph& g) {
  std::string out;
  const int n = g.n();
  if (n <= 62) {
    out.push_back(static_cast<char>(n + 63));
  } else {
    out.push_back(126);
    out.push_back(static_cast<char>(((n >> 12) & 63) + 63));
    out.push_back(static_cast<char>(((n >> 6) & 63) + 63));
    out.push_back(static_cast<char>((n & 63) + 63));
  }
  int acc = 0;
  int filled = 0;
  for (int j = 1; j < n; ++j) {
    for (int i = 0; i < j; ++i) {
      acc = (acc << 1) | (g.has_edge(i, j) ? 1 : 0);
      if (++filled == 6) {
        out.push_back(static_cast<char>(acc + 63));
        acc = 0;
        filled = 0;
      }
    }
  }
  if (filled > 0) out.push_back(static_cast<char>((acc << (6 - filled)) + 63));
  return out;
}

inline Graph graph6_decode(std::string_view text) {
  constexpr std::string_view kHeader = ">>graph6<<";
  std::size_t pos = 0;
  if (text.substr(0, kHeader.size()) == kHeader) pos = kHeader.size();
  while (!text.empty() && (text.back() == '\n' || text.back() == '\r')) text.remove_suffix(1);

  auto byte_at = [&](std::size_t p) -> int {
    if (p >= text.size()) throw ParseError("graph6: truncated input", p);
    const int c = static_cast<unsigned char>(text[p]);
    if (c < 63 || c > 126) throw ParseError("graph6: character out of range", p);
    return c - 63;
  };

  int n = byte_at(pos);
  ++pos;
  if (n == 63) {
    if (pos < text.size() && text[pos] == 126) throw ParseError("graph6: order too large", pos);
    n = (byte_at(pos) << 12) | (byte_at(pos + 1) << 6) | byte_at(pos + 2);
    pos += 3;
  }
  if (n < 1 || n > kMaxVertices) throw ParseError("graph6: unsupported order " + std::to_string(n), 0);

  const std::size_t bit_count = static_cast<std::size_t>(n) * (n - 1) / 2;
  const std::size_t byte_count = (bit_count + 5) / 6;
  if (text.size() - pos < byte_count) throw ParseError("graph6: truncated input", text.size());
  if (text.size() - pos > byte_count) throw ParseError("graph6: trailing data", pos + byte_count);

  Graph g(n);
  std::size_t k = 0;
  for (int j = 1; j < n; ++j) {
    for (int i = 0; i < j; ++i, ++k) {
      const int chunk = byte_at(pos + k / 6);
      if ((chunk >> (5 - k % 6)) & 1) g.add_edge(i, j);
    }
  }
  return g;
}

/// {"n": .., "adj": [[..], ..]} for human inspection.
inline nlohmann::json adjacency_json(const Graph& g) {
  nlohmann::json adj = nlohmann::json::array();
  for (int v = 0; v < g.n(); ++v) {
    nlohmann::json row = nlohmann::json::array();
    for (int w = 0; w < g.n(); ++w)
      if (g.has_edge(v, w)) row.push_back(w);
    adj.push_back(std::move(row));
  }
  return {{"n", g.n()}, {"adj", std::move(adj)}};
}

inline Graph graph_from_adjacency_json(const nlohmann::json& j) {
  Graph g(j.at("n").get<int>());
  const auto& adj = j.at("adj");
  for (int v = 0; v < g.n(); ++v)
    for (int w : adj.at(v))
      if (v < w) g.add_edge(v, w);
  return g;
}

}  // namespace kss
