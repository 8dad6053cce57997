#pragma once

// The .ktc text format:
//
//   ktree <k> <n>
//   <k vertex ids>      # attachment clique of vertex k
//   ...                 # exactly n-k lines; line t names ids < k+t
//
// Lines starting with '#' are comments. Blank lines separate instances in a
// stream.

#include "ktree/error.hpp"
#include "ktree/ktree.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace ktree {

namespace detail {

struct Token {
  std::string_view text;
  std::size_t column;  // 1-based
};

inline std::vector<Token> tokenize(std::string_view line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    if (i >= line.size()) break;
    std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    out.push_back(Token{line.substr(start, i - start), start + 1});
  }
  return out;
}

inline long long to_integer(const Token& token, std::size_t line_no) {
  long long value = 0;
  auto [ptr, ec] = std::from_chars(token.text.data(), token.text.data() + token.text.size(), value);
  if (ec != std::errc() || ptr != token.text.data() + token.text.size()) {
    throw ParseError(line_no, token.column, "expected an integer, found '" +
                                                std::string(token.text) + "'");
  }
  return value;
}

inline bool is_blank(std::string_view line) {
  for (char c : line) {
    if (c != ' ' && c != '\t' && c != '\r') return false;
  }
  return true;
}

inline bool is_comment(std::string_view line) {
  std::size_t i = 0;
  while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
  return i < line.size() && line[i] == '#';
}

struct Line {
  std::size_t number;
  std::string_view text;
};

// Parses one instance from the given non-blank, non-comment lines.
inline KTree parse_block(const std::vector<Line>& lines) {
  if (lines.empty()) throw ParseError(1, 1, "empty input");
  const Line& header = lines.front();
  auto head = tokenize(header.text);
  if (head.empty() || head[0].text != "ktree") {
    throw ParseError(header.number, head.empty() ? 1 : head[0].column,
                     "expected header 'ktree <k> <n>'");
  }
  if (head.size() != 3) {
    throw ParseError(header.number, head.size() > 3 ? head[3].column : header.text.size() + 1,
                     "header needs exactly two integers: ktree <k> <n>");
  }
  const long long k = to_integer(head[1], header.number);
  const long long n = to_integer(head[2], header.number);
  if (k < 1) throw ParseError(header.number, head[1].column, "k must be positive");
  if (n < k) throw ParseError(header.number, head[2].column, "n must be at least k");
  if (n > 1'000'000) throw ParseError(header.number, head[2].column, "n is implausibly large");

  const std::size_t expected = static_cast<std::size_t>(n - k);
  if (lines.size() - 1 != expected) {
    const Line& where = lines.size() - 1 > expected ? lines[expected + 1] : lines.back();
    throw ParseError(where.number, 1,
                     "k/n mismatch: header promises " + std::to_string(expected) +
                         " attachment lines, found " + std::to_string(lines.size() - 1));
  }

  std::vector<KClique> attachments;
  attachments.reserve(expected);
  std::vector<std::vector<Vertex>> adjacency(static_cast<std::size_t>(n));
  for (Vertex u = 0; u < k; ++u) {
    for (Vertex v = 0; v < k; ++v) {
      if (u != v) adjacency[u].push_back(v);
    }
  }
  for (std::size_t t = 0; t < expected; ++t) {
    const Line& line = lines[t + 1];
    auto tokens = tokenize(line.text);
    if (static_cast<long long>(tokens.size()) != k) {
      throw ParseError(line.number, 1,
                       "expected " + std::to_string(k) + " vertex ids, found " +
                           std::to_string(tokens.size()));
    }
    const long long fresh = k + static_cast<long long>(t);
    std::vector<Vertex> ids;
    ids.reserve(tokens.size());
    for (const Token& token : tokens) {
      long long v = to_integer(token, line.number);
      if (v < 0) throw ParseError(line.number, token.column, "negative vertex id");
      if (v >= fresh) {
        throw ParseError(line.number, token.column,
                         "forward vertex reference: vertex " + std::to_string(v) +
                             " is not yet present when vertex " + std::to_string(fresh) +
                             " is attached");
      }
      ids.push_back(static_cast<Vertex>(v));
    }
    KClique target;
    try {
      target = KClique(std::move(ids));
    } catch (const Error& e) {
      throw ParseError(line.number, 1, e.what());
    }
    for (std::size_t i = 0; i < target.size(); ++i) {
      for (std::size_t j = i + 1; j < target.size(); ++j) {
        const auto& row = adjacency[target[i]];
        if (!std::binary_search(row.begin(), row.end(), target[j])) {
          throw ParseError(line.number, 1,
                           "attachment " + target.str() + " of vertex " + std::to_string(fresh) +
                               " is not a clique");
        }
      }
    }
    for (Vertex v : target) {
      adjacency[v].push_back(static_cast<Vertex>(fresh));
      adjacency[fresh].push_back(v);
    }
    attachments.push_back(std::move(target));
  }
  return KTree(static_cast<int>(k), std::move(attachments));
}

inline std::vector<std::vector<Line>> split_blocks(std::string_view text) {
  std::vector<std::vector<Line>> blocks(1);
  std::size_t number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    ++number;
    if (is_blank(line)) {
      if (!blocks.back().empty()) blocks.emplace_back();
    } else if (!is_comment(line)) {
      blocks.back().push_back(Line{number, line});
    }
    if (end == text.size()) break;
    pos = end + 1;
  }
  if (blocks.back().empty()) blocks.pop_back();
  return blocks;
}

}  // namespace detail

/// Parses exactly one .ktc instance. Blank lines are allowed only at the end.
inline KTree parse_ktc(std::string_view text) {
  auto blocks = detail::split_blocks(text);
  if (blocks.empty()) throw ParseError(1, 1, "empty input: expected 'ktree <k> <n>'");
  if (blocks.size() > 1) {
    throw ParseError(blocks[1].front().number, 1, "unexpected second instance after blank line");
  }
  return detail::parse_block(blocks.front());
}

/// Parses a stream of .ktc blocks separated by blank lines.
inline std::vector<KTree> parse_ktc_stream(std::string_view text) {
  std::vector<KTree> out;
  for (const auto& block : detail::split_blocks(text)) out.push_back(detail::parse_block(block));
  return out;
}

inline std::string serialize_ktc(const KTree& tree) {
  std::ostringstream out;
  out << "ktree " << tree.k() << ' ' << tree.order() << '\n';
  for (const KClique& target : tree.attachments()) {
    for (std::size_t i = 0; i < target.size(); ++i) {
      if (i) out << ' ';
      out << target[i];
    }
    out << '\n';
  }
  return out.str();
}

/// Undirected DOT rendering of the k-tree itself.
inline std::string to_dot(const KTree& tree, std::string_view name = "ktree") {
  std::ostringstream out;
  out << "graph " << name << " {\n";
  for (Vertex v = 0; v < tree.order(); ++v) out << "  " << v << ";\n";
  for (auto [u, v] : tree.graph().edges()) out << "  " << u << " -- " << v << ";\n";
  out << "}\n";
  return out.str();
}

}  // namespace ktree
