#pragma once

#include "ktree/graph.hpp"
#include "ktree/ktree.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <string>
#include <vector>

namespace ktree {

namespace detail {

using Cell = std::vector<Vertex>;
using Partition = std::vector<Cell>;

// Splits cells by neighbor counts into every cell until stable. Subcells are
// ordered by their count signature, so the result commutes with relabeling.
inline void refine(const std::vector<std::vector<char>>& matrix, Partition& cells) {
  const int n = static_cast<int>(matrix.size());
  std::vector<int> cell_of(static_cast<std::size_t>(n));
  while (true) {
    for (std::size_t c = 0; c < cells.size(); ++c) {
      for (Vertex v : cells[c]) cell_of[v] = static_cast<int>(c);
    }
    Partition next;
    next.reserve(n);
    for (const Cell& cell : cells) {
      if (cell.size() == 1) {
        next.push_back(cell);
        continue;
      }
      std::map<std::vector<int>, Cell> groups;
      for (Vertex v : cell) {
        std::vector<int> signature(cells.size(), 0);
        for (Vertex u = 0; u < n; ++u) {
          if (matrix[v][u]) ++signature[cell_of[u]];
        }
        groups[std::move(signature)].push_back(v);
      }
      for (auto& [signature, members] : groups) next.push_back(std::move(members));
    }
    const bool stable = next.size() == cells.size();
    cells = std::move(next);
    if (stable) return;
  }
}

// Swapping u and v is an automorphism iff their neighborhoods agree outside {u, v}.
inline bool are_twins(const std::vector<std::vector<char>>& matrix, Vertex u, Vertex v) {
  const int n = static_cast<int>(matrix.size());
  for (Vertex w = 0; w < n; ++w) {
    if (w == u || w == v) continue;
    if (matrix[u][w] != matrix[v][w]) return false;
  }
  return true;
}

inline std::string encode(const std::vector<std::vector<char>>& matrix, const Partition& cells) {
  const int n = static_cast<int>(matrix.size());
  std::string code;
  code.push_back(static_cast<char>((n >> 8) & 0xff));
  code.push_back(static_cast<char>(n & 0xff));
  unsigned char byte = 0;
  int filled = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      byte = static_cast<unsigned char>((byte << 1) | (matrix[cells[i][0]][cells[j][0]] ? 1 : 0));
      if (++filled == 8) {
        code.push_back(static_cast<char>(byte));
        byte = 0;
        filled = 0;
      }
    }
  }
  if (filled) code.push_back(static_cast<char>(byte << (8 - filled)));
  return code;
}

inline void search(const std::vector<std::vector<char>>& matrix, Partition cells,
                   std::string& best) {
  refine(matrix, cells);
  auto target = std::find_if(cells.begin(), cells.end(), [](const Cell& c) { return c.size() > 1; });
  if (target == cells.end()) {
    std::string code = encode(matrix, cells);
    if (best.empty() || code < best) best = std::move(code);
    return;
  }
  const std::size_t index = static_cast<std::size_t>(target - cells.begin());
  std::vector<Vertex> representatives;
  for (Vertex v : cells[index]) {
    bool covered = std::any_of(representatives.begin(), representatives.end(),
                               [&](Vertex r) { return are_twins(matrix, r, v); });
    if (!covered) representatives.push_back(v);
  }
  for (Vertex v : representatives) {
    Partition child;
    child.reserve(cells.size() + 1);
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (c != index) {
        child.push_back(cells[c]);
        continue;
      }
      child.push_back(Cell{v});
      Cell rest;
      for (Vertex u : cells[c]) {
        if (u != v) rest.push_back(u);
      }
      child.push_back(std::move(rest));
    }
    search(matrix, std::move(child), best);
  }
}

}  // namespace detail

/// Canonical certificate of a graph: the smallest adjacency-matrix bit string
/// (upper triangle, row-major, prefixed by the order) over the labelings
/// reachable by individualization and equitable refinement. Two graphs get
/// equal codes iff they are isomorphic. Twin vertices are individualized only
/// once since swapping them is an automorphism.
inline std::string canonical_code(const Graph& graph) {
  const int n = graph.order();
  std::vector<std::vector<char>> matrix(static_cast<std::size_t>(n),
                                        std::vector<char>(static_cast<std::size_t>(n), 0));
  for (auto [u, v] : graph.edges()) matrix[u][v] = matrix[v][u] = 1;
  detail::Partition cells;
  if (n > 0) {
    cells.emplace_back(static_cast<std::size_t>(n));
    for (Vertex v = 0; v < n; ++v) cells[0][v] = v;
  }
  std::string best;
  detail::search(matrix, std::move(cells), best);
  if (n == 0) best = std::string(2, '\0');
  return best;
}

inline std::string canonical_code(const KTree& tree) { return canonical_code(tree.graph()); }

inline std::string hex(const std::string& bytes) {
  static constexpr char digits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (unsigned char c : bytes) {
    out.push_back(digits[c >> 4]);
    out.push_back(digits[c & 15]);
  }
  return out;
}

/// The graph of `tree` with vertex v renamed to permutation[v].
inline Graph relabel(const Graph& graph, const std::vector<Vertex>& permutation) {
  std::vector<Edge> edges;
  for (auto [u, v] : graph.edges()) edges.emplace_back(permutation[u], permutation[v]);
  return Graph(graph.order(), edges);
}

template <typename Rng>
std::vector<Vertex> random_permutation(int n, Rng& rng) {
  std::vector<Vertex> perm(static_cast<std::size_t>(n));
  for (Vertex v = 0; v < n; ++v) perm[v] = v;
  std::shuffle(perm.begin(), perm.end(), rng);
  return perm;
}

}  // namespace ktree
