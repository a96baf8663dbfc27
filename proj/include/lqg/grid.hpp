#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "lqg/error.hpp"

namespace lqg {

/// Regular grid of n x n interior nodes on the unit square (0,1)^2 with
/// spacing a = 1/(n+1). Node (row, col) sits at x = (col+1)a, y = (row+1)a and
/// has flat index row*n + col. For n+1 a power of two a*(n+1) == 1 exactly;
/// otherwise it holds to one ulp.
struct GridSpec {
  int n = 0;
  std::uint64_t seed = 0;

  double spacing() const { return 1.0 / static_cast<double>(n + 1); }
  std::size_t size() const { return static_cast<std::size_t>(n) * static_cast<std::size_t>(n); }

  std::size_t index(int row, int col) const {
    return static_cast<std::size_t>(row) * static_cast<std::size_t>(n) + static_cast<std::size_t>(col);
  }
  int row(std::size_t idx) const { return static_cast<int>(idx / static_cast<std::size_t>(n)); }
  int col(std::size_t idx) const { return static_cast<int>(idx % static_cast<std::size_t>(n)); }

  double x(std::size_t idx) const { return (col(idx) + 1.0) / (n + 1.0); }
  double y(std::size_t idx) const { return (row(idx) + 1.0) / (n + 1.0); }

  /// Euclidean distance from node idx to the boundary of the square.
  double boundary_distance(std::size_t idx) const;

  void validate() const {
    require(n >= 1, ErrorKind::InvalidSpec, "grid needs n >= 1");
  }

  bool same_grid(const GridSpec& other) const { return n == other.n; }
};

enum class FieldKind { Gff, Custom };

/// Field values h(v) at interior nodes, row-major.
struct GridField {
  GridSpec spec;
  std::vector<double> values;
  FieldKind kind = FieldKind::Gff;
};

using NodePair = std::pair<std::size_t, std::size_t>;

}  // namespace lqg
