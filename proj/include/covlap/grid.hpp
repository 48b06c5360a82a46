#ifndef COVLAP_GRID_HPP
#define COVLAP_GRID_HPP

#include <array>
#include <cstddef>
#include <string>

#include "covlap/errors.hpp"

namespace covlap {

/// Uniform node grid on the box [-L, L]^3 with n nodes per axis.
/// Node coordinates: x(i) = -L + i * spacing, spacing = 2L/(n-1).
struct Grid3 {
  double L = 1.0;
  int n = 3;

  Grid3() = default;
  Grid3(double half_width, int nodes_per_axis) : L(half_width), n(nodes_per_axis) {
    if (!(L > 0.0)) throw GridMismatch("half width L must be positive");
    if (n < 3) throw GridMismatch("need at least 3 nodes per axis");
  }

  double spacing() const { return 2.0 * L / (n - 1); }
  std::size_t nodes() const {
    return static_cast<std::size_t>(n) * n * n;
  }
  double coord(int i) const { return -L + i * spacing(); }
  std::array<double, 3> point(int i, int j, int k) const {
    return {coord(i), coord(j), coord(k)};
  }

  /// Node-major linear index: i slowest, k fastest.
  std::size_t index(int i, int j, int k) const {
    return (static_cast<std::size_t>(i) * n + j) * n + k;
  }

  bool on_boundary(int i, int j, int k) const {
    return i == 0 || j == 0 || k == 0 || i == n - 1 || j == n - 1 || k == n - 1;
  }

  /// Same box, node count 2n-1 (existing nodes are preserved).
  Grid3 refined() const { return Grid3(L, 2 * n - 1); }

  bool operator==(const Grid3& o) const { return L == o.L && n == o.n; }
  bool operator!=(const Grid3& o) const { return !(*this == o); }

  std::string describe() const {
    return "box [-" + std::to_string(L) + "," + std::to_string(L) + "]^3, n=" +
           std::to_string(n);
  }
};

}  // namespace covlap

#endif  // COVLAP_GRID_HPP
