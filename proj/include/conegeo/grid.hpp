#pragma once

#include <vector>

namespace conegeo {

/// How grid samples sit in a parameter interval [a, b] with n samples.
///   Nodes:    a + i (b-a)/(n-1), endpoints included.
///   Cells:    a + (i + 1/2)(b-a)/n, cell midpoints.
///   Periodic: a + i (b-a)/n, with a wrap-around edge from n-1 back to 0.
enum class GridLayout { Nodes, Cells, Periodic };

struct Axis {
  int n = 2;
  double a = 0.0;
  double b = 1.0;
  GridLayout layout = GridLayout::Nodes;

  double step() const { return layout == GridLayout::Nodes ? (b - a) / (n - 1) : (b - a) / n; }
  double value(int i) const {
    switch (layout) {
      case GridLayout::Nodes: return a + i * step();
      case GridLayout::Cells: return a + (i + 0.5) * step();
      case GridLayout::Periodic: return a + i * step();
    }
    return a;
  }
  bool periodic() const { return layout == GridLayout::Periodic; }
  /// Number of edges along this axis.
  int edges() const { return periodic() ? n : n - 1; }
  int next(int i) const { return (i + 1) % n; }
};

/// Edge of a rectangular grid; samples are stored at index i * nv + j.
struct Edge {
  int src = 0;
  int dst = 0;
};

/// Rectangular sample grid with lexicographic edge order (all u-edges, then
/// all v-edges; each family ordered by (i, j)).
struct GridTopology {
  int nu = 0;
  int nv = 0;
  bool periodic_u = false;
  bool periodic_v = false;

  int index(int i, int j) const { return i * nv + j; }
  int samples() const { return nu * nv; }
  int u_edge_count_i() const { return periodic_u ? nu : nu - 1; }
  int v_edge_count_j() const { return periodic_v ? nv : nv - 1; }

  /// u-edge starting at (i,j): (i,j) -> (i+1,j).
  Edge u_edge(int i, int j) const { return {index(i, j), index((i + 1) % nu, j)}; }
  /// v-edge starting at (i,j): (i,j) -> (i,j+1).
  Edge v_edge(int i, int j) const { return {index(i, j), index(i, (j + 1) % nv)}; }

  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    for (int i = 0; i < u_edge_count_i(); ++i)
      for (int j = 0; j < nv; ++j) out.push_back(u_edge(i, j));
    for (int i = 0; i < nu; ++i)
      for (int j = 0; j < v_edge_count_j(); ++j) out.push_back(v_edge(i, j));
    return out;
  }
};

}  // namespace conegeo
