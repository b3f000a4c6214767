#pragma once

#include <string>
#include <vector>

#include "lab/scenario.hpp"

namespace lab {

struct GridAxis {
  int n = 0;          // node count (periodic: cells, no duplicate endpoint)
  double lo = 0, hi = 1;
  double h = 0;
  bool periodic = false;
  std::vector<double> x;
};

// Tensor grid over the domain. Dirichlet axes carry their boundary nodes;
// the boundary rows are eliminated from the free-node system.
struct Grid {
  DomainKind kind = DomainKind::interval;
  int dim = 1;
  GridAxis axis[2];

  int n_nodes = 0;  // all nodes
  int n_free = 0;   // after Dirichlet elimination
  std::vector<int> free_of_node;   // -1 on boundary
  std::vector<int> node_of_free;
  std::vector<double> qw_node;     // quadrature weight per node (incl. r jacobian)
  std::vector<std::string> warnings;

  int node_index(int i, int j) const { return i + axis[0].n * j; }
  void node_coords(int node, int& i, int& j) const {
    i = node % axis[0].n;
    j = node / axis[0].n;
  }
  Pt point_of_node(int node) const {
    int i, j;
    node_coords(node, i, j);
    Pt p{axis[0].x[i], 0};
    if (dim == 2) p[1] = axis[1].x[j];
    return p;
  }
  Pt point_of_free(int f) const { return point_of_node(node_of_free[f]); }
  double qw_free(int f) const { return qw_node[node_of_free[f]]; }

  double total_weight() const;          // sums to domain volume
  double quad_norm(const std::vector<double>& u_free) const;  // sqrt(int u^2)
  // Multilinear interpolation of a free-node function (0 on Dirichlet bdry).
  double interpolate(const std::vector<double>& u_free, const Pt& p) const;
};

// resolution: nodes on axis 0; resolution_y on axis 1 (0 = same as axis 0).
// eps_hint, when positive, drives the layer-resolution warning
// (h <= eps^(1/4)/8 for potential scenarios, h <= eps^(1/2)/8 with a field).
Grid build_grid(const ScenarioSpec& spec, int resolution, int resolution_y = 0,
                double eps_hint = 0);

}  // namespace lab
