#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "topocp/persistence.hpp"

namespace topocp {

/// Square cost matrix in row-major order.
class CostMatrix {
 public:
  explicit CostMatrix(std::size_t n) : n_(n), cost_(n * n, 0.0) {}

  std::size_t size() const noexcept { return n_; }
  double& operator()(std::size_t row, std::size_t col) { return cost_[row * n_ + col]; }
  double operator()(std::size_t row, std::size_t col) const { return cost_[row * n_ + col]; }

 private:
  std::size_t n_;
  std::vector<double> cost_;
};

/// Minimum-cost perfect assignment (Kuhn-Munkres with potentials, O(n^3)).
/// Returns the column assigned to each row.
std::vector<std::size_t> solve_assignment(const CostMatrix& cost);

/// A point as seen by the matcher.
struct DiagramPoint {
  double birth = 0.0;
  double death = 0.0;
};

/// cost(p, g) = (b_p - b_g)^2 + (d_p - d_g)^2
double point_cost(DiagramPoint a, DiagramPoint b) noexcept;
/// Squared distance to the diagonal projection: (b - d)^2 / 2.
double diagonal_cost(DiagramPoint a) noexcept;

/// One edge of a matching; an empty side means the diagonal.
struct Assignment {
  std::optional<std::size_t> pred;
  std::optional<std::size_t> gt;

  friend bool operator==(const Assignment&, const Assignment&) = default;
};

struct DimMatching {
  std::vector<Assignment> assignments;
  double total_cost = 0.0;
};

/// Optimal matchings for dims 0 and 1. Indices refer to positions within
/// PersistenceDiagram::of_dim(dim) of the respective diagram.
struct DiagramMatching {
  std::array<DimMatching, 2> dims;

  double total_cost() const noexcept { return dims[0].total_cost + dims[1].total_cost; }
};

enum class MatchSolver {
  Auto,       ///< greedy when every gt point is (1,0), Hungarian otherwise
  Hungarian,  ///< always solve the augmented assignment problem
};

/// Optimal one-to-one matching of two point sets where either side may go to
/// the diagonal instead. Unmatched indices on either side are listed as
/// diagonal assignments.
DimMatching match_points(std::span<const DiagramPoint> pred, std::span<const DiagramPoint> gt,
                         MatchSolver solver = MatchSolver::Auto);

/// Exact closed form when every gt point sits at (1,0): rank predicted points
/// by the saving of matching over going to the diagonal and take the best.
DimMatching match_points_unit_gt(std::span<const DiagramPoint> pred, std::size_t gt_count);

DiagramMatching match_diagrams(const PersistenceDiagram& pred, const PersistenceDiagram& gt,
                               MatchSolver solver = MatchSolver::Auto);

std::vector<DiagramPoint> points_of(const PersistenceDiagram& diagram, int dim);

}  // namespace topocp
