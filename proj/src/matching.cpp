#include "topocp/matching.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace topocp {

std::vector<std::size_t> solve_assignment(const CostMatrix& cost) {
  const std::size_t n = cost.size();
  if (n == 0) return {};
  constexpr double kInf = std::numeric_limits<double>::infinity();
  // 1-based potentials; column 0 is a virtual start column.
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<std::size_t> owner(n + 1, 0), way(n + 1, 0);
  std::vector<double> min_slack(n + 1);
  std::vector<char> used(n + 1);

  for (std::size_t row = 1; row <= n; ++row) {
    owner[0] = row;
    std::size_t col0 = 0;
    std::fill(min_slack.begin(), min_slack.end(), kInf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[col0] = 1;
      const std::size_t row0 = owner[col0];
      double delta = kInf;
      std::size_t col1 = 0;
      for (std::size_t col = 1; col <= n; ++col) {
        if (used[col]) continue;
        const double slack = cost(row0 - 1, col - 1) - u[row0] - v[col];
        if (slack < min_slack[col]) {
          min_slack[col] = slack;
          way[col] = col0;
        }
        if (min_slack[col] < delta) {
          delta = min_slack[col];
          col1 = col;
        }
      }
      for (std::size_t col = 0; col <= n; ++col) {
        if (used[col]) {
          u[owner[col]] += delta;
          v[col] -= delta;
        } else {
          min_slack[col] -= delta;
        }
      }
      col0 = col1;
    } while (owner[col0] != 0);
    do {
      const std::size_t col1 = way[col0];
      owner[col0] = owner[col1];
      col0 = col1;
    } while (col0 != 0);
  }

  std::vector<std::size_t> assignment(n);
  for (std::size_t col = 1; col <= n; ++col) assignment[owner[col] - 1] = col - 1;
  return assignment;
}

double point_cost(DiagramPoint a, DiagramPoint b) noexcept {
  const double db = a.birth - b.birth;
  const double dd = a.death - b.death;
  return db * db + dd * dd;
}

double diagonal_cost(DiagramPoint a) noexcept {
  const double p = a.birth - a.death;
  return 0.5 * p * p;
}

namespace {

bool all_unit(std::span<const DiagramPoint> pts) {
  return std::all_of(pts.begin(), pts.end(),
                     [](DiagramPoint p) { return p.birth == 1.0 && p.death == 0.0; });
}

DimMatching hungarian_match(std::span<const DiagramPoint> pred, std::span<const DiagramPoint> gt) {
  const std::size_t n = pred.size();
  const std::size_t m = gt.size();
  // Rows: pred points, then one diagonal slot per gt point.
  // Columns: gt points, then one diagonal slot per pred point.
  CostMatrix cost(n + m);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) cost(i, j) = point_cost(pred[i], gt[j]);
    const double to_diag = diagonal_cost(pred[i]);
    for (std::size_t k = 0; k < n; ++k) cost(i, m + k) = to_diag;
  }
  for (std::size_t j = 0; j < m; ++j) {
    const double to_diag = diagonal_cost(gt[j]);
    for (std::size_t k = 0; k < m; ++k) cost(n + k, j) = to_diag;
  }

  const auto assignment = solve_assignment(cost);
  DimMatching result;
  std::vector<char> gt_matched(m, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t col = assignment[i];
    if (col < m) {
      result.assignments.push_back({i, col});
      result.total_cost += cost(i, col);
      gt_matched[col] = 1;
    } else {
      result.assignments.push_back({i, std::nullopt});
      result.total_cost += diagonal_cost(pred[i]);
    }
  }
  for (std::size_t j = 0; j < m; ++j) {
    if (!gt_matched[j]) {
      result.assignments.push_back({std::nullopt, j});
      result.total_cost += diagonal_cost(gt[j]);
    }
  }
  return result;
}

}  // namespace

DimMatching match_points_unit_gt(std::span<const DiagramPoint> pred, std::size_t gt_count) {
  constexpr DiagramPoint kUnit{1.0, 0.0};
  const double gt_diag = diagonal_cost(kUnit);
  std::vector<double> saving(pred.size());
  for (std::size_t i = 0; i < pred.size(); ++i) {
    saving[i] = diagonal_cost(pred[i]) + gt_diag - point_cost(pred[i], kUnit);
  }
  std::vector<std::size_t> ranked(pred.size());
  std::iota(ranked.begin(), ranked.end(), std::size_t{0});
  std::stable_sort(ranked.begin(), ranked.end(),
                   [&](std::size_t a, std::size_t b) { return saving[a] > saving[b]; });

  std::vector<std::optional<std::size_t>> partner(pred.size());
  std::size_t next_gt = 0;
  for (std::size_t i : ranked) {
    if (next_gt == gt_count || saving[i] <= 0.0) break;
    partner[i] = next_gt++;
  }

  DimMatching result;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    result.assignments.push_back({i, partner[i]});
    result.total_cost += partner[i] ? point_cost(pred[i], kUnit) : diagonal_cost(pred[i]);
  }
  for (std::size_t j = next_gt; j < gt_count; ++j) {
    result.assignments.push_back({std::nullopt, j});
    result.total_cost += gt_diag;
  }
  return result;
}

DimMatching match_points(std::span<const DiagramPoint> pred, std::span<const DiagramPoint> gt,
                         MatchSolver solver) {
  if (pred.empty() && gt.empty()) return {};
  if (solver == MatchSolver::Auto && all_unit(gt)) {
    return match_points_unit_gt(pred, gt.size());
  }
  return hungarian_match(pred, gt);
}

std::vector<DiagramPoint> points_of(const PersistenceDiagram& diagram, int dim) {
  std::vector<DiagramPoint> pts;
  for (const auto& p : diagram.pairs) {
    if (p.dim == dim) pts.push_back({p.birth, p.death});
  }
  return pts;
}

DiagramMatching match_diagrams(const PersistenceDiagram& pred, const PersistenceDiagram& gt,
                               MatchSolver solver) {
  if (pred.source_height != gt.source_height || pred.source_width != gt.source_width) {
    throw Error(ErrorCode::ShapeMismatch, "diagrams come from rasters of different shapes");
  }
  DiagramMatching matching;
  for (int dim = 0; dim < 2; ++dim) {
    const auto p = points_of(pred, dim);
    const auto g = points_of(gt, dim);
    matching.dims[static_cast<std::size_t>(dim)] = match_points(p, g, solver);
  }
  return matching;
}

}  // namespace topocp
