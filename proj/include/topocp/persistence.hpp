#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "topocp/raster.hpp"

namespace topocp {

struct BettiPair {
  std::size_t b0 = 0;  // 8-connected foreground components
  std::size_t b1 = 0;  // bounded 4-connected background components

  friend bool operator==(const BettiPair&, const BettiPair&) = default;
};

/// One interval of the superlevel filtration. birth > death always holds;
/// essential classes carry death 0 and no death pixel.
struct PersistencePair {
  int dim = 0;
  double birth = 0.0;
  double death = 0.0;
  PixelCoord birth_pixel;
  std::optional<PixelCoord> death_pixel;

  double persistence() const noexcept { return birth - death; }
  bool essential() const noexcept { return !death_pixel.has_value(); }

  friend bool operator==(const PersistencePair&, const PersistencePair&) = default;
};

struct PersistenceDiagram {
  std::vector<PersistencePair> pairs;
  std::size_t source_height = 0;
  std::size_t source_width = 0;

  /// Pairs of one dimension, in diagram order.
  std::vector<PersistencePair> of_dim(int dim) const;
  std::size_t count(int dim) const;

  friend bool operator==(const PersistenceDiagram&, const PersistenceDiagram&) = default;
};

/// Betti numbers of a mask with 8-connected foreground / 4-connected background.
BettiPair betti_numbers(const BinaryMask& mask);

/// Persistent homology (dims 0 and 1) of the superlevel filtration {f >= t}
/// on the cubical complex whose top cells are the pixels.
///
/// Dim 0 is union-find over 8-connected pixels in decreasing value order.
/// Dim 1 uses duality: union-find over the 4-connected complement in
/// increasing value order, with the region outside the image as the oldest
/// component. Ties in value are broken by row-major index (earlier index
/// enters the superlevel set first).
PersistenceDiagram compute_persistence(const LikelihoodMap& map);

/// element i == betti_numbers(binarize(map, thresholds[i])).
/// Thresholds are evaluated in parallel.
std::vector<BettiPair> betti_curve(const LikelihoodMap& map,
                                   std::span<const double> thresholds);

/// Number of dim-k intervals alive at threshold t: non-essential pairs with
/// death < t <= birth plus essential pairs with birth >= t.
std::size_t alive_count(const PersistenceDiagram& diagram, int dim, double t);

/// Diagram CSV: header `dim,birth,death,birth_row,birth_col,death_row,death_col`,
/// 9 significant digits, empty death coordinates for essential classes.
void write_diagram_csv(std::ostream& out, const PersistenceDiagram& diagram,
                       std::span<const int> dims = {});
std::string diagram_csv(const PersistenceDiagram& diagram, std::span<const int> dims = {});
/// Parses the CSV format back. Source dimensions are not part of the format
/// and are left zero.
PersistenceDiagram parse_diagram_csv(const std::string& text);

}  // namespace topocp
