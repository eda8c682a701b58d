#include "topocp/persistence.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>

#include "union_find.hpp"

namespace topocp {
namespace {

constexpr std::array<std::pair<int, int>, 8> kEight = {{
    {-1, -1}, {-1, 0}, {-1, 1}, {0, -1}, {0, 1}, {1, -1}, {1, 0}, {1, 1}}};
constexpr std::array<std::pair<int, int>, 4> kFour = {{{-1, 0}, {0, -1}, {0, 1}, {1, 0}}};

template <std::size_t N, typename Fn>
void for_neighbors(const std::array<std::pair<int, int>, N>& offsets, std::size_t row,
                   std::size_t col, std::size_t height, std::size_t width, Fn&& fn) {
  for (auto [dr, dc] : offsets) {
    const auto r = static_cast<std::ptrdiff_t>(row) + dr;
    const auto c = static_cast<std::ptrdiff_t>(col) + dc;
    if (r < 0 || c < 0 || r >= static_cast<std::ptrdiff_t>(height) ||
        c >= static_cast<std::ptrdiff_t>(width)) {
      continue;
    }
    fn(static_cast<std::size_t>(r) * width + static_cast<std::size_t>(c));
  }
}

bool on_border(std::size_t row, std::size_t col, std::size_t height, std::size_t width) {
  return row == 0 || col == 0 || row + 1 == height || col + 1 == width;
}

// Superlevel entry order: value descending, row-major index ascending.
std::vector<std::size_t> superlevel_order(const LikelihoodMap& map) {
  std::vector<std::size_t> order(map.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  const auto values = map.values();
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (values[a] != values[b]) return values[a] > values[b];
    return a < b;
  });
  return order;
}

bool pair_less(const PersistencePair& a, const PersistencePair& b) {
  if (a.dim != b.dim) return a.dim < b.dim;
  if (a.persistence() != b.persistence()) return a.persistence() > b.persistence();
  if (a.birth != b.birth) return a.birth < b.birth;
  if (a.birth_pixel != b.birth_pixel) return a.birth_pixel < b.birth_pixel;
  return a.death_pixel < b.death_pixel;
}

void dim0_pairs(const LikelihoodMap& map, std::span<const std::size_t> order,
                std::span<const std::size_t> rank, std::vector<PersistencePair>& out) {
  const std::size_t n = map.size();
  const std::size_t h = map.height();
  const std::size_t w = map.width();
  detail::UnionFind uf(n);
  std::vector<std::size_t> eldest(n);  // root -> earliest-entered pixel of the component
  std::vector<char> present(n, 0);

  for (std::size_t p : order) {
    present[p] = 1;
    eldest[p] = p;
    const std::size_t row = p / w;
    const std::size_t col = p % w;
    for_neighbors(kEight, row, col, h, w, [&](std::size_t q) {
      if (!present[q]) return;
      const std::size_t rp = uf.find(p);
      const std::size_t rq = uf.find(q);
      if (rp == rq) return;
      std::size_t old_birth = eldest[rp];
      std::size_t young_birth = eldest[rq];
      if (rank[young_birth] < rank[old_birth]) std::swap(old_birth, young_birth);
      if (map[young_birth] > map[p]) {
        out.push_back({0, map[young_birth], map[p], map.coord(young_birth), map.coord(p)});
      }
      eldest[uf.unite(rp, rq)] = old_birth;
    });
  }
  if (!order.empty() && map[order.front()] > 0.0) {
    out.push_back({0, map[order.front()], 0.0, map.coord(order.front()), std::nullopt});
  }
}

void dim1_pairs(const LikelihoodMap& map, std::span<const std::size_t> order,
                std::span<const std::size_t> rank, std::vector<PersistencePair>& out) {
  const std::size_t n = map.size();
  const std::size_t h = map.height();
  const std::size_t w = map.width();
  const std::size_t outside = n;
  detail::UnionFind uf(n + 1);
  // root -> pixel that entered the complement first (its minimum); the
  // outside region is older than every pixel.
  std::vector<std::size_t> eldest(n + 1, outside);
  std::vector<char> present(n + 1, 0);
  present[outside] = 1;

  // Complement entry order is the superlevel order reversed, so a larger
  // superlevel rank means an older background component.
  auto older = [&](std::size_t a, std::size_t b) {
    if (a == outside) return true;
    if (b == outside) return false;
    return rank[a] > rank[b];
  };

  auto merge = [&](std::size_t p, std::size_t q) {
    const std::size_t rp = uf.find(p);
    const std::size_t rq = uf.find(q);
    if (rp == rq) return;
    std::size_t old_min = eldest[rp];
    std::size_t young_min = eldest[rq];
    if (!older(old_min, young_min)) std::swap(old_min, young_min);
    if (map[p] > map[young_min]) {
      out.push_back({1, map[p], map[young_min], map.coord(p), map.coord(young_min)});
    }
    eldest[uf.unite(rp, rq)] = old_min;
  };

  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const std::size_t p = *it;
    present[p] = 1;
    eldest[p] = p;
    const std::size_t row = p / w;
    const std::size_t col = p % w;
    for_neighbors(kFour, row, col, h, w, [&](std::size_t q) {
      if (present[q]) merge(p, q);
    });
    if (on_border(row, col, h, w)) merge(p, outside);
  }
}

}  // namespace

std::vector<PersistencePair> PersistenceDiagram::of_dim(int dim) const {
  std::vector<PersistencePair> out;
  for (const auto& p : pairs) {
    if (p.dim == dim) out.push_back(p);
  }
  return out;
}

std::size_t PersistenceDiagram::count(int dim) const {
  return static_cast<std::size_t>(
      std::count_if(pairs.begin(), pairs.end(), [dim](const auto& p) { return p.dim == dim; }));
}

BettiPair betti_numbers(const BinaryMask& mask) {
  const std::size_t n = mask.size();
  const std::size_t h = mask.height();
  const std::size_t w = mask.width();
  const std::size_t outside = n;
  detail::UnionFind uf(n + 1);
  for (std::size_t p = 0; p < n; ++p) {
    const std::size_t row = p / w;
    const std::size_t col = p % w;
    if (mask[p]) {
      for_neighbors(kEight, row, col, h, w, [&](std::size_t q) {
        if (mask[q]) uf.unite(p, q);
      });
    } else {
      for_neighbors(kFour, row, col, h, w, [&](std::size_t q) {
        if (!mask[q]) uf.unite(p, q);
      });
      if (on_border(row, col, h, w)) uf.unite(p, outside);
    }
  }
  BettiPair result;
  const std::size_t outside_root = uf.find(outside);
  for (std::size_t p = 0; p < n; ++p) {
    if (uf.find(p) != p) continue;
    if (mask[p]) {
      ++result.b0;
    } else if (p != outside_root) {
      ++result.b1;
    }
  }
  return result;
}

PersistenceDiagram compute_persistence(const LikelihoodMap& map) {
  const auto order = superlevel_order(map);
  std::vector<std::size_t> rank(map.size());
  for (std::size_t i = 0; i < order.size(); ++i) rank[order[i]] = i;

  PersistenceDiagram diagram;
  diagram.source_height = map.height();
  diagram.source_width = map.width();
  dim0_pairs(map, order, rank, diagram.pairs);
  dim1_pairs(map, order, rank, diagram.pairs);
  std::sort(diagram.pairs.begin(), diagram.pairs.end(), pair_less);
  return diagram;
}

std::vector<BettiPair> betti_curve(const LikelihoodMap& map,
                                   std::span<const double> thresholds) {
  for (double t : thresholds) {
    if (!(t >= 0.0 && t <= 1.0)) {
      throw Error(ErrorCode::InvalidArgument, "betti_curve threshold outside [0,1]");
    }
  }
  std::vector<BettiPair> curve(thresholds.size());
  const auto count = static_cast<std::ptrdiff_t>(thresholds.size());
#pragma omp parallel for schedule(dynamic) if (count > 1)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    curve[static_cast<std::size_t>(i)] =
        betti_numbers(binarize(map, thresholds[static_cast<std::size_t>(i)]));
  }
  return curve;
}

std::size_t alive_count(const PersistenceDiagram& diagram, int dim, double t) {
  std::size_t alive = 0;
  for (const auto& p : diagram.pairs) {
    if (p.dim != dim) continue;
    if (p.essential() ? p.birth >= t : (p.death < t && t <= p.birth)) ++alive;
  }
  return alive;
}

void write_diagram_csv(std::ostream& out, const PersistenceDiagram& diagram,
                       std::span<const int> dims) {
  out << "dim,birth,death,birth_row,birth_col,death_row,death_col\n";
  char buf[64];
  for (const auto& p : diagram.pairs) {
    if (!dims.empty() && std::find(dims.begin(), dims.end(), p.dim) == dims.end()) continue;
    out << p.dim << ',';
    std::snprintf(buf, sizeof buf, "%.9g", p.birth);
    out << buf << ',';
    std::snprintf(buf, sizeof buf, "%.9g", p.death);
    out << buf << ',' << p.birth_pixel.row << ',' << p.birth_pixel.col << ',';
    if (p.death_pixel) out << p.death_pixel->row << ',' << p.death_pixel->col;
    else out << ',';
    out << '\n';
  }
}

std::string diagram_csv(const PersistenceDiagram& diagram, std::span<const int> dims) {
  std::ostringstream out;
  write_diagram_csv(out, diagram, dims);
  return out.str();
}

PersistenceDiagram parse_diagram_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) ||
      line != "dim,birth,death,birth_row,birth_col,death_row,death_col") {
    throw Error(ErrorCode::MalformedHeader, "diagram CSV header missing");
  }
  PersistenceDiagram diagram;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (;;) {
      const auto comma = line.find(',', start);
      fields.push_back(line.substr(start, comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (fields.size() != 7) {
      throw Error(ErrorCode::MalformedHeader, "diagram CSV row needs 7 fields: " + line);
    }
    try {
      PersistencePair p;
      p.dim = std::stoi(fields[0]);
      p.birth = std::stod(fields[1]);
      p.death = std::stod(fields[2]);
      p.birth_pixel = {std::stoul(fields[3]), std::stoul(fields[4])};
      if (!fields[5].empty() || !fields[6].empty()) {
        p.death_pixel = PixelCoord{std::stoul(fields[5]), std::stoul(fields[6])};
      }
      diagram.pairs.push_back(p);
    } catch (const std::logic_error&) {
      throw Error(ErrorCode::MalformedHeader, "diagram CSV row unparsable: " + line);
    }
  }
  return diagram;
}

}  // namespace topocp
