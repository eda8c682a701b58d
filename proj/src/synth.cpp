#include "topocp/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <nlohmann/json.hpp>

#include "topocp/kernels.hpp"

namespace topocp {
namespace {

constexpr int kShapeAttempts = 20;
constexpr int kBreakAttempts = 200;
constexpr std::size_t kCellMargin = 1;

std::size_t grid_side(std::size_t components) {
  auto g = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(components))));
  while (g * g < components) ++g;
  return g;
}

std::size_t min_cell(std::size_t thickness) { return 2 * thickness + 10; }

struct Cell {
  std::size_t row0, col0, side;
};

Cell cell_of(std::size_t k, std::size_t grid, std::size_t size) {
  const std::size_t side = size / grid;
  return {(k / grid) * side, (k % grid) * side, side};
}

double wrap_angle(double a) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  a = std::fmod(a, kTwoPi);
  return a < 0 ? a + kTwoPi : a;
}

// Star-shaped ribbon around a jittered cell center; radius varies smoothly
// with angle. Open arcs keep only an angular window.
void draw_curved_ribbon(std::vector<std::uint8_t>& mask, std::size_t size, const Cell& cell,
                        std::size_t thickness, bool closed, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double half = std::max(0.5 * static_cast<double>(thickness), 0.6);
  const double jitter = 0.1 * static_cast<double>(cell.side - min_cell(thickness)) * (unit(rng) - 0.5);
  const double cy = static_cast<double>(cell.row0) + 0.5 * static_cast<double>(cell.side) - 0.5 + jitter;
  const double cx = static_cast<double>(cell.col0) + 0.5 * static_cast<double>(cell.side) - 0.5 - jitter;
  const double reach = 0.5 * static_cast<double>(cell.side) - static_cast<double>(kCellMargin) -
                       1.0 - std::abs(jitter);

  double amp_a = 0.12 * unit(rng);
  double amp_b = 0.12 * unit(rng);
  const int freq = 2 + static_cast<int>(unit(rng) * 3.0);
  const double phase_a = 2.0 * std::numbers::pi * unit(rng);
  const double phase_b = 2.0 * std::numbers::pi * unit(rng);
  double amp = amp_a + amp_b;
  // Need r0 (1 + amp) + half <= reach and r0 (1 - amp) - half >= 2.
  double r_lo = (2.0 + half) / (1.0 - amp);
  double r_hi = (reach - half) / (1.0 + amp);
  if (r_lo > r_hi) {
    amp_a = amp_b = amp = 0.0;
    r_lo = 2.0 + half;
    r_hi = reach - half;
  }
  const double r0 = r_lo + (r_hi - r_lo) * unit(rng);
  const double arc_start = 2.0 * std::numbers::pi * unit(rng);
  const double arc_span = std::numbers::pi * (0.9 + 0.6 * unit(rng));

  for (std::size_t r = cell.row0; r < cell.row0 + cell.side; ++r) {
    for (std::size_t c = cell.col0; c < cell.col0 + cell.side; ++c) {
      const double dy = static_cast<double>(r) - cy;
      const double dx = static_cast<double>(c) - cx;
      const double theta = std::atan2(dy, dx);
      const double radius = r0 * (1.0 + amp_a * std::sin(freq * theta + phase_a) +
                                  amp_b * std::cos(2.0 * theta + phase_b));
      if (std::abs(std::hypot(dy, dx) - radius) > half) continue;
      if (!closed && wrap_angle(theta - arc_start) > arc_span) continue;
      mask[r * size + c] = 1;
    }
  }
}

// Axis-aligned frame (closed) or bar (open); correct by construction.
void draw_block_ribbon(std::vector<std::uint8_t>& mask, std::size_t size, const Cell& cell,
                       std::size_t thickness, bool closed) {
  const std::size_t lo = kCellMargin + 1;
  const std::size_t hi = cell.side - kCellMargin - 1;  // exclusive
  for (std::size_t r = lo; r < hi; ++r) {
    for (std::size_t c = lo; c < hi; ++c) {
      bool on = false;
      if (closed) {
        on = r < lo + thickness || r >= hi - thickness || c < lo + thickness || c >= hi - thickness;
      } else {
        const std::size_t mid = cell.side / 2 - thickness / 2;
        on = r >= mid && r < mid + thickness;
      }
      if (on) mask[(cell.row0 + r) * size + cell.col0 + c] = 1;
    }
  }
}

BinaryMask draw_gt(const RibbonSpec& spec, std::mt19937_64& rng) {
  const std::size_t grid = grid_side(spec.components);
  const BettiPair want{spec.components, spec.holes};
  for (int attempt = 0; attempt <= kShapeAttempts; ++attempt) {
    std::vector<std::uint8_t> mask(spec.size * spec.size, 0);
    for (std::size_t k = 0; k < spec.components; ++k) {
      const Cell cell = cell_of(k, grid, spec.size);
      const bool closed = k < spec.holes;
      if (attempt < kShapeAttempts) {
        draw_curved_ribbon(mask, spec.size, cell, spec.thickness, closed, rng);
      } else {
        draw_block_ribbon(mask, spec.size, cell, spec.thickness, closed);
      }
    }
    BinaryMask gt(spec.size, spec.size, std::move(mask));
    if (betti_numbers(gt) == want) return gt;
  }
  throw Error(ErrorCode::InfeasibleSpec, "could not realize requested topology");
}

LikelihoodMap render_likelihood(const BinaryMask& gt, double blur) {
  std::vector<double> raw(gt.values().begin(), gt.values().end());
  const auto blurred = gaussian_blur(RealRaster(gt.height(), gt.width(), std::move(raw)), blur);
  const auto [lo, hi] = std::minmax_element(blurred.values().begin(), blurred.values().end());
  const double range = *hi - *lo;
  std::vector<double> out(blurred.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = range > 0.0 ? std::clamp((blurred[i] - *lo) / range, 0.0, 1.0)
                         : std::clamp(blurred[i], 0.0, 1.0);
  }
  return LikelihoodMap(gt.height(), gt.width(), std::move(out));
}

LikelihoodMap inject_breaks(const RibbonSpec& spec, const BinaryMask& gt,
                            const LikelihoodMap& clean, std::mt19937_64& rng) {
  const BettiPair gt_betti = betti_numbers(gt);
  std::vector<double> current(clean.values().begin(), clean.values().end());
  BinaryMask current_mask = binarize(clean);
  BettiPair current_betti = betti_numbers(current_mask);
  const double max_gap = static_cast<double>(spec.thickness) + 1.0 + spec.blur_radius;
  std::uniform_real_distribution<double> gap_scale(0.5, 1.0);

  for (std::size_t b = 0; b < spec.break_count; ++b) {
    std::vector<std::size_t> ribbon;
    for (std::size_t i = 0; i < current_mask.size(); ++i) {
      if (current_mask[i]) ribbon.push_back(i);
    }
    bool placed = false;
    for (int attempt = 0; attempt < kBreakAttempts && !placed && !ribbon.empty(); ++attempt) {
      const auto center = gt.coord(ribbon[std::uniform_int_distribution<std::size_t>(
          0, ribbon.size() - 1)(rng)]);
      const double gap = std::max(1.5, max_gap * gap_scale(rng));
      auto candidate = current;
      for (std::size_t i = 0; i < candidate.size(); ++i) {
        const auto p = gt.coord(i);
        const double dy = static_cast<double>(p.row) - static_cast<double>(center.row);
        const double dx = static_cast<double>(p.col) - static_cast<double>(center.col);
        if (dy * dy + dx * dx <= gap * gap) candidate[i] = 0.0;
      }
      LikelihoodMap trial(gt.height(), gt.width(), candidate);
      auto trial_mask = binarize(trial);
      const BettiPair trial_betti = betti_numbers(trial_mask);
      if (trial_betti == current_betti || trial_betti == gt_betti) continue;
      current = std::move(candidate);
      current_mask = std::move(trial_mask);
      current_betti = trial_betti;
      placed = true;
    }
    if (!placed) {
      throw Error(ErrorCode::InfeasibleSpec,
                  "could not place break " + std::to_string(b + 1) + " changing topology");
    }
  }
  return LikelihoodMap(gt.height(), gt.width(), std::move(current));
}

}  // namespace

void RibbonSpec::validate() const {
  auto fail = [](const std::string& why) { throw Error(ErrorCode::InfeasibleSpec, why); };
  if (size < 16) fail("size must be >= 16");
  if (components == 0) fail("components must be >= 1");
  if (holes > components) fail("holes must not exceed components");
  if (thickness == 0) fail("thickness must be >= 1");
  if (!(blur_radius >= 0.0) || !std::isfinite(blur_radius)) fail("blur_radius must be >= 0");
  const std::size_t cell = min_cell(thickness);
  if (size / grid_side(components) < cell) fail("ribbons do not fit in their grid cells");
  const std::size_t footprint = (cell - 4) * (cell - 4);
  if (2 * components * footprint > size * size) fail("ribbon area exceeds half the image");
}

RibbonSample gen_ribbon(const RibbonSpec& spec) {
  spec.validate();
  std::mt19937_64 rng(spec.seed);
  auto gt = draw_gt(spec, rng);
  auto clean = render_likelihood(gt, spec.blur_radius);
  auto degraded = inject_breaks(spec, gt, clean, rng);
  return {std::move(clean), std::move(gt), std::move(degraded)};
}

std::vector<std::size_t> window_origins(std::size_t extent, std::size_t stride,
                                        std::size_t window) {
  if (stride == 0) throw Error(ErrorCode::InvalidArgument, "stride must be positive");
  if (extent < window) throw Error(ErrorCode::ImageTooSmall, "image smaller than window");
  std::vector<std::size_t> origins;
  for (std::size_t o = 0; o + window <= extent; o += stride) origins.push_back(o);
  if (origins.back() != extent - window) origins.push_back(extent - window);
  return origins;
}

PatchSet extract_patches(const LikelihoodMap& image, const BinaryMask& gt, std::size_t stride) {
  require_same_shape(image, gt, "extract_patches");
  if (image.height() < kPatchSide || image.width() < kPatchSide) {
    throw Error(ErrorCode::ImageTooSmall, "extract_patches needs at least 64x64, got " +
                                              std::to_string(image.height()) + "x" +
                                              std::to_string(image.width()));
  }
  PatchSet patches;
  for (std::size_t r0 : window_origins(image.height(), stride)) {
    for (std::size_t c0 : window_origins(image.width(), stride)) {
      std::vector<double> img(kPatchSide * kPatchSide);
      std::vector<std::uint8_t> lab(kPatchSide * kPatchSide);
      bool any = false;
      for (std::size_t r = 0; r < kPatchSide; ++r) {
        for (std::size_t c = 0; c < kPatchSide; ++c) {
          img[r * kPatchSide + c] = image(r0 + r, c0 + c);
          lab[r * kPatchSide + c] = gt(r0 + r, c0 + c);
          any = any || lab[r * kPatchSide + c];
        }
      }
      if (!any) continue;
      patches.push_back({LikelihoodMap(kPatchSide, kPatchSide, std::move(img)),
                         BinaryMask(kPatchSide, kPatchSide, std::move(lab)), {r0, c0}});
    }
  }
  return patches;
}

AugmentedPatch augment(const LikelihoodMap& image, const BinaryMask& gt, bool flip_h, bool flip_v,
                       int quarter_turns) {
  require_same_shape(image, gt, "augment");
  return {augment_raster(image, flip_h, flip_v, quarter_turns),
          augment_raster(gt, flip_h, flip_v, quarter_turns)};
}

AugmentedPatch augment_random(const LikelihoodMap& image, const BinaryMask& gt,
                              std::mt19937_64& rng) {
  std::bernoulli_distribution coin(0.5);
  std::uniform_int_distribution<int> turns(0, 3);
  const bool flip_h = coin(rng);
  const bool flip_v = coin(rng);
  return augment(image, gt, flip_h, flip_v, turns(rng));
}

std::string to_json(const RibbonSpec& spec) {
  nlohmann::ordered_json j;
  j["seed"] = spec.seed;
  j["size"] = spec.size;
  j["components"] = spec.components;
  j["holes"] = spec.holes;
  j["thickness"] = spec.thickness;
  j["break_count"] = spec.break_count;
  j["blur_radius"] = spec.blur_radius;
  return j.dump();
}

RibbonSpec ribbon_spec_from_json(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    RibbonSpec spec;
    spec.seed = j.at("seed").get<std::uint64_t>();
    spec.size = j.at("size").get<std::size_t>();
    spec.components = j.at("components").get<std::size_t>();
    spec.holes = j.at("holes").get<std::size_t>();
    spec.thickness = j.at("thickness").get<std::size_t>();
    spec.break_count = j.at("break_count").get<std::size_t>();
    spec.blur_radius = j.at("blur_radius").get<double>();
    return spec;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::MalformedHeader, std::string("bad ribbon spec JSON: ") + e.what());
  }
}

}  // namespace topocp
