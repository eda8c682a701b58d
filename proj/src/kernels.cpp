#include "topocp/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace topocp {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Lower envelope of parabolas s^2 (q - v)^2 + f(v) over the finite sites of f.
// Writes the result into out[0..n).
void envelope_1d(std::span<const double> f, double step, std::span<double> out,
                 std::vector<std::size_t>& sites, std::vector<double>& bounds) {
  const std::size_t n = f.size();
  const double s2 = step * step;
  sites.clear();
  bounds.clear();
  auto intersect = [&](std::size_t a, std::size_t b) {
    const double qa = static_cast<double>(a);
    const double qb = static_cast<double>(b);
    return ((f[b] + s2 * qb * qb) - (f[a] + s2 * qa * qa)) / (2.0 * s2 * (qb - qa));
  };
  for (std::size_t q = 0; q < n; ++q) {
    if (!std::isfinite(f[q])) continue;
    while (!sites.empty()) {
      const double x = intersect(sites.back(), q);
      if (x <= bounds.back()) {
        sites.pop_back();
        bounds.pop_back();
      } else {
        break;
      }
    }
    bounds.push_back(sites.empty() ? -kInf : intersect(sites.back(), q));
    sites.push_back(q);
  }
  if (sites.empty()) {
    std::fill(out.begin(), out.end(), kInf);
    return;
  }
  std::size_t k = 0;
  for (std::size_t q = 0; q < n; ++q) {
    const double x = static_cast<double>(q);
    while (k + 1 < sites.size() && bounds[k + 1] < x) ++k;
    const double d = step * (x - static_cast<double>(sites[k]));
    out[q] = d * d + f[sites[k]];
  }
}

double clamped(const RealRaster& image, std::ptrdiff_t row, std::ptrdiff_t col) {
  const auto h = static_cast<std::ptrdiff_t>(image.height());
  const auto w = static_cast<std::ptrdiff_t>(image.width());
  return image(static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(row, 0, h - 1)),
               static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(col, 0, w - 1)));
}

}  // namespace

std::vector<double> gaussian_taps(double sigma) {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
    throw Error(ErrorCode::InvalidArgument, "blur sigma must be finite and >= 0");
  }
  if (sigma == 0.0) return {1.0};
  const auto radius = static_cast<std::ptrdiff_t>(std::ceil(3.0 * sigma));
  std::vector<double> taps(static_cast<std::size_t>(2 * radius + 1));
  double total = 0.0;
  for (std::ptrdiff_t k = -radius; k <= radius; ++k) {
    const double x = static_cast<double>(k);
    const double v = std::exp(-0.5 * x * x / (sigma * sigma));
    taps[static_cast<std::size_t>(k + radius)] = v;
    total += v;
  }
  for (double& t : taps) t /= total;
  return taps;
}

std::vector<double> squared_distance_transform(const BinaryMask& seeds, Spacing spacing) {
  const std::size_t h = seeds.height();
  const std::size_t w = seeds.width();
  std::vector<double> columns(h * w);
  std::vector<double> out(h * w);

#pragma omp parallel
  {
    std::vector<double> f(std::max(h, w)), g(std::max(h, w));
    std::vector<std::size_t> sites;
    std::vector<double> bounds;

#pragma omp for schedule(static)
    for (std::ptrdiff_t c = 0; c < static_cast<std::ptrdiff_t>(w); ++c) {
      const auto col = static_cast<std::size_t>(c);
      for (std::size_t r = 0; r < h; ++r) f[r] = seeds(r, col) ? 0.0 : kInf;
      envelope_1d(std::span(f).first(h), spacing.dy, std::span(g).first(h), sites, bounds);
      for (std::size_t r = 0; r < h; ++r) columns[r * w + col] = g[r];
    }

#pragma omp for schedule(static)
    for (std::ptrdiff_t r = 0; r < static_cast<std::ptrdiff_t>(h); ++r) {
      const auto row = static_cast<std::size_t>(r);
      envelope_1d(std::span(columns).subspan(row * w, w), spacing.dx,
                  std::span(out).subspan(row * w, w), sites, bounds);
    }
  }
  return out;
}

RealRaster gaussian_blur(const RealRaster& image, double sigma) {
  const auto taps = gaussian_taps(sigma);
  if (taps.size() == 1) return image;
  const auto radius = static_cast<std::ptrdiff_t>(taps.size() / 2);
  const auto h = static_cast<std::ptrdiff_t>(image.height());
  const auto w = static_cast<std::ptrdiff_t>(image.width());
  std::vector<double> horizontal(image.size());
  std::vector<double> out(image.size());

#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t r = 0; r < h; ++r) {
    for (std::ptrdiff_t c = 0; c < w; ++c) {
      double acc = 0.0;
      for (std::ptrdiff_t k = -radius; k <= radius; ++k) {
        acc += taps[static_cast<std::size_t>(k + radius)] * clamped(image, r, c + k);
      }
      horizontal[static_cast<std::size_t>(r * w + c)] = acc;
    }
  }
  const RealRaster tmp(image.height(), image.width(), std::move(horizontal));

#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t r = 0; r < h; ++r) {
    for (std::ptrdiff_t c = 0; c < w; ++c) {
      double acc = 0.0;
      for (std::ptrdiff_t k = -radius; k <= radius; ++k) {
        acc += taps[static_cast<std::size_t>(k + radius)] * clamped(tmp, r + k, c);
      }
      out[static_cast<std::size_t>(r * w + c)] = acc;
    }
  }
  return RealRaster(image.height(), image.width(), std::move(out));
}

BinaryMask boundary_of(const BinaryMask& mask) {
  const std::size_t h = mask.height();
  const std::size_t w = mask.width();
  std::vector<std::uint8_t> out(mask.size(), 0);
  for (std::size_t r = 0; r < h; ++r) {
    for (std::size_t c = 0; c < w; ++c) {
      if (!mask(r, c)) continue;
      const bool interior = r > 0 && c > 0 && r + 1 < h && c + 1 < w && mask(r - 1, c) &&
                            mask(r + 1, c) && mask(r, c - 1) && mask(r, c + 1);
      out[r * w + c] = interior ? 0 : 1;
    }
  }
  return BinaryMask(h, w, std::move(out));
}

namespace reference {

std::vector<double> squared_distance_transform(const BinaryMask& seeds, Spacing spacing) {
  std::vector<std::size_t> seed_index;
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    if (seeds[i]) seed_index.push_back(i);
  }
  std::vector<double> out(seeds.size(), kInf);
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    const auto p = seeds.coord(i);
    for (std::size_t s : seed_index) {
      const auto q = seeds.coord(s);
      const double dy = spacing.dy * (static_cast<double>(p.row) - static_cast<double>(q.row));
      const double dx = spacing.dx * (static_cast<double>(p.col) - static_cast<double>(q.col));
      out[i] = std::min(out[i], dy * dy + dx * dx);
    }
  }
  return out;
}

RealRaster gaussian_blur(const RealRaster& image, double sigma) {
  const auto taps = gaussian_taps(sigma);
  const auto radius = static_cast<std::ptrdiff_t>(taps.size() / 2);
  const auto h = static_cast<std::ptrdiff_t>(image.height());
  const auto w = static_cast<std::ptrdiff_t>(image.width());
  std::vector<double> out(image.size());
  for (std::ptrdiff_t r = 0; r < h; ++r) {
    for (std::ptrdiff_t c = 0; c < w; ++c) {
      double acc = 0.0;
      for (std::ptrdiff_t i = -radius; i <= radius; ++i) {
        for (std::ptrdiff_t j = -radius; j <= radius; ++j) {
          acc += taps[static_cast<std::size_t>(i + radius)] *
                 taps[static_cast<std::size_t>(j + radius)] * clamped(image, r + i, c + j);
        }
      }
      out[static_cast<std::size_t>(r * w + c)] = acc;
    }
  }
  return RealRaster(image.height(), image.width(), std::move(out));
}

}  // namespace reference
}  // namespace topocp
