#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

#include "topocp/raster.hpp"

namespace topocp {

enum class RasterFormat { PGM8, F32R };

/// Parses a PGM8 ("P5", maxval 255) or F32R byte stream.
///
/// PGM samples map to v/255. F32R samples are taken verbatim; values within
/// 1e-6 outside [0,1] are clamped, anything further out is OutOfRange.
LikelihoodMap read_raster(std::span<const std::byte> bytes, RasterFormat format);

/// F32R narrows each value to float32. PGM8 quantizes with round-half-up of v*255.
std::vector<std::byte> write_raster(const LikelihoodMap& map, RasterFormat format);

/// F32R encoding of an unconstrained raster (gradients). Values are not clamped.
std::vector<std::byte> write_real_f32r(const RealRaster& raster);
/// Reads F32R without the [0,1] check.
RealRaster read_real_f32r(std::span<const std::byte> bytes);

/// Picks the format from the file extension (.pgm / .f32r), falling back to
/// the magic bytes.
RasterFormat detect_format(const std::filesystem::path& path,
                           std::span<const std::byte> bytes);

LikelihoodMap load_raster(const std::filesystem::path& path);
void save_raster(const std::filesystem::path& path, const LikelihoodMap& map,
                 RasterFormat format);

std::vector<std::byte> read_file(const std::filesystem::path& path);
/// Writes via a sibling temporary and rename so readers never see a partial file.
void write_file_atomic(const std::filesystem::path& path,
                       std::span<const std::byte> bytes);

}  // namespace topocp
