#pragma once

// Vertex positions: binomial, Poissonized and region-conditioned samplers,
// plus the sector x type-band regions they are conditioned on.

#include "hrg/geometry.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace hrg {

/// Angular sector [theta_lo, theta_hi) times type band [type_lo, type_hi).
/// A sector with theta_lo > theta_hi wraps through angle 0.  A band whose
/// upper end reaches R includes the origin.
struct SectorBand {
    double theta_lo = 0.0;
    double theta_hi = kTwoPi;
    double type_lo = 0.0;
    double type_hi = 0.0;
};

/// Union of at most kMaxRectangles sector x band rectangles, with its area
/// on the curvature -alpha^2 plane computed once at construction.
class Region {
public:
    static constexpr std::size_t kMaxRectangles = 64;

    /// A region with no rectangles (measure 0).
    explicit Region(const ModelParams& params);
    Region(const ModelParams& params, std::vector<SectorBand> rectangles);

    static Region sector(const ModelParams& params, double theta_lo, double theta_hi);
    static Region type_band(const ModelParams& params, double type_lo, double type_hi);

    bool contains(const PolarPoint& p) const;
    double measure() const { return measure_; }
    bool empty() const { return measure_ <= 0.0; }
    const std::vector<SectorBand>& rectangles() const { return rects_; }

    /// Area of the intersection with `other` (both built for the same disk).
    double overlap_measure(const Region& other) const;

    /// Pairwise disjoint cells, each a single non-wrapping rectangle, whose
    /// union is this region (or its complement in the disk).
    std::vector<SectorBand> disjoint_cells() const;
    std::vector<SectorBand> complement_cells() const;

private:
    double big_r_;
    double alpha_;
    std::vector<SectorBand> rects_; // normalised: non-wrapping, clamped
    double measure_ = 0.0;
};

/// Area_alpha of one non-wrapping rectangle.
double rectangle_area(const SectorBand& rect, const ModelParams& params);

enum class Provenance : std::uint64_t { binomial = 0, poisson = 1, conditional = 2 };

const char* to_string(Provenance p);

struct SeedRecord {
    std::uint64_t seed = 0;
    std::uint64_t stream = 0; ///< provenance tag, see Provenance

    friend bool operator==(const SeedRecord&, const SeedRecord&) = default;
};

/// Immutable point set sorted by angle.  `sample_index(i)` maps the sorted
/// position i back to the order in which the point was drawn.
class PointSet {
public:
    /// Takes points in draw order and sorts them by (theta, r, draw index).
    /// Throws InvalidArgument if a point leaves the disk.
    PointSet(const ModelParams& params, std::vector<PolarPoint> points, Provenance provenance, SeedRecord seed,
             std::vector<std::size_t> fixed_draw_indices = {});

    const ModelParams& params() const { return params_; }
    std::size_t size() const { return points_.size(); }
    bool empty() const { return points_.empty(); }
    const PolarPoint& operator[](std::size_t i) const { return points_[i]; }
    std::span<const PolarPoint> points() const { return points_; }
    double type(std::size_t i) const { return params_.type_of(points_[i]); }

    std::size_t sample_index(std::size_t sorted) const { return draw_index_[sorted]; }
    std::vector<PolarPoint> in_draw_order() const;

    /// Sorted positions of the fixed points of a conditional sample.
    const std::vector<std::size_t>& fixed_positions() const { return fixed_positions_; }

    Provenance provenance() const { return provenance_; }
    const SeedRecord& seed() const { return seed_; }

private:
    ModelParams params_;
    std::vector<PolarPoint> points_;
    std::vector<std::size_t> draw_index_;
    std::vector<std::size_t> fixed_positions_;
    Provenance provenance_;
    SeedRecord seed_;
};

/// `count` i.i.d. points of the model law.
PointSet sample_binomial(const ModelParams& params, std::size_t count, std::uint64_t seed);

/// Poisson(n_target) points of the model law.
PointSet sample_poisson(const ModelParams& params, std::uint64_t seed);

/// Poisson(mean) points of the model law; `mean` may be 0.
PointSet sample_poisson(const ModelParams& params, double mean, std::uint64_t seed);

/// `fixed` verbatim plus a Poisson process of mean n_target - |fixed| on the
/// disk minus `excluded`.
PointSet sample_conditional(const ModelParams& params, std::span<const PolarPoint> fixed, const Region& excluded,
                            std::uint64_t seed);

/// (n_target - fixed_count) Area(region) / (Area(D) - Area(excluded)).
double expected_count_in_region(const Region& region, const ModelParams& params, const Region& excluded,
                                std::size_t fixed_count);

/// True if some point has type >= R / (2 alpha) + omega.
bool exceeds_max_type(const PointSet& points, double omega);

// Point files: little-endian header {"HRGP", u32 version, u64 count,
// f64 alpha, f64 nu, f64 R, u64 seed, u64 provenance} then count records
// {f64 r, f64 theta} in angular order.
inline constexpr std::uint32_t kPointFileVersion = 1;

void write_points_binary(const PointSet& points, const std::filesystem::path& path);
PointSet read_points_binary(const std::filesystem::path& path);

/// CSV with header r,theta,type and 17 significant digits.
void write_points_csv(const PointSet& points, const std::filesystem::path& path);

} // namespace hrg
