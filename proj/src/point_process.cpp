#include "hrg/point_process.hpp"

#include "binary_io.hpp"
#include "hrg/error.hpp"
#include "hrg/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>

namespace hrg {

namespace {

double sqr(double x) { return x * x; }

// Area between radii a <= b over an angular width.
double band_area(double r_lo, double r_hi, double width, double alpha) {
    return (area_disk(r_hi, alpha) - area_disk(r_lo, alpha)) * width / kTwoPi;
}

bool rect_contains(const SectorBand& rect, double theta, double type, double big_r) {
    if (theta < rect.theta_lo || theta >= rect.theta_hi) return false;
    if (type < rect.type_lo) return false;
    return type < rect.type_hi || (rect.type_hi >= big_r && type <= big_r);
}

bool rect_covers(const SectorBand& rect, const SectorBand& cell) {
    return rect.theta_lo <= cell.theta_lo && cell.theta_hi <= rect.theta_hi && rect.type_lo <= cell.type_lo &&
           cell.type_hi <= rect.type_hi;
}

std::vector<SectorBand> normalise(std::vector<SectorBand> in, double big_r) {
    if (in.size() > Region::kMaxRectangles) {
        throw InvalidArgument("Region: at most 64 rectangles are supported, got " + std::to_string(in.size()));
    }
    std::vector<SectorBand> out;
    for (SectorBand r : in) {
        if (!std::isfinite(r.theta_lo) || !std::isfinite(r.theta_hi) || !std::isfinite(r.type_lo) ||
            !std::isfinite(r.type_hi)) {
            throw InvalidArgument("Region: non-finite rectangle bounds");
        }
        r.type_lo = std::clamp(r.type_lo, 0.0, big_r);
        r.type_hi = std::clamp(r.type_hi, 0.0, big_r);
        if (r.type_hi <= r.type_lo) continue;
        if (r.theta_hi - r.theta_lo >= kTwoPi) {
            out.push_back({0.0, kTwoPi, r.type_lo, r.type_hi});
            continue;
        }
        const double lo = wrap_angle(r.theta_lo);
        const double hi = r.theta_hi == kTwoPi ? kTwoPi : wrap_angle(r.theta_hi);
        if (lo < hi) {
            out.push_back({lo, hi, r.type_lo, r.type_hi});
        } else if (lo > hi) {
            out.push_back({lo, kTwoPi, r.type_lo, r.type_hi});
            if (hi > 0.0) out.push_back({0.0, hi, r.type_lo, r.type_hi});
        }
    }
    return out;
}

struct Grid {
    std::vector<double> thetas;
    std::vector<double> types;
};

Grid grid_for(const std::vector<SectorBand>& a, const std::vector<SectorBand>& b, double big_r) {
    Grid g;
    g.thetas = {0.0, kTwoPi};
    g.types = {0.0, big_r};
    for (const auto* set : {&a, &b}) {
        for (const SectorBand& r : *set) {
            g.thetas.push_back(r.theta_lo);
            g.thetas.push_back(r.theta_hi);
            g.types.push_back(r.type_lo);
            g.types.push_back(r.type_hi);
        }
    }
    for (auto* v : {&g.thetas, &g.types}) {
        std::sort(v->begin(), v->end());
        v->erase(std::unique(v->begin(), v->end()), v->end());
    }
    return g;
}

template <typename Fn>
void for_each_cell(const Grid& g, Fn&& fn) {
    for (std::size_t i = 0; i + 1 < g.thetas.size(); ++i) {
        for (std::size_t j = 0; j + 1 < g.types.size(); ++j) {
            fn(SectorBand{g.thetas[i], g.thetas[i + 1], g.types[j], g.types[j + 1]});
        }
    }
}

bool any_covers(const std::vector<SectorBand>& rects, const SectorBand& cell) {
    return std::any_of(rects.begin(), rects.end(), [&](const SectorBand& r) { return rect_covers(r, cell); });
}

} // namespace

double rectangle_area(const SectorBand& rect, const ModelParams& params) {
    const double r_lo = params.big_r() - rect.type_hi;
    const double r_hi = params.big_r() - rect.type_lo;
    return band_area(std::max(0.0, r_lo), r_hi, rect.theta_hi - rect.theta_lo, params.alpha());
}

Region::Region(const ModelParams& params) : big_r_(params.big_r()), alpha_(params.alpha()) {}

Region::Region(const ModelParams& params, std::vector<SectorBand> rectangles)
    : big_r_(params.big_r()), alpha_(params.alpha()), rects_(normalise(std::move(rectangles), params.big_r())) {
    for (const SectorBand& cell : disjoint_cells()) {
        measure_ += band_area(big_r_ - cell.type_hi, big_r_ - cell.type_lo, cell.theta_hi - cell.theta_lo, alpha_);
    }
}

Region Region::sector(const ModelParams& params, double theta_lo, double theta_hi) {
    return Region(params, {{theta_lo, theta_hi, 0.0, params.big_r()}});
}

Region Region::type_band(const ModelParams& params, double type_lo, double type_hi) {
    return Region(params, {{0.0, kTwoPi, type_lo, type_hi}});
}

bool Region::contains(const PolarPoint& p) const {
    const double type = big_r_ - p.r;
    return std::any_of(rects_.begin(), rects_.end(),
                       [&](const SectorBand& r) { return rect_contains(r, p.theta, type, big_r_); });
}

std::vector<SectorBand> Region::disjoint_cells() const {
    std::vector<SectorBand> cells;
    if (rects_.empty()) return cells;
    for_each_cell(grid_for(rects_, {}, big_r_), [&](const SectorBand& cell) {
        if (any_covers(rects_, cell)) cells.push_back(cell);
    });
    return cells;
}

std::vector<SectorBand> Region::complement_cells() const {
    std::vector<SectorBand> cells;
    for_each_cell(grid_for(rects_, {}, big_r_), [&](const SectorBand& cell) {
        if (!any_covers(rects_, cell)) cells.push_back(cell);
    });
    return cells;
}

double Region::overlap_measure(const Region& other) const {
    if (rects_.empty() || other.rects_.empty()) return 0.0;
    double total = 0.0;
    for_each_cell(grid_for(rects_, other.rects_, big_r_), [&](const SectorBand& cell) {
        if (any_covers(rects_, cell) && any_covers(other.rects_, cell)) {
            total += band_area(big_r_ - cell.type_hi, big_r_ - cell.type_lo, cell.theta_hi - cell.theta_lo, alpha_);
        }
    });
    return total;
}

const char* to_string(Provenance p) {
    switch (p) {
    case Provenance::binomial: return "binomial";
    case Provenance::poisson: return "poisson";
    case Provenance::conditional: return "conditional";
    }
    return "?";
}

PointSet::PointSet(const ModelParams& params, std::vector<PolarPoint> points, Provenance provenance, SeedRecord seed,
                   std::vector<std::size_t> fixed_draw_indices)
    : params_(params), provenance_(provenance), seed_(seed) {
    for (const PolarPoint& p : points) {
        if (!(p.r >= 0.0 && p.r <= params.big_r()) || !(p.theta >= 0.0 && p.theta < kTwoPi)) {
            throw InvalidArgument("PointSet: point (r=" + std::to_string(p.r) + ", theta=" + std::to_string(p.theta) +
                                  ") is outside the disk");
        }
    }
    draw_index_.resize(points.size());
    std::iota(draw_index_.begin(), draw_index_.end(), std::size_t{0});
    std::sort(draw_index_.begin(), draw_index_.end(), [&](std::size_t a, std::size_t b) {
        if (points[a].theta != points[b].theta) return points[a].theta < points[b].theta;
        if (points[a].r != points[b].r) return points[a].r < points[b].r;
        return a < b;
    });
    points_.reserve(points.size());
    for (std::size_t i : draw_index_) points_.push_back(points[i]);

    if (!fixed_draw_indices.empty()) {
        std::vector<std::size_t> sorted_of(points.size());
        for (std::size_t i = 0; i < draw_index_.size(); ++i) sorted_of[draw_index_[i]] = i;
        for (std::size_t d : fixed_draw_indices) {
            if (d >= points.size()) throw InvalidArgument("PointSet: fixed index out of range");
            fixed_positions_.push_back(sorted_of[d]);
        }
        std::sort(fixed_positions_.begin(), fixed_positions_.end());
    }
}

std::vector<PolarPoint> PointSet::in_draw_order() const {
    std::vector<PolarPoint> out(points_.size());
    for (std::size_t i = 0; i < points_.size(); ++i) out[draw_index_[i]] = points_[i];
    return out;
}

namespace {

PolarPoint draw_model_point(const CounterRng& rng, std::uint64_t index, const ModelParams& params) {
    const auto u = rng.uniforms(index);
    return {radial_quantile(u[1], params), kTwoPi * u[0]};
}

std::uint64_t draw_poisson_count(double mean, std::uint64_t seed, std::uint64_t stream) {
    if (!(mean >= 0.0) || !std::isfinite(mean)) {
        throw InvalidArgument("Poisson mean must be finite and >= 0, got " + std::to_string(mean));
    }
    if (mean == 0.0) return 0;
    PhiloxEngine engine(seed, stream);
    std::poisson_distribution<std::uint64_t> count(mean);
    return count(engine);
}

} // namespace

PointSet sample_binomial(const ModelParams& params, std::size_t count, std::uint64_t seed) {
    const CounterRng rng(seed, streams::kPositions);
    std::vector<PolarPoint> points(count);
    for (std::size_t i = 0; i < count; ++i) points[i] = draw_model_point(rng, i, params);
    return PointSet(params, std::move(points), Provenance::binomial,
                    {seed, static_cast<std::uint64_t>(Provenance::binomial)});
}

PointSet sample_poisson(const ModelParams& params, std::uint64_t seed) {
    return sample_poisson(params, params.n_target(), seed);
}

PointSet sample_poisson(const ModelParams& params, double mean, std::uint64_t seed) {
    const std::uint64_t count = draw_poisson_count(mean, seed, streams::kPoissonCount);
    const CounterRng rng(seed, streams::kPositions);
    std::vector<PolarPoint> points(count);
    for (std::uint64_t i = 0; i < count; ++i) points[i] = draw_model_point(rng, i, params);
    return PointSet(params, std::move(points), Provenance::poisson,
                    {seed, static_cast<std::uint64_t>(Provenance::poisson)});
}

PointSet sample_conditional(const ModelParams& params, std::span<const PolarPoint> fixed, const Region& excluded,
                            std::uint64_t seed) {
    const double disk = params.disk_area();
    if (excluded.measure() >= disk * (1.0 - 1e-12)) {
        throw InvalidArgument("sample_conditional: excluded region covers the disk");
    }
    for (const PolarPoint& p : fixed) {
        if (excluded.contains(p)) {
            throw InvalidArgument("sample_conditional: fixed point (r=" + std::to_string(p.r) +
                                  ", theta=" + std::to_string(p.theta) + ") lies in the excluded region");
        }
    }
    const double mean_rest = std::max(0.0, params.n_target() - static_cast<double>(fixed.size()));
    std::vector<PolarPoint> points(fixed.begin(), fixed.end());
    std::vector<std::size_t> fixed_idx(fixed.size());
    std::iota(fixed_idx.begin(), fixed_idx.end(), std::size_t{0});
    const CounterRng rng(seed, streams::kConditional);

    if (excluded.measure() < 0.1 * disk) {
        // thinning a denser process on the whole disk is exact
        const double inflated = mean_rest * disk / (disk - excluded.measure());
        const std::uint64_t count = draw_poisson_count(inflated, seed, streams::kPoissonCount);
        for (std::uint64_t i = 0; i < count; ++i) {
            const PolarPoint p = draw_model_point(rng, i, params);
            if (!excluded.contains(p)) points.push_back(p);
        }
    } else {
        const std::vector<SectorBand> cells = excluded.complement_cells();
        std::vector<double> cumulative;
        cumulative.reserve(cells.size());
        double acc = 0.0;
        for (const SectorBand& c : cells) {
            acc += rectangle_area(c, params);
            cumulative.push_back(acc);
        }
        const std::uint64_t count = draw_poisson_count(mean_rest, seed, streams::kPoissonCount);
        const double a = params.alpha();
        for (std::uint64_t i = 0; i < count; ++i) {
            const auto pick = rng.uniforms(i, 0);
            const auto pos = rng.uniforms(i, 1);
            const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), pick[0] * acc);
            const SectorBand& c = cells[std::min<std::size_t>(it - cumulative.begin(), cells.size() - 1)];
            const double r_lo = std::max(0.0, params.big_r() - c.type_hi);
            const double r_hi = params.big_r() - c.type_lo;
            // inverse CDF restricted to [r_lo, r_hi]: linear in sinh^2(a r / 2)
            const double s_lo = sqr(std::sinh(0.5 * a * r_lo));
            const double s_hi = sqr(std::sinh(0.5 * a * r_hi));
            double r = 2.0 / a * std::asinh(std::sqrt(s_lo + pos[1] * (s_hi - s_lo)));
            r = std::clamp(r, r_lo, r_hi);
            double theta = c.theta_lo + pos[0] * (c.theta_hi - c.theta_lo);
            if (theta >= kTwoPi) theta = 0.0;
            points.push_back({r, theta});
        }
    }
    return PointSet(params, std::move(points), Provenance::conditional,
                    {seed, static_cast<std::uint64_t>(Provenance::conditional)}, std::move(fixed_idx));
}

double expected_count_in_region(const Region& region, const ModelParams& params, const Region& excluded,
                                std::size_t fixed_count) {
    const double overlap = region.overlap_measure(excluded);
    if (overlap > 1e-12 * params.disk_area()) {
        throw InvalidArgument("expected_count_in_region: region overlaps the excluded region");
    }
    const double rest = params.n_target() - static_cast<double>(fixed_count);
    return rest * region.measure() / (params.disk_area() - excluded.measure());
}

bool exceeds_max_type(const PointSet& points, double omega) {
    const double bound = points.params().big_r() / (2.0 * points.params().alpha()) + omega;
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (points.type(i) >= bound) return true;
    }
    return false;
}

namespace {
constexpr char kPointMagic[4] = {'H', 'R', 'G', 'P'};
} // namespace

void write_points_binary(const PointSet& points, const std::filesystem::path& path) {
    auto out = detail::open_for_write(path, true);
    out.write(kPointMagic, 4);
    detail::put_le<std::uint32_t>(out, kPointFileVersion);
    detail::put_le<std::uint64_t>(out, points.size());
    detail::put_le<double>(out, points.params().alpha());
    detail::put_le<double>(out, points.params().nu());
    detail::put_le<double>(out, points.params().big_r());
    detail::put_le<std::uint64_t>(out, points.seed().seed);
    detail::put_le<std::uint64_t>(out, points.seed().stream);
    for (const PolarPoint& p : points.points()) {
        detail::put_le<double>(out, p.r);
        detail::put_le<double>(out, p.theta);
    }
    detail::finish_write(out, path);
}

PointSet read_points_binary(const std::filesystem::path& path) {
    auto in = detail::open_for_read(path);
    char magic[4] = {};
    if (!in.read(magic, 4) || !std::equal(magic, magic + 4, kPointMagic)) {
        throw FormatError(path.string() + ": not a point file (magic \"" + detail::printable_magic(magic) +
                          "\", expected \"HRGP\")");
    }
    const auto version = detail::get_le<std::uint32_t>(in, path);
    if (version != kPointFileVersion) {
        throw FormatError(path.string() + ": point file version " + std::to_string(version) + ", expected " +
                          std::to_string(kPointFileVersion));
    }
    const auto count = detail::get_le<std::uint64_t>(in, path);
    const double alpha = detail::get_le<double>(in, path);
    const double nu = detail::get_le<double>(in, path);
    const double big_r = detail::get_le<double>(in, path);
    SeedRecord seed;
    seed.seed = detail::get_le<std::uint64_t>(in, path);
    seed.stream = detail::get_le<std::uint64_t>(in, path);
    if (seed.stream > static_cast<std::uint64_t>(Provenance::conditional)) {
        throw FormatError(path.string() + ": unknown provenance tag " + std::to_string(seed.stream));
    }
    ModelParams params = [&] {
        try {
            return ModelParams::from_radius(alpha, nu, big_r);
        } catch (const Error& e) {
            throw FormatError(path.string() + ": bad header parameters: " + e.what());
        }
    }();
    std::vector<PolarPoint> points;
    points.reserve(static_cast<std::size_t>(std::min<std::uint64_t>(count, 1u << 26)));
    for (std::uint64_t i = 0; i < count; ++i) {
        const double r = detail::get_le<double>(in, path);
        const double theta = detail::get_le<double>(in, path);
        points.push_back({r, theta});
    }
    if (in.peek() != std::char_traits<char>::eof()) {
        throw FormatError(path.string() + ": trailing bytes after " + std::to_string(count) + " records");
    }
    try {
        return PointSet(params, std::move(points), static_cast<Provenance>(seed.stream), seed);
    } catch (const InvalidArgument& e) {
        throw FormatError(path.string() + ": " + e.what());
    }
}

void write_points_csv(const PointSet& points, const std::filesystem::path& path) {
    auto out = detail::open_for_write(path, false);
    out << "r,theta,type\n";
    char line[96];
    for (std::size_t i = 0; i < points.size(); ++i) {
        std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g\n", points[i].r, points[i].theta, points.type(i));
        out << line;
    }
    detail::finish_write(out, path);
}

} // namespace hrg
