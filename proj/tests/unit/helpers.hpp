#pragma once

#include "hrg/geometry.hpp"

#include <cmath>
#include <filesystem>
#include <random>
#include <string>

namespace testutil {

// Points drawn with the standard library engine, so that property tests do
// not share a generator with the code under test.
class PointDrawer {
public:
    PointDrawer(const hrg::ModelParams& params, std::uint64_t seed) : params_(params), engine_(seed) {}

    double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }

    double angle() { return hrg::kTwoPi * uniform(); }

    // Radius from the model law by direct inversion of
    // (cosh(alpha r) - 1) / (cosh(alpha R) - 1).
    double radius() {
        const double a = params_.alpha();
        const double r = std::acosh(1.0 + uniform() * (std::cosh(a * params_.big_r()) - 1.0)) / a;
        return std::min(r, params_.big_r());
    }

    double radius_uniform() { return params_.big_r() * uniform(); }

    hrg::PolarPoint point() { return {radius(), angle()}; }

    std::mt19937_64& engine() { return engine_; }

private:
    hrg::ModelParams params_;
    std::mt19937_64 engine_;
};

inline std::filesystem::path temp_path(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / "hrg_unit_tests";
    std::filesystem::create_directories(dir);
    return dir / name;
}

} // namespace testutil
