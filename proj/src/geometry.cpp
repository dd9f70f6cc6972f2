#include "hrg/geometry.hpp"

#include "hrg/error.hpp"
#include "hrg/rng.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace hrg {

namespace {

// Largest cosh/sinh argument accepted; exp(700) is still finite.
constexpr double kMaxHyperbolicArgument = 700.0;

void check_argument_range(double x, const char* what) {
    if (!(x <= kMaxHyperbolicArgument)) {
        throw RangeError(std::string(what) + ": hyperbolic argument " + std::to_string(x) + " exceeds 700");
    }
}

double sqr(double x) { return x * x; }

} // namespace

ModelParams ModelParams::create(double n_target, double alpha, double nu) {
    if (!(n_target >= 1.0) || !std::isfinite(n_target)) {
        throw InvalidArgument("ModelParams: n_target must be >= 1, got " + std::to_string(n_target));
    }
    if (!(alpha > 0.0) || !std::isfinite(alpha)) {
        throw InvalidArgument("ModelParams: alpha must be > 0, got " + std::to_string(alpha));
    }
    if (!(nu > 0.0) || !std::isfinite(nu)) {
        throw InvalidArgument("ModelParams: nu must be > 0, got " + std::to_string(nu));
    }
    const double big_r = 2.0 * std::log(n_target / nu);
    if (!(big_r > 0.0)) {
        throw InvalidArgument("ModelParams: n_target / nu must exceed 1 so that R > 0");
    }
    check_argument_range(alpha * big_r, "ModelParams");
    check_argument_range(big_r, "ModelParams");
    return ModelParams(n_target, alpha, nu, big_r);
}

ModelParams ModelParams::from_radius(double alpha, double nu, double big_r) {
    if (!(big_r > 0.0) || !std::isfinite(big_r)) {
        throw InvalidArgument("ModelParams: R must be > 0, got " + std::to_string(big_r));
    }
    if (!(alpha > 0.0) || !(nu > 0.0)) {
        throw InvalidArgument("ModelParams: alpha and nu must be > 0");
    }
    check_argument_range(alpha * big_r, "ModelParams");
    check_argument_range(big_r, "ModelParams");
    return ModelParams(nu * std::exp(big_r / 2.0), alpha, nu, big_r);
}

std::optional<double> ModelParams::tau() const {
    if (!ultrasmall_regime()) return std::nullopt;
    return 1.0 / std::log(1.0 / (2.0 * alpha_ - 1.0));
}

std::optional<double> ModelParams::delta() const {
    if (!ultrasmall_regime()) return std::nullopt;
    return 2.0 * (1.0 - alpha_) / (2.0 * alpha_ - 1.0);
}

std::optional<double> ModelParams::lambda_alpha() const {
    if (!(alpha_ > 0.5)) return std::nullopt;
    return alpha_ / (2.0 * alpha_ - 1.0);
}

double ModelParams::disk_area() const { return area_disk(big_r_, alpha_); }

double wrap_angle(double theta) {
    double x = std::fmod(theta, kTwoPi);
    if (x < 0.0) x += kTwoPi;
    if (x >= kTwoPi) x = 0.0;
    return x;
}

double relative_angle(const PolarPoint& u, const PolarPoint& v) {
    const double d = std::fmod(std::fabs(u.theta - v.theta), kTwoPi);
    return std::min(d, kTwoPi - d);
}

double signed_angle(const PolarPoint& u, const PolarPoint& v) {
    const double rel = relative_angle(u, v);
    if (rel >= kPi || wrap_angle(v.theta - u.theta) <= kPi) return rel;
    return -rel;
}

// sinh^2(d/2) = sinh^2((r_u - r_v)/2) + sinh(r_u) sinh(r_v) sin^2(theta/2),
// which is the law of cosines with every term nonnegative.
double hyperbolic_distance(const PolarPoint& u, const PolarPoint& v) {
    const double half_dr = std::sinh(0.5 * std::fabs(u.r - v.r));
    const double half_angle = std::sin(0.5 * relative_angle(u, v));
    const double s = sqr(half_dr) + std::sinh(u.r) * std::sinh(v.r) * sqr(half_angle);
    return 2.0 * std::asinh(std::sqrt(s));
}

bool within_distance(const PolarPoint& u, const PolarPoint& v, double big_r) {
    const double half_dr = std::sinh(0.5 * std::fabs(u.r - v.r));
    const double half_angle = std::sin(0.5 * relative_angle(u, v));
    const double s = sqr(half_dr) + std::sinh(u.r) * std::sinh(v.r) * sqr(half_angle);
    return s <= sqr(std::sinh(0.5 * big_r));
}

double radial_cdf(double r, const ModelParams& params) {
    if (!(r >= 0.0 && r <= params.big_r())) {
        throw InvalidArgument("radial_cdf: r = " + std::to_string(r) + " outside [0, R]");
    }
    const double a = params.alpha();
    // (cosh(ar) - 1) / (cosh(aR) - 1) with both differences as 2 sinh^2(./2)
    return sqr(std::sinh(0.5 * a * r) / std::sinh(0.5 * a * params.big_r()));
}

double radial_quantile(double u, const ModelParams& params) {
    if (!(u >= 0.0 && u <= 1.0)) {
        throw InvalidArgument("radial_quantile: u = " + std::to_string(u) + " outside [0, 1]");
    }
    if (u == 1.0) return params.big_r();
    const double a = params.alpha();
    const double r = 2.0 / a * std::asinh(std::sqrt(u) * std::sinh(0.5 * a * params.big_r()));
    return std::min(r, params.big_r());
}

double area_disk(double radius, double alpha) {
    if (!(radius >= 0.0) || !(alpha > 0.0)) {
        throw InvalidArgument("area_disk: need radius >= 0 and alpha > 0");
    }
    check_argument_range(alpha * radius, "area_disk");
    return 4.0 * kPi / (alpha * alpha) * sqr(std::sinh(0.5 * alpha * radius));
}

double circle_length(double radius, double alpha) {
    if (!(radius >= 0.0) || !(alpha > 0.0)) {
        throw InvalidArgument("circle_length: need radius >= 0 and alpha > 0");
    }
    check_argument_range(alpha * radius, "circle_length");
    return kTwoPi / alpha * std::sinh(alpha * radius);
}

double max_adjacency_angle(double r_u, double r_v, double big_r) {
    if (r_u + r_v <= big_r) return kPi;
    const double num = sqr(std::sinh(0.5 * big_r)) - sqr(std::sinh(0.5 * std::fabs(r_u - r_v)));
    if (num <= 0.0) return 0.0;
    const double ratio = num / (std::sinh(r_u) * std::sinh(r_v));
    if (ratio >= 1.0) return kPi;
    return 2.0 * std::asin(std::sqrt(ratio));
}

void TubeParams::validate() const {
    if (!(eps > 0.0 && eps < 1.0)) {
        throw InvalidArgument("TubeParams: eps must lie in (0, 1), got " + std::to_string(eps));
    }
    if (!(c0 > 0.0)) {
        throw InvalidArgument("TubeParams: c0 must be > 0, got " + std::to_string(c0));
    }
}

const char* to_string(TubeClass c) {
    switch (c) {
    case TubeClass::inner: return "inner";
    case TubeClass::annulus: return "annulus";
    case TubeClass::outside: return "outside";
    case TubeClass::not_applicable: return "not_applicable";
    }
    return "?";
}

double tube_threshold(double t_u, double t_v, const ModelParams& params, double eps, TubeKind kind) {
    const double factor = kind == TubeKind::outer ? 1.0 + eps : 1.0 - eps;
    // (nu / N) e^{(t_u + t_v)/2} == e^{(t_u + t_v - R)/2} because N = nu e^{R/2}
    return std::min(2.0 * factor * std::exp(0.5 * (t_u + t_v - params.big_r())), kPi);
}

TubeClass tube_classify(const PolarPoint& u, const PolarPoint& v, const ModelParams& params, const TubeParams& tube) {
    const double t_u = params.type_of(u);
    const double t_v = params.type_of(v);
    if (t_u + t_v >= params.big_r() - tube.c0) return TubeClass::not_applicable;
    const double angle = relative_angle(u, v);
    if (angle <= tube_threshold(t_u, t_v, params, tube.eps, TubeKind::inner)) return TubeClass::inner;
    if (angle > tube_threshold(t_u, t_v, params, tube.eps, TubeKind::outer)) return TubeClass::outside;
    return TubeClass::annulus;
}

std::uint64_t tube_disagreements(const ModelParams& params, const TubeParams& tube, std::uint64_t pairs,
                                 std::uint64_t seed, std::uint64_t* applicable) {
    const CounterRng rng(seed, streams::kCalibration);
    std::uint64_t bad = 0;
    std::uint64_t used = 0;
    for (std::uint64_t i = 0; i < pairs; ++i) {
        const auto a = rng.uniforms(i, 0);
        const auto b = rng.uniforms(i, 1);
        const PolarPoint u{radial_quantile(a[1], params), kTwoPi * a[0]};
        const PolarPoint v{radial_quantile(b[1], params), kTwoPi * b[0]};
        const TubeClass c = tube_classify(u, v, params, tube);
        if (c == TubeClass::not_applicable) continue;
        ++used;
        const double d = hyperbolic_distance(u, v);
        if ((c == TubeClass::inner && !(d < params.big_r())) || (c == TubeClass::outside && !(d > params.big_r()))) {
            ++bad;
        }
    }
    if (applicable) *applicable = used;
    return bad;
}

TubeCalibration calibrate_tube(const ModelParams& params, TubeParams start, std::uint64_t pairs, std::uint64_t seed,
                               int max_attempts) {
    start.validate();
    TubeCalibration out;
    out.tube = start;
    out.pairs_per_attempt = pairs;
    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        out.attempts = attempt + 1;
        out.disagreements = tube_disagreements(params, out.tube, pairs, seed, &out.applicable_pairs);
        if (out.disagreements == 0) {
            out.converged = true;
            return out;
        }
        out.tube.c0 += 2.0;
    }
    return out;
}

namespace {

constexpr double kAngleTolerance = 1e-12;
constexpr double kSideTolerance = 1e-12;

// Closed segment from the origin along u's ray up to u.
bool on_radial_segment(const PolarPoint& w, const PolarPoint& u) {
    return relative_angle(w, u) <= kAngleTolerance && w.r <= u.r * (1.0 + kSideTolerance) + kSideTolerance;
}

} // namespace

// Points are lifted to the hyperboloid (cosh r, sinh r cos theta, sinh r sin theta);
// the geodesic u1 u2 is the intersection with the plane spanned by the two
// lifts, so "same side as O" is a sign test on a 3x3 determinant.
bool above_edge(const PolarPoint& w, const PolarPoint& u1_in, const PolarPoint& u2_in, double big_r) {
    if (!within_distance(u1_in, u2_in, big_r)) {
        throw InvalidArgument("above_edge: u1 u2 is not an edge (distance > R)");
    }
    if (w.r == 0.0) return true;
    PolarPoint u1 = u1_in;
    PolarPoint u2 = u2_in;
    if (u1.r == 0.0) return on_radial_segment(w, u2);
    if (u2.r == 0.0) return on_radial_segment(w, u1);

    double a2 = signed_angle(u1, u2);
    if (a2 < 0.0) {
        std::swap(u1, u2);
        a2 = -a2;
    }
    if (a2 <= kAngleTolerance) {
        return on_radial_segment(w, u1.r >= u2.r ? u1 : u2);
    }
    if (a2 >= kPi - kAngleTolerance) {
        // geodesic through the origin: the triangle collapses to two radii
        return on_radial_segment(w, u1) || on_radial_segment(w, u2);
    }
    const double aw = signed_angle(u1, w);
    if (aw < -kAngleTolerance || aw > a2 + kAngleTolerance) return false;

    // Side of w against the plane through the lifts of O-side geodesic u1 u2,
    // divided by sinh r1 sinh r2 sinh rw.  With cosh r = sinh r + e^{-r} the
    // leading part is sin x + sin y - sin(x + y) = 4 sin(x/2) sin(y/2) sin((x+y)/2)
    // for x = aw - a2, y = a2, which keeps nearly radial edges exact.
    auto excess = [](double r) { return 2.0 / std::expm1(2.0 * r); }; // e^{-r} / sinh r
    const double t0 = 4.0 * std::sin(0.5 * (aw - a2)) * std::sin(0.5 * a2) * std::sin(0.5 * aw);
    const double t1 = excess(u1.r) * std::sin(aw - a2);
    const double t2 = -excess(u2.r) * std::sin(aw);
    const double t3 = excess(w.r) * std::sin(a2);
    const double side = t0 + t1 + t2 + t3;
    const double scale = std::fabs(t0) + std::fabs(t1) + std::fabs(t2) + std::fabs(t3);
    return side >= -kSideTolerance * scale;
}

} // namespace hrg
