#include "doctest.h"
#include "helpers.hpp"

#include "hrg/error.hpp"
#include "hrg/geometry.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cmath>
#include <iomanip>

using namespace hrg;
using doctest::Approx;
using Big = boost::multiprecision::cpp_bin_float_50;

namespace {

Big big_distance(const PolarPoint& u, const PolarPoint& v) {
    const Big ru(u.r), rv(v.r), dt(u.theta - v.theta);
    const Big c = cosh(ru) * cosh(rv) - sinh(ru) * sinh(rv) * cos(dt);
    return c <= 1 ? Big(0) : acosh(c);
}

// Triangle membership in the Beltrami-Klein model, where geodesics are
// straight chords; evaluated in 50-digit arithmetic.  Returns +1 inside,
// -1 outside and 0 when too close to a side to call.
int klein_inside(const PolarPoint& w, const PolarPoint& a, const PolarPoint& b) {
    auto lift = [](const PolarPoint& p) {
        const Big k = tanh(Big(p.r));
        return std::pair<Big, Big>{k * cos(Big(p.theta)), k * sin(Big(p.theta))};
    };
    const auto [ax, ay] = lift(a);
    const auto [bx, by] = lift(b);
    const auto [wx, wy] = lift(w);
    auto cross = [](const Big& x1, const Big& y1, const Big& x2, const Big& y2) { return x1 * y2 - y1 * x2; };
    Big s1 = cross(ax, ay, wx, wy);
    Big s2 = cross(wx, wy, bx, by);
    Big s3 = cross(bx - ax, by - ay, wx - ax, wy - ay);
    if (cross(ax, ay, bx, by) < 0) {
        s1 = -s1;
        s2 = -s2;
        s3 = -s3;
    }
    const Big tol("1e-30");
    if (abs(s1) < tol || abs(s2) < tol || abs(s3) < tol) return 0;
    return (s1 > 0 && s2 > 0 && s3 > 0) ? 1 : -1;
}

} // namespace

TEST_CASE("model parameters and derived constants") {
    const auto p = ModelParams::create(1e5, 0.75, 1.0);
    CHECK(p.big_r() == Approx(2.0 * std::log(1e5)).epsilon(1e-15));
    CHECK(p.nu() * std::exp(p.big_r() / 2.0) == Approx(1e5).epsilon(1e-12));
    REQUIRE(p.tau());
    REQUIRE(p.delta());
    CHECK(*p.tau() == Approx(1.0 / std::log(2.0)).epsilon(1e-14));
    CHECK(*p.delta() == Approx(1.0).epsilon(1e-14));
    CHECK(*p.lambda_alpha() == Approx(1.5).epsilon(1e-14));
    for (double a : {0.55, 0.6, 0.75, 0.9, 0.99}) {
        const auto q = ModelParams::create(1e4, a, 0.7);
        CHECK(std::abs((1.0 + *q.delta()) - 1.0 / (2.0 * a - 1.0)) < 1e-12 / (2.0 * a - 1.0));
        CHECK(std::abs((a - 0.5) * (1.0 + *q.delta()) - 0.5) < 1e-14);
    }
    const auto big = ModelParams::create(1e4, 1.5, 1.0);
    CHECK_FALSE(big.tau());
    CHECK_FALSE(big.delta());
    CHECK(*big.lambda_alpha() == Approx(0.75));
    CHECK_FALSE(ModelParams::create(1e4, 0.4, 1.0).lambda_alpha());
    CHECK_THROWS_AS(ModelParams::create(0.0, 0.75, 1.0), InvalidArgument);
    CHECK_THROWS_AS(ModelParams::create(1e4, -1.0, 1.0), InvalidArgument);
    CHECK_THROWS_AS(ModelParams::create(1e4, 0.75, 0.0), InvalidArgument);
    CHECK_THROWS_AS(ModelParams::create(1e300, 10.0, 1.0), RangeError);
    const auto back = ModelParams::from_radius(p.alpha(), p.nu(), p.big_r());
    CHECK(back.n_target() == Approx(1e5).epsilon(1e-12));
}

TEST_CASE("hyperbolic distance examples") {
    CHECK(hyperbolic_distance({0.0, 0.0}, {5.0, 1.2}) == Approx(5.0).epsilon(1e-14));
    CHECK(hyperbolic_distance({7.0, 0.3}, {7.0, 0.3}) == 0.0);
    CHECK(hyperbolic_distance({10.0, 0.0}, {10.0, kPi}) == Approx(20.0).epsilon(1e-14));

    const PolarPoint u{12.0, 0.0}, v{12.0, 0.001};
    const double oracle = static_cast<double>(big_distance(u, v));
    CHECK(hyperbolic_distance(u, v) == Approx(oracle).epsilon(1e-12));
}

TEST_CASE("hyperbolic distance against 50-digit law of cosines") {
    const auto p = ModelParams::create(1e6, 0.75, 1.0);
    testutil::PointDrawer draw(p, 11);
    for (int i = 0; i < 2000; ++i) {
        const PolarPoint u{draw.radius_uniform(), draw.angle()};
        PolarPoint v{draw.radius_uniform(), draw.angle()};
        if (i % 2 == 0) v.theta = wrap_angle(u.theta + 1e-6 * draw.uniform());
        const double oracle = static_cast<double>(big_distance(u, v));
        CHECK(std::abs(hyperbolic_distance(u, v) - oracle) <= 1e-10 * std::max(1.0, oracle));
        const bool adjacent_oracle = big_distance(u, v) <= Big(p.big_r());
        if (std::abs(oracle - p.big_r()) > 1e-9) CHECK(within_distance(u, v, p.big_r()) == adjacent_oracle);
    }
}

TEST_CASE("metric axioms on random triples") {
    const auto p = ModelParams::create(1e5, 0.75, 1.0);
    testutil::PointDrawer draw(p, 12);
    int violations = 0;
    for (int i = 0; i < 100000; ++i) {
        const PolarPoint u = draw.point(), v = draw.point(), w = draw.point();
        if (hyperbolic_distance(u, v) != hyperbolic_distance(v, u)) ++violations;
        if (hyperbolic_distance(u, w) > hyperbolic_distance(u, v) + hyperbolic_distance(v, w) + 1e-9) ++violations;
    }
    CHECK(violations == 0);
}

TEST_CASE("relative and signed angles") {
    CHECK(relative_angle({1.0, 0.1}, {1.0, 0.1}) == 0.0);
    CHECK(relative_angle({1.0, 0.0}, {1.0, 1.5 * kPi}) == Approx(kPi / 2.0));
    CHECK(relative_angle({1.0, 0.2}, {1.0, 0.2 + kPi}) == Approx(kPi));
    CHECK(signed_angle({1.0, 0.0}, {1.0, 0.3}) == Approx(0.3));
    CHECK(signed_angle({1.0, 0.3}, {1.0, 0.0}) == Approx(-0.3));
    CHECK(signed_angle({1.0, 0.0}, {1.0, kPi}) == Approx(kPi));
    CHECK(signed_angle({1.0, kPi}, {1.0, 0.0}) == Approx(kPi));
    CHECK(signed_angle({1.0, 6.2}, {1.0, 0.1}) == Approx(0.1 + kTwoPi - 6.2));
    CHECK(wrap_angle(-0.5) == Approx(kTwoPi - 0.5));
    CHECK(wrap_angle(kTwoPi) == 0.0);
    testutil::PointDrawer draw(ModelParams::create(100, 1.0, 1.0), 3);
    for (int i = 0; i < 10000; ++i) {
        const PolarPoint u{1.0, draw.angle()}, v{1.0, draw.angle()};
        const double rel = relative_angle(u, v);
        CHECK(rel >= 0.0);
        CHECK(rel <= kPi);
        CHECK(std::abs(signed_angle(u, v)) == rel);
    }
}

TEST_CASE("radial CDF and quantile") {
    const auto p10 = ModelParams::from_radius(1.0, 1.0, 10.0);
    CHECK(radial_cdf(0.0, p10) == 0.0);
    CHECK(radial_cdf(10.0, p10) == Approx(1.0).epsilon(1e-15));
    const double quad = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        [](double r) { return std::sinh(r) / (std::cosh(10.0) - 1.0); }, 0.0, 5.0, 15, 1e-14);
    CHECK(radial_cdf(5.0, p10) == Approx(quad).epsilon(1e-12));
    CHECK(radial_cdf(5.0, p10) == Approx((std::cosh(5.0) - 1.0) / (std::cosh(10.0) - 1.0)).epsilon(1e-13));
    CHECK_THROWS_AS(radial_cdf(-0.1, p10), InvalidArgument);
    CHECK_THROWS_AS(radial_cdf(10.5, p10), InvalidArgument);

    const auto p20 = ModelParams::from_radius(0.75, 1.0, 20.0);
    CHECK(radial_quantile(0.0, p20) == 0.0);
    CHECK(radial_quantile(1.0, p20) == 20.0);
    boost::math::tools::eps_tolerance<double> tol(50);
    const auto root = boost::math::tools::bisect([&](double r) { return radial_cdf(r, p20) - 0.5; }, 0.0, 20.0, tol);
    CHECK(radial_quantile(0.5, p20) == Approx(0.5 * (root.first + root.second)).epsilon(1e-12));
    CHECK_THROWS_AS(radial_quantile(-0.01, p20), InvalidArgument);
    CHECK_THROWS_AS(radial_quantile(1.01, p20), InvalidArgument);

    for (double u : {1e-12, 1e-6, 0.01, 0.3, 0.7, 0.99, 1.0 - 1e-12})
        CHECK(std::abs(radial_cdf(radial_quantile(u, p20), p20) - u) <= 1e-12);

    for (const auto& p : {p20, ModelParams::create(1e6, 0.6, 1.0), ModelParams::create(1e6, 1.5, 2.0)}) {
        for (int i = 0; i <= 1000; ++i) {
            const double r = p.big_r() * i / 1000.0;
            CHECK(std::abs(radial_quantile(radial_cdf(r, p), p) - r) <= 1e-9);
        }
    }
}

TEST_CASE("areas and circumferences") {
    CHECK(area_disk(0.0, 1.0) == 0.0);
    CHECK(area_disk(2.0, 1.0) == Approx(kTwoPi * (std::cosh(2.0) - 1.0)).epsilon(1e-14));
    CHECK(area_disk(1.0, 2.0) == Approx(kPi / 2.0 * (std::cosh(2.0) - 1.0)).epsilon(1e-14));
    CHECK(circle_length(0.0, 1.0) == 0.0);
    CHECK(circle_length(1.0, 1.0) == Approx(kTwoPi * std::sinh(1.0)).epsilon(1e-14));
    for (double a : {0.6, 1.0, 2.0}) {
        const double h = 1e-5;
        const double fd = (area_disk(3.0 + h, a) - area_disk(3.0 - h, a)) / (2.0 * h);
        CHECK(std::abs(fd / circle_length(3.0, a) - 1.0) < 1e-6);
    }
    const auto p = ModelParams::create(1e5, 0.75, 1.0);
    CHECK(p.disk_area() == Approx(area_disk(p.big_r(), 0.75)).epsilon(1e-14));
}

TEST_CASE("tube thresholds") {
    const auto p = ModelParams::create(1e5, 0.75, 1.0);
    const double ratio = p.nu() / p.n_target();
    CHECK(tube_threshold(0.0, 0.0, p, 0.2, TubeKind::outer) == Approx(std::min(2.4 * ratio, kPi)).epsilon(1e-13));
    CHECK(tube_threshold(0.0, 0.0, p, 0.2, TubeKind::inner) == Approx(std::min(1.6 * ratio, kPi)).epsilon(1e-13));
    CHECK(tube_threshold(p.big_r() / 2, p.big_r() / 2, p, 1e-300, TubeKind::outer) == Approx(2.0).epsilon(1e-13));
    CHECK(tube_threshold(p.big_r(), p.big_r(), p, 0.2, TubeKind::outer) == Approx(kPi));
    testutil::PointDrawer draw(p, 5);
    for (int i = 0; i < 10000; ++i) {
        const double tu = p.big_r() * draw.uniform(), tv = p.big_r() * draw.uniform();
        const double eps = 0.01 + 0.98 * draw.uniform();
        CHECK(tube_threshold(tu, tv, p, eps, TubeKind::inner) <= tube_threshold(tu, tv, p, eps, TubeKind::outer));
    }
    CHECK_THROWS_AS((TubeParams{0.0, 10.0}.validate()), InvalidArgument);
    CHECK_THROWS_AS((TubeParams{1.0, 10.0}.validate()), InvalidArgument);
    CHECK_THROWS_AS((TubeParams{0.2, 0.0}.validate()), InvalidArgument);
}

TEST_CASE("tube classification") {
    const auto p = ModelParams::create(1e5, 0.75, 1.0);
    const TubeParams tube{0.2, 10.0};
    const double big_r = p.big_r();
    // type sum exactly R
    CHECK(tube_classify({big_r / 2, 0.0}, {big_r / 2, 1.0}, p, tube) == TubeClass::not_applicable);
    // zero angle, small types
    CHECK(tube_classify({big_r - 1.0, 0.4}, {big_r - 2.0, 0.4}, p, tube) == TubeClass::inner);

    const auto cal = calibrate_tube(p, tube, 1000000, 99);
    REQUIRE(cal.converged);
    testutil::PointDrawer draw(p, 77);
    int checked_outside = 0, checked_inner = 0, violations = 0;
    for (int i = 0; i < 100000; ++i) {
        const PolarPoint u = draw.point();
        PolarPoint v = draw.point();
        // half the pairs placed near the outer threshold so that every class occurs
        if (i % 2 == 0) {
            const double th = tube_threshold(p.type_of(u), p.type_of(v), p, cal.tube.eps, TubeKind::outer);
            v.theta = wrap_angle(u.theta + th * (0.5 + draw.uniform()));
        }
        const TubeClass c = tube_classify(u, v, p, cal.tube);
        const double d = hyperbolic_distance(u, v);
        if (c == TubeClass::outside) {
            ++checked_outside;
            if (!(d > big_r)) ++violations;
        } else if (c == TubeClass::inner) {
            ++checked_inner;
            if (!(d < big_r)) ++violations;
        }
    }
    CHECK(checked_outside > 1000);
    CHECK(checked_inner > 1000);
    CHECK(violations == 0);
}

TEST_CASE("max adjacency angle is the exact edge boundary") {
    const auto p = ModelParams::create(1e5, 0.75, 1.0);
    testutil::PointDrawer draw(p, 8);
    for (int i = 0; i < 20000; ++i) {
        const double ru = draw.radius(), rv = draw.radius();
        const double w = max_adjacency_angle(ru, rv, p.big_r());
        if (ru + rv <= p.big_r()) {
            CHECK(w == kPi);
            continue;
        }
        if (w <= 1e-12) continue;
        CHECK(hyperbolic_distance({ru, 0.0}, {rv, w * (1.0 - 1e-7)}) <= p.big_r());
        if (w < kPi) CHECK(hyperbolic_distance({ru, 0.0}, {rv, w * (1.0 + 1e-7)}) > p.big_r());
    }
}

TEST_CASE("above_edge examples") {
    const auto p = ModelParams::create(1e4, 0.75, 1.0);
    const double big_r = p.big_r();
    const PolarPoint u1{big_r - 3.0, 0.2}, u2{big_r - 4.0, 0.2 + 2e-3};
    REQUIRE(within_distance(u1, u2, big_r));
    CHECK(above_edge(u1, u1, u2, big_r));
    CHECK(above_edge(u2, u1, u2, big_r));
    CHECK(above_edge({0.0, 0.0}, u1, u2, big_r));
    CHECK(above_edge({1.0, 0.2 + 1e-3}, u1, u2, big_r));
    CHECK_FALSE(above_edge({big_r, 0.2 + 1e-3}, u1, u2, big_r));
    CHECK_FALSE(above_edge({1.0, 1.0}, u1, u2, big_r));
    CHECK_THROWS_AS(above_edge(u1, {big_r, 0.0}, {big_r, 1.0}, big_r), InvalidArgument);
    // collinear with the origin: the triangle degenerates to a radial segment
    const PolarPoint a{5.0, 1.0}, b{9.0, 1.0};
    CHECK(above_edge({7.0, 1.0}, a, b, big_r));
    CHECK(above_edge({2.0, 1.0}, a, b, big_r));
    CHECK_FALSE(above_edge({9.5, 1.0}, a, b, big_r));
    CHECK_FALSE(above_edge({7.0, 1.1}, a, b, big_r));
}

TEST_CASE("above_edge agrees with the Klein model and implies both edges") {
    const auto p = ModelParams::create(1e4, 0.75, 1.0);
    const double big_r = p.big_r();
    testutil::PointDrawer draw(p, 21);
    int above = 0, mismatches = 0, fact_violations = 0;
    for (int i = 0; i < 10000; ++i) {
        const PolarPoint u1 = draw.point();
        PolarPoint u2 = draw.point();
        const double window = max_adjacency_angle(u1.r, u2.r, big_r);
        u2.theta = wrap_angle(u1.theta + (draw.uniform() - 0.5) * 2.0 * std::min(window, kPi) * 0.999);
        if (!within_distance(u1, u2, big_r)) continue;
        const double span = signed_angle(u1, u2);
        const PolarPoint w{draw.radius_uniform(), wrap_angle(u1.theta + span * (1.4 * draw.uniform() - 0.2))};
        const bool got = above_edge(w, u1, u2, big_r);
        const int oracle = klein_inside(w, u1, u2);
        if (oracle != 0 && got != (oracle > 0)) {
            ++mismatches;
            if (mismatches < 6)
                MESSAGE(std::setprecision(17) << "w=(" << w.r << "," << w.theta << ") u1=(" << u1.r << "," << u1.theta
                                              << ") u2=(" << u2.r << "," << u2.theta << ") got=" << got);
        }
        if (got) {
            ++above;
            if (!within_distance(w, u1, big_r) || !within_distance(w, u2, big_r)) ++fact_violations;
        }
    }
    CHECK(above > 500);
    CHECK(mismatches == 0);
    CHECK(fact_violations == 0);
}

TEST_CASE("a vertex between an edge's ends with a larger type than the far end is adjacent to the near end") {
    // z, y, w with d(z, w) < R, w anticlockwise of z, y angularly between
    // them and t_y > t_w: then d(y, z) < R.
    const auto p = ModelParams::create(1e5, 0.75, 1.0);
    const double big_r = p.big_r();
    testutil::PointDrawer draw(p, 31);
    int tested = 0, violations = 0;
    for (int i = 0; i < 100000; ++i) {
        const PolarPoint z = draw.point();
        PolarPoint w = draw.point();
        const double window = std::min(max_adjacency_angle(z.r, w.r, big_r), kPi);
        w.theta = wrap_angle(z.theta + window * draw.uniform());
        if (!(hyperbolic_distance(z, w) < big_r)) continue;
        const double span = signed_angle(z, w);
        if (span <= 0.0) continue;
        const PolarPoint y{draw.radius(), wrap_angle(z.theta + span * draw.uniform())};
        if (!(p.type_of(y) > p.type_of(w))) continue;
        ++tested;
        if (!(hyperbolic_distance(y, z) < big_r)) ++violations;
    }
    CHECK(tested > 10000);
    CHECK(violations == 0);
}
