#pragma once

// Geometry of the radius-R disk of the hyperbolic model.
//
// Positions are polar (r, theta) on the curvature -1 plane; radii are drawn
// from the uniform law on the curvature -alpha^2 plane.  The "type" of a
// point is t = R - r.

#include <cstdint>
#include <numbers>
#include <optional>

namespace hrg {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct PolarPoint {
    double r = 0.0;
    double theta = 0.0;

    friend bool operator==(const PolarPoint&, const PolarPoint&) = default;
};

/// Model parameters (N, alpha, nu) and the constants derived from them.
class ModelParams {
public:
    /// Throws InvalidArgument unless n_target >= 1, alpha > 0, nu > 0, and
    /// RangeError when alpha * R would overflow cosh.
    static ModelParams create(double n_target, double alpha, double nu);

    /// Rebuild from a stored disk radius; n_target = nu * exp(R / 2).
    static ModelParams from_radius(double alpha, double nu, double big_r);

    double n_target() const { return n_target_; }
    double alpha() const { return alpha_; }
    double nu() const { return nu_; }
    double big_r() const { return big_r_; }

    /// tau with 1/tau = ln(1 / (2 alpha - 1)); only for 1/2 < alpha < 1.
    std::optional<double> tau() const;
    /// delta = 2 (1 - alpha) / (2 alpha - 1); only for 1/2 < alpha < 1.
    std::optional<double> delta() const;
    /// alpha / (2 alpha - 1); for alpha > 1/2.
    std::optional<double> lambda_alpha() const;

    bool ultrasmall_regime() const { return alpha_ > 0.5 && alpha_ < 1.0; }

    double type_of(const PolarPoint& p) const { return big_r_ - p.r; }
    double radius_of_type(double t) const { return big_r_ - t; }

    /// Area_alpha of the whole disk.
    double disk_area() const;

    friend bool operator==(const ModelParams&, const ModelParams&) = default;

private:
    ModelParams(double n, double alpha, double nu, double big_r) : n_target_(n), alpha_(alpha), nu_(nu), big_r_(big_r) {}

    double n_target_;
    double alpha_;
    double nu_;
    double big_r_;
};

/// Curvature -1 hyperbolic distance.
double hyperbolic_distance(const PolarPoint& u, const PolarPoint& v);

/// Closed-ball adjacency d(u, v) <= R, evaluated without cancellation.
bool within_distance(const PolarPoint& u, const PolarPoint& v, double big_r);

/// Smaller angle at the origin between u and v, in [0, pi].
double relative_angle(const PolarPoint& u, const PolarPoint& v);

/// Relative angle with a sign: positive when v is anticlockwise of u along
/// the shorter arc.  An antipodal pair counts as anticlockwise (+pi).
double signed_angle(const PolarPoint& u, const PolarPoint& v);

/// Map any angle into [0, 2 pi).
double wrap_angle(double theta);

/// Radial CDF F(r) = (cosh(alpha r) - 1) / (cosh(alpha R) - 1).
double radial_cdf(double r, const ModelParams& params);

/// Inverse of radial_cdf.
double radial_quantile(double u, const ModelParams& params);

/// Area of a radius-`radius` disk on the curvature -alpha^2 plane.
double area_disk(double radius, double alpha);

/// Circumference of a radius-`radius` circle on the curvature -alpha^2 plane.
double circle_length(double radius, double alpha);

/// Largest relative angle at which a point of radius r_u and one of radius
/// r_v are within distance R (pi when every angle works).
double max_adjacency_angle(double r_u, double r_v, double big_r);

struct TubeParams {
    double eps = 0.2;
    double c0 = 10.0;

    /// Throws InvalidArgument unless 0 < eps < 1 and c0 > 0.
    void validate() const;
};

enum class TubeKind { inner, outer };
enum class TubeClass { inner, annulus, outside, not_applicable };

const char* to_string(TubeClass c);

/// min{2 (1 +- eps) (nu / N) e^{(t_u + t_v) / 2}, pi}.
double tube_threshold(double t_u, double t_v, const ModelParams& params, double eps, TubeKind kind);

TubeClass tube_classify(const PolarPoint& u, const PolarPoint& v, const ModelParams& params, const TubeParams& tube);

struct TubeCalibration {
    TubeParams tube;
    std::uint64_t pairs_per_attempt = 0;
    int attempts = 0;
    std::uint64_t disagreements = 0; ///< at the returned c0 (0 on success)
    std::uint64_t applicable_pairs = 0;
    bool converged = false;
};

/// Counts pairs (drawn from the model law) on which the tube classification
/// contradicts the exact distance: inner with d >= R, or outside with d <= R.
std::uint64_t tube_disagreements(const ModelParams& params, const TubeParams& tube, std::uint64_t pairs,
                                 std::uint64_t seed, std::uint64_t* applicable = nullptr);

/// Starts from `start` and raises c0 in steps of 2 until a batch of `pairs`
/// random pairs has no disagreement, or `max_attempts` is hit.
TubeCalibration calibrate_tube(const ModelParams& params, TubeParams start, std::uint64_t pairs, std::uint64_t seed,
                               int max_attempts = 20);

/// True iff w lies in the closed hyperbolic triangle O u1 u2.  Throws
/// InvalidArgument when u1 u2 is not an edge (distance > R).
bool above_edge(const PolarPoint& w, const PolarPoint& u1, const PolarPoint& u2, double big_r);

} // namespace hrg
