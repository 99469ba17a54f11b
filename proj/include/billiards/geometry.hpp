#pragma once

#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <utility>

#include "billiards/fourier.hpp"

namespace billiards {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    constexpr Vec2() = default;
    constexpr Vec2(double x_, double y_) : x(x_), y(y_) {}

    constexpr Vec2 operator+(Vec2 r) const { return {x + r.x, y + r.y}; }
    constexpr Vec2 operator-(Vec2 r) const { return {x - r.x, y - r.y}; }
    constexpr Vec2 operator*(double c) const { return {c * x, c * y}; }
    friend constexpr Vec2 operator*(double c, Vec2 v) { return v * c; }

    double norm() const { return std::hypot(x, y); }
};

constexpr double dot(Vec2 u, Vec2 v) { return u.x * v.x + u.y * v.y; }
constexpr double cross(Vec2 u, Vec2 v) { return u.x * v.y - u.y * v.x; }

/// Strictly convex closed C^r curve, parametrized by arclength s in
/// [0, length). Counterclockwise orientation. Boundary data (position,
/// tangent angle, radius of curvature) is stored as trigonometric
/// interpolants of a uniform arclength grid, so all evaluations and the
/// derivatives rho', rho'' are spectrally accurate.
class BoundaryCurve {
  public:
    double length() const { return length_; }
    std::size_t sample_count() const { return samples_; }
    std::uint64_t id() const { return id_; }

    Vec2 position(double s) const;
    Vec2 tangent(double s) const;         // unit
    Vec2 outward_normal(double s) const;  // unit, tangent rotated by -90 deg

    double curvature_radius(double s) const;
    /// (rho'(s), rho''(s)) — derivatives with respect to arclength.
    std::pair<double, double> curvature_radius_derivs(double s) const;

    /// rho as a 1-periodic series in t = s / length.
    const FourierSeries& rho_series() const { return rho_; }

    /// Text table `s, x, y, rho` on the stored sample grid.
    void write_csv(std::ostream& os) const;

    /// Used by factories; not part of the public construction surface.
    struct GridData {
        double length = 0.0;
        std::vector<double> x, y;        // position samples at s_i = i L / N
        std::vector<double> tau_dev;     // tangent angle minus 2 pi s / L
        std::vector<double> rho;
    };
    static BoundaryCurve from_grid(const GridData& g);

  private:
    BoundaryCurve() = default;

    double length_ = 0.0;
    std::size_t samples_ = 0;
    std::uint64_t id_ = 0;
    FourierSeries x_, y_, tau_dev_, rho_, drho_, ddrho_;
};

/// Ellipse with semi-axes a >= b > 0; s = 0 at the point (a, 0).
BoundaryCurve make_ellipse(double a, double b);

/// Curve defined by its radius of curvature as a function of the tangent
/// angle theta in [0, 2 pi): rho(theta) = coeffs evaluated at theta/(2 pi).
/// The modes are interpreted against the angle variable, i.e. passing
/// FourierSeries{a0, {a1,...}, {b1,...}} means
/// rho(theta) = a0 + sum a_j cos(j theta) + b_j sin(j theta).
BoundaryCurve make_from_curvature_fourier(const FourierSeries& rho_of_theta);

}  // namespace billiards
