#pragma once

#include "billiards/fourier.hpp"
#include "billiards/geometry.hpp"

namespace billiards {

/// Lazutkin chart of a strictly convex curve:
///
///   x(s) = C * integral_0^s rho^{-2/3},   C^{-1} = integral over one period,
///   mu(x) = 1 / (2 C rho(s(x))^{1/3}).
///
/// x is a strictly increasing bijection [0, L) -> [0, 1), extended to the
/// real line by x(s + L) = x(s) + 1. mu and rho-in-x are stored as
/// trigonometric interpolants, so their derivatives are spectral.
class LazutkinChart {
  public:
    explicit LazutkinChart(const BoundaryCurve& curve);

    double C() const { return C_; }
    double length() const { return length_; }

    double x_of_s(double s) const;
    double s_of_x(double x) const;  // lifted: s_of_x(x + 1) = s_of_x(x) + L

    double mu(double x) const { return mu_(x); }
    double mu_prime(double x) const { return dmu_(x); }
    const FourierSeries& mu_series() const { return mu_; }

    /// rho(s(x)) and its first/second derivatives with respect to x.
    double rho_x(double x) const { return rho_x_(x); }
    double rho_x_prime(double x) const { return drho_x_(x); }
    double rho_x_second(double x) const { return ddrho_x_(x); }

  private:
    double s_of_x_newton(double x, double guess) const;

    double C_ = 0.0;
    double length_ = 0.0;
    FourierSeries w_;        // rho^{-2/3} against t = s / L
    FourierSeries x_dev_;    // x(s) - s/L, periodic part against t
    FourierSeries mu_, dmu_;
    FourierSeries rho_x_, drho_x_, ddrho_x_;
};

/// Factory matching the construction above.
LazutkinChart build_chart(const BoundaryCurve& curve);

/// S_q(x) = sinc(mu(x)/q) - 1, the angle-sum correction entering the
/// asymptotic operators. Series-accurate for small arguments.
double s_q(const LazutkinChart& chart, int q, double x);

/// d/dx S_q(x).
double s_q_prime(const LazutkinChart& chart, int q, double x);

/// sinc(m) - 1 and its building block, exposed for tests.
double sinc_minus_one(double m);
double sinc_derivative_factor(double m);  // (m cos m - sin m) / m^2

}  // namespace billiards
