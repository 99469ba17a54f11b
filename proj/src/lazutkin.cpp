#include "billiards/lazutkin.hpp"

#include <cmath>
#include <stdexcept>

#include "billiards/errors.hpp"

namespace billiards {

LazutkinChart::LazutkinChart(const BoundaryCurve& curve) {
    length_ = curve.length();
    const std::size_t n = curve.sample_count();

    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double s = length_ * static_cast<double>(i) / static_cast<double>(n);
        w[i] = std::pow(curve.curvature_radius(s), -2.0 / 3.0);
    }
    w_ = FourierSeries::from_samples(w).truncated(1e-16 * std::abs(periodic_mean(w)));
    C_ = 1.0 / (length_ * w_.a0);

    // x(s) = t + C L (P(t) - P(0)) with P the periodic antiderivative of the
    // mean-free part of w against t.
    x_dev_ = w_.antiderivative_periodic();
    x_dev_.a0 = -x_dev_(0.0);
    x_dev_ *= C_ * length_;

    // mu and rho as functions of x, sampled on a uniform x-grid.
    std::vector<double> mu_s(n), rho_s(n);
    double warm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = static_cast<double>(i) / static_cast<double>(n);
        const double s = (i == 0) ? 0.0 : s_of_x_newton(x, warm);
        warm = s + length_ / static_cast<double>(n);
        const double rho = curve.curvature_radius(s);
        rho_s[i] = rho;
        mu_s[i] = 1.0 / (2.0 * C_ * std::cbrt(rho));
    }
    mu_ = FourierSeries::from_samples(mu_s).truncated(1e-16 * std::abs(periodic_mean(mu_s)));
    dmu_ = mu_.derivative();
    rho_x_ = FourierSeries::from_samples(rho_s).truncated(1e-16 * std::abs(periodic_mean(rho_s)));
    drho_x_ = rho_x_.derivative();
    ddrho_x_ = drho_x_.derivative();
}

double LazutkinChart::x_of_s(double s) const {
    const double t = s / length_;
    return t + x_dev_(t);
}

double LazutkinChart::s_of_x(double x) const { return s_of_x_newton(x, x * length_); }

double LazutkinChart::s_of_x_newton(double x, double guess) const {
    // dx/ds = C * rho^{-2/3} = C * w(t) > 0; safeguarded Newton.
    double s = guess;
    double lo = s - length_, hi = s + length_;
    for (int it = 0; it < 100; ++it) {
        const double f = x_of_s(s) - x;
        if (f > 0.0)
            hi = s;
        else
            lo = s;
        const double d = C_ * w_(s / length_);
        double next = s - f / d;
        if (!(next > lo) || !(next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - s) < 1e-15 * length_) return next;
        s = next;
    }
    return s;
}

LazutkinChart build_chart(const BoundaryCurve& curve) { return LazutkinChart(curve); }

double sinc_minus_one(double m) {
    const double m2 = m * m;
    if (std::abs(m) < 1e-2) {
        // sin(m)/m - 1 = -m^2/6 (1 - m^2/20 (1 - m^2/42 (1 - m^2/72)))
        return -m2 / 6.0 * (1.0 - m2 / 20.0 * (1.0 - m2 / 42.0 * (1.0 - m2 / 72.0)));
    }
    return std::sin(m) / m - 1.0;
}

double sinc_derivative_factor(double m) {
    const double m2 = m * m;
    if (std::abs(m) < 1e-2) {
        // (m cos m - sin m)/m^2 = -m/3 (1 - m^2/10 (1 - m^2/28 (1 - m^2/54)))
        return -m / 3.0 * (1.0 - m2 / 10.0 * (1.0 - m2 / 28.0 * (1.0 - m2 / 54.0)));
    }
    return (m * std::cos(m) - std::sin(m)) / m2;
}

double s_q(const LazutkinChart& chart, int q, double x) {
    if (q < 2) throw std::invalid_argument("s_q: q >= 2 required");
    return sinc_minus_one(chart.mu(x) / static_cast<double>(q));
}

double s_q_prime(const LazutkinChart& chart, int q, double x) {
    if (q < 2) throw std::invalid_argument("s_q_prime: q >= 2 required");
    const double m = chart.mu(x) / static_cast<double>(q);
    return sinc_derivative_factor(m) * chart.mu_prime(x) / static_cast<double>(q);
}

}  // namespace billiards
