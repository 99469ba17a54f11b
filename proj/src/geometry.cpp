#include "billiards/geometry.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "billiards/errors.hpp"

namespace billiards {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::uint64_t next_curve_id() {
    static std::atomic<std::uint64_t> counter{1};
    return counter.fetch_add(1);
}

// Safeguarded Newton for the monotone equation s(theta) = target.
// The bracket is kept valid by bisection whenever a Newton step escapes it.
template <class SOf, class Speed>
double invert_arclength(double target, double total, SOf&& s_of, Speed&& speed,
                        double guess = std::numeric_limits<double>::quiet_NaN()) {
    double theta = std::isnan(guess) ? kTwoPi * target / total : guess;
    double lo = theta - kPi, hi = theta + kPi;
    for (int it = 0; it < 100; ++it) {
        const double f = s_of(theta) - target;
        if (f > 0.0)
            hi = theta;
        else
            lo = theta;
        const double step = f / speed(theta);
        double next = theta - step;
        if (!(next > lo) || !(next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - theta) < 1e-15 * kTwoPi) return next;
        theta = next;
    }
    return theta;
}

}  // namespace

BoundaryCurve BoundaryCurve::from_grid(const GridData& g) {
    const std::size_t n = g.x.size();
    if (n < 8 || g.y.size() != n || g.tau_dev.size() != n || g.rho.size() != n)
        throw std::invalid_argument("BoundaryCurve::from_grid: inconsistent grid");
    BoundaryCurve c;
    c.length_ = g.length;
    c.samples_ = n;
    c.id_ = next_curve_id();
    const double tol = 1e-15;
    c.x_ = FourierSeries::from_samples(g.x).truncated(tol);
    c.y_ = FourierSeries::from_samples(g.y).truncated(tol);
    c.tau_dev_ = FourierSeries::from_samples(g.tau_dev).truncated(tol);
    c.rho_ = FourierSeries::from_samples(g.rho).truncated(tol);
    c.drho_ = c.rho_.derivative();
    c.ddrho_ = c.drho_.derivative();
    return c;
}

Vec2 BoundaryCurve::position(double s) const {
    const double t = s / length_;
    return {x_(t), y_(t)};
}

Vec2 BoundaryCurve::tangent(double s) const {
    const double t = s / length_;
    const double tau = kTwoPi * t + tau_dev_(t);
    return {std::cos(tau), std::sin(tau)};
}

Vec2 BoundaryCurve::outward_normal(double s) const {
    const Vec2 tg = tangent(s);
    return {tg.y, -tg.x};
}

double BoundaryCurve::curvature_radius(double s) const { return rho_(s / length_); }

std::pair<double, double> BoundaryCurve::curvature_radius_derivs(double s) const {
    const double t = s / length_;
    const double invL = 1.0 / length_;
    return {drho_(t) * invL, ddrho_(t) * invL * invL};
}

void BoundaryCurve::write_csv(std::ostream& os) const {
    os << "s,x,y,rho\n";
    char line[160];
    for (std::size_t i = 0; i < samples_; ++i) {
        const double s = length_ * static_cast<double>(i) / static_cast<double>(samples_);
        const Vec2 p = position(s);
        std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%.17g\n", s, p.x, p.y, curvature_radius(s));
        os << line;
    }
}

namespace {

// Resampling pipeline shared by the factories: native data is given against
// a 2 pi-periodic parameter with positive speed = ds/dtheta. The arclength
// map is integrated termwise in Fourier space; the uniform-s grid size is
// doubled until the rho interpolant passes a midpoint accuracy probe.
struct NativeCurve {
    std::function<Vec2(double)> position;
    std::function<double(double)> speed;
    std::function<double(double)> tau;  // tangent angle, continuous lift
    std::function<double(double)> rho;
};

BoundaryCurve build_arclength_curve(const NativeCurve& nc) {
    std::size_t m = 1 << 10;
    double total = 0.0;
    FourierSeries speed_series;  // against u = theta / (2 pi)
    for (;; m *= 2) {
        std::vector<double> sp(m);
        for (std::size_t i = 0; i < m; ++i)
            sp[i] = nc.speed(kTwoPi * static_cast<double>(i) / static_cast<double>(m));
        speed_series = FourierSeries::from_samples(sp).truncated(1e-16 * std::abs(sp[0]));
        const double new_total = kTwoPi * speed_series.a0;
        // Smooth periodic integrand: uniform sums converge geometrically, so
        // agreement under doubling certifies the requested accuracy.
        if (m > (1 << 10) && std::abs(new_total - total) < 1e-13 * std::abs(new_total)) {
            total = new_total;
            break;
        }
        total = new_total;
        if (m > (1 << 20)) throw NumericalFailure("arclength quadrature did not stabilize");
    }

    const FourierSeries s_periodic = speed_series.antiderivative_periodic();
    const double c0 = speed_series.a0;
    auto s_of_theta = [&](double theta) {
        const double u = theta / kTwoPi;
        return c0 * theta + kTwoPi * (s_periodic(u) - s_periodic(0.0));
    };
    auto speed_of = [&](double theta) { return speed_series(theta / kTwoPi); };

    for (std::size_t n = 1 << 12;; n *= 2) {
        BoundaryCurve::GridData g;
        g.length = total;
        g.x.resize(n);
        g.y.resize(n);
        g.tau_dev.resize(n);
        g.rho.resize(n);
        double warm = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double s = total * static_cast<double>(i) / static_cast<double>(n);
            const double theta = i == 0 ? invert_arclength(s, total, s_of_theta, speed_of)
                                        : invert_arclength(s, total, s_of_theta, speed_of, warm);
            warm = theta + (total / static_cast<double>(n)) / speed_of(theta);
            const Vec2 p = nc.position(theta);
            g.x[i] = p.x;
            g.y[i] = p.y;
            g.tau_dev[i] = nc.tau(theta) - kTwoPi * s / total;
            g.rho[i] = nc.rho(theta);
        }
        BoundaryCurve curve = BoundaryCurve::from_grid(g);
        double err = 0.0;
        const std::size_t probes = 64;
        for (std::size_t i = 0; i < probes; ++i) {
            const double s = total * (static_cast<double>(i) + 0.5) / static_cast<double>(probes);
            const double theta = invert_arclength(s, total, s_of_theta, speed_of);
            err = std::max(err, std::abs(curve.curvature_radius(s) - nc.rho(theta)));
        }
        if (err < 1e-10) return curve;
        if (n >= (1 << 16)) throw NumericalFailure("rho interpolation did not reach 1e-10");
    }
}

}  // namespace

BoundaryCurve make_ellipse(double a, double b) {
    if (!(a > 0.0) || !(b > 0.0)) throw std::invalid_argument("make_ellipse: axes must be positive");
    if (a < b) throw std::invalid_argument("make_ellipse: require a >= b");
    NativeCurve nc;
    nc.position = [a, b](double th) { return Vec2{a * std::cos(th), b * std::sin(th)}; };
    nc.speed = [a, b](double th) {
        const double sx = a * std::sin(th), cy = b * std::cos(th);
        return std::sqrt(sx * sx + cy * cy);
    };
    nc.tau = [a, b](double th) {
        // Velocity angle lifted to the continuous branch near th + pi/2.
        const double raw = std::atan2(b * std::cos(th), -a * std::sin(th));
        const double ref = th + kPi / 2.0;
        double tau = raw;
        while (tau < ref - kPi) tau += kTwoPi;
        while (tau > ref + kPi) tau -= kTwoPi;
        return tau;
    };
    nc.rho = [a, b](double th) {
        const double sx = a * std::sin(th), cy = b * std::cos(th);
        const double w = sx * sx + cy * cy;
        return w * std::sqrt(w) / (a * b);
    };
    return build_arclength_curve(nc);
}

BoundaryCurve make_from_curvature_fourier(const FourierSeries& rho_of_theta) {
    // Closure: the first harmonic of rho against theta must vanish, else
    // integral rho e^{i theta} != 0 and the curve does not close.
    const double scale = std::max(std::abs(rho_of_theta.a0), 1e-30);
    if (rho_of_theta.max_mode() >= 1) {
        const double c1 = rho_of_theta.a[0], s1 = rho_of_theta.b[0];
        if (std::abs(c1) > 1e-10 * scale || std::abs(s1) > 1e-10 * scale)
            throw ClosureViolationError("curvature series has a first harmonic; the curve does not close");
    }
    {
        const std::size_t probe = std::max<std::size_t>(1024, 8 * (rho_of_theta.max_mode() + 1));
        for (std::size_t i = 0; i < probe; ++i)
            if (rho_of_theta(static_cast<double>(i) / static_cast<double>(probe)) <= 0.0)
                throw ConvexityError("rho(theta) <= 0: not strictly convex");
    }

    // dGamma/dtheta = rho(theta) (cos theta, sin theta); integrate termwise.
    // Products and antiderivatives act on u = theta / (2 pi), hence the
    // 2 pi factor when converting the u-antiderivative to a theta-integral.
    FourierSeries cos_mode;
    cos_mode.a = {1.0};
    cos_mode.b = {0.0};
    FourierSeries sin_mode;
    sin_mode.a = {0.0};
    sin_mode.b = {1.0};
    const FourierSeries ix = product(rho_of_theta, cos_mode).antiderivative_periodic();
    const FourierSeries iy = product(rho_of_theta, sin_mode).antiderivative_periodic();

    NativeCurve nc;
    nc.position = [ix, iy](double th) {
        const double u = th / kTwoPi;
        return Vec2{kTwoPi * (ix(u) - ix(0.0)), kTwoPi * (iy(u) - iy(0.0))};
    };
    nc.speed = [rho_of_theta](double th) { return rho_of_theta(th / kTwoPi); };
    nc.tau = [](double th) { return th; };
    nc.rho = [rho_of_theta](double th) { return rho_of_theta(th / kTwoPi); };
    return build_arclength_curve(nc);
}

}  // namespace billiards
