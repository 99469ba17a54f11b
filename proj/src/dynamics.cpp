#include "billiards/dynamics.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <numeric>
#include <ostream>

#include "billiards/errors.hpp"
#include "billiards/parallel.hpp"

namespace billiards {

namespace {

double kahan_sum(const std::vector<double>& v) {
    double acc = 0.0, comp = 0.0;
    for (double x : v) {
        const double y = x - comp;
        const double t = acc + y;
        comp = (t - acc) - y;
        acc = t;
    }
    return acc;
}

// Per-iterate geometric data of an impact tuple. Impacts are lifted
// (strictly increasing, total advance p * L); curve data is evaluated mod L.
struct OrbitEval {
    int q = 0;
    std::vector<Vec2> pos, tan;
    std::vector<double> kappa;          // 1 / rho at each node
    std::vector<double> len;            // chord lengths, len[k] = |P_{k+1} - P_k|
    std::vector<Vec2> chord;            // unit chords
    std::vector<double> sin_out, cos_out, sin_in, cos_in;
    bool valid = false;

    double grad(int k) const { return cos_in[static_cast<std::size_t>(k)] - cos_out[static_cast<std::size_t>(k)]; }

    double grad_sup(int from = 0) const {
        double g = 0.0;
        for (int k = from; k < q; ++k) g = std::max(g, std::abs(grad(k)));
        return g;
    }

    double hess_diag(int k) const {
        const auto ku = static_cast<std::size_t>(k);
        const std::size_t prev = ku == 0 ? static_cast<std::size_t>(q - 1) : ku - 1;
        return sin_in[ku] * sin_in[ku] / len[prev] - kappa[ku] * sin_in[ku] +
               sin_out[ku] * sin_out[ku] / len[ku] - kappa[ku] * sin_out[ku];
    }

    // d^2 perimeter / d s_k d s_{k+1} (indices mod q)
    double hess_off(int k) const {
        const auto ku = static_cast<std::size_t>(k);
        const std::size_t nxt = (ku + 1) % static_cast<std::size_t>(q);
        return sin_out[ku] * sin_in[nxt] / len[ku];
    }

    double perimeter() const { return kahan_sum(len); }
};

bool evaluate(const BoundaryCurve& curve, const std::vector<double>& s, int p, OrbitEval& ev) {
    const int q = static_cast<int>(s.size());
    const double L = curve.length();
    ev.q = q;
    ev.pos.resize(s.size());
    ev.tan.resize(s.size());
    ev.kappa.resize(s.size());
    ev.len.resize(s.size());
    ev.chord.resize(s.size());
    ev.sin_out.resize(s.size());
    ev.cos_out.resize(s.size());
    ev.sin_in.resize(s.size());
    ev.cos_in.resize(s.size());
    ev.valid = false;

    // ordering: lifted gaps in (0, L)
    for (int k = 0; k < q; ++k) {
        const double gap = (k + 1 < q ? s[static_cast<std::size_t>(k + 1)] : s[0] + p * L) - s[static_cast<std::size_t>(k)];
        if (!(gap > 0.0) || !(gap < L)) return false;
    }
    for (int k = 0; k < q; ++k) {
        const auto ku = static_cast<std::size_t>(k);
        double sm = std::fmod(s[ku], L);
        if (sm < 0.0) sm += L;
        ev.pos[ku] = curve.position(sm);
        ev.tan[ku] = curve.tangent(sm);
        ev.kappa[ku] = 1.0 / curve.curvature_radius(sm);
    }
    for (int k = 0; k < q; ++k) {
        const auto ku = static_cast<std::size_t>(k);
        const std::size_t nxt = (ku + 1) % static_cast<std::size_t>(q);
        const Vec2 d = ev.pos[nxt] - ev.pos[ku];
        const double l = d.norm();
        if (!(l > 1e-14)) return false;
        ev.len[ku] = l;
        ev.chord[ku] = d * (1.0 / l);
    }
    for (int k = 0; k < q; ++k) {
        const auto ku = static_cast<std::size_t>(k);
        const std::size_t prev = ku == 0 ? static_cast<std::size_t>(q - 1) : ku - 1;
        ev.cos_out[ku] = dot(ev.chord[ku], ev.tan[ku]);
        ev.sin_out[ku] = cross(ev.tan[ku], ev.chord[ku]);
        ev.cos_in[ku] = dot(ev.chord[prev], ev.tan[ku]);
        ev.sin_in[ku] = -cross(ev.tan[ku], ev.chord[prev]);
        if (!(ev.sin_out[ku] > 0.0) || !(ev.sin_in[ku] > 0.0)) return false;
    }
    ev.valid = true;
    return true;
}

// Tridiagonal LDL^T solve of (M + lambda I) x = rhs with M = -(reduced
// Hessian); returns false on a non-positive pivot.
bool solve_tridiag(std::vector<double> diag, const std::vector<double>& off, double lambda,
                   std::vector<double>& rhs) {
    const std::size_t n = diag.size();
    for (auto& d : diag) d += lambda;
    std::vector<double> c(off);
    for (std::size_t i = 1; i < n; ++i) {
        if (!(diag[i - 1] > 0.0)) return false;
        const double m = c[i - 1] / diag[i - 1];
        diag[i] -= m * c[i - 1];
        rhs[i] -= m * rhs[i - 1];
        c[i - 1] = m;
    }
    if (!(diag[n - 1] > 0.0)) return false;
    rhs[n - 1] /= diag[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) rhs[i] = rhs[i] / diag[i] - c[i] * rhs[i + 1];
    return true;
}

struct SolveOptions {
    bool pin_first = false;
    double grad_tol = 1e-13;
    double grad_accept = 1e-12;
    int max_iter = 120;
};

// Damped Newton on the critical-point equations of the perimeter.
// `s` enters as the seed (lifted) and leaves as the solution.
void newton_orbit(const BoundaryCurve& curve, int p, std::vector<double>& s, const SolveOptions& opt) {
    const int q = static_cast<int>(s.size());
    const double L = curve.length();
    OrbitEval ev;
    if (!evaluate(curve, s, p, ev))
        throw NumericalFailure("orbit seed violates the cyclic ordering");

    const int first = opt.pin_first ? 1 : 0;
    double lambda = 0.0;
    double g = ev.grad_sup(first);
    for (int iter = 0; iter < opt.max_iter; ++iter) {
        if (g < opt.grad_tol) break;

        // assemble the (reduced) Newton step
        std::vector<double> step;
        bool ok = false;
        if (opt.pin_first) {
            const std::size_t n = static_cast<std::size_t>(q - 1);
            std::vector<double> diag(n), off(n - 1), rhs(n);
            for (std::size_t i = 0; i < n; ++i) {
                diag[i] = -ev.hess_diag(static_cast<int>(i) + 1);
                rhs[i] = ev.grad(static_cast<int>(i) + 1);
            }
            for (std::size_t i = 0; i + 1 < n; ++i) off[i] = -ev.hess_off(static_cast<int>(i) + 1);
            double lam = lambda;
            for (int attempt = 0; attempt < 12; ++attempt) {
                std::vector<double> sol(rhs);
                if (solve_tridiag(diag, off, lam, sol)) {
                    step.assign(static_cast<std::size_t>(q), 0.0);
                    for (std::size_t i = 0; i < n; ++i) step[i + 1] = sol[i];
                    ok = true;
                    lambda = lam;
                    break;
                }
                lam = std::max(lam * 10.0, 1e-10);
            }
        } else {
            Eigen::MatrixXd M = Eigen::MatrixXd::Zero(q, q);
            Eigen::VectorXd rhs(q);
            for (int k = 0; k < q; ++k) {
                M(k, k) = -ev.hess_diag(k) + lambda;
                const int nxt = (k + 1) % q;
                M(k, nxt) = -ev.hess_off(k);
                M(nxt, k) = -ev.hess_off(k);
                rhs(k) = ev.grad(k);
            }
            Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(M);
            const Eigen::VectorXd sol = cod.solve(rhs);
            step.resize(static_cast<std::size_t>(q));
            for (int k = 0; k < q; ++k) step[static_cast<std::size_t>(k)] = sol(k);
            ok = sol.allFinite();
        }
        if (!ok) throw NumericalFailure("orbit Newton step could not be formed");

        // keep steps bounded by a fraction of the mean gap
        double sup = 0.0;
        for (double v : step) sup = std::max(sup, std::abs(v));
        const double cap = 0.25 * p * L / q;
        const double scale0 = sup > cap ? cap / sup : 1.0;

        bool accepted = false;
        OrbitEval trial;
        for (double t = scale0; t > scale0 * 1e-8; t *= 0.5) {
            std::vector<double> cand(s);
            for (int k = 0; k < q; ++k) cand[static_cast<std::size_t>(k)] += t * step[static_cast<std::size_t>(k)];
            if (!evaluate(curve, cand, p, trial)) continue;
            const double gt = trial.grad_sup(first);
            if (gt < g || gt < opt.grad_tol) {
                s.swap(cand);
                ev = trial;
                g = gt;
                accepted = true;
                lambda *= 0.25;
                if (lambda < 1e-14) lambda = 0.0;
                break;
            }
        }
        if (!accepted) {
            lambda = std::max(lambda * 10.0, 1e-10);
            if (lambda > 1e6) throw NumericalFailure("orbit Newton stalled (damping exhausted)");
        }
    }
    if (g >= opt.grad_accept) {
        char msg[128];
        std::snprintf(msg, sizeof msg, "orbit Newton did not reach gradient tolerance (sup |g| = %.3e)", g);
        throw NumericalFailure(msg);
    }

    // merged impact points signal a caustic bifurcation outside the regime
    const double min_gap = 1e-8 * L / q;
    for (int k = 0; k < q; ++k) {
        const double gap = (k + 1 < q ? s[static_cast<std::size_t>(k + 1)] : s[0] + p * L) - s[static_cast<std::size_t>(k)];
        if (gap < min_gap) throw DegenerateOrbitError("two impact points merged");
    }
}

BirkhoffOrbit finish_orbit(const BoundaryCurve& curve, int p, std::vector<double> s) {
    OrbitEval ev;
    evaluate(curve, s, p, ev);
    BirkhoffOrbit orbit;
    orbit.p = p;
    orbit.q = static_cast<int>(s.size());
    orbit.perimeter = ev.perimeter();
    orbit.grad_norm = ev.grad_sup(0);
    orbit.angles.resize(s.size());
    for (int k = 0; k < orbit.q; ++k) {
        const auto ku = static_cast<std::size_t>(k);
        orbit.angles[ku] = std::atan2(ev.sin_out[ku], ev.cos_out[ku]);
    }
    orbit.impacts = std::move(s);
    return orbit;
}

void check_rotation_number(int p, int q) {
    if (q < 3 || q > 256) throw std::invalid_argument("rotation number: 3 <= q <= 256 required");
    if (p < 1 || 2 * p >= q) throw std::invalid_argument("rotation number: 0 < p/q < 1/2 required");
    if (std::gcd(p, q) != 1) throw std::invalid_argument("rotation number: gcd(p, q) = 1 required");
}

std::vector<double> equispaced_seed(const LazutkinChart& chart, int p, int q, double x0) {
    std::vector<double> s(static_cast<std::size_t>(q));
    for (int k = 0; k < q; ++k)
        s[static_cast<std::size_t>(k)] =
            chart.s_of_x(x0 + static_cast<double>(k) * static_cast<double>(p) / static_cast<double>(q));
    return s;
}

}  // namespace

PhasePoint billiard_step(const BoundaryCurve& curve, PhasePoint point) {
    const double L = curve.length();
    if (!(point.phi > 0.0) || !(point.phi < std::numbers::pi))
        throw std::invalid_argument("billiard_step: phi must lie in (0, pi)");
    double s0 = std::fmod(point.s, L);
    if (s0 < 0.0) s0 += L;

    const Vec2 P = curve.position(s0);
    const Vec2 T = curve.tangent(s0);
    const Vec2 Nin{-T.y, T.x};
    const double c = std::cos(point.phi), si = std::sin(point.phi);
    const Vec2 d{c * T.x + si * Nin.x, c * T.y + si * Nin.y};

    auto f = [&](double sigma) {
        double sm = std::fmod(sigma, L);
        if (sm < 0.0) sm += L;
        return cross(d, curve.position(sm) - P);
    };
    auto fp = [&](double sigma) {
        double sm = std::fmod(sigma, L);
        if (sm < 0.0) sm += L;
        return cross(d, curve.tangent(sm));
    };

    // f decreases through zero at s0 and returns to zero at s0 + L from
    // above; the unique interior root is the next impact.
    const double delta = std::min(1e-7 * L, 1e-3 * L * si);
    double lo = s0 + delta, hi = s0 + L - delta;
    double flo = f(lo), fhi = f(hi);
    if (!(flo < 0.0) || !(fhi > 0.0))
        throw NumericalFailure("billiard_step: chord bracket failed (grazing ray?)");
    double sigma = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        const double val = f(sigma);
        if (val > 0.0)
            hi = sigma;
        else
            lo = sigma;
        double next = sigma - val / fp(sigma);
        if (!(next > lo) || !(next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - sigma) < 1e-13 * L) {
            sigma = next;
            break;
        }
        sigma = next;
    }

    double s1 = std::fmod(sigma, L);
    if (s1 < 0.0) s1 += L;
    const Vec2 Q = curve.position(s1);
    Vec2 u = Q - P;
    u = u * (1.0 / u.norm());
    const Vec2 T1 = curve.tangent(s1);
    const Vec2 Nout1 = curve.outward_normal(s1);
    const double phi1 = std::atan2(dot(u, Nout1), dot(u, T1));
    return {s1, phi1};
}

double BirkhoffOrbit::reflection_residual(const BoundaryCurve& curve) const {
    OrbitEval ev;
    if (!evaluate(curve, impacts, p, ev)) return std::numeric_limits<double>::infinity();
    return ev.grad_sup(0);
}

BirkhoffOrbit birkhoff_orbit(const BoundaryCurve& curve, int p, int q, double seed_s) {
    check_rotation_number(p, q);
    const LazutkinChart chart(curve);
    std::vector<double> s = equispaced_seed(chart, p, q, chart.x_of_s(seed_s));
    SolveOptions opt;
    opt.pin_first = false;
    newton_orbit(curve, p, s, opt);
    return finish_orbit(curve, p, std::move(s));
}

BirkhoffOrbit pinned_orbit(const BoundaryCurve& curve, const LazutkinChart& chart, int p, int q, double x0) {
    check_rotation_number(p, q);
    std::vector<double> s = equispaced_seed(chart, p, q, x0);
    SolveOptions opt;
    opt.pin_first = true;
    newton_orbit(curve, p, s, opt);
    return finish_orbit(curve, p, std::move(s));
}

OrbitFamily::OrbitFamily(const BoundaryCurve& curve, const LazutkinChart& chart, int p, int q,
                         std::vector<double> x_grid)
    : p_(p), q_(q), x_grid_(std::move(x_grid)) {
    const std::size_t g = x_grid_.size();
    const auto qu = static_cast<std::size_t>(q);
    impacts_s_.resize(g * qu);
    impacts_x_.resize(g * qu);
    angles_.resize(g * qu);
    perimeters_.resize(g);
    parallel_for(g, [&](std::size_t i) {
        const BirkhoffOrbit orbit = pinned_orbit(curve, chart, p, q, x_grid_[i]);
        for (std::size_t k = 0; k < qu; ++k) {
            impacts_s_[i * qu + k] = orbit.impacts[k];
            impacts_x_[i * qu + k] = chart.x_of_s(orbit.impacts[k]);
            angles_[i * qu + k] = orbit.angles[k];
        }
        // exact pin: the first Lazutkin coordinate is the grid value
        impacts_x_[i * qu] = x_grid_[i];
        perimeters_[i] = orbit.perimeter;
    });
}

std::vector<double> OrbitFamily::impact_x_column(int k) const {
    std::vector<double> col(grid_size());
    for (std::size_t i = 0; i < col.size(); ++i) col[i] = impact_x(i, k);
    return col;
}

std::vector<double> OrbitFamily::angle_column(int k) const {
    std::vector<double> col(grid_size());
    for (std::size_t i = 0; i < col.size(); ++i) col[i] = angle(i, k);
    return col;
}

OrbitFamily orbit_family(const BoundaryCurve& curve, const LazutkinChart& chart, int p, int q,
                         std::span<const double> x_grid) {
    check_rotation_number(p, q);
    return OrbitFamily(curve, chart, p, q, std::vector<double>(x_grid.begin(), x_grid.end()));
}

std::vector<double> uniform_grid(std::size_t n) {
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i) g[i] = static_cast<double>(i) / static_cast<double>(n);
    return g;
}

void write_family_csv(const OrbitFamily& family, std::ostream& os) {
    os << "x,k,s_k,phi_k,perimeter\n";
    char line[200];
    for (std::size_t i = 0; i < family.grid_size(); ++i)
        for (int k = 0; k < family.q(); ++k) {
            std::snprintf(line, sizeof line, "%.17g,%d,%.17g,%.17g,%.17g\n", family.x_grid()[i], k,
                          family.impact_s(i, k), family.angle(i, k), family.perimeter(i));
            os << line;
        }
}

}  // namespace billiards
