#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "billiards/dynamics.hpp"
#include "billiards/fourier.hpp"
#include "billiards/geometry.hpp"
#include "billiards/lazutkin.hpp"

namespace billiards {

/// Numerically extracted expansion functions of the (1, q) orbit family in
/// Lazutkin coordinates:
///
///   x_q^k(x) = x + k/q + (alpha(x + k/q) - alpha(x)) / q^2 + O(1/q^4)
///   phi_q^k(x) = mu(x_q^k)/q * (1 + beta(x + k/q)/q^2 + O(1/q^4))
///
/// alpha is normalized to zero mean (the position data only determines it up
/// to an additive constant). Interpolant modes below the extraction noise
/// floor are dropped, so curves with exact expansions (circles) give
/// exactly zero series.
struct ExpansionData {
    FourierSeries alpha;
    FourierSeries beta;
    std::pair<int, int> q_pair{0, 0};
    std::size_t grid = 0;

    struct Residual {
        int q = 0;
        double position = 0.0;   // sup |x-expansion remainder|, O(1/q^4)
        double angle = 0.0;      // sup |normalized angle remainder|, O(1/q^4)
        double angle_raw = 0.0;  // sup |phi - mu/q| before the beta term, O(1/q^3)
    };
    std::vector<Residual> residuals;  // sorted by q

    bool decay_warning = false;
    std::string warning;
};

/// Extract alpha and beta from the families at q and 2q (defects are
/// k-averaged over the grid, then Richardson-combined to cancel the 1/q^2
/// error). grid must be a power of two >= 64; q >= 16.
ExpansionData extract_alpha_beta(const BoundaryCurve& curve, const LazutkinChart& chart,
                                 std::pair<int, int> q_pair, std::size_t grid = 64);

/// Measure the per-q expansion remainders for additional q values and merge
/// them into data.residuals.
void measure_residuals(const BoundaryCurve& curve, const LazutkinChart& chart, ExpansionData& data,
                       std::span<const int> q_list);

/// Sup-norm of alpha'(x) - beta(x) - curvature terms, where the curvature
/// terms are (-rho^{1/3} rho'' / (36 C^2) + rho^{-2/3} (rho')^2 / (54 C^2))
/// with rho(x) = rho(s(x)) and all derivatives taken with respect to the
/// Lazutkin variable x (chain rule through s(x) is built into the chart's
/// spectral rho-in-x data).
double curvature_identity_residual(const BoundaryCurve& curve, const LazutkinChart& chart,
                                   const ExpansionData& data, std::size_t grid = 512);

/// CSV export `x,alpha,beta,alpha_prime,identity_residual`.
void write_expansion_csv(const LazutkinChart& chart, const ExpansionData& data, std::ostream& os,
                         std::size_t grid = 256);

}  // namespace billiards
