#pragma once

#include <span>
#include <vector>

#include "billiards/geometry.hpp"
#include "billiards/lazutkin.hpp"

namespace billiards {

/// Point of the billiard phase cylinder: foot point s (arclength, mod
/// length) and reflection angle phi in (0, pi) measured from the tangent.
struct PhasePoint {
    double s = 0.0;
    double phi = 0.0;
};

/// One application of the billiard map: follow the ray leaving position(s)
/// at angle phi to the tangent, intersect it with the boundary at the unique
/// second point, and return the arrival point with the reflected angle.
PhasePoint billiard_step(const BoundaryCurve& curve, PhasePoint point);

/// Birkhoff periodic orbit of rotation number p/q. `impacts` is the lifted
/// impact sequence: impacts[0] in [0, L), strictly increasing, consecutive
/// gaps in (0, L), and the implicit closing point is impacts[0] + p L.
/// `angles` are the reflection angles at each impact.
struct BirkhoffOrbit {
    int p = 0;
    int q = 0;
    std::vector<double> impacts;
    std::vector<double> angles;
    double perimeter = 0.0;
    double grad_norm = 0.0;  // sup-norm of the perimeter gradient at return

    /// Residual of the reflection condition at each impact,
    /// |cos(phi_in) - cos(phi_out)|; the sup over k.
    double reflection_residual(const BoundaryCurve& curve) const;
};

/// Critical point of the perimeter functional over cyclically ordered
/// q-tuples winding p times, seeded near seed_s (Newton-polished until the
/// gradient sup-norm is below 1e-12). Among critical points this follows the
/// perimeter-maximizing branch reached from the near-integrable seed.
BirkhoffOrbit birkhoff_orbit(const BoundaryCurve& curve, int p, int q, double seed_s);

/// As above, but with the Lazutkin coordinate of the first impact pinned at
/// x0: the remaining q-1 points maximize the perimeter.
BirkhoffOrbit pinned_orbit(const BoundaryCurve& curve, const LazutkinChart& chart, int p, int q, double x0);

/// Family of pinned orbits over a grid of Lazutkin parameters. Data is laid
/// out row-major: entry (g, k) refers to grid point g and impact k. The
/// lifted Lazutkin positions satisfy x(g, 0) = x_grid[g].
class OrbitFamily {
  public:
    OrbitFamily(const BoundaryCurve& curve, const LazutkinChart& chart, int p, int q,
                std::vector<double> x_grid);

    int p() const { return p_; }
    int q() const { return q_; }
    std::size_t grid_size() const { return x_grid_.size(); }
    const std::vector<double>& x_grid() const { return x_grid_; }

    double impact_s(std::size_t g, int k) const { return impacts_s_[g * static_cast<std::size_t>(q_) + static_cast<std::size_t>(k)]; }
    double impact_x(std::size_t g, int k) const { return impacts_x_[g * static_cast<std::size_t>(q_) + static_cast<std::size_t>(k)]; }
    double angle(std::size_t g, int k) const { return angles_[g * static_cast<std::size_t>(q_) + static_cast<std::size_t>(k)]; }
    double perimeter(std::size_t g) const { return perimeters_[g]; }
    const std::vector<double>& perimeters() const { return perimeters_; }

    /// Per-impact sample vectors over the grid (length grid_size), used for
    /// spectral differentiation along the family.
    std::vector<double> impact_x_column(int k) const;
    std::vector<double> angle_column(int k) const;

  private:
    int p_, q_;
    std::vector<double> x_grid_;
    std::vector<double> impacts_s_, impacts_x_, angles_, perimeters_;
};

/// Pinned orbits over the given Lazutkin grid (grid values in [0, 1)).
OrbitFamily orbit_family(const BoundaryCurve& curve, const LazutkinChart& chart, int p, int q,
                         std::span<const double> x_grid);

/// Uniform grid of n points, x_i = i / n.
std::vector<double> uniform_grid(std::size_t n);

/// CSV dump `x,k,s_k,phi_k,perimeter` (one row per grid point and impact).
void write_family_csv(const OrbitFamily& family, std::ostream& os);

}  // namespace billiards
