// Normal density, CDF and inverse CDF, and the bivariate normal CDF with
// its partial derivatives, all as rigorous enclosures.
#pragma once

#include "tightgap/interval.hpp"

namespace tightgap {

struct DegenerateCorrelation : IntervalError {
  DegenerateCorrelation() : IntervalError("correlation may be +-1") {}
};

struct Correlation {
  Interval rho;
  bool touches_minus_one = false;
  bool touches_plus_one = false;

  Correlation() = default;
  // Throws DomainError unless r is inside [-1, 1].
  Correlation(const Interval& r);  // NOLINT
  Correlation(double r) : Correlation(Interval(r)) {}  // NOLINT
  // Intersects with [-1, 1] first (DomainError when disjoint).
  static Correlation clamped(const Interval& r);
};

// Absolute tolerance for the rho-integral.
inline constexpr double kDefaultBivTol = 1e-15;

Interval phi(const Interval& x);
Interval Phi(const Interval& x);
Interval Phi_inv(const Interval& p);

Interval biv_Phi(const Interval& x, const Interval& y, const Correlation& rho, double tol = kDefaultBivTol);

// Density of the standard bivariate normal with correlation rho.
Interval biv_phi(const Interval& x, const Interval& y, const Interval& rho);

struct BivPartials {
  Interval dX, dY, dRho;
};
BivPartials biv_Phi_partials(const Interval& x, const Interval& y, const Correlation& rho);

// Phi((y - rho x) / sqrt(1 - rho^2)), the conditional factor of dPhi/dx.
Interval cond_Phi(const Interval& x, const Interval& y, const Interval& rho);

namespace detail {
// Point evaluation at exact doubles; x, y may be infinite.
Interval biv_point(double x, double y, double rho, double tol);
// Enclosure [lo, hi] with Phi(lo) <= p <= Phi(hi).
Interval Phi_inv_point(double p);
}  // namespace detail

}  // namespace tightgap
