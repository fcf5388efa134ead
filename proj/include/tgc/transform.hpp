#pragma once

// Toric psh geodesics in logarithmic coordinates.
//
// For Reinhardt data the geodesic between the relative extremal functions of
// K0 and K1 is the Legendre transform
//
//   u_t(s) = sup_{a >= 0} <a, s> - f_t(a),
//   f_t(a) = (1-t) max{h_Q0(a) + 1, 0} + t max{h_Q1(a) + 1, 0},
//
// and f_t is convex piecewise linear, so the supremum is a linear program.

#include <algorithm>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tgc/error.hpp"
#include "tgc/logbody.hpp"
#include "tgc/simplex.hpp"

namespace tgc {

/// Tolerance for deciding u_t(s) = -1.
inline constexpr double kLevelTolerance = 1e-9;

class GeodesicSpec {
 public:
  GeodesicSpec(LogBody q0, LogBody q1, double t) : q0_(std::move(q0)), q1_(std::move(q1)), t_(t) {
    detail::require_dim(q0_.dim(), q1_.dim(), "second body");
    if (!(t_ >= 0.0 && t_ <= 1.0)) {
      throw Error(ErrorCode::ParameterOutOfRange, "t = " + std::to_string(t_) + " not in [0,1]");
    }
  }

  const LogBody& q0() const { return q0_; }
  const LogBody& q1() const { return q1_; }
  double t() const { return t_; }
  std::size_t dim() const { return q0_.dim(); }

 private:
  LogBody q0_;
  LogBody q1_;
  double t_;
};

struct PotentialValue {
  double value = 0.0;
  std::vector<double> maximizer;
};

inline double endpoint_potential(const GeodesicSpec& spec, const DualVector& a) {
  const double h0 = support(spec.q0(), a);
  const double h1 = support(spec.q1(), a);
  return (1.0 - spec.t()) * std::max(h0 + 1.0, 0.0) + spec.t() * std::max(h1 + 1.0, 0.0);
}

namespace detail {

inline void require_nonpositive(std::span<const double> s) {
  for (std::size_t l = 0; l < s.size(); ++l) {
    if (s[l] > 0.0) {
      throw Error(ErrorCode::PositiveCoordinate,
                  "point coordinate " + std::to_string(l) + " = " + std::to_string(s[l]) +
                      " is positive");
    }
  }
}

}  // namespace detail

inline PotentialValue geodesic_value(const GeodesicSpec& spec, std::span<const double> s) {
  detail::require_dim(spec.dim(), s.size(), "point");
  detail::require_nonpositive(s);
  const auto& g0 = spec.q0().generators();
  const auto& g1 = spec.q1().generators();
  const std::size_t n = spec.dim();
  const double t = spec.t();

  // Columns: a_0..a_{n-1}, w (epigraph of max{h_Q0+1,0}), v (same for Q1).
  LpMatrix a(g0.size() + g1.size(), n + 2);
  std::vector<double> b(a.rows(), -1.0);
  std::vector<double> c(n + 2);
  std::size_t row = 0;
  for (const auto& y : g0) {
    for (std::size_t l = 0; l < n; ++l) a(row, l) = y[l];
    a(row, n) = -1.0;
    ++row;
  }
  for (const auto& y : g1) {
    for (std::size_t l = 0; l < n; ++l) a(row, l) = y[l];
    a(row, n + 1) = -1.0;
    ++row;
  }
  for (std::size_t l = 0; l < n; ++l) c[l] = s[l];
  c[n] = -(1.0 - t);
  c[n + 1] = -t;

  const LpResult result = solve_lp(a, b, c);
  if (result.status != LpStatus::Optimal) {
    throw Error(ErrorCode::LPNumericalFailure, "Legendre LP did not reach an optimum");
  }
  PotentialValue out;
  out.value = std::clamp(result.value, -1.0, 0.0);
  out.maximizer.assign(result.x.begin(), result.x.begin() + static_cast<std::ptrdiff_t>(n));
  return out;
}

/// Relative extremal function of K in the unit polydisk, in log coordinates.
inline PotentialValue extremal_value(const LogBody& q, std::span<const double> s) {
  return geodesic_value(GeodesicSpec(q, q, 0.0), s);
}

/// s in Log L_t, i.e. u_t(s) = -1.
inline bool level_contains(const GeodesicSpec& spec, std::span<const double> s) {
  return geodesic_value(spec, s).value <= -1.0 + kLevelTolerance;
}

/// max{u_0(s) - t, u_1(s) + t - 1} clipped below at -1; never exceeds u_t(s).
inline double subgeodesic_bound(const GeodesicSpec& spec, std::span<const double> s) {
  const double u0 = extremal_value(spec.q0(), s).value;
  const double u1 = extremal_value(spec.q1(), s).value;
  return std::max({u0 - spec.t(), u1 + spec.t() - 1.0, -1.0});
}

}  // namespace tgc
