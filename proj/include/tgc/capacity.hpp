#pragma once

// Monge-Ampere capacities of complete log-convex Reinhardt sets in the unit
// polydisk, Cap(K) = n! Covol(Q°), and checks of the inequalities they
// satisfy along the geometric-mean interpolation K_t = K0^(1-t) K1^t.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "tgc/error.hpp"
#include "tgc/logbody.hpp"
#include "tgc/measures.hpp"

namespace tgc {

/// Statistical verdicts allow this many error units.
inline constexpr double kSigmaFactor = 3.0;
/// Floating-point slack added to every tolerance (relative to the values compared).
inline constexpr double kRoundingSlack = 1e-12;

inline IntegralEstimate capacity(const LogBody& q, Method method, const Budget& budget = {}) {
  IntegralEstimate est = covolume(q, method, budget);
  const double fact = detail::factorial(q.dim());
  est.value *= fact;
  est.error *= fact;
  return est;
}

/// Cap(K, D_R^n) for K given by log-generators inside the polydisk of radius R:
/// the capacity of (1/R) K in the unit polydisk.
inline IntegralEstimate capacity_scaled(std::span<const Point> generators, double radius,
                                        Method method, const Budget& budget = {}) {
  if (!(radius > 0.0)) {
    throw Error(ErrorCode::ParameterOutOfRange, "radius must be positive");
  }
  if (generators.empty()) {
    throw Error(ErrorCode::EmptyGenerators, "a body needs at least one generator");
  }
  const double shift = std::log(radius);
  const std::size_t n = generators.front().size();
  std::vector<Point> shifted;
  shifted.reserve(generators.size());
  for (std::size_t k = 0; k < generators.size(); ++k) {
    detail::require_dim(n, generators[k].size(), ("generator " + std::to_string(k)).c_str());
    Point p(n);
    for (std::size_t l = 0; l < n; ++l) {
      if (!(generators[k][l] - shift <= -kStrictness)) {
        throw Error(ErrorCode::ScaleTooSmall,
                    "generator " + std::to_string(k) + " coordinate " + std::to_string(l) + " = " +
                        std::to_string(generators[k][l]) + " is not below log R = " +
                        std::to_string(shift));
      }
      p[l] = generators[k][l] - shift;
    }
    shifted.push_back(std::move(p));
  }
  return capacity(LogBody::canonicalize(std::move(shifted), n), method, budget);
}

inline IntegralEstimate capacity_scaled(const LogBody& q, double radius, Method method,
                                        const Budget& budget = {}) {
  return capacity_scaled(std::span<const Point>(q.generators()), radius, method, budget);
}

struct CapacityRecord {
  double t = 0.0;
  double cap = 0.0;
  double cap_err = 0.0;
  double log_cap = 0.0;
  /// (1-t) C0 + t C1
  double linear_bound = 0.0;
  /// C0^(1-t) C1^t
  double geometric_bound = 0.0;
  /// log geometric_bound - log cap
  double margin_log = 0.0;
  /// Allowed negative excursion of margin_log.
  double tol_log = 0.0;
  /// Allowed negative excursion of linear_bound - cap.
  double tol_linear = 0.0;
};

struct SweepReport {
  std::vector<CapacityRecord> records;
  bool dual_bm_holds = true;
  bool linear_bound_holds = true;
  bool equality_case = false;
  /// Equality case only: every |margin_log| within tolerance.
  bool equality_consistent = true;
  double worst_margin_log = std::numeric_limits<double>::infinity();
  double worst_linear_margin = std::numeric_limits<double>::infinity();

  bool ok() const { return dual_bm_holds && linear_bound_holds && equality_consistent; }
};

inline std::vector<double> uniform_grid(std::size_t count) {
  if (count < 2) throw Error(ErrorCode::ParameterOutOfRange, "a t-grid needs at least 2 points");
  std::vector<double> grid(count);
  for (std::size_t i = 0; i < count; ++i) {
    grid[i] = static_cast<double>(i) / static_cast<double>(count - 1);
  }
  grid.back() = 1.0;
  return grid;
}

/// Strictly increasing within [0,1] and containing both endpoints.
inline void validate_grid(std::span<const double> grid) {
  if (grid.size() < 2 || grid.front() != 0.0 || grid.back() != 1.0) {
    throw Error(ErrorCode::ParameterOutOfRange, "t-grid must start at 0 and end at 1");
  }
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) {
      throw Error(ErrorCode::ParameterOutOfRange, "t-grid must be strictly increasing");
    }
  }
}

namespace detail {

// Fills bounds, margins and tolerances once the endpoint values are known.
inline void finish_record(CapacityRecord& r, const CapacityRecord& first, const CapacityRecord& last) {
  const double t = r.t;
  const double c0 = first.cap;
  const double c1 = last.cap;
  r.log_cap = std::log(r.cap);
  r.linear_bound = (1.0 - t) * c0 + t * c1;
  const double log_geo = (1.0 - t) * std::log(c0) + t * std::log(c1);
  r.geometric_bound = t == 0.0 ? c0 : t == 1.0 ? c1 : std::exp(log_geo);
  r.margin_log = std::log(r.geometric_bound) - r.log_cap;
  r.tol_log = kSigmaFactor * (r.cap_err / r.cap + (1.0 - t) * first.cap_err / c0 +
                              t * last.cap_err / c1) +
              kRoundingSlack;
  r.tol_linear = kSigmaFactor * (r.cap_err + (1.0 - t) * first.cap_err + t * last.cap_err) +
                 kRoundingSlack * r.linear_bound;
}

// Derives bounds and verdicts from records holding t, cap and cap_err.
inline void assess(SweepReport& report) {
  const CapacityRecord first = report.records.front();
  const CapacityRecord last = report.records.back();
  for (auto& r : report.records) {
    finish_record(r, first, last);
    report.worst_margin_log = std::min(report.worst_margin_log, r.margin_log);
    report.worst_linear_margin = std::min(report.worst_linear_margin, r.linear_bound - r.cap);
    if (r.margin_log < -r.tol_log) report.dual_bm_holds = false;
    if (r.linear_bound - r.cap < -r.tol_linear) report.linear_bound_holds = false;
    if (report.equality_case && std::abs(r.margin_log) > r.tol_log) {
      report.equality_consistent = false;
    }
  }
}

}  // namespace detail

/// Capacity along the interpolation, with the log-convexity and linear bounds checked.
inline SweepReport sweep(const LogBody& q0, const LogBody& q1, std::span<const double> grid,
                         Method method, const Budget& budget = {}) {
  detail::require_dim(q0.dim(), q1.dim(), "second body");
  validate_grid(grid);
  SweepReport report;
  report.equality_case = (q0 == q1);
  report.records.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const IntegralEstimate est = capacity(interpolate(q0, q1, grid[i]), method, budget);
    report.records[i].t = grid[i];
    report.records[i].cap = est.value;
    report.records[i].cap_err = est.error;
  }
  detail::assess(report);
  return report;
}

/// Capacity sweep for sets inside the polydisk of radius R (generators below log R).
inline SweepReport sweep_scaled(std::span<const Point> gens0, std::span<const Point> gens1,
                                double radius, std::span<const double> grid, Method method,
                                const Budget& budget = {}) {
  if (gens0.empty() || gens1.empty()) {
    throw Error(ErrorCode::EmptyGenerators, "a body needs at least one generator");
  }
  validate_grid(grid);
  const std::size_t n = gens0.front().size();
  SweepReport report;
  report.records.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double t = grid[i];
    std::vector<Point> mixed;
    for (const auto& y : gens0) {
      for (const auto& z : gens1) {
        detail::require_dim(n, y.size(), "generator");
        detail::require_dim(n, z.size(), "generator");
        Point p(n);
        for (std::size_t l = 0; l < n; ++l) p[l] = (1.0 - t) * y[l] + t * z[l];
        mixed.push_back(std::move(p));
      }
    }
    const IntegralEstimate est = capacity_scaled(mixed, radius, method, budget);
    report.records[i].t = t;
    report.records[i].cap = est.value;
    report.records[i].cap_err = est.error;
  }
  detail::assess(report);
  return report;
}

struct VolumeRecord {
  double t = 0.0;
  double vol = 0.0;
  double vol_err = 0.0;
  double log_vol = 0.0;
  /// V0^(1-t) V1^t
  double geometric_bound = 0.0;
  /// log vol - log geometric_bound; >= 0 by log-concavity.
  double margin_log = 0.0;
  double tol_log = 0.0;
};

struct VolumeReport {
  std::vector<VolumeRecord> records;
  bool log_concavity_holds = true;
  double worst_margin_log = std::numeric_limits<double>::infinity();
};

/// Reinhardt volume along the interpolation; checks Vol(K_t) >= Vol(K0)^(1-t) Vol(K1)^t.
inline VolumeReport check_volume_bm(const LogBody& q0, const LogBody& q1,
                                    std::span<const double> grid, Method method,
                                    const Budget& budget = {}) {
  detail::require_dim(q0.dim(), q1.dim(), "second body");
  validate_grid(grid);
  VolumeReport report;
  report.records.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const IntegralEstimate est = reinhardt_volume(interpolate(q0, q1, grid[i]), method, budget);
    report.records[i] = {grid[i], est.value, est.error, std::log(est.value)};
  }
  const VolumeRecord first = report.records.front();
  const VolumeRecord last = report.records.back();
  for (auto& r : report.records) {
    const double t = r.t;
    const double log_geo = (1.0 - t) * first.log_vol + t * last.log_vol;
    r.geometric_bound = t == 0.0 ? first.vol : t == 1.0 ? last.vol : std::exp(log_geo);
    r.margin_log = r.log_vol - std::log(r.geometric_bound);
    r.tol_log = kSigmaFactor * (r.vol_err / r.vol + (1.0 - t) * first.vol_err / first.vol +
                                t * last.vol_err / last.vol) +
                kRoundingSlack;
    report.worst_margin_log = std::min(report.worst_margin_log, r.margin_log);
    if (r.margin_log < -r.tol_log) report.log_concavity_holds = false;
  }
  return report;
}

struct MarginEstimate {
  double value = 0.0;
  /// First-order propagated error of value.
  double error = 0.0;
};

/// (1-t) log C0 + t log C1 - log C_t for t in (0,1); zero iff Q0 = Q1.
inline MarginEstimate equality_margin(const LogBody& q0, const LogBody& q1, double t,
                                      Method method, const Budget& budget = {}) {
  if (!(t > 0.0 && t < 1.0)) {
    throw Error(ErrorCode::ParameterOutOfRange, "equality margin needs t in (0,1)");
  }
  const IntegralEstimate c0 = capacity(q0, method, budget);
  const IntegralEstimate c1 = capacity(q1, method, budget);
  const IntegralEstimate ct = capacity(interpolate(q0, q1, t), method, budget);
  MarginEstimate out;
  out.value = (1.0 - t) * std::log(c0.value) + t * std::log(c1.value) - std::log(ct.value);
  out.error = (1.0 - t) * c0.error / c0.value + t * c1.error / c1.value + ct.error / ct.value;
  return out;
}

}  // namespace tgc
