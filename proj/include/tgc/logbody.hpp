#pragma once

// Complete convex log-images Q = conv{y_k} + R^n_- of compact Reinhardt sets
// in the unit polydisk, stored by a canonical (minimal, sorted) generator list.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tgc/error.hpp"
#include "tgc/simplex.hpp"

namespace tgc {

using Point = std::vector<double>;

/// Generator coordinates must be <= -kStrictness.
inline constexpr double kStrictness = 1e-9;
/// Per-coordinate tolerance for body equality and generator redundancy.
inline constexpr double kCoordTolerance = 1e-12;

namespace detail {

inline double dot(std::span<const double> a, std::span<const double> b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
  return sum;
}

inline double support_of(const std::vector<Point>& generators, std::span<const double> x) {
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& y : generators) best = std::max(best, dot(x, y));
  return best;
}

inline void require_dim(std::size_t expected, std::size_t got, const char* what) {
  if (expected != got) {
    throw Error(ErrorCode::DimensionMismatch, std::string(what) + " has dimension " +
                                                  std::to_string(got) + ", expected " +
                                                  std::to_string(expected));
  }
}

// Largest delta such that s + delta * (1,...,1) lies in conv{generators} + R^n_-,
// i.e. max over the probability simplex of min_l (sum_k lambda_k y_{k,l} - s_l).
inline double containment_depth(const std::vector<Point>& generators,
                                std::span<const double> s) {
  const std::size_t k = generators.size();
  const std::size_t n = s.size();
  // Columns: lambda_0..lambda_{k-1}, delta_plus, delta_minus.
  LpMatrix a(n + 2, k + 2);
  std::vector<double> b(n + 2, 0.0);
  std::vector<double> c(k + 2, 0.0);
  for (std::size_t j = 0; j < k; ++j) {
    a(0, j) = 1.0;
    a(1, j) = -1.0;
  }
  b[0] = 1.0;
  b[1] = -1.0;
  for (std::size_t l = 0; l < n; ++l) {
    for (std::size_t j = 0; j < k; ++j) a(l + 2, j) = -generators[j][l];
    a(l + 2, k) = 1.0;
    a(l + 2, k + 1) = -1.0;
    b[l + 2] = -s[l];
  }
  c[k] = 1.0;
  c[k + 1] = -1.0;
  const LpResult result = solve_lp(a, b, c);
  if (result.status != LpStatus::Optimal) {
    throw Error(ErrorCode::LPNumericalFailure, "containment LP did not reach an optimum");
  }
  return result.value;
}

inline bool dominated(std::span<const double> p, std::span<const double> q) {
  for (std::size_t l = 0; l < p.size(); ++l) {
    if (p[l] > q[l] + kCoordTolerance) return false;
  }
  return true;
}

}  // namespace detail

/// Point of the closed positive orthant (a support-function argument).
class DualVector {
 public:
  explicit DualVector(std::vector<double> coords) : coords_(std::move(coords)) {
    for (std::size_t l = 0; l < coords_.size(); ++l) {
      if (!(coords_[l] >= 0.0)) {
        throw Error(ErrorCode::NegativeDualCoordinate,
                    "coordinate " + std::to_string(l) + " = " + std::to_string(coords_[l]));
      }
    }
  }

  std::size_t dim() const { return coords_.size(); }
  std::span<const double> coords() const { return coords_; }
  double operator[](std::size_t i) const { return coords_[i]; }

 private:
  std::vector<double> coords_;
};

class LogBody {
 public:
  /// Validates, drops redundant generators, and sorts the rest lexicographically.
  static LogBody canonicalize(std::vector<Point> generators, std::size_t dim) {
    if (dim == 0) {
      throw Error(ErrorCode::DimensionMismatch, "dimension must be positive");
    }
    if (generators.empty()) {
      throw Error(ErrorCode::EmptyGenerators, "a body needs at least one generator");
    }
    for (std::size_t k = 0; k < generators.size(); ++k) {
      detail::require_dim(dim, generators[k].size(),
                          ("generator " + std::to_string(k)).c_str());
      for (std::size_t l = 0; l < dim; ++l) {
        const double v = generators[k][l];
        if (!(v <= -kStrictness)) {
          throw Error(ErrorCode::NonNegativeCoordinate,
                      "generator " + std::to_string(k) + " coordinate " + std::to_string(l) +
                          " = " + std::to_string(v));
        }
      }
    }
    return LogBody(dim, reduce(std::move(generators)));
  }

  std::size_t dim() const { return dim_; }
  const std::vector<Point>& generators() const { return generators_; }

  /// Canonical lists coincide up to kCoordTolerance per coordinate.
  friend bool operator==(const LogBody& a, const LogBody& b) {
    if (a.dim_ != b.dim_ || a.generators_.size() != b.generators_.size()) return false;
    for (std::size_t k = 0; k < a.generators_.size(); ++k) {
      for (std::size_t l = 0; l < a.dim_; ++l) {
        if (std::abs(a.generators_[k][l] - b.generators_[k][l]) > kCoordTolerance) return false;
      }
    }
    return true;
  }

 private:
  LogBody(std::size_t dim, std::vector<Point> generators)
      : dim_(dim), generators_(std::move(generators)) {}

  static std::vector<Point> reduce(std::vector<Point> points) {
    // Coordinatewise domination first; it settles most cases without an LP.
    std::sort(points.begin(), points.end(), std::greater<>());
    std::vector<Point> kept;
    for (auto& p : points) {
      const bool covered = std::any_of(kept.begin(), kept.end(),
                                       [&](const Point& q) { return detail::dominated(p, q); });
      if (!covered) kept.push_back(std::move(p));
    }
    // Remaining redundancy: p below a convex combination of the others.
    for (std::size_t j = 0; j < kept.size() && kept.size() > 1;) {
      std::vector<Point> others;
      others.reserve(kept.size() - 1);
      for (std::size_t i = 0; i < kept.size(); ++i) {
        if (i != j) others.push_back(kept[i]);
      }
      if (detail::containment_depth(others, kept[j]) >= -kCoordTolerance) {
        kept.erase(kept.begin() + static_cast<std::ptrdiff_t>(j));
      } else {
        ++j;
      }
    }
    std::sort(kept.begin(), kept.end());
    return kept;
  }

  std::size_t dim_;
  std::vector<Point> generators_;
};

/// h_Q(x) = max_k <x, y_k>.
inline double support(const LogBody& q, const DualVector& x) {
  detail::require_dim(q.dim(), x.dim(), "dual vector");
  return detail::support_of(q.generators(), x.coords());
}

/// Signed depth of s inside Q along the diagonal; >= 0 iff s in Q.
inline double containment_depth(const LogBody& q, std::span<const double> s) {
  detail::require_dim(q.dim(), s.size(), "point");
  return detail::containment_depth(q.generators(), s);
}

inline bool contains(const LogBody& q, std::span<const double> s) {
  detail::require_dim(q.dim(), s.size(), "point");
  // Fast paths: below a generator, or above the coordinatewise maximum.
  for (const auto& y : q.generators()) {
    if (detail::dominated(s, y)) return true;
  }
  for (std::size_t l = 0; l < s.size(); ++l) {
    double top = -std::numeric_limits<double>::infinity();
    for (const auto& y : q.generators()) top = std::max(top, y[l]);
    if (s[l] > top + kCoordTolerance) return false;
  }
  return detail::containment_depth(q.generators(), s) >= -kCoordTolerance;
}

/// Q_t = (1-t) Q0 + t Q1, canonicalized.
inline LogBody interpolate(const LogBody& q0, const LogBody& q1, double t) {
  detail::require_dim(q0.dim(), q1.dim(), "second body");
  if (!(t >= 0.0 && t <= 1.0)) {
    throw Error(ErrorCode::ParameterOutOfRange, "t = " + std::to_string(t) + " not in [0,1]");
  }
  std::vector<Point> combined;
  combined.reserve(q0.generators().size() * q1.generators().size());
  for (const auto& y : q0.generators()) {
    for (const auto& z : q1.generators()) {
      Point p(q0.dim());
      for (std::size_t l = 0; l < p.size(); ++l) p[l] = (1.0 - t) * y[l] + t * z[l];
      combined.push_back(std::move(p));
    }
  }
  return LogBody::canonicalize(std::move(combined), q0.dim());
}

/// x in the copolar {x >= 0 : <x,y> <= -1 for all y in Q}.
inline bool copolar_contains(const LogBody& q, const DualVector& x) {
  return support(q, x) <= -1.0;
}

/// m_l = max_k y_{k,l} = h_Q(e_l); every generator lies below m, so h_Q(x) <= <m, x>.
inline Point decay_slopes(const LogBody& q) {
  Point m(q.dim(), -std::numeric_limits<double>::infinity());
  for (const auto& y : q.generators()) {
    for (std::size_t l = 0; l < m.size(); ++l) m[l] = std::max(m[l], y[l]);
  }
  return m;
}

}  // namespace tgc
