#pragma once

// Integrals attached to a log-body Q:
//
//   exp_integral      I(Q) = int_{R^n_+} exp(h_Q(x)) dx
//   covolume          Covol(Q°) = Vol(R^n_+ \ Q°) = I(Q) / n!
//   reinhardt_volume  Vol_{2n}(K) = (2 pi)^n int_Q exp(2 sum s) ds
//
// Each has a deterministic path and an independent Monte Carlo path.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tgc/error.hpp"
#include "tgc/logbody.hpp"
#include "tgc/quadrature.hpp"
#include "tgc/rng.hpp"
#include "tgc/simplex.hpp"

namespace tgc {

enum class Method { Exact, Quadrature, MonteCarlo, Auto };

constexpr std::string_view to_string(Method m) {
  switch (m) {
    case Method::Exact: return "exact";
    case Method::Quadrature: return "quadrature";
    case Method::MonteCarlo: return "monte_carlo";
    case Method::Auto: return "auto";
  }
  return "auto";
}

struct Budget {
  /// Relative tolerance for the deterministic paths.
  double tolerance = 1e-8;
  /// Cap on integrand evaluations for the deterministic paths.
  std::uint64_t max_evaluations = 400'000'000;
  std::uint64_t samples = 1'000'000;
  std::uint64_t seed = 0;
};

struct IntegralEstimate {
  double value = 0.0;
  /// Deterministic error estimate (quadrature), standard error (Monte Carlo),
  /// or zero (exact).
  double error = 0.0;
  Method method = Method::Exact;
  std::uint64_t evaluations = 0;
};

namespace detail {

inline constexpr std::uint64_t kBatchSize = 1u << 16;
inline constexpr std::uint64_t kSaltExpIntegral = 0x1e7a;
inline constexpr std::uint64_t kSaltSimplex = 0x5149;
inline constexpr std::uint64_t kSaltVolume = 0x7a3d;

inline double factorial(std::size_t n) {
  double f = 1.0;
  for (std::size_t i = 2; i <= n; ++i) f *= static_cast<double>(i);
  return f;
}

/// Closed-form exp integral of a single generator: prod 1/(-y_l).
inline double product_inverse(std::span<const double> y) {
  double p = 1.0;
  for (double v : y) p /= -v;
  return p;
}

inline void require_samples(const Budget& budget) {
  if (budget.samples == 0) {
    throw Error(ErrorCode::BudgetExceeded, "Monte Carlo needs at least one sample");
  }
}

/// Neumaier-compensated running sum.
struct CompensatedSum {
  double sum = 0.0;
  double carry = 0.0;

  void add(double v) {
    const double t = sum + v;
    carry += std::abs(sum) >= std::abs(v) ? (sum - t) + v : (v - t) + sum;
    sum = t;
  }
  double value() const { return sum + carry; }
};

/// Sample mean and standard error accumulated over ordered batches.
struct MomentSums {
  CompensatedSum sum;
  CompensatedSum sum_sq;
  std::uint64_t count = 0;
};

template <class Sampler>
IntegralEstimate batched_mean(const Budget& budget, std::uint64_t salt, Sampler sampler) {
  require_samples(budget);
  const std::uint64_t batches = (budget.samples + kBatchSize - 1) / kBatchSize;
  std::vector<MomentSums> partial(batches);
  parallel_batches(batches, [&](std::size_t b) {
    CounterRng rng(budget.seed ^ mix64(salt), b);
    const std::uint64_t begin = b * kBatchSize;
    const std::uint64_t end = std::min(budget.samples, begin + kBatchSize);
    MomentSums acc;
    for (std::uint64_t i = begin; i < end; ++i) {
      const double w = sampler(rng);
      acc.sum.add(w);
      acc.sum_sq.add(w * w);
    }
    acc.count = end - begin;
    partial[b] = acc;
  });
  CompensatedSum sum;
  CompensatedSum sum_sq;
  std::uint64_t count = 0;
  for (const auto& p : partial) {
    sum.add(p.sum.value());
    sum_sq.add(p.sum_sq.value());
    count += p.count;
  }
  const double n = static_cast<double>(count);
  const double mean = sum.value() / n;
  const double var =
      count > 1 ? std::max(0.0, (sum_sq.value() - n * mean * mean) / (n - 1.0)) : 0.0;
  return {mean, std::sqrt(var / n), Method::MonteCarlo, count};
}

// Integral of (-h)^(-n) over the faces of the unit cube in R^n_+, where
// h(x) = max_k <x, y_k>. With x = r w and w on the face {w_j = 1},
// int_0^inf r^(n-1) exp(r h(w)) dr = (n-1)! / (-h(w))^n.
class FaceIntegrand {
 public:
  FaceIntegrand(const std::vector<Point>& generators, std::size_t dim)
      : generators_(generators), dim_(dim), alpha_(generators.size()), beta_(generators.size()) {}

  // Exact integral of (-h)^(-n) along x[inner] in [0, 1], other coordinates fixed.
  double line(std::span<const double> x, std::size_t inner) {
    const std::size_t k = generators_.size();
    for (std::size_t g = 0; g < k; ++g) {
      double a = 0.0;
      for (std::size_t l = 0; l < dim_; ++l) {
        if (l != inner) a += x[l] * generators_[g][l];
      }
      alpha_[g] = a;
      beta_[g] = generators_[g][inner];
    }
    // Walk the upper envelope of the lines alpha_g + beta_g u on [0, 1].
    std::size_t cur = 0;
    for (std::size_t g = 1; g < k; ++g) {
      if (alpha_[g] > alpha_[cur] || (alpha_[g] == alpha_[cur] && beta_[g] > beta_[cur])) cur = g;
    }
    double pos = 0.0;
    double total = 0.0;
    while (pos < 1.0) {
      double next_pos = 1.0;
      std::size_t next = k;
      for (std::size_t g = 0; g < k; ++g) {
        if (beta_[g] <= beta_[cur]) continue;
        const double cross = std::max(pos, (alpha_[cur] - alpha_[g]) / (beta_[g] - beta_[cur]));
        if (cross < next_pos || (cross == next_pos && next < k && beta_[g] > beta_[next])) {
          next_pos = cross;
          next = g;
        }
      }
      total += segment(alpha_[cur], beta_[cur], pos, next_pos);
      if (next == k) break;
      pos = next_pos;
      cur = next;
    }
    return total;
  }

  double point(std::span<const double> x) const {
    return std::pow(-support_of(generators_, x), -static_cast<double>(dim_));
  }

 private:
  // int_{u0}^{u1} (-(alpha + beta u))^(-n) du without cancellation:
  // with p, q the endpoint values of -(alpha + beta u),
  // (u1 - u0)/(n-1) * sum_{i=0}^{n-2} p^-(i+1) q^-(n-1-i).
  double segment(double alpha, double beta, double u0, double u1) const {
    if (u1 <= u0) return 0.0;
    const double p = -(alpha + beta * u0);
    const double q = -(alpha + beta * u1);
    const std::size_t m = dim_ - 1;
    double sum = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      sum += std::pow(p, -static_cast<double>(i + 1)) * std::pow(q, -static_cast<double>(m - i));
    }
    return (u1 - u0) * sum / static_cast<double>(m);
  }

  const std::vector<Point>& generators_;
  std::size_t dim_;
  std::vector<double> alpha_;
  std::vector<double> beta_;
};

inline QuadEstimate face_integral(FaceIntegrand& integrand, std::size_t dim, std::size_t face,
                                  double abs_tol, EvalBudget& budget) {
  std::vector<double> x(dim, 0.0);
  x[face] = 1.0;
  if (dim == 1) {
    budget.charge(1);
    return {integrand.point(x), 0.0};
  }
  std::vector<std::size_t> free;
  for (std::size_t l = 0; l < dim; ++l) {
    if (l != face) free.push_back(l);
  }
  const std::size_t inner = free.front();
  // Level 0 is the closed-form line; level d integrates free[d] adaptively.
  auto level = [&](auto&& self, std::size_t depth, double tol) -> QuadEstimate {
    if (depth == 0) {
      budget.charge(1);
      return {integrand.line(x, inner), 0.0};
    }
    const std::size_t coord = free[depth];
    return integrate_adaptive(
        [&](double u) {
          x[coord] = u;
          return self(self, depth - 1, 0.25 * tol);
        },
        0.0, 1.0, tol, budget);
  };
  return level(level, free.size() - 1, abs_tol);
}

}  // namespace detail

/// Exact evaluation is available for one generator (any n) and for n <= 2;
/// applies to exp_integral, covolume, capacity and reinhardt_volume.
inline bool exact_available(const LogBody& q) {
  return q.generators().size() == 1 || q.dim() <= 2;
}

namespace detail {

inline Method resolve(const LogBody& q, Method method) {
  if (method == Method::Auto) return exact_available(q) ? Method::Exact : Method::Quadrature;
  if (method == Method::Exact && !exact_available(q)) {
    throw Error(ErrorCode::MethodUnavailable,
                "exact evaluation needs one generator or n <= 2 (n = " + std::to_string(q.dim()) +
                    ", " + std::to_string(q.generators().size()) + " generators)");
  }
  return method;
}

inline IntegralEstimate exp_integral_faces(const LogBody& q, Method tag, const Budget& budget) {
  const std::size_t n = q.dim();
  const auto& gens = q.generators();
  double scale = 0.0;
  for (const auto& y : gens) scale = std::max(scale, product_inverse(y));
  const double fact = factorial(n - 1);
  const double face_tol = budget.tolerance * scale / (static_cast<double>(n) * fact);
  EvalBudget evals{0, budget.max_evaluations};
  FaceIntegrand integrand(gens, n);
  double value = 0.0;
  double error = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const QuadEstimate face = face_integral(integrand, n, j, face_tol, evals);
    value += face.value;
    error += face.error;
  }
  return {fact * value, tag == Method::Exact ? 0.0 : fact * error, tag, evals.used};
}

}  // namespace detail

inline IntegralEstimate exp_integral(const LogBody& q, Method method, const Budget& budget = {}) {
  const Method m = detail::resolve(q, method);
  const auto& gens = q.generators();
  const std::size_t n = q.dim();
  switch (m) {
    case Method::Exact:
      if (gens.size() == 1) return {detail::product_inverse(gens.front()), 0.0, Method::Exact, 1};
      return detail::exp_integral_faces(q, Method::Exact, budget);
    case Method::Quadrature:
      return detail::exp_integral_faces(q, Method::Quadrature, budget);
    case Method::MonteCarlo: {
      // Importance sampling from prod (-m_l) exp(m_l x_l); weights are
      // exp(h(x) - <m,x>) prod 1/(-m_l) <= prod 1/(-m_l).
      const Point slopes = decay_slopes(q);
      const double bound = detail::product_inverse(slopes);
      return detail::batched_mean(budget, detail::kSaltExpIntegral, [&](CounterRng& rng) {
        std::vector<double> x(n);
        double linear = 0.0;
        for (std::size_t l = 0; l < n; ++l) {
          x[l] = rng.exponential() / -slopes[l];
          linear += slopes[l] * x[l];
        }
        const double h = detail::support_of(gens, x);
        return std::exp(h - linear) * bound;
      });
    }
    case Method::Auto: break;
  }
  return {};
}

inline IntegralEstimate covolume(const LogBody& q, Method method, const Budget& budget = {}) {
  const std::size_t n = q.dim();
  const double fact = detail::factorial(n);
  if (detail::resolve(q, method) == Method::MonteCarlo) {
    // Independent oracle: {h_Q > -1} lies in the simplex S = {x >= 0 : <m,x> > -1};
    // sample S uniformly and count hits.
    const Point slopes = decay_slopes(q);
    const double simplex_volume = detail::product_inverse(slopes) / fact;
    const auto& gens = q.generators();
    IntegralEstimate hit = detail::batched_mean(budget, detail::kSaltSimplex, [&](CounterRng& rng) {
      std::vector<double> e(n + 1);
      double total = 0.0;
      for (auto& v : e) {
        v = rng.exponential();
        total += v;
      }
      std::vector<double> x(n);
      for (std::size_t l = 0; l < n; ++l) x[l] = e[l] / total / -slopes[l];
      return detail::support_of(gens, x) > -1.0 ? 1.0 : 0.0;
    });
    hit.value *= simplex_volume;
    hit.error *= simplex_volume;
    return hit;
  }
  IntegralEstimate est = exp_integral(q, method, budget);
  est.value /= fact;
  est.error /= fact;
  return est;
}

namespace detail {

// Reinhardt volume in log coordinates: Vol = (2 pi)^n int_Q exp(2 sum s) ds.
//
// The two innermost coordinates are integrated exactly: for fixed outer
// floors s_l >= c_l (l >= 2), the slice of Q projected to (s_0, s_1) is a
// down-closed polygon whose upper-right frontier is traced with LPs over the
// generator weights, and exp(2 s_0 + 2 s_1) integrates in closed form on it.
// Outer coordinates use w_l = exp(2 s_l) in [0, limit] with adaptive panels.
class ReinhardtIntegrand {
 public:
  ReinhardtIntegrand(const std::vector<Point>& generators, std::size_t dim)
      : generators_(generators), dim_(dim), floor_(dim, -std::numeric_limits<double>::infinity()) {}

  /// int over s_0, s_1 of exp(2 s_0 + 2 s_1) on the current slice; 0 if empty.
  double slice() {
    const auto a = extreme(1.0, 0.0);
    if (!a) return 0.0;
    const auto b = extreme(0.0, 1.0);
    std::vector<Vertex> frontier{*a};
    trace(*a, *b, frontier, 0);
    frontier.push_back(*b);
    // Left tail: s_1 below the max-s_0 vertex, s_0 <= a.s0.
    double total = 0.25 * std::exp(2.0 * (frontier.front().s0 + frontier.front().s1));
    for (std::size_t i = 1; i < frontier.size(); ++i) {
      const Vertex& p = frontier[i - 1];
      const Vertex& r = frontier[i];
      const double width = r.s1 - p.s1;
      if (width <= 0.0) continue;
      const double ep = 2.0 * (p.s0 + p.s1);
      const double delta = 2.0 * (r.s0 + r.s1) - ep;
      const double ratio = std::abs(delta) < 1e-300 ? 1.0 : std::expm1(delta) / delta;
      total += 0.5 * width * std::exp(ep) * ratio;
    }
    return total;
  }

  /// exp(2 max{s_level : s in Q, s_l >= floor_l for l > level}), or 0 if empty.
  double upper_limit(std::size_t level) {
    std::vector<double> objective(generators_.size());
    for (std::size_t g = 0; g < generators_.size(); ++g) objective[g] = generators_[g][level];
    const auto best = maximize(objective, level + 1);
    return best ? std::exp(2.0 * best->value) : 0.0;
  }

  QuadEstimate integrate(std::size_t level, double abs_tol, EvalBudget& budget) {
    budget.charge(1);
    if (level == 1) return {slice(), 0.0};
    const double limit = upper_limit(level);
    if (limit <= 0.0) return {};
    QuadEstimate out = integrate_adaptive(
        [&](double w) {
          floor_[level] = 0.5 * std::log(w);
          // w = exp(2 s) turns ds exp(2 s) into dw / 2.
          QuadEstimate inner = integrate(level - 1, 0.25 * abs_tol, budget);
          return QuadEstimate{0.5 * inner.value, 0.5 * inner.error};
        },
        0.0, limit, abs_tol, budget);
    floor_[level] = -std::numeric_limits<double>::infinity();
    return out;
  }

 private:
  struct Vertex {
    double s0;
    double s1;
  };
  struct Optimum {
    double value;
    std::vector<double> weights;
  };

  // max sum_g lambda_g objective_g over the probability simplex, subject to
  // sum_g lambda_g y_{g,l} >= floor_l for l >= first_floor.
  std::optional<Optimum> maximize(std::span<const double> objective, std::size_t first_floor) const {
    const std::size_t k = generators_.size();
    std::vector<std::size_t> active;
    for (std::size_t l = first_floor; l < dim_; ++l) {
      double lowest = std::numeric_limits<double>::infinity();
      for (const auto& y : generators_) lowest = std::min(lowest, y[l]);
      if (floor_[l] > lowest) active.push_back(l);
    }
    if (active.empty()) {
      std::size_t best = 0;
      for (std::size_t g = 1; g < k; ++g) {
        if (objective[g] > objective[best]) best = g;
      }
      std::vector<double> weights(k, 0.0);
      weights[best] = 1.0;
      return Optimum{objective[best], std::move(weights)};
    }
    LpMatrix a(2 + active.size(), k);
    std::vector<double> b(a.rows());
    for (std::size_t g = 0; g < k; ++g) {
      a(0, g) = 1.0;
      a(1, g) = -1.0;
      for (std::size_t r = 0; r < active.size(); ++r) a(2 + r, g) = -generators_[g][active[r]];
    }
    b[0] = 1.0;
    b[1] = -1.0;
    for (std::size_t r = 0; r < active.size(); ++r) b[2 + r] = -floor_[active[r]];
    LpResult result = solve_lp(a, b, objective);
    if (result.status == LpStatus::Infeasible) return std::nullopt;
    if (result.status != LpStatus::Optimal) {
      throw Error(ErrorCode::LPNumericalFailure, "volume LP did not reach an optimum");
    }
    return Optimum{result.value, std::move(result.x)};
  }

  std::optional<Vertex> extreme(double d0, double d1) const {
    std::vector<double> objective(generators_.size());
    for (std::size_t g = 0; g < generators_.size(); ++g) {
      objective[g] = d0 * generators_[g][0] + d1 * generators_[g][1];
    }
    const auto best = maximize(objective, 2);
    if (!best) return std::nullopt;
    Vertex v{0.0, 0.0};
    for (std::size_t g = 0; g < generators_.size(); ++g) {
      v.s0 += best->weights[g] * generators_[g][0];
      v.s1 += best->weights[g] * generators_[g][1];
    }
    return v;
  }

  // Appends the frontier vertices strictly between a (larger s_0) and b.
  void trace(const Vertex& a, const Vertex& b, std::vector<Vertex>& out, int depth) const {
    const double d0 = b.s1 - a.s1;
    const double d1 = a.s0 - b.s0;
    if (d0 <= 0.0 || d1 <= 0.0 || depth > 64) return;
    const auto c = extreme(d0, d1);
    const double base = d0 * a.s0 + d1 * a.s1;
    if (!c || d0 * c->s0 + d1 * c->s1 <= base + 1e-13 * (d0 + d1)) return;
    trace(a, *c, out, depth + 1);
    out.push_back(*c);
    trace(*c, b, out, depth + 1);
  }

  const std::vector<Point>& generators_;
  std::size_t dim_;
  std::vector<double> floor_;
};

}  // namespace detail

inline IntegralEstimate reinhardt_volume(const LogBody& q, Method method,
                                         const Budget& budget = {}) {
  const std::size_t n = q.dim();
  const auto& gens = q.generators();
  const double pi_n = std::pow(std::numbers::pi, static_cast<double>(n));
  const Method m = detail::resolve(q, method);
  if (m == Method::MonteCarlo) {
    // s_l with density 2 exp(2 s_l) on (-inf, 0]; Vol = pi^n P(s in Q).
    IntegralEstimate hit = detail::batched_mean(budget, detail::kSaltVolume, [&](CounterRng& rng) {
      std::vector<double> s(n);
      for (auto& v : s) v = 0.5 * std::log(rng.uniform());
      return contains(q, s) ? 1.0 : 0.0;
    });
    hit.value *= pi_n;
    hit.error *= pi_n;
    return hit;
  }
  if (gens.size() == 1) {
    double sum = 0.0;
    for (double v : gens.front()) sum += v;
    return {pi_n * std::exp(2.0 * sum), 0.0, m, 1};
  }
  double scale = 0.0;
  for (const auto& y : gens) {
    double sum = 0.0;
    for (double v : y) sum += v;
    scale = std::max(scale, std::exp(2.0 * sum));
  }
  const double prefactor = pi_n * std::pow(2.0, static_cast<double>(n));
  EvalBudget evals{0, budget.max_evaluations};
  detail::ReinhardtIntegrand body(gens, n);
  const QuadEstimate est =
      body.integrate(n - 1, budget.tolerance * scale / prefactor * pi_n, evals);
  return {prefactor * est.value, m == Method::Exact ? 0.0 : prefactor * est.error, m, evals.used};
}

}  // namespace tgc
