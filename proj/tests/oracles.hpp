#pragma once

// Independent reference computations for the tests. Nothing here calls the
// library's LP, quadrature or sampling code.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

#include "tgc/logbody.hpp"

namespace oracle {

using Points = std::vector<std::vector<double>>;

inline Points random_generators(std::mt19937_64& rng, std::size_t n, std::size_t max_count,
                                double lo = -3.0, double hi = -0.2) {
  std::uniform_int_distribution<std::size_t> count(1, max_count);
  std::uniform_real_distribution<double> coord(lo, hi);
  Points gens(count(rng), std::vector<double>(n));
  for (auto& y : gens) {
    for (auto& v : y) v = coord(rng);
  }
  return gens;
}

inline tgc::LogBody random_body(std::mt19937_64& rng, std::size_t n, std::size_t max_count,
                                double lo = -3.0, double hi = -0.2) {
  return tgc::LogBody::canonicalize(random_generators(rng, n, max_count, lo, hi), n);
}

inline double support(const Points& gens, const std::vector<double>& x) {
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& y : gens) {
    double d = 0.0;
    for (std::size_t l = 0; l < x.size(); ++l) d += x[l] * y[l];
    best = std::max(best, d);
  }
  return best;
}

// Legendre objective <a,s> - f_t(a).
inline double legendre_objective(const Points& g0, const Points& g1, double t,
                                 const std::vector<double>& s, const std::vector<double>& a) {
  double lin = 0.0;
  for (std::size_t l = 0; l < s.size(); ++l) lin += a[l] * s[l];
  const double f = (1.0 - t) * std::max(support(g0, a) + 1.0, 0.0) +
                   t * std::max(support(g1, a) + 1.0, 0.0);
  return lin - f;
}

// Box side large enough to contain a maximizer of the Legendre objective.
inline double legendre_box(const Points& g0, const Points& g1) {
  double side = 0.0;
  for (const Points* g : {&g0, &g1}) {
    for (std::size_t l = 0; l < g->front().size(); ++l) {
      double m = -std::numeric_limits<double>::infinity();
      for (const auto& y : *g) m = std::max(m, y[l]);
      side = std::max(side, 1.0 / -m);
    }
  }
  return side;
}

// Exact sup of the Legendre objective for n <= 2 by enumerating the vertices
// of the arrangement of its kink hyperplanes inside the box.
inline double legendre_enumerate(const Points& g0, const Points& g1, double t,
                                 const std::vector<double>& s) {
  const std::size_t n = s.size();
  const double box = legendre_box(g0, g1);
  // Hyperplanes <c,a> = d.
  std::vector<std::pair<std::vector<double>, double>> planes;
  for (const Points* g : {&g0, &g1}) {
    for (std::size_t i = 0; i < g->size(); ++i) {
      planes.push_back({(*g)[i], -1.0});
      for (std::size_t j = i + 1; j < g->size(); ++j) {
        std::vector<double> c(n);
        for (std::size_t l = 0; l < n; ++l) c[l] = (*g)[i][l] - (*g)[j][l];
        planes.push_back({c, 0.0});
      }
    }
  }
  for (std::size_t l = 0; l < n; ++l) {
    std::vector<double> e(n, 0.0);
    e[l] = 1.0;
    planes.push_back({e, 0.0});
    planes.push_back({e, box});
  }
  double best = -std::numeric_limits<double>::infinity();
  auto consider = [&](const std::vector<double>& a) {
    for (double v : a) {
      if (v < -1e-12 || v > box + 1e-12) return;
    }
    std::vector<double> c = a;
    for (auto& v : c) v = std::clamp(v, 0.0, box);
    best = std::max(best, legendre_objective(g0, g1, t, s, c));
  };
  if (n == 1) {
    for (const auto& [c, d] : planes) {
      if (std::abs(c[0]) > 1e-14) consider({d / c[0]});
    }
  } else {
    for (std::size_t i = 0; i < planes.size(); ++i) {
      for (std::size_t j = i + 1; j < planes.size(); ++j) {
        const auto& [c, d] = planes[i];
        const auto& [e, f] = planes[j];
        const double det = c[0] * e[1] - c[1] * e[0];
        if (std::abs(det) < 1e-14) continue;
        consider({(d * e[1] - c[1] * f) / det, (c[0] * f - d * e[0]) / det});
      }
    }
  }
  return best;
}

// Brute-force sup over a uniform grid of step h on the box.
inline double legendre_grid(const Points& g0, const Points& g1, double t,
                            const std::vector<double>& s, double h) {
  const double box = legendre_box(g0, g1);
  const auto steps = static_cast<std::size_t>(std::ceil(box / h));
  double best = -std::numeric_limits<double>::infinity();
  if (s.size() == 1) {
    for (std::size_t i = 0; i <= steps; ++i) {
      best = std::max(best, legendre_objective(g0, g1, t, s, {std::min(i * h, box)}));
    }
    return best;
  }
  std::vector<double> a(2);
  for (std::size_t i = 0; i <= steps; ++i) {
    a[0] = std::min(i * h, box);
    for (std::size_t j = 0; j <= steps; ++j) {
      a[1] = std::min(j * h, box);
      best = std::max(best, legendre_objective(g0, g1, t, s, a));
    }
  }
  return best;
}

// Lipschitz constant of the Legendre objective in the sup-norm sense:
// |phi(a) - phi(b)| <= L * ||a - b||_inf.
inline double legendre_lipschitz(const Points& g0, const Points& g1,
                                 const std::vector<double>& s) {
  double l = 0.0;
  for (double v : s) l += std::abs(v);
  double worst = 0.0;
  for (const Points* g : {&g0, &g1}) {
    for (const auto& y : *g) {
      double norm = 0.0;
      for (double v : y) norm += std::abs(v);
      worst = std::max(worst, norm);
    }
  }
  return l + worst;
}

// Projected supergradient ascent with multi-start and step c / sqrt(k).
inline double legendre_supergradient(const Points& g0, const Points& g1, double t,
                                     const std::vector<double>& s, std::mt19937_64& rng,
                                     int starts = 50, int iters = 500) {
  const std::size_t n = s.size();
  const double box = legendre_box(g0, g1);
  std::uniform_real_distribution<double> unit(0.0, box);
  double best = legendre_objective(g0, g1, t, s, std::vector<double>(n, 0.0));
  auto argmax = [](const Points& g, const std::vector<double>& a) {
    std::size_t k = 0;
    double top = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < g.size(); ++i) {
      double d = 0.0;
      for (std::size_t l = 0; l < a.size(); ++l) d += a[l] * g[i][l];
      if (d > top) {
        top = d;
        k = i;
      }
    }
    return std::pair{k, top};
  };
  for (int start = 0; start < starts; ++start) {
    std::vector<double> a(n);
    for (auto& v : a) v = unit(rng);
    for (int k = 1; k <= iters; ++k) {
      best = std::max(best, legendre_objective(g0, g1, t, s, a));
      std::vector<double> grad = s;
      const auto [k0, h0] = argmax(g0, a);
      const auto [k1, h1] = argmax(g1, a);
      for (std::size_t l = 0; l < n; ++l) {
        if (h0 + 1.0 > 0.0) grad[l] -= (1.0 - t) * g0[k0][l];
        if (h1 + 1.0 > 0.0) grad[l] -= t * g1[k1][l];
      }
      const double step = 0.5 * box / std::sqrt(static_cast<double>(k));
      double norm = 0.0;
      for (double v : grad) norm += v * v;
      norm = std::sqrt(norm);
      if (norm == 0.0) break;
      for (std::size_t l = 0; l < n; ++l) a[l] = std::clamp(a[l] + step * grad[l] / norm, 0.0, box);
    }
    best = std::max(best, legendre_objective(g0, g1, t, s, a));
  }
  return best;
}

// Exact covolume for n = 2: area of {x >= 0 : h(x) > -1} in polar form along
// d(u) = (1-u, u), area = 1/2 int_0^1 h(d(u))^-2 du with h piecewise linear.
inline double covolume_2d(const Points& gens) {
  std::vector<double> cuts{0.0, 1.0};
  for (std::size_t i = 0; i < gens.size(); ++i) {
    for (std::size_t j = i + 1; j < gens.size(); ++j) {
      // (1-u) a0 + u a1 = (1-u) b0 + u b1
      const double da = gens[i][1] - gens[i][0];
      const double db = gens[j][1] - gens[j][0];
      if (da == db) continue;
      const double u = (gens[j][0] - gens[i][0]) / (da - db);
      if (u > 0.0 && u < 1.0) cuts.push_back(u);
    }
  }
  std::sort(cuts.begin(), cuts.end());
  double area = 0.0;
  for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
    const double lo = cuts[c];
    const double hi = cuts[c + 1];
    if (hi - lo <= 0.0) continue;
    const double mid = 0.5 * (lo + hi);
    std::size_t k = 0;
    double top = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < gens.size(); ++i) {
      const double v = (1.0 - mid) * gens[i][0] + mid * gens[i][1];
      if (v > top) {
        top = v;
        k = i;
      }
    }
    // h = alpha + beta u on the piece; int du / h^2 = (1/h(lo) - 1/h(hi)) / beta.
    const double alpha = gens[k][0];
    const double beta = gens[k][1] - gens[k][0];
    const double hlo = alpha + beta * lo;
    const double hhi = alpha + beta * hi;
    area += std::abs(beta) < 1e-300 ? (hi - lo) / (alpha * alpha) : (1.0 / hlo - 1.0 / hhi) / beta;
  }
  return 0.5 * area;
}

// Plain rejection sampling of the covolume inside the box prod [0, 1/(-m_l)].
struct McResult {
  double value;
  double error;
};

inline McResult covolume_rejection(const Points& gens, std::size_t samples, std::uint64_t seed) {
  const std::size_t n = gens.front().size();
  std::vector<double> side(n);
  double box = 1.0;
  for (std::size_t l = 0; l < n; ++l) {
    double m = -std::numeric_limits<double>::infinity();
    for (const auto& y : gens) m = std::max(m, y[l]);
    side[l] = 1.0 / -m;
    box *= side[l];
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::size_t hits = 0;
  std::vector<double> x(n);
  for (std::size_t i = 0; i < samples; ++i) {
    for (std::size_t l = 0; l < n; ++l) x[l] = unit(rng) * side[l];
    if (support(gens, x) > -1.0) ++hits;
  }
  const double p = static_cast<double>(hits) / static_cast<double>(samples);
  return {p * box, box * std::sqrt(p * (1.0 - p) / static_cast<double>(samples))};
}

// Upper frontier of a complete convex set in the plane: max s1 with (s0, s1) in Q.
inline double frontier_2d(const Points& gens, double s0) {
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < gens.size(); ++i) {
    if (gens[i][0] >= s0) best = std::max(best, gens[i][1]);
    for (std::size_t j = 0; j < gens.size(); ++j) {
      const double lo = gens[i][0];
      const double hi = gens[j][0];
      if (lo < s0 && s0 < hi) {
        const double w = (s0 - lo) / (hi - lo);
        best = std::max(best, (1.0 - w) * gens[i][1] + w * gens[j][1]);
      }
    }
  }
  return best;
}

// Reinhardt volume for n = 2: (2 pi)^2 int e^{2 s0} (1/2) e^{2 g(s0)} ds0,
// composite Gauss-Legendre between frontier breakpoints plus the closed-form tail.
inline double reinhardt_volume_2d(const Points& gens) {
  std::vector<double> cuts;
  for (const auto& y : gens) cuts.push_back(y[0]);
  std::sort(cuts.begin(), cuts.end());
  double top = -std::numeric_limits<double>::infinity();
  for (const auto& y : gens) top = std::max(top, y[1]);
  double integral = 0.25 * std::exp(2.0 * cuts.front() + 2.0 * top);
  static constexpr double x5[] = {0.0, -0.5384693101056831, 0.5384693101056831,
                                  -0.9061798459386640, 0.9061798459386640};
  static constexpr double w5[] = {0.5688888888888889, 0.4786286704993665, 0.4786286704993665,
                                  0.2369268850561891, 0.2369268850561891};
  for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
    const double lo = cuts[c];
    const double hi = cuts[c + 1];
    if (hi <= lo) continue;
    const int panels = 400;
    const double h = (hi - lo) / panels;
    for (int p = 0; p < panels; ++p) {
      const double mid = lo + (p + 0.5) * h;
      for (int q = 0; q < 5; ++q) {
        const double s0 = mid + 0.5 * h * x5[q];
        integral += 0.5 * h * w5[q] * 0.5 * std::exp(2.0 * s0 + 2.0 * frontier_2d(gens, s0));
      }
    }
  }
  return 4.0 * std::numbers::pi * std::numbers::pi * integral;
}

// Sup-norm Hausdorff distance between two finite point sets.
inline double hausdorff(const Points& a, const Points& b) {
  auto one_side = [](const Points& p, const Points& q) {
    double worst = 0.0;
    for (const auto& x : p) {
      double near = std::numeric_limits<double>::infinity();
      for (const auto& y : q) {
        double d = 0.0;
        for (std::size_t l = 0; l < x.size(); ++l) d = std::max(d, std::abs(x[l] - y[l]));
        near = std::min(near, d);
      }
      worst = std::max(worst, near);
    }
    return worst;
  };
  return std::max(one_side(a, b), one_side(b, a));
}

// Random point of the negative orthant near the body.
inline std::vector<double> random_point(std::mt19937_64& rng, std::size_t n, double lo = -4.0) {
  std::uniform_real_distribution<double> coord(lo, 0.0);
  std::vector<double> s(n);
  for (auto& v : s) v = coord(rng);
  return s;
}

}  // namespace oracle
