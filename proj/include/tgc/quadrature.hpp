#pragma once

// Globally adaptive 1-D Gauss-Legendre integration. Each panel is estimated
// once with the 8-point rule and once with the rule on its two halves; the
// difference is the panel's Richardson error estimate. The integrand may
// itself be an estimate with an error (nested integration), which is carried
// through with the quadrature weights.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <queue>
#include <string>
#include <vector>

#include "tgc/error.hpp"

namespace tgc {

struct QuadEstimate {
  double value = 0.0;
  double error = 0.0;
};

struct EvalBudget {
  std::uint64_t used = 0;
  std::uint64_t limit = 0;

  void charge(std::uint64_t n) {
    used += n;
    if (used > limit) {
      throw Error(ErrorCode::BudgetExceeded,
                  "evaluation budget of " + std::to_string(limit) + " exhausted");
    }
  }
};

namespace detail {

inline constexpr std::array<double, 4> kGaussNodes = {
    0.18343464249564978, 0.525532409916329, 0.7966664774136267, 0.9602898564975362};
inline constexpr std::array<double, 4> kGaussWeights = {
    0.36268378337836177, 0.31370664587788705, 0.22238103445337434, 0.10122853629037669};

template <class F>
QuadEstimate gauss8(F& f, double lo, double hi) {
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  QuadEstimate sum;
  for (std::size_t i = 0; i < kGaussNodes.size(); ++i) {
    const double dx = half * kGaussNodes[i];
    const QuadEstimate left = f(mid - dx);
    const QuadEstimate right = f(mid + dx);
    sum.value += kGaussWeights[i] * (left.value + right.value);
    sum.error += kGaussWeights[i] * (left.error + right.error);
  }
  sum.value *= half;
  sum.error *= half;
  return sum;
}

struct Panel {
  double lo;
  double hi;
  QuadEstimate coarse;
  QuadEstimate left;
  QuadEstimate right;

  double value() const { return left.value + right.value; }
  double error() const {
    return std::abs(left.value + right.value - coarse.value) + left.error + right.error;
  }
};

struct PanelOrder {
  bool operator()(const Panel& a, const Panel& b) const { return a.error() < b.error(); }
};

}  // namespace detail

/// Integrates f over [lo, hi] until the summed panel error is <= abs_tol.
/// f maps double -> QuadEstimate and charges its own cost to the budget.
template <class F>
QuadEstimate integrate_adaptive(F&& f, double lo, double hi, double abs_tol,
                                [[maybe_unused]] EvalBudget& budget) {
  if (!(hi > lo)) return {};
  auto make_panel = [&](double a, double b, const QuadEstimate& coarse) {
    const double m = 0.5 * (a + b);
    return detail::Panel{a, b, coarse, detail::gauss8(f, a, m), detail::gauss8(f, m, b)};
  };
  std::priority_queue<detail::Panel, std::vector<detail::Panel>, detail::PanelOrder> queue;
  queue.push(make_panel(lo, hi, detail::gauss8(f, lo, hi)));
  std::vector<detail::Panel> done;
  double total_error = queue.top().error();
  const double min_width = (hi - lo) * 1e-13;
  while (total_error > abs_tol && !queue.empty()) {
    detail::Panel worst = queue.top();
    queue.pop();
    total_error -= worst.error();
    if (worst.hi - worst.lo < min_width) {
      // Cannot resolve further in double precision; keep its error.
      total_error += worst.error();
      done.push_back(worst);
      continue;
    }
    const double mid = 0.5 * (worst.lo + worst.hi);
    detail::Panel a = make_panel(worst.lo, mid, worst.left);
    detail::Panel b = make_panel(mid, worst.hi, worst.right);
    total_error += a.error() + b.error();
    queue.push(a);
    queue.push(b);
  }
  while (!queue.empty()) {
    done.push_back(queue.top());
    queue.pop();
  }
  std::sort(done.begin(), done.end(),
            [](const detail::Panel& a, const detail::Panel& b) { return a.lo < b.lo; });
  QuadEstimate out;
  for (const auto& p : done) {
    out.value += p.value();
    out.error += p.error();
  }
  return out;
}

}  // namespace tgc
