#pragma once

// Small dense two-phase simplex solver.
//
//   maximize    c . x
//   subject to  A x <= b,  x >= 0
//
// Right-hand sides may be negative; an auxiliary phase with one artificial
// column finds a feasible basis first. Pivoting follows Bland's rule
// (lowest-labelled entering variable, lowest-labelled leaving variable on
// ratio ties), so the method terminates on degenerate problems. Intended for
// the tiny problems in this library (tens of rows and columns).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <utility>
#include <vector>

namespace tgc {

enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  double value = 0.0;
  std::vector<double> x;
};

/// Row-major dense constraint matrix.
class LpMatrix {
 public:
  LpMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> data_;
};

class DenseSimplex {
 public:
  static constexpr double kEps = 1e-11;

  DenseSimplex(const LpMatrix& a, std::span<const double> b, std::span<const double> c)
      : m_(a.rows()),
        n_(a.cols()),
        width_(n_ + 2),
        basis_(m_),
        nonbasis_(n_ + 1),
        table_((m_ + 2) * width_, 0.0) {
    for (std::size_t i = 0; i < m_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) at(i, j) = a(i, j);
      at(i, n_) = -1.0;
      at(i, n_ + 1) = b[i];
      basis_[i] = static_cast<long>(n_ + i);
    }
    for (std::size_t j = 0; j < n_; ++j) {
      nonbasis_[j] = static_cast<long>(j);
      at(m_, j) = -c[j];
    }
    nonbasis_[n_] = -1;
    at(m_ + 1, n_) = 1.0;
    // Generous cap; Bland's rule never cycles, so hitting it means the
    // arithmetic has degenerated.
    max_pivots_ = 50 * (m_ + n_ + 2) * (m_ + n_ + 2);
  }

  LpResult solve() {
    LpResult result;
    std::size_t r = 0;
    for (std::size_t i = 1; i < m_; ++i) {
      if (rhs(i) < rhs(r)) r = i;
    }
    if (m_ > 0 && rhs(r) < -kEps) {
      pivot(r, n_);
      const auto phase1 = run(2);
      if (phase1 == LpStatus::IterationLimit) {
        result.status = LpStatus::IterationLimit;
        return result;
      }
      if (phase1 != LpStatus::Optimal || at(m_ + 1, n_ + 1) < -1e-9) {
        result.status = LpStatus::Infeasible;
        return result;
      }
      for (std::size_t i = 0; i < m_; ++i) {
        if (basis_[i] != -1) continue;
        std::size_t s = 0;
        for (std::size_t j = 1; j <= n_; ++j) {
          if (std::abs(at(i, j)) > std::abs(at(i, s))) s = j;
        }
        if (std::abs(at(i, s)) > kEps) pivot(i, s);
      }
    }
    result.status = run(1);
    result.x.assign(n_, 0.0);
    for (std::size_t i = 0; i < m_; ++i) {
      if (basis_[i] >= 0 && static_cast<std::size_t>(basis_[i]) < n_) {
        result.x[static_cast<std::size_t>(basis_[i])] = rhs(i);
      }
    }
    result.value = at(m_, n_ + 1);
    return result;
  }

 private:
  double& at(std::size_t i, std::size_t j) { return table_[i * width_ + j]; }
  double at(std::size_t i, std::size_t j) const { return table_[i * width_ + j]; }
  double rhs(std::size_t i) const { return at(i, n_ + 1); }

  void pivot(std::size_t r, std::size_t s) {
    const double inv = 1.0 / at(r, s);
    for (std::size_t i = 0; i < m_ + 2; ++i) {
      if (i == r) continue;
      const double factor = at(i, s) * inv;
      if (std::abs(factor) <= 0.0) continue;
      for (std::size_t j = 0; j < width_; ++j) at(i, j) -= at(r, j) * factor;
      at(i, s) = -factor;
    }
    for (std::size_t j = 0; j < width_; ++j) {
      if (j != s) at(r, j) *= inv;
    }
    at(r, s) = inv;
    std::swap(basis_[r], nonbasis_[s]);
  }

  LpStatus run(int phase) {
    const std::size_t objective = m_ + static_cast<std::size_t>(phase) - 1;
    for (;;) {
      if (pivots_++ > max_pivots_) return LpStatus::IterationLimit;
      // Bland: lowest label among improving columns.
      std::size_t s = n_ + 1;
      for (std::size_t j = 0; j <= n_; ++j) {
        if (nonbasis_[j] == -phase) continue;
        if (at(objective, j) < -kEps && (s > n_ || nonbasis_[j] < nonbasis_[s])) s = j;
      }
      if (s > n_) return LpStatus::Optimal;
      std::size_t r = m_;
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < m_; ++i) {
        if (at(i, s) <= kEps) continue;
        const double ratio = rhs(i) / at(i, s);
        if (r == m_ || ratio < best - kEps ||
            (ratio <= best + kEps && basis_[i] < basis_[r])) {
          best = std::min(best, ratio);
          r = i;
        }
      }
      if (r == m_) return LpStatus::Unbounded;
      pivot(r, s);
    }
  }

  std::size_t m_;
  std::size_t n_;
  std::size_t width_;
  std::vector<long> basis_;
  std::vector<long> nonbasis_;
  std::vector<double> table_;
  std::size_t pivots_ = 0;
  std::size_t max_pivots_ = 0;
};

inline LpResult solve_lp(const LpMatrix& a, std::span<const double> b,
                         std::span<const double> c) {
  return DenseSimplex(a, b, c).solve();
}

}  // namespace tgc
