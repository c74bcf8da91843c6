// Copyright 2026 The AuctionLab Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "auctionlab/errors.hpp"

namespace auctionlab {

// max c.x  s.t.  A x <= b, x >= 0, with b >= 0 so the slack basis is feasible.
// A is stored row-major.
struct DenseLp {
  int rows = 0;
  int cols = 0;
  std::vector<double> a;
  std::vector<double> b;
  std::vector<double> c;

  double& at(int r, int col) { return a[static_cast<std::size_t>(r) * cols + col]; }
  double at(int r, int col) const { return a[static_cast<std::size_t>(r) * cols + col]; }
};

struct SimplexResult {
  enum class Status { kOptimal, kUnbounded, kIterationLimit };
  Status status = Status::kOptimal;
  std::vector<double> x;     // primal values, one per column
  std::vector<double> duals; // one per row, >= 0
  double objective = 0.0;
  int iterations = 0;
};

struct SimplexOptions {
  double optimality_tol = 1e-9;
  double pivot_tol = 1e-12;
  int max_iterations = 100000;
};

// Tableau primal simplex with Bland's rule (lowest-index entering column,
// lowest-index leaving basic variable among ratio ties), which cannot cycle.
inline SimplexResult SolveDenseLp(const DenseLp& lp, const SimplexOptions& opt = {}) {
  const int rows = lp.rows;
  const int n = lp.cols + rows;  // structural + slack
  const int width = n + 1;       // last column is the rhs
  for (double bi : lp.b) {
    if (bi < 0) throw ParameterError("simplex requires b >= 0");
  }
  std::vector<double> t(static_cast<std::size_t>(rows + 1) * width, 0.0);
  auto cell = [&](int r, int col) -> double& { return t[static_cast<std::size_t>(r) * width + col]; };
  for (int r = 0; r < rows; ++r) {
    for (int col = 0; col < lp.cols; ++col) cell(r, col) = lp.at(r, col);
    cell(r, lp.cols + r) = 1.0;
    cell(r, n) = lp.b[r];
  }
  // Objective row holds z_j - c_j; negative entries can enter.
  for (int col = 0; col < lp.cols; ++col) cell(rows, col) = -lp.c[col];
  std::vector<int> basis(rows);
  for (int r = 0; r < rows; ++r) basis[r] = lp.cols + r;

  SimplexResult res;
  while (true) {
    if (res.iterations >= opt.max_iterations) {
      res.status = SimplexResult::Status::kIterationLimit;
      break;
    }
    int enter = -1;
    for (int col = 0; col < n; ++col) {
      if (cell(rows, col) < -opt.optimality_tol) {
        enter = col;
        break;
      }
    }
    if (enter < 0) break;
    int leave = -1;
    double best_ratio = 0.0;
    for (int r = 0; r < rows; ++r) {
      const double coef = cell(r, enter);
      if (coef <= opt.pivot_tol) continue;
      const double ratio = cell(r, n) / coef;
      if (leave < 0 || ratio < best_ratio - 1e-15 ||
          (std::abs(ratio - best_ratio) <= 1e-15 && basis[r] < basis[leave])) {
        leave = r;
        best_ratio = ratio;
      }
    }
    if (leave < 0) {
      res.status = SimplexResult::Status::kUnbounded;
      break;
    }
    const double pivot = cell(leave, enter);
    for (int col = 0; col < width; ++col) cell(leave, col) /= pivot;
    for (int r = 0; r <= rows; ++r) {
      if (r == leave) continue;
      const double factor = cell(r, enter);
      if (factor == 0.0) continue;
      for (int col = 0; col < width; ++col) cell(r, col) -= factor * cell(leave, col);
    }
    basis[leave] = enter;
    ++res.iterations;
  }
  res.x.assign(lp.cols, 0.0);
  for (int r = 0; r < rows; ++r) {
    if (basis[r] < lp.cols) res.x[basis[r]] = cell(r, n);
  }
  res.duals.resize(rows);
  for (int r = 0; r < rows; ++r) res.duals[r] = cell(rows, lp.cols + r);
  res.objective = cell(rows, n);
  return res;
}

}  // namespace auctionlab
