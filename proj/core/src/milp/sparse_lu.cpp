#include "bess/milp/sparse_lu.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace bess::milp {

// Depth-first search from the pattern of basis column `col` through the graph
// of L (original row indices). Returns `top`; stack_[top..m) then holds the
// reached rows in topological order.
int SparseLu::reach(const CscMatrix& basis, int col) {
  ++stamp_;
  int top = m_;
  for (int p = basis.start[col]; p < basis.start[col + 1]; ++p) {
    int start_row = basis.index[p];
    if (mark_[start_row] == stamp_) continue;
    // Iterative DFS; order_ doubles as the recursion stack.
    int head = 0;
    order_[0] = start_row;
    while (head >= 0) {
      int i = order_[head];
      int k = row_to_pivot_[i];
      if (mark_[i] != stamp_) {
        mark_[i] = stamp_;
        pstack_[head] = (k < 0) ? 0 : l_start_[k];
      }
      bool done = true;
      int end = (k < 0) ? 0 : l_start_[k + 1];
      for (int q = pstack_[head]; q < end; ++q) {
        int next = l_index_[q];
        if (mark_[next] == stamp_) continue;
        pstack_[head] = q + 1;
        order_[++head] = next;
        done = false;
        break;
      }
      if (done) {
        --head;
        stack_[--top] = i;
      }
    }
  }
  return top;
}

SparseLu::Outcome SparseLu::factorize(const CscMatrix& basis,
                                      double pivot_threshold,
                                      double singular_tol) {
  m_ = basis.rows;
  const int m = m_;
  l_start_.assign(1, 0);
  l_index_.clear();
  l_value_.clear();
  u_start_.assign(1, 0);
  u_index_.clear();
  u_value_.clear();
  u_diag_.clear();
  row_to_pivot_.assign(m, -1);
  pivot_to_pos_.clear();
  eta_pos_.clear();
  eta_start_.assign(1, 0);
  eta_index_.clear();
  eta_pivot_.clear();
  eta_value_.clear();
  work_.assign(m, 0.0);
  stack_.assign(m, 0);
  pstack_.assign(m, 0);
  order_.assign(m, 0);
  mark_.assign(m, 0);
  stamp_ = 0;

  std::vector<int> row_count(m, 0);
  for (int idx : basis.index) ++row_count[idx];

  std::vector<int> column_order(m);
  std::iota(column_order.begin(), column_order.end(), 0);
  std::stable_sort(column_order.begin(), column_order.end(), [&](int a, int b) {
    return basis.start[a + 1] - basis.start[a] <
           basis.start[b + 1] - basis.start[b];
  });

  Outcome outcome;
  for (int col : column_order) {
    int top = reach(basis, col);
    for (int p = top; p < m; ++p) work_[stack_[p]] = 0.0;
    double col_max = 0.0;
    for (int p = basis.start[col]; p < basis.start[col + 1]; ++p) {
      work_[basis.index[p]] += basis.value[p];
      col_max = std::max(col_max, std::abs(basis.value[p]));
    }
    // Sparse forward solve with the L built so far.
    for (int p = top; p < m; ++p) {
      int i = stack_[p];
      int k = row_to_pivot_[i];
      if (k < 0) continue;
      double xi = work_[i];
      if (xi == 0.0) continue;
      for (int q = l_start_[k]; q < l_start_[k + 1]; ++q) {
        work_[l_index_[q]] -= l_value_[q] * xi;
      }
    }
    double best = 0.0;
    for (int p = top; p < m; ++p) {
      int i = stack_[p];
      if (row_to_pivot_[i] < 0) best = std::max(best, std::abs(work_[i]));
    }
    if (best <= singular_tol * std::max(1.0, col_max)) {
      outcome.ok = false;
      outcome.singular_positions.push_back(col);
      for (int p = top; p < m; ++p) work_[stack_[p]] = 0.0;
      continue;
    }
    int pivot_row = -1;
    int pivot_count = 0;
    double pivot_mag = 0.0;
    for (int p = top; p < m; ++p) {
      int i = stack_[p];
      if (row_to_pivot_[i] >= 0) continue;
      double mag = std::abs(work_[i]);
      if (mag < pivot_threshold * best) continue;
      if (pivot_row < 0 || row_count[i] < pivot_count ||
          (row_count[i] == pivot_count &&
           (mag > pivot_mag || (mag == pivot_mag && i < pivot_row)))) {
        pivot_row = i;
        pivot_count = row_count[i];
        pivot_mag = mag;
      }
    }
    const int k = static_cast<int>(pivot_to_pos_.size());
    const double pivot = work_[pivot_row];
    for (int p = top; p < m; ++p) {
      int i = stack_[p];
      double xi = work_[i];
      work_[i] = 0.0;
      int ki = row_to_pivot_[i];
      if (ki >= 0) {
        if (xi != 0.0) {
          u_index_.push_back(ki);
          u_value_.push_back(xi);
        }
      } else if (i != pivot_row && xi != 0.0) {
        l_index_.push_back(i);
        l_value_.push_back(xi / pivot);
      }
    }
    u_diag_.push_back(pivot);
    u_start_.push_back(static_cast<int>(u_index_.size()));
    l_start_.push_back(static_cast<int>(l_index_.size()));
    row_to_pivot_[pivot_row] = k;
    pivot_to_pos_.push_back(col);
  }

  if (!outcome.ok) {
    for (int i = 0; i < m; ++i) {
      if (row_to_pivot_[i] < 0) outcome.unpivoted_rows.push_back(i);
    }
    return outcome;
  }
  for (int& idx : l_index_) idx = row_to_pivot_[idx];
  dense_.assign(m, 0.0);
  return outcome;
}

void SparseLu::ftran(std::vector<double>& x) const {
  const int m = m_;
  std::vector<double>& w = dense_;
  for (int i = 0; i < m; ++i) w[row_to_pivot_[i]] = x[i];
  for (int k = 0; k < m; ++k) {
    double wk = w[k];
    if (wk == 0.0) continue;
    for (int q = l_start_[k]; q < l_start_[k + 1]; ++q) {
      w[l_index_[q]] -= l_value_[q] * wk;
    }
  }
  for (int k = m - 1; k >= 0; --k) {
    if (w[k] == 0.0) continue;
    double wk = w[k] / u_diag_[k];
    w[k] = wk;
    for (int q = u_start_[k]; q < u_start_[k + 1]; ++q) {
      w[u_index_[q]] -= u_value_[q] * wk;
    }
  }
  for (int k = 0; k < m; ++k) x[pivot_to_pos_[k]] = w[k];
  for (std::size_t e = 0; e < eta_pos_.size(); ++e) {
    int r = eta_pos_[e];
    double xr = x[r];
    if (xr == 0.0) continue;
    x[r] = eta_pivot_[e] * xr;
    for (int q = eta_start_[e]; q < eta_start_[e + 1]; ++q) {
      x[eta_index_[q]] += eta_value_[q] * xr;
    }
  }
}

void SparseLu::btran(std::vector<double>& x) const {
  const int m = m_;
  for (std::size_t e = eta_pos_.size(); e-- > 0;) {
    int r = eta_pos_[e];
    double sum = eta_pivot_[e] * x[r];
    for (int q = eta_start_[e]; q < eta_start_[e + 1]; ++q) {
      sum += eta_value_[q] * x[eta_index_[q]];
    }
    x[r] = sum;
  }
  std::vector<double>& w = dense_;
  for (int k = 0; k < m; ++k) w[k] = x[pivot_to_pos_[k]];
  for (int k = 0; k < m; ++k) {
    double sum = w[k];
    for (int q = u_start_[k]; q < u_start_[k + 1]; ++q) {
      sum -= u_value_[q] * w[u_index_[q]];
    }
    w[k] = sum / u_diag_[k];
  }
  for (int k = m - 1; k >= 0; --k) {
    double sum = w[k];
    for (int q = l_start_[k]; q < l_start_[k + 1]; ++q) {
      sum -= l_value_[q] * w[l_index_[q]];
    }
    w[k] = sum;
  }
  for (int i = 0; i < m; ++i) x[i] = w[row_to_pivot_[i]];
}

void SparseLu::update(int pos, const std::vector<double>& alpha) {
  const double pivot = alpha[pos];
  eta_pos_.push_back(pos);
  eta_pivot_.push_back(1.0 / pivot);
  for (int i = 0; i < m_; ++i) {
    if (i == pos || alpha[i] == 0.0) continue;
    eta_index_.push_back(i);
    eta_value_.push_back(-alpha[i] / pivot);
  }
  eta_start_.push_back(static_cast<int>(eta_index_.size()));
}

}  // namespace bess::milp
