#pragma once

#include <cstdint>
#include <vector>

namespace bess::milp {

/// Compressed sparse column matrix with `cols` columns. Row indices need not
/// be sorted.
struct CscMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<int> start{0};
  std::vector<int> index;
  std::vector<double> value;

  void clear(int num_rows) {
    rows = num_rows;
    cols = 0;
    start.assign(1, 0);
    index.clear();
    value.clear();
  }
  void push(int row, double v) {
    index.push_back(row);
    value.push_back(v);
  }
  void finish_column() {
    start.push_back(static_cast<int>(index.size()));
    ++cols;
  }
};

/// LU factorization of a square basis matrix with a product-form eta file
/// for rank-one column replacements.
///
/// Left-looking elimination with threshold partial pivoting: each column is
/// solved against the current L through a depth-first reach, then the pivot
/// row is picked among rows whose magnitude is within `pivot_threshold` of the
/// column maximum, preferring the sparsest original row. Columns are processed
/// by increasing nonzero count so unit (logical) columns pivot first.
///
/// Solves are expressed in basis-position coordinates: ftran(x) turns a
/// right-hand side indexed by row into the solution indexed by basis
/// position, btran(x) the reverse.
class SparseLu {
 public:
  struct Outcome {
    bool ok = true;
    std::vector<int> singular_positions;  // basis positions without a pivot
    std::vector<int> unpivoted_rows;      // rows left without a pivot
  };

  /// Factorizes `basis` (square, rows == cols). On numerical singularity the
  /// factorization is left unusable and the outcome lists what to replace.
  Outcome factorize(const CscMatrix& basis, double pivot_threshold = 0.1,
                    double singular_tol = 1e-11);

  /// Solves B x = b in place.
  void ftran(std::vector<double>& x) const;
  /// Solves B^T x = b in place.
  void btran(std::vector<double>& x) const;

  /// Records that basis position `pos` was replaced by a column whose ftran
  /// image is `alpha`.
  void update(int pos, const std::vector<double>& alpha);

  int num_updates() const noexcept { return static_cast<int>(eta_pos_.size()); }
  std::size_t factor_nonzeros() const noexcept {
    return l_index_.size() + u_index_.size();
  }
  std::size_t eta_nonzeros() const noexcept { return eta_index_.size(); }

 private:
  int reach(const CscMatrix& basis, int col);

  int m_ = 0;
  // L: unit lower triangular, column k holds multipliers in pivot order
  // (diagonal omitted).
  std::vector<int> l_start_, l_index_;
  std::vector<double> l_value_;
  // U: column k holds entries in pivot order, diagonal stored separately.
  std::vector<int> u_start_, u_index_;
  std::vector<double> u_value_, u_diag_;
  std::vector<int> row_to_pivot_;  // pinv
  std::vector<int> pivot_to_pos_;  // q

  // Eta file.
  std::vector<int> eta_pos_, eta_start_{0}, eta_index_;
  std::vector<double> eta_pivot_, eta_value_;

  // Scratch.
  std::vector<double> work_;
  std::vector<int> stack_, pstack_, mark_, order_;
  mutable std::vector<double> dense_;
  int stamp_ = 0;
};

}  // namespace bess::milp
