#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "bess/milp/model.hpp"
#include "bess/milp/solution.hpp"
#include "bess/milp/sparse_lu.hpp"

namespace bess::milp {

enum class VarStatus : std::uint8_t { Basic, AtLower, AtUpper };

/// Status of every structural and logical variable; enough to restart the
/// simplex from the same vertex.
struct Basis {
  std::vector<VarStatus> status;
};

/// Cutoff: the dual simplex proved the optimum is no better than the
/// configured objective cutoff.
enum class LpStatus : std::uint8_t { Optimal, Infeasible, IterationLimit, Cutoff };

/// Bounded revised simplex over the continuous relaxation of a Model.
///
/// Works in computational form A x + s = 0 with one logical s_i per row,
/// bounded by the negated row range. Both the primal algorithm (composite
/// phase 1) and the dual algorithm (dual steepest edge pricing) run on the
/// same factorized basis, which lets branch-and-bound tighten bounds and
/// re-optimize from the parent's vertex.
class LpEngine {
 public:
  LpEngine(const Model& model, const SolverConfig& config);

  /// Overrides the bounds of structural variable `j` (model units).
  void set_bounds(int j, double lower, double upper);
  void restore_model_bounds();
  double lower(int j) const;
  double upper(int j) const;

  /// Runs the configured method from the current basis.
  LpStatus solve();
  LpStatus solve_dual();
  LpStatus solve_primal();

  /// Lets the dual simplex stop once its objective provably exceeds `value`
  /// (model units). Infinity disables the check.
  void set_objective_cutoff(double value) noexcept { cutoff_ = value; }

  Basis basis() const;
  /// Installs a basis (e.g. a parent node's). Refactorizes immediately.
  void set_basis(const Basis& basis);
  /// Back to the all-logical basis.
  void reset_basis();

  /// Structural values in model units.
  std::vector<double> values() const;
  double objective() const;

  std::uint64_t iterations() const noexcept { return iterations_; }
  std::uint64_t bland_switches() const noexcept { return bland_switches_; }
  int num_rows() const noexcept { return m_; }
  int num_structurals() const noexcept { return n_; }

 private:
  void build(const Model& model);
  void scale(const Model& model);
  int total() const noexcept { return n_ + m_; }
  bool is_fixed(int j) const { return lo_[j] == up_[j]; }

  void factorize();
  // Update count cap, or an eta file grown past the cost of a fresh factor.
  bool refactor_due() const;
  void compute_primal();
  void compute_duals();
  void set_nonbasic_value(int j);
  void column(int j, std::vector<double>& dense) const;
  void pivot_row(const std::vector<double>& rho);
  double primal_infeasibility(int j) const;
  double max_primal_infeasibility() const;
  bool fix_dual_infeasibilities();
  void remove_cost_shifts();
  bool iteration_budget_left() const;
  void note_degenerate(bool degenerate);
  void perturb_costs();
  void perturb(int j, std::uint64_t salt);
  // Fixed ordering used by Bland's rule and tie-breaks: logicals first.
  int order_key(int j) const;

  LpStatus dual_loop();
  LpStatus primal_loop();

  SolverConfig config_;
  int n_ = 0;
  int m_ = 0;

  CscMatrix a_;  // scaled structural columns
  std::vector<int> row_start_, row_index_;
  std::vector<double> row_value_;
  std::vector<double> col_scale_, row_scale_;

  std::vector<double> model_lo_, model_up_;  // scaled model bounds
  std::vector<double> model_cost_;           // unscaled objective
  std::vector<double> lo_, up_, cost_, shift_;
  bool shifted_ = false;

  std::vector<VarStatus> status_;
  std::vector<int> basic_;  // basis position -> variable
  std::vector<int> pos_;    // variable -> basis position or -1
  std::vector<double> x_, d_, weight_;

  SparseLu lu_;
  bool factor_valid_ = false;
  CscMatrix basis_matrix_;

  // Pivot row scratch.
  std::vector<double> alpha_row_;
  std::vector<int> alpha_touched_;
  std::vector<char> alpha_flag_;

  std::uint64_t iterations_ = 0;
  std::uint64_t iteration_cap_ = 0;
  std::uint64_t bland_switches_ = 0;
  std::uint32_t degenerate_run_ = 0;
  bool bland_ = false;
  int perturbations_ = 0;
  double perturb_scale_ = 0.0;
  bool cold_ = true;
  double cutoff_ = std::numeric_limits<double>::infinity();  // basis untouched since reset_basis()
};

/// Continuous relaxation of `model` (binaries relaxed to their bounds).
/// Throws ModelError if any variable bound is infinite.
Solution solve_lp_relaxation(const Model& model, const SolverConfig& config = {});

}  // namespace bess::milp
