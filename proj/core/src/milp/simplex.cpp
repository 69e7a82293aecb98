#include "bess/milp/simplex.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "bess/error.hpp"

namespace bess::milp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPivotTol = 1e-9;
constexpr double kZero = 1e-14;
constexpr int kRefactorInterval = 100;
constexpr int kMaxVerifyRounds = 10;
constexpr std::size_t kEtaGrowth = 1;
constexpr double kPerturbation = 1e-6;
constexpr int kMaxPerturbations = 3;

double round_pow2(double v) {
  if (!(v > 0.0) || !std::isfinite(v)) return 1.0;
  return std::exp2(std::round(std::log2(v)));
}

}  // namespace

LpEngine::LpEngine(const Model& model, const SolverConfig& config)
    : config_(config) {
  config_.validate();
  for (const Variable& v : model.variables()) {
    if (!std::isfinite(v.lower) || !std::isfinite(v.upper)) {
      throw ModelError("variable '" + v.name +
                       "' has an infinite bound; the solver requires bounded "
                       "variables");
    }
  }
  build(model);
}

void LpEngine::scale(const Model& model) {
  col_scale_.assign(n_, 1.0);
  row_scale_.assign(m_, 1.0);
  if (!config_.scaling) return;
  const auto& rows = model.constraints();
  // Geometric passes, then equilibrate every row to a unit maximum.
  for (int pass = 0; pass < 4; ++pass) {
    for (int i = 0; i < m_; ++i) {
      double lo = kInf, hi = 0.0;
      for (const Term& t : rows[i].terms) {
        double v = std::abs(t.coef) * col_scale_[t.var.value];
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      if (hi > 0.0) row_scale_[i] = 1.0 / std::sqrt(lo * hi);
    }
    std::vector<double> lo(n_, kInf), hi(n_, 0.0);
    for (int i = 0; i < m_; ++i) {
      for (const Term& t : rows[i].terms) {
        double v = std::abs(t.coef) * row_scale_[i];
        int j = static_cast<int>(t.var.value);
        lo[j] = std::min(lo[j], v);
        hi[j] = std::max(hi[j], v);
      }
    }
    for (int j = 0; j < n_; ++j) {
      if (hi[j] > 0.0) col_scale_[j] = 1.0 / std::sqrt(lo[j] * hi[j]);
    }
  }
  for (int j = 0; j < n_; ++j) col_scale_[j] = round_pow2(col_scale_[j]);
  for (int i = 0; i < m_; ++i) {
    double hi = 0.0;
    for (const Term& t : rows[i].terms) {
      hi = std::max(hi, std::abs(t.coef) * col_scale_[t.var.value]);
    }
    row_scale_[i] = hi > 0.0 ? round_pow2(1.0 / hi) : 1.0;
  }
}

void LpEngine::build(const Model& model) {
  n_ = static_cast<int>(model.num_variables());
  m_ = static_cast<int>(model.num_constraints());
  scale(model);

  const auto& rows = model.constraints();
  std::vector<int> count(n_, 0);
  for (const Constraint& row : rows) {
    for (const Term& t : row.terms) ++count[t.var.value];
  }
  a_.clear(m_);
  a_.start.assign(n_ + 1, 0);
  for (int j = 0; j < n_; ++j) a_.start[j + 1] = a_.start[j] + count[j];
  a_.cols = n_;
  a_.index.assign(a_.start[n_], 0);
  a_.value.assign(a_.start[n_], 0.0);
  std::vector<int> fill(a_.start.begin(), a_.start.end() - 1);
  row_start_.assign(m_ + 1, 0);
  row_index_.clear();
  row_value_.clear();
  for (int i = 0; i < m_; ++i) {
    for (const Term& t : rows[i].terms) {
      int j = static_cast<int>(t.var.value);
      double v = t.coef * row_scale_[i] * col_scale_[j];
      a_.index[fill[j]] = i;
      a_.value[fill[j]++] = v;
      row_index_.push_back(j);
      row_value_.push_back(v);
    }
    row_start_[i + 1] = static_cast<int>(row_index_.size());
  }

  const int nt = total();
  model_lo_.assign(nt, 0.0);
  model_up_.assign(nt, 0.0);
  cost_.assign(nt, 0.0);
  shift_.assign(nt, 0.0);
  const auto& vars = model.variables();
  for (int j = 0; j < n_; ++j) {
    model_lo_[j] = vars[j].lower / col_scale_[j];
    model_up_[j] = vars[j].upper / col_scale_[j];
    cost_[j] = model.objective()[j] * col_scale_[j];
  }
  for (int i = 0; i < m_; ++i) {
    double rhs = rows[i].rhs * row_scale_[i];
    int j = n_ + i;
    switch (rows[i].sense) {
      case Sense::LessEqual:
        model_lo_[j] = -rhs;
        model_up_[j] = kInf;
        break;
      case Sense::GreaterEqual:
        model_lo_[j] = -kInf;
        model_up_[j] = -rhs;
        break;
      case Sense::Equal:
        model_lo_[j] = -rhs;
        model_up_[j] = -rhs;
        break;
    }
  }
  lo_ = model_lo_;
  up_ = model_up_;
  alpha_row_.assign(n_, 0.0);
  alpha_flag_.assign(n_, 0);
  model_cost_ = model.objective();
  reset_basis();
}

void LpEngine::reset_basis() {
  const int nt = total();
  status_.assign(nt, VarStatus::AtLower);
  basic_.resize(m_);
  pos_.assign(nt, -1);
  x_.assign(nt, 0.0);
  d_.assign(nt, 0.0);
  for (int j = 0; j < n_; ++j) {
    status_[j] = cost_[j] < 0.0 ? VarStatus::AtUpper : VarStatus::AtLower;
    set_nonbasic_value(j);
  }
  for (int i = 0; i < m_; ++i) {
    basic_[i] = n_ + i;
    pos_[n_ + i] = i;
    status_[n_ + i] = VarStatus::Basic;
  }
  weight_.assign(m_, 1.0);
  factor_valid_ = false;
  cold_ = true;
}

void LpEngine::set_bounds(int j, double lower, double upper) {
  lo_[j] = lower / col_scale_[j];
  up_[j] = upper / col_scale_[j];
  if (status_[j] != VarStatus::Basic) set_nonbasic_value(j);
}

void LpEngine::restore_model_bounds() {
  for (int j = 0; j < n_; ++j) {
    lo_[j] = model_lo_[j];
    up_[j] = model_up_[j];
    if (status_[j] != VarStatus::Basic) set_nonbasic_value(j);
  }
}

double LpEngine::lower(int j) const { return lo_[j] * col_scale_[j]; }
double LpEngine::upper(int j) const { return up_[j] * col_scale_[j]; }

void LpEngine::set_nonbasic_value(int j) {
  if (status_[j] == VarStatus::AtUpper) {
    if (std::isfinite(up_[j])) {
      x_[j] = up_[j];
    } else {
      status_[j] = VarStatus::AtLower;
      x_[j] = lo_[j];
    }
  } else {
    if (std::isfinite(lo_[j])) {
      x_[j] = lo_[j];
    } else {
      status_[j] = VarStatus::AtUpper;
      x_[j] = up_[j];
    }
  }
}

Basis LpEngine::basis() const { return Basis{status_}; }

void LpEngine::set_basis(const Basis& basis) {
  const int nt = total();
  status_ = basis.status;
  pos_.assign(nt, -1);
  int next = 0;
  for (int j = 0; j < nt; ++j) {
    if (status_[j] == VarStatus::Basic) {
      if (next == m_) {
        status_[j] = VarStatus::AtLower;
      } else {
        basic_[next] = j;
        pos_[j] = next++;
      }
    }
  }
  // Pad a short basis with logicals.
  for (int i = 0; next < m_ && i < m_; ++i) {
    int j = n_ + i;
    if (status_[j] != VarStatus::Basic) {
      status_[j] = VarStatus::Basic;
      basic_[next] = j;
      pos_[j] = next++;
    }
  }
  for (int j = 0; j < nt; ++j) {
    if (status_[j] != VarStatus::Basic) set_nonbasic_value(j);
  }
  weight_.assign(m_, 1.0);
  factor_valid_ = false;
  cold_ = false;
  factorize();
}

void LpEngine::column(int j, std::vector<double>& dense) const {
  std::fill(dense.begin(), dense.end(), 0.0);
  if (j < n_) {
    for (int p = a_.start[j]; p < a_.start[j + 1]; ++p) {
      dense[a_.index[p]] = a_.value[p];
    }
  } else {
    dense[j - n_] = 1.0;
  }
}

bool LpEngine::refactor_due() const {
  if (lu_.num_updates() >= kRefactorInterval) return true;
  const std::size_t base = lu_.factor_nonzeros() + static_cast<std::size_t>(m_);
  return lu_.eta_nonzeros() > kEtaGrowth * base;
}

void LpEngine::factorize() {
  for (int attempt = 0; attempt <= m_; ++attempt) {
    basis_matrix_.clear(m_);
    for (int pos = 0; pos < m_; ++pos) {
      int j = basic_[pos];
      if (j < n_) {
        for (int p = a_.start[j]; p < a_.start[j + 1]; ++p) {
          basis_matrix_.push(a_.index[p], a_.value[p]);
        }
      } else {
        basis_matrix_.push(j - n_, 1.0);
      }
      basis_matrix_.finish_column();
    }
    SparseLu::Outcome outcome = lu_.factorize(basis_matrix_);
    if (outcome.ok) {
      factor_valid_ = true;
      return;
    }
    // Swap each singular column for the logical of an uncovered row.
    const std::size_t k =
        std::min(outcome.singular_positions.size(), outcome.unpivoted_rows.size());
    for (std::size_t t = 0; t < k; ++t) {
      int pos = outcome.singular_positions[t];
      int out = basic_[pos];
      int in = n_ + outcome.unpivoted_rows[t];
      status_[out] = (std::isfinite(up_[out]) &&
                      std::abs(x_[out] - up_[out]) < std::abs(x_[out] - lo_[out]))
                         ? VarStatus::AtUpper
                         : VarStatus::AtLower;
      pos_[out] = -1;
      set_nonbasic_value(out);
      status_[in] = VarStatus::Basic;
      pos_[in] = pos;
      basic_[pos] = in;
      weight_[pos] = 1.0;
    }
  }
  throw SolverError("basis factorization failed");
}

void LpEngine::compute_primal() {
  std::vector<double> rhs(m_, 0.0);
  for (int j = 0; j < n_; ++j) {
    if (status_[j] == VarStatus::Basic) continue;
    double xj = x_[j];
    if (xj == 0.0) continue;
    for (int p = a_.start[j]; p < a_.start[j + 1]; ++p) {
      rhs[a_.index[p]] -= a_.value[p] * xj;
    }
  }
  for (int i = 0; i < m_; ++i) {
    int j = n_ + i;
    if (status_[j] != VarStatus::Basic) rhs[i] -= x_[j];
  }
  lu_.ftran(rhs);
  for (int pos = 0; pos < m_; ++pos) x_[basic_[pos]] = rhs[pos];
}

void LpEngine::compute_duals() {
  std::vector<double> y(m_);
  for (int pos = 0; pos < m_; ++pos) y[pos] = cost_[basic_[pos]];
  lu_.btran(y);
  for (int j = 0; j < n_; ++j) {
    if (status_[j] == VarStatus::Basic) {
      d_[j] = 0.0;
      continue;
    }
    double s = cost_[j];
    for (int p = a_.start[j]; p < a_.start[j + 1]; ++p) {
      s -= a_.value[p] * y[a_.index[p]];
    }
    d_[j] = s;
  }
  for (int i = 0; i < m_; ++i) {
    int j = n_ + i;
    d_[j] = status_[j] == VarStatus::Basic ? 0.0 : cost_[j] - y[i];
  }
}

void LpEngine::pivot_row(const std::vector<double>& rho) {
  for (int j : alpha_touched_) {
    alpha_row_[j] = 0.0;
    alpha_flag_[j] = 0;
  }
  alpha_touched_.clear();
  for (int i = 0; i < m_; ++i) {
    double ri = rho[i];
    if (std::abs(ri) < kZero) continue;
    for (int p = row_start_[i]; p < row_start_[i + 1]; ++p) {
      int j = row_index_[p];
      if (!alpha_flag_[j]) {
        alpha_flag_[j] = 1;
        alpha_touched_.push_back(j);
      }
      alpha_row_[j] += ri * row_value_[p];
    }
  }
}

double LpEngine::primal_infeasibility(int j) const {
  const double tol = config_.feasibility_tol;
  if (x_[j] < lo_[j] - tol) return lo_[j] - x_[j];
  if (x_[j] > up_[j] + tol) return x_[j] - up_[j];
  return 0.0;
}

double LpEngine::max_primal_infeasibility() const {
  double worst = 0.0;
  for (int pos = 0; pos < m_; ++pos) {
    worst = std::max(worst, primal_infeasibility(basic_[pos]));
  }
  return worst;
}

bool LpEngine::fix_dual_infeasibilities() {
  const double tol = config_.optimality_tol;
  bool flipped = false;
  for (int j = 0; j < total(); ++j) {
    if (status_[j] == VarStatus::Basic || is_fixed(j)) continue;
    if (status_[j] == VarStatus::AtLower && d_[j] < -tol) {
      if (std::isfinite(up_[j])) {
        status_[j] = VarStatus::AtUpper;
        x_[j] = up_[j];
        flipped = true;
      } else {
        shift_[j] -= d_[j];
        cost_[j] -= d_[j];
        d_[j] = 0.0;
        shifted_ = true;
      }
    } else if (status_[j] == VarStatus::AtUpper && d_[j] > tol) {
      if (std::isfinite(lo_[j])) {
        status_[j] = VarStatus::AtLower;
        x_[j] = lo_[j];
        flipped = true;
      } else {
        shift_[j] -= d_[j];
        cost_[j] -= d_[j];
        d_[j] = 0.0;
        shifted_ = true;
      }
    }
  }
  return flipped;
}

void LpEngine::remove_cost_shifts() {
  for (int j = 0; j < total(); ++j) {
    cost_[j] -= shift_[j];
    shift_[j] = 0.0;
  }
  shifted_ = false;
}

bool LpEngine::iteration_budget_left() const {
  return iterations_ < iteration_cap_;
}

void LpEngine::note_degenerate(bool degenerate) {
  if (!degenerate) {
    degenerate_run_ = 0;
    bland_ = false;
    return;
  }
  if (++degenerate_run_ >= config_.degenerate_threshold && !bland_) {
    bland_ = true;
    ++bland_switches_;
  }
}

// Dual degeneracy with near-zero costs stalls every ratio test at zero, and
// Bland alone crawls. Spread the nonbasic reduced costs apart first (wider on
// each repeat) and keep leaving variables off zero while perturbed. The
// shifts are removed and cleaned up by the primal before returning.
void LpEngine::perturb_costs() {
  perturb_scale_ = kPerturbation * std::pow(10.0, perturbations_++);
  degenerate_run_ = 0;
  for (int j = 0; j < total(); ++j) {
    if (status_[j] == VarStatus::Basic || is_fixed(j)) continue;
    perturb(j, 0);
  }
}

// Moves d_j away from zero on its feasible side by a pseudo-random amount.
void LpEngine::perturb(int j, std::uint64_t salt) {
  std::uint64_t h = (static_cast<std::uint64_t>(j) + salt * 0x9e3779b97f4a7c15ull) *
                    0xbf58476d1ce4e5b9ull;
  h ^= h >> 31;
  double u = 0.5 + 0.5 * static_cast<double>(h >> 11) * 0x1.0p-53;
  double target = perturb_scale_ * (1.0 + std::abs(cost_[j] - shift_[j])) * u;
  if (status_[j] == VarStatus::AtUpper) target = -target;
  if (std::abs(d_[j]) >= std::abs(target)) return;
  shift_[j] += target - d_[j];
  cost_[j] += target - d_[j];
  d_[j] = target;
  shifted_ = true;
}

int LpEngine::order_key(int j) const { return j >= n_ ? j - n_ : m_ + j; }

LpStatus LpEngine::solve() {
  iteration_cap_ = iterations_ + config_.iteration_limit;
  degenerate_run_ = 0;
  bland_ = false;
  perturbations_ = 0;
  return config_.lp_method == LpMethod::Dual ? solve_dual() : solve_primal();
}

LpStatus LpEngine::solve_dual() {
  if (iteration_cap_ <= iterations_) {
    iteration_cap_ = iterations_ + config_.iteration_limit;
  }
  cold_ = false;
  if (!factor_valid_) factorize();
  compute_primal();
  compute_duals();
  if (fix_dual_infeasibilities()) compute_primal();
  for (int round = 0; round < kMaxVerifyRounds; ++round) {
    LpStatus st = dual_loop();
    if (st != LpStatus::Optimal) {
      if (shifted_) remove_cost_shifts();
      return st;
    }
    factorize();
    compute_primal();
    compute_duals();
    if (fix_dual_infeasibilities()) compute_primal();
    if (max_primal_infeasibility() > 0.0) continue;
    if (shifted_) {
      remove_cost_shifts();
      compute_duals();
      return primal_loop();
    }
    return LpStatus::Optimal;
  }
  return LpStatus::IterationLimit;
}

LpStatus LpEngine::solve_primal() {
  if (iteration_cap_ <= iterations_) {
    iteration_cap_ = iterations_ + config_.iteration_limit;
  }
  if (shifted_) remove_cost_shifts();
  if (cold_) {
    // The cold start favours the dual; the primal starts at lower bounds.
    for (int j = 0; j < n_; ++j) {
      status_[j] = VarStatus::AtLower;
      set_nonbasic_value(j);
    }
    cold_ = false;
  }
  if (!factor_valid_) factorize();
  compute_primal();
  return primal_loop();
}

LpStatus LpEngine::dual_loop() {
  const double tol_d = config_.optimality_tol;
  std::vector<double> rho(m_), alpha(m_), tau(m_);
  bool retried = false;
  for (;;) {
    if (!iteration_budget_left()) return LpStatus::IterationLimit;
    if (refactor_due()) {
      factorize();
      compute_primal();
      compute_duals();
      if (fix_dual_infeasibilities()) compute_primal();
    }

    // Leaving row.
    int r = -1;
    double best = 0.0;
    for (int pos = 0; pos < m_; ++pos) {
      int j = basic_[pos];
      double inf = primal_infeasibility(j);
      if (inf <= 0.0) continue;
      if (bland_) {
        if (r < 0 || order_key(j) < order_key(basic_[r])) r = pos;
      } else {
        double score = inf * inf / weight_[pos];
        if (score > best) {
          best = score;
          r = pos;
        }
      }
    }
    if (r < 0) return LpStatus::Optimal;
    // The dual objective only grows, so a basis already past the cutoff
    // cannot lead anywhere useful.
    if (!shifted_ && std::isfinite(cutoff_) && iterations_ % 8 == 0) {
      double obj = 0.0;
      for (int j = 0; j < n_; ++j) obj += cost_[j] * x_[j];
      if (obj > cutoff_) return LpStatus::Cutoff;
    }

    const int p = basic_[r];
    const bool to_lower = x_[p] < lo_[p];
    const double target = to_lower ? lo_[p] : up_[p];
    std::fill(rho.begin(), rho.end(), 0.0);
    rho[r] = 1.0;
    lu_.btran(rho);
    pivot_row(rho);
    auto row_alpha = [&](int j) { return j < n_ ? alpha_row_[j] : rho[j - n_]; };
    const double sign = to_lower ? -1.0 : 1.0;

    // Ratio test over nonbasic candidates (touched structurals and logicals).
    auto for_each_candidate = [&](auto&& fn) {
      for (int j : alpha_touched_) {
        if (status_[j] == VarStatus::Basic || is_fixed(j)) continue;
        double a = sign * alpha_row_[j];
        if ((status_[j] == VarStatus::AtLower && a > kPivotTol) ||
            (status_[j] == VarStatus::AtUpper && a < -kPivotTol)) {
          fn(j, a);
        }
      }
      for (int i = 0; i < m_; ++i) {
        int j = n_ + i;
        if (status_[j] == VarStatus::Basic || is_fixed(j)) continue;
        double a = sign * rho[i];
        if ((status_[j] == VarStatus::AtLower && a > kPivotTol) ||
            (status_[j] == VarStatus::AtUpper && a < -kPivotTol)) {
          fn(j, a);
        }
      }
    };

    int q = -1;
    if (bland_ || config_.textbook_ratio_test) {
      double min_ratio = kInf;
      for_each_candidate([&](int j, double a) {
        double ratio = std::max(d_[j] / a, 0.0);
        if (ratio < min_ratio - 1e-12 ||
            (ratio <= min_ratio + 1e-12 && q >= 0 &&
             order_key(j) < order_key(q))) {
          if (ratio < min_ratio) min_ratio = ratio;
          q = j;
        } else if (q < 0) {
          min_ratio = ratio;
          q = j;
        }
      });
    } else {
      double theta_max = kInf;
      for_each_candidate([&](int j, double a) {
        double bound = a > 0.0 ? (d_[j] + tol_d) / a : (d_[j] - tol_d) / a;
        theta_max = std::min(theta_max, bound);
      });
      double best_mag = 0.0;
      for_each_candidate([&](int j, double a) {
        double ratio = d_[j] / a;
        if (ratio > theta_max) return;
        double mag = std::abs(a);
        if (mag > best_mag || (mag == best_mag && q >= 0 && order_key(j) < order_key(q))) {
          best_mag = mag;
          q = j;
        }
      });
    }

    if (q < 0) {
      if (!retried && lu_.num_updates() > 0) {
        retried = true;
        factorize();
        compute_primal();
        compute_duals();
        if (fix_dual_infeasibilities()) compute_primal();
        continue;
      }
      return LpStatus::Infeasible;
    }
    retried = false;

    const double alpha_rq = row_alpha(q);
    column(q, alpha);
    lu_.ftran(alpha);
    if (std::abs(alpha[r] - alpha_rq) > 1e-7 * (1.0 + std::abs(alpha[r])) ||
        std::abs(alpha[r]) < kPivotTol) {
      if (lu_.num_updates() == 0) {
        throw SolverError("unstable pivot in dual simplex");
      }
      factorize();
      compute_primal();
      compute_duals();
      if (fix_dual_infeasibilities()) compute_primal();
      continue;
    }
    const double pivot = alpha[r];
    // Harris may pick a reduced cost of slightly the wrong sign; a negative
    // step would undo dual progress, so shift that cost to zero instead.
    if (d_[q] * row_alpha(q) * sign < 0.0) {
      shift_[q] -= d_[q];
      cost_[q] -= d_[q];
      d_[q] = 0.0;
      shifted_ = true;
    }
    const double theta_d = d_[q] / pivot;

    tau = rho;
    lu_.ftran(tau);

    // Primal update.
    const double delta_q = -(target - x_[p]) / pivot;
    for (int pos = 0; pos < m_; ++pos) {
      if (alpha[pos] != 0.0) x_[basic_[pos]] -= alpha[pos] * delta_q;
    }
    x_[q] += delta_q;

    // Dual update.
    if (theta_d != 0.0) {
      for (int j : alpha_touched_) {
        if (status_[j] != VarStatus::Basic) d_[j] -= theta_d * alpha_row_[j];
      }
      for (int i = 0; i < m_; ++i) {
        int j = n_ + i;
        if (rho[i] != 0.0 && status_[j] != VarStatus::Basic) {
          d_[j] -= theta_d * rho[i];
        }
      }
    }
    d_[q] = 0.0;
    d_[p] = -theta_d;

    // Dual steepest edge weights.
    double wr = 0.0;
    for (double v : rho) wr += v * v;
    for (int pos = 0; pos < m_; ++pos) {
      if (pos == r || alpha[pos] == 0.0) continue;
      double k = alpha[pos] / pivot;
      weight_[pos] = std::max(weight_[pos] + k * (k * wr - 2.0 * tau[pos]), 1e-8);
    }
    weight_[r] = std::max(wr / (pivot * pivot), 1e-8);

    status_[p] = to_lower ? VarStatus::AtLower : VarStatus::AtUpper;
    if (perturbations_ > 0 && !is_fixed(p)) perturb(p, iterations_);
    x_[p] = target;
    pos_[p] = -1;
    basic_[r] = q;
    pos_[q] = r;
    status_[q] = VarStatus::Basic;
    lu_.update(r, alpha);
    ++iterations_;
    const bool degenerate = std::abs(theta_d) < 1e-12;
    if (degenerate && perturbations_ < kMaxPerturbations &&
        degenerate_run_ + 1 >= config_.degenerate_threshold) {
      perturb_costs();
    } else {
      note_degenerate(degenerate);
    }
  }
}

LpStatus LpEngine::primal_loop() {
  const double tol_p = config_.feasibility_tol;
  const double tol_d = config_.optimality_tol;
  std::vector<double> y(m_), alpha(m_);
  std::fill(weight_.begin(), weight_.end(), 1.0);
  int verify_rounds = 0;
  for (;;) {
    if (!iteration_budget_left()) return LpStatus::IterationLimit;
    if (refactor_due()) {
      factorize();
      compute_primal();
    }

    // Phase costs.
    bool phase_one = max_primal_infeasibility() > 0.0;
    for (int pos = 0; pos < m_; ++pos) {
      int j = basic_[pos];
      if (phase_one) {
        y[pos] = x_[j] < lo_[j] - tol_p ? -1.0 : (x_[j] > up_[j] + tol_p ? 1.0 : 0.0);
      } else {
        y[pos] = cost_[j];
      }
    }
    lu_.btran(y);
    for (int j = 0; j < total(); ++j) {
      if (status_[j] == VarStatus::Basic) {
        d_[j] = 0.0;
        continue;
      }
      double s = phase_one ? 0.0 : cost_[j];
      if (j < n_) {
        for (int p = a_.start[j]; p < a_.start[j + 1]; ++p) {
          s -= a_.value[p] * y[a_.index[p]];
        }
      } else {
        s -= y[j - n_];
      }
      d_[j] = s;
    }

    // Pricing.
    int q = -1;
    double best = 0.0;
    for (int j = 0; j < total(); ++j) {
      if (status_[j] == VarStatus::Basic || is_fixed(j)) continue;
      double dj = d_[j];
      bool eligible = (status_[j] == VarStatus::AtLower && dj < -tol_d &&
                       up_[j] > lo_[j]) ||
                      (status_[j] == VarStatus::AtUpper && dj > tol_d);
      if (!eligible) continue;
      if (bland_) {
        if (q < 0 || order_key(j) < order_key(q)) q = j;
      } else if (std::abs(dj) > best ||
                 (std::abs(dj) == best && q >= 0 && order_key(j) < order_key(q))) {
        best = std::abs(dj);
        q = j;
      }
    }
    if (q < 0) {
      // Confirm on a fresh factorization before declaring the outcome.
      if (lu_.num_updates() > 0 && verify_rounds < kMaxVerifyRounds) {
        ++verify_rounds;
        factorize();
        compute_primal();
        continue;
      }
      if (phase_one) return LpStatus::Infeasible;
      compute_duals();
      return LpStatus::Optimal;
    }

    const double dir = status_[q] == VarStatus::AtLower ? 1.0 : -1.0;
    column(q, alpha);
    lu_.ftran(alpha);

    // Ratio test. x_B moves by -dir * step * alpha.
    const double flip = up_[q] - lo_[q];
    const bool textbook = bland_ || config_.textbook_ratio_test || phase_one;
    int r = -1;
    double step = kInf;
    bool leave_to_upper = false;
    auto limit_for = [&](int pos, double& dist, bool& to_upper) -> bool {
      double a = alpha[pos];
      if (std::abs(a) < kPivotTol) return false;
      int j = basic_[pos];
      double rate = -dir * a;
      double xj = x_[j];
      if (phase_one && xj < lo_[j] - tol_p) {
        if (rate <= 0.0) return false;
        dist = (lo_[j] - xj) / rate;
        to_upper = false;
        return true;
      }
      if (phase_one && xj > up_[j] + tol_p) {
        if (rate >= 0.0) return false;
        dist = (xj - up_[j]) / -rate;
        to_upper = true;
        return true;
      }
      if (rate < 0.0) {
        if (!std::isfinite(lo_[j])) return false;
        dist = (xj - lo_[j]) / -rate;
        to_upper = false;
      } else {
        if (!std::isfinite(up_[j])) return false;
        dist = (up_[j] - xj) / rate;
        to_upper = true;
      }
      return true;
    };
    if (textbook) {
      for (int pos = 0; pos < m_; ++pos) {
        double dist;
        bool to_upper;
        if (!limit_for(pos, dist, to_upper)) continue;
        dist = std::max(dist, 0.0);
        if (r < 0 || dist < step - 1e-12 ||
            (dist <= step + 1e-12 && order_key(basic_[pos]) < order_key(basic_[r]))) {
          if (r < 0 || dist < step) step = dist;
          r = pos;
          leave_to_upper = to_upper;
        }
      }
    } else {
      double theta_max = kInf;
      for (int pos = 0; pos < m_; ++pos) {
        double dist;
        bool to_upper;
        if (!limit_for(pos, dist, to_upper)) continue;
        theta_max = std::min(theta_max, dist + tol_p / std::abs(alpha[pos]));
      }
      double best_mag = 0.0;
      for (int pos = 0; pos < m_; ++pos) {
        double dist;
        bool to_upper;
        if (!limit_for(pos, dist, to_upper)) continue;
        if (dist > theta_max) continue;
        double mag = std::abs(alpha[pos]);
        if (mag > best_mag) {
          best_mag = mag;
          r = pos;
          step = std::max(dist, 0.0);
          leave_to_upper = to_upper;
        }
      }
    }

    if (flip <= step) {
      // Bound flip of the entering variable.
      if (!std::isfinite(flip)) {
        throw SolverError("primal simplex: unbounded direction in a bounded model");
      }
      for (int pos = 0; pos < m_; ++pos) {
        if (alpha[pos] != 0.0) x_[basic_[pos]] -= dir * flip * alpha[pos];
      }
      status_[q] = status_[q] == VarStatus::AtLower ? VarStatus::AtUpper
                                                    : VarStatus::AtLower;
      x_[q] = status_[q] == VarStatus::AtLower ? lo_[q] : up_[q];
      ++iterations_;
      note_degenerate(false);
      continue;
    }
    if (r < 0) {
      throw SolverError("primal simplex: no blocking variable");
    }

    for (int pos = 0; pos < m_; ++pos) {
      if (alpha[pos] != 0.0) x_[basic_[pos]] -= dir * step * alpha[pos];
    }
    x_[q] += dir * step;
    const int p = basic_[r];
    status_[p] = leave_to_upper ? VarStatus::AtUpper : VarStatus::AtLower;
    x_[p] = leave_to_upper ? up_[p] : lo_[p];
    pos_[p] = -1;
    basic_[r] = q;
    pos_[q] = r;
    status_[q] = VarStatus::Basic;
    lu_.update(r, alpha);
    ++iterations_;
    note_degenerate(step < 1e-12);
  }
}

std::vector<double> LpEngine::values() const {
  std::vector<double> out(n_);
  for (int j = 0; j < n_; ++j) out[j] = x_[j] * col_scale_[j];
  return out;
}

double LpEngine::objective() const {
  double total = 0.0;
  for (int j = 0; j < n_; ++j) total += model_cost_[j] * x_[j] * col_scale_[j];
  return total;
}

Solution solve_lp_relaxation(const Model& model, const SolverConfig& config) {
  auto start = std::chrono::steady_clock::now();
  LpEngine engine(model, config);
  LpStatus st = engine.solve();
  Solution sol;
  sol.stats.simplex_iterations = engine.iterations();
  sol.stats.bland_switches = engine.bland_switches();
  sol.stats.lp_solves = 1;
  if (st == LpStatus::IterationLimit) {
    throw SolverError("simplex iteration limit reached");
  }
  if (st == LpStatus::Optimal) {
    sol.status = Status::Optimal;
    sol.values = engine.values();
    sol.objective_value = model.evaluate_objective(sol.values);
    sol.bound = sol.objective_value;
  } else {
    sol.status = Status::Infeasible;
  }
  sol.stats.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return sol;
}

}  // namespace bess::milp
