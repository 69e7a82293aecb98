#include "bess/milp/model.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>

#include "bess/error.hpp"

namespace bess::milp {

bool is_reserved_word(std::string_view name) noexcept {
  static constexpr std::array<std::string_view, 24> kKeywords = {
      "min",      "max",      "minimize", "maximize", "minimise", "maximise",
      "minimum",  "maximum",  "st",       "s.t.",     "subject",  "such",
      "bounds",   "bound",    "binary",   "binaries", "bin",      "general",
      "generals", "gen",      "end",      "free",     "inf",      "infinity"};
  if (name.size() > 16) return false;
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return std::find(kKeywords.begin(), kKeywords.end(), lower) !=
         kKeywords.end();
}

bool is_valid_name(std::string_view name) noexcept {
  if (name.empty() || name.size() > 255) return false;
  auto head = static_cast<unsigned char>(name.front());
  if (!(std::isalpha(head) || head == '_')) return false;
  for (char ch : name) {
    auto c = static_cast<unsigned char>(ch);
    if (!(std::isalnum(c) || c == '_' || c == '.' || c == '(' || c == ')')) {
      return false;
    }
  }
  return !is_reserved_word(name);
}

VarId Model::add_variable(VarKind kind, double lower, double upper,
                          std::string name) {
  if (std::isnan(lower) || std::isnan(upper)) {
    throw ModelError("variable bounds must not be NaN");
  }
  if (lower > upper) {
    throw ModelError("inverted bounds for variable '" + name + "': " +
                     std::to_string(lower) + " > " + std::to_string(upper));
  }
  if (kind == VarKind::Binary && (lower < 0.0 || upper > 1.0)) {
    throw ModelError("binary variable '" + name + "' has bounds outside [0,1]");
  }
  VarId id{static_cast<std::uint32_t>(vars_.size())};
  if (name.empty()) name = "x" + std::to_string(id.value);
  if (!is_valid_name(name)) {
    throw ModelError("invalid variable name '" + name + "'");
  }
  if (by_name_.contains(name)) {
    throw ModelError("duplicate variable name '" + name + "'");
  }
  by_name_.emplace(name, id);
  vars_.push_back({std::move(name), kind, lower, upper});
  cost_.push_back(0.0);
  return id;
}

void Model::check(VarId id) const {
  if (id.value >= vars_.size()) {
    throw ModelError("unknown variable id " + std::to_string(id.value));
  }
}

std::vector<Term> Model::normalize(const LinearExpr& expr,
                                   const char* what) const {
  std::vector<Term> terms = expr.terms();
  for (const Term& t : terms) {
    check(t.var);
    if (!std::isfinite(t.coef)) {
      throw ModelError(std::string("non-finite coefficient in ") + what +
                       " for variable '" + vars_[t.var.value].name + "'");
    }
  }
  std::stable_sort(terms.begin(), terms.end(),
                   [](const Term& a, const Term& b) { return a.var < b.var; });
  std::vector<Term> merged;
  merged.reserve(terms.size());
  for (const Term& t : terms) {
    if (!merged.empty() && merged.back().var == t.var) {
      merged.back().coef += t.coef;
    } else {
      merged.push_back(t);
    }
  }
  std::erase_if(merged, [](const Term& t) { return t.coef == 0.0; });
  return merged;
}

RowId Model::add_constraint(const LinearExpr& expr, Sense sense, double rhs,
                            std::string name) {
  if (!std::isfinite(rhs)) {
    throw ModelError("non-finite right-hand side in constraint '" + name + "'");
  }
  RowId id{static_cast<std::uint32_t>(rows_.size())};
  std::vector<Term> terms = normalize(expr, "constraint");
  if (name.empty()) name = "r" + std::to_string(id.value);
  if (!is_valid_name(name)) {
    throw ModelError("invalid constraint name '" + name + "'");
  }
  rows_.push_back({std::move(name), std::move(terms), sense, rhs});
  return id;
}

void Model::set_objective(const LinearExpr& expr) {
  std::vector<Term> terms = normalize(expr, "objective");
  std::fill(cost_.begin(), cost_.end(), 0.0);
  for (const Term& t : terms) cost_[t.var.value] = t.coef;
}

void Model::set_objective_coef(VarId var, double coef) {
  check(var);
  if (!std::isfinite(coef)) throw ModelError("non-finite objective coefficient");
  cost_[var.value] = coef;
}

void Model::set_bounds(VarId var, double lower, double upper) {
  check(var);
  Variable& v = vars_[var.value];
  if (std::isnan(lower) || std::isnan(upper) || lower > upper) {
    throw ModelError("invalid bounds for variable '" + v.name + "'");
  }
  if (v.kind == VarKind::Binary && (lower < 0.0 || upper > 1.0)) {
    throw ModelError("binary variable '" + v.name + "' has bounds outside [0,1]");
  }
  v.lower = lower;
  v.upper = upper;
}

std::size_t Model::num_binaries() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(vars_.begin(), vars_.end(), [](const Variable& v) {
        return v.kind == VarKind::Binary;
      }));
}

const Variable& Model::variable(VarId id) const {
  check(id);
  return vars_[id.value];
}

const Constraint& Model::constraint(RowId id) const {
  if (id.value >= rows_.size()) {
    throw ModelError("unknown constraint id " + std::to_string(id.value));
  }
  return rows_[id.value];
}

VarId Model::find_variable(std::string_view name) const {
  auto it = by_name_.find(std::string(name));
  if (it == by_name_.end()) {
    throw ModelError("unknown variable '" + std::string(name) + "'");
  }
  return it->second;
}

bool Model::has_variable(std::string_view name) const {
  return by_name_.contains(std::string(name));
}

bool Model::is_bounded() const noexcept {
  return std::all_of(vars_.begin(), vars_.end(), [](const Variable& v) {
    return std::isfinite(v.lower) && std::isfinite(v.upper);
  });
}

double Model::evaluate_objective(const std::vector<double>& values) const {
  double total = 0.0;
  for (std::size_t j = 0; j < cost_.size(); ++j) total += cost_[j] * values[j];
  return total;
}

double max_violation(const Model& model, const std::vector<double>& values) {
  double worst = 0.0;
  for (const Constraint& row : model.constraints()) {
    double activity = 0.0;
    double scale = 1.0;
    for (const Term& t : row.terms) {
      activity += t.coef * values[t.var.value];
      scale = std::max(scale, std::abs(t.coef));
    }
    double viol = 0.0;
    switch (row.sense) {
      case Sense::LessEqual: viol = activity - row.rhs; break;
      case Sense::GreaterEqual: viol = row.rhs - activity; break;
      case Sense::Equal: viol = std::abs(activity - row.rhs); break;
    }
    worst = std::max(worst, viol / scale);
  }
  const auto& vars = model.variables();
  for (std::size_t j = 0; j < vars.size(); ++j) {
    double x = values[j];
    if (x < vars[j].lower) {
      worst = std::max(worst, (vars[j].lower - x) /
                                  std::max(1.0, std::abs(vars[j].lower)));
    }
    if (x > vars[j].upper) {
      worst = std::max(worst, (x - vars[j].upper) /
                                  std::max(1.0, std::abs(vars[j].upper)));
    }
  }
  return worst;
}

double max_integrality_violation(const Model& model,
                                 const std::vector<double>& values) {
  double worst = 0.0;
  const auto& vars = model.variables();
  for (std::size_t j = 0; j < vars.size(); ++j) {
    if (vars[j].kind != VarKind::Binary) continue;
    worst = std::max(worst, std::abs(values[j] - std::round(values[j])));
  }
  return worst;
}

}  // namespace bess::milp
