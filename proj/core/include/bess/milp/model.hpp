#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace bess::milp {

/// Index of a variable inside a Model. Ids are dense and follow insertion order.
struct VarId {
  std::uint32_t value = 0;

  friend bool operator==(VarId, VarId) = default;
  friend auto operator<=>(VarId, VarId) = default;
};

/// Index of a constraint inside a Model.
struct RowId {
  std::uint32_t value = 0;

  friend bool operator==(RowId, RowId) = default;
  friend auto operator<=>(RowId, RowId) = default;
};

enum class VarKind : std::uint8_t { Continuous, Binary };
enum class Sense : std::uint8_t { LessEqual, Equal, GreaterEqual };

struct Term {
  VarId var;
  double coef = 0.0;
};

/// Sum of coefficient * variable terms. Repeated variables are merged when the
/// expression is handed to the model.
class LinearExpr {
 public:
  LinearExpr() = default;
  LinearExpr(std::initializer_list<Term> terms) : terms_(terms) {}

  LinearExpr& add(VarId var, double coef) {
    terms_.push_back({var, coef});
    return *this;
  }

  const std::vector<Term>& terms() const noexcept { return terms_; }
  bool empty() const noexcept { return terms_.empty(); }

 private:
  std::vector<Term> terms_;
};

struct Variable {
  std::string name;
  VarKind kind = VarKind::Continuous;
  double lower = 0.0;
  double upper = 0.0;
};

struct Constraint {
  std::string name;
  std::vector<Term> terms;  // merged, sorted by variable id, no zeros
  Sense sense = Sense::LessEqual;
  double rhs = 0.0;
};

/// A minimization MILP over continuous and binary variables.
class Model {
 public:
  /// Throws ModelError on inverted bounds, binary bounds outside [0,1],
  /// NaN bounds, an invalid name, or a duplicate name. An empty name is
  /// replaced by "x<id>".
  VarId add_variable(VarKind kind, double lower, double upper,
                     std::string name = {});

  /// Throws ModelError on unknown variables or non-finite data. Terms of the
  /// same variable are summed; zero coefficients are dropped. An empty name is
  /// replaced by "r<id>".
  RowId add_constraint(const LinearExpr& expr, Sense sense, double rhs,
                       std::string name = {});

  /// Replaces the objective (always minimized).
  void set_objective(const LinearExpr& expr);
  void set_objective_coef(VarId var, double coef);

  void set_bounds(VarId var, double lower, double upper);

  std::size_t num_variables() const noexcept { return vars_.size(); }
  std::size_t num_constraints() const noexcept { return rows_.size(); }
  std::size_t num_binaries() const noexcept;

  const Variable& variable(VarId id) const;
  const Constraint& constraint(RowId id) const;
  const std::vector<Variable>& variables() const noexcept { return vars_; }
  const std::vector<Constraint>& constraints() const noexcept { return rows_; }

  /// Dense objective coefficient vector, one entry per variable.
  const std::vector<double>& objective() const noexcept { return cost_; }

  /// Returns the id of the named variable, or throws ModelError.
  VarId find_variable(std::string_view name) const;
  bool has_variable(std::string_view name) const;

  /// True when every variable has finite bounds.
  bool is_bounded() const noexcept;

  double evaluate_objective(const std::vector<double>& values) const;

 private:
  std::vector<Term> normalize(const LinearExpr& expr, const char* what) const;
  void check(VarId id) const;

  std::vector<Variable> vars_;
  std::vector<Constraint> rows_;
  std::vector<double> cost_;
  std::unordered_map<std::string, VarId> by_name_;
};

/// Section and bound words of the LP text format (case-insensitive).
bool is_reserved_word(std::string_view name) noexcept;

/// Returns true if `name` is usable as an LP-format identifier.
bool is_valid_name(std::string_view name) noexcept;

/// Largest constraint or bound violation of `values`, each row violation
/// normalized by the row's largest absolute coefficient and each bound
/// violation by max(1, |bound|).
double max_violation(const Model& model, const std::vector<double>& values);

/// Largest distance of a binary variable from {0, 1}.
double max_integrality_violation(const Model& model,
                                 const std::vector<double>& values);

}  // namespace bess::milp
