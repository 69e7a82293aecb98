#include <array>
#include <chrono>
#include <cmath>
#include <limits>
#include <memory>
#include <queue>
#include <string>
#include <vector>

#include "bess/error.hpp"
#include "bess/milp/simplex.hpp"
#include "bess/milp/solver.hpp"

namespace bess::milp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

using Clock = std::chrono::steady_clock;

struct Node {
  std::shared_ptr<const Node> parent;
  int var = -1;  // branching variable fixed at this node, -1 for the root
  double value = 0.0;
  double bound = -kInf;  // LP bound inherited from the parent
  std::uint64_t id = 0;
  int depth = 0;
  std::shared_ptr<const Basis> start;  // parent's optimal basis
};

using NodePtr = std::shared_ptr<const Node>;

struct NodeOrder {
  bool operator()(const NodePtr& a, const NodePtr& b) const {
    if (a->bound != b->bound) return a->bound > b->bound;
    return a->id > b->id;
  }
};

class BranchAndBound {
 public:
  BranchAndBound(const Model& model, const SolverConfig& config)
      : model_(model), config_(config), engine_(model, config) {
    for (std::size_t j = 0; j < model.num_variables(); ++j) {
      if (model.variable(VarId{static_cast<std::uint32_t>(j)}).kind ==
          VarKind::Binary) {
        binaries_.push_back(static_cast<int>(j));
      }
    }
  }

  /// Seeds the incumbent with a known integral point, polished like any
  /// other incumbent. Returns false if the point violates the model.
  bool seed(const std::vector<double>& start);

  Solution run();

 private:
  double gap_tolerance() const {
    return config_.relative_gap * std::max(1.0, std::abs(incumbent_obj_));
  }
  bool out_of_time() const {
    if (!config_.time_limit_seconds) return false;
    return std::chrono::duration<double>(Clock::now() - start_).count() >
           *config_.time_limit_seconds;
  }
  void install_bounds(const Node& node);
  // Most fractional binary, or -1 when the LP point is integral.
  int pick_branch(const std::vector<double>& x) const;
  void try_incumbent(const std::vector<double>& x, double obj);

  const Model& model_;
  SolverConfig config_;
  LpEngine engine_;
  std::vector<int> binaries_;
  std::vector<int> touched_;
  Clock::time_point start_ = Clock::now();

  std::vector<double> incumbent_;
  double incumbent_obj_ = kInf;
  const Node* warm_ = nullptr;  // node whose optimal basis the engine holds
  std::uint64_t lp_solves_ = 0;
};

void BranchAndBound::install_bounds(const Node& node) {
  for (int j : touched_) {
    const Variable& v = model_.variable(VarId{static_cast<std::uint32_t>(j)});
    engine_.set_bounds(j, v.lower, v.upper);
  }
  touched_.clear();
  for (const Node* n = &node; n != nullptr && n->var >= 0; n = n->parent.get()) {
    engine_.set_bounds(n->var, n->value, n->value);
    touched_.push_back(n->var);
  }
}

int BranchAndBound::pick_branch(const std::vector<double>& x) const {
  int best = -1;
  double best_frac = config_.integrality_tol;
  for (int j : binaries_) {
    double f = std::abs(x[j] - std::round(x[j]));
    if (f > best_frac) {
      best_frac = f;
      best = j;
    }
  }
  return best;
}

void BranchAndBound::try_incumbent(const std::vector<double>& x, double obj) {
  if (obj >= incumbent_obj_) return;
  // Snap binaries and re-solve the remaining LP so the stored point carries
  // exact 0/1 values with the continuous part consistent with them.
  for (int j : binaries_) {
    double v = std::round(x[j]);
    engine_.set_bounds(j, v, v);
    touched_.push_back(j);
  }
  engine_.set_objective_cutoff(kInf);
  warm_ = nullptr;
  ++lp_solves_;
  std::vector<double> values;
  double value = obj;
  if (engine_.solve_dual() == LpStatus::Optimal) {
    values = engine_.values();
    for (int j : binaries_) values[j] = std::round(values[j]);
    value = model_.evaluate_objective(values);
  } else {
    values = x;
  }
  if (value < incumbent_obj_) {
    incumbent_ = std::move(values);
    incumbent_obj_ = value;
  }
}

bool BranchAndBound::seed(const std::vector<double>& start) {
  if (max_integrality_violation(model_, start) > config_.integrality_tol ||
      max_violation(model_, start) > config_.feasibility_tol) {
    return false;
  }
  try_incumbent(start, model_.evaluate_objective(start));
  return true;
}

Solution BranchAndBound::run() {
  Solution sol;
  std::priority_queue<NodePtr, std::vector<NodePtr>, NodeOrder> open;
  std::uint64_t next_id = 0;
  std::uint64_t nodes = 0;
  double pruned_bound = kInf;  // smallest bound among nodes closed by the gap rule
  Status status = Status::Optimal;

  auto root = std::make_shared<Node>();
  root->id = next_id++;
  open.push(root);

  // Until an incumbent exists, nodes are taken depth-first from `dive`.
  std::vector<NodePtr> dive;
  const bool plunge = config_.plunge_until_incumbent;
  auto flush_dive = [&] {
    for (NodePtr& n : dive) open.push(std::move(n));
    dive.clear();
  };
  while (!open.empty() || !dive.empty()) {
    if (!dive.empty() && std::isfinite(incumbent_obj_)) flush_dive();
    const bool diving = !dive.empty();
    NodePtr node = diving ? dive.back() : open.top();
    if (!diving && std::isfinite(incumbent_obj_) &&
        node->bound >= incumbent_obj_ - gap_tolerance()) {
      break;  // every open node is within the gap
    }
    if (nodes >= config_.node_limit) {
      status = Status::NodeLimit;
      break;
    }
    if (out_of_time()) {
      status = Status::GapLimit;
      break;
    }
    if (diving) {
      dive.pop_back();
    } else {
      open.pop();
    }
    ++nodes;

    install_bounds(*node);
    // A child evaluated right after its parent reuses the live factorization.
    if (node->start && node->parent.get() != warm_) engine_.set_basis(*node->start);
    warm_ = nullptr;
    const double cutoff = incumbent_obj_ - gap_tolerance();
    engine_.set_objective_cutoff(cutoff);
    ++lp_solves_;
    LpStatus st = engine_.solve_dual();
    if (st == LpStatus::IterationLimit) {
      throw SolverError("simplex iteration limit reached at branch-and-bound node");
    }
    if (st == LpStatus::Infeasible) continue;
    if (st == LpStatus::Cutoff) {
      pruned_bound = std::min(pruned_bound, std::max(node->bound, cutoff));
      continue;
    }
    std::vector<double> x = engine_.values();
    double obj = engine_.objective();
    if (obj >= cutoff) {
      pruned_bound = std::min(pruned_bound, obj);
      continue;
    }
    int j = pick_branch(x);
    if (j < 0) {
      try_incumbent(x, obj);
      continue;
    }
    auto basis = std::make_shared<const Basis>(engine_.basis());
    warm_ = node.get();  // kept alive by the children below
    // The child on the rounding side of the LP value goes first.
    const double first = x[j] >= 0.5 ? 1.0 : 0.0;
    const bool to_dive = plunge && !std::isfinite(incumbent_obj_);
    // A dive stack pops last-in first, so push the preferred child last.
    for (double v : to_dive ? std::array{1.0 - first, first} : std::array{first, 1.0 - first}) {
      auto child = std::make_shared<Node>();
      child->parent = node;
      child->var = j;
      child->value = v;
      child->bound = obj;
      child->id = next_id++;
      child->depth = node->depth + 1;
      child->start = basis;
      if (to_dive) {
        dive.push_back(std::move(child));
      } else {
        open.push(std::move(child));
      }
    }
  }

  flush_dive();
  double bound = std::min(incumbent_obj_, pruned_bound);
  if (!open.empty()) bound = std::min(bound, open.top()->bound);

  sol.stats.nodes = nodes;
  sol.stats.lp_solves = lp_solves_;
  sol.stats.simplex_iterations = engine_.iterations();
  sol.stats.bland_switches = engine_.bland_switches();
  if (std::isfinite(incumbent_obj_)) {
    sol.values = incumbent_;
    sol.objective_value = incumbent_obj_;
    sol.bound = bound;
    sol.gap = std::max(0.0, incumbent_obj_ - bound) /
              std::max(1.0, std::abs(incumbent_obj_));
    sol.status = status;
  } else {
    sol.status = status == Status::Optimal ? Status::Infeasible : status;
    sol.bound = bound;
    sol.gap = kInf;
  }
  return sol;
}

}  // namespace

Solution solve(const Model& model, const SolverConfig& config) {
  return solve(model, config, {});
}

Solution solve(const Model& model, const SolverConfig& config,
               const std::vector<double>& start) {
  config.validate();
  if (!start.empty() && start.size() != model.num_variables()) {
    throw ModelError("start point has " + std::to_string(start.size()) +
                     " values for " + std::to_string(model.num_variables()) +
                     " variables");
  }
  const auto clock_start = Clock::now();
  Solution sol;
  if (model.num_binaries() == 0) {
    sol = solve_lp_relaxation(model, config);
  } else {
    BranchAndBound bb(model, config);
    if (!start.empty()) bb.seed(start);
    sol = bb.run();
  }
  sol.stats.wall_seconds =
      std::chrono::duration<double>(Clock::now() - clock_start).count();
  return sol;
}

}  // namespace bess::milp
