#pragma once

// Solver-agnostic integer-program construction for the four dotted-board
// formulations, plus the edge and vertex clique coverings they rely on and
// an assignment checker that stands in for an external MILP solver.

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "nesting/conflict.hpp"
#include "nesting/dotgrid.hpp"

namespace nesting {

enum class VarKind { Binary, Continuous };
enum class Sense { LessEqual, Equal, GreaterEqual };

struct ModelVariable {
  std::string name;
  VarKind kind = VarKind::Binary;
  double lower = 0.0;
  double upper = 1.0;
};

struct LinearTerm {
  double coeff = 0.0;
  int var = 0;
};

struct LinearConstraint {
  std::string name;
  std::vector<LinearTerm> terms;
  Sense sense = Sense::LessEqual;
  double rhs = 0.0;
};

struct LinearModel {
  std::string name;
  std::vector<ModelVariable> variables;
  std::vector<LinearConstraint> constraints;
  std::vector<LinearTerm> objective;  // minimization

  int add_variable(ModelVariable v) {
    variables.push_back(std::move(v));
    return static_cast<int>(variables.size()) - 1;
  }
  int find_variable(const std::string& name) const {
    for (std::size_t i = 0; i < variables.size(); ++i)
      if (variables[i].name == name) return static_cast<int>(i);
    return -1;
  }
};

struct Violation {
  std::string constraint;
  double lhs = 0.0;
  Sense sense = Sense::LessEqual;
  double rhs = 0.0;
};

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Evaluates every constraint of the model against a full assignment.
inline std::vector<Violation> check_assignment(
    const LinearModel& model, const std::vector<double>& assignment,
    double tol = 1e-6) {
  if (assignment.size() != model.variables.size())
    throw InputError("assignment does not cover all variables");
  std::vector<Violation> out;
  for (const LinearConstraint& c : model.constraints) {
    double lhs = 0.0;
    for (const LinearTerm& t : c.terms)
      lhs += t.coeff * assignment[static_cast<std::size_t>(t.var)];
    bool ok = true;
    switch (c.sense) {
      case Sense::LessEqual: ok = lhs <= c.rhs + tol; break;
      case Sense::Equal: ok = std::abs(lhs - c.rhs) <= tol; break;
      case Sense::GreaterEqual: ok = lhs >= c.rhs - tol; break;
    }
    if (!ok) out.push_back({c.name, lhs, c.sense, c.rhs});
  }
  // variable bounds
  for (std::size_t i = 0; i < model.variables.size(); ++i) {
    const ModelVariable& v = model.variables[i];
    if (assignment[i] < v.lower - tol || assignment[i] > v.upper + tol)
      out.push_back({"bound(" + v.name + ")", assignment[i],
                     Sense::LessEqual, v.upper});
  }
  return out;
}

namespace detail {

inline std::string placement_var_name(const Board& b,
                                      const PlacementVariable& v) {
  return "x_t" + std::to_string(v.type_id) + "_r" +
         std::to_string(v.rotation_id) + "_c" +
         std::to_string(b.dot_col(v.dot)) + "_y" +
         std::to_string(b.dot_row(v.dot));
}

// Adds one binary per placement variable, in table order.
inline void add_placement_variables(LinearModel& model, const Board& board,
                                    const VariableTable& table) {
  for (const PlacementVariable& v : table.vars)
    model.add_variable({placement_var_name(board, v), VarKind::Binary, 0, 1});
}

inline void add_demand_constraints(LinearModel& model,
                                   const Instance& inst,
                                   const VariableTable& table) {
  for (std::size_t t = 0; t < inst.types.size(); ++t) {
    LinearConstraint c;
    c.name = "dem_t" + std::to_string(t);
    c.sense = Sense::Equal;
    c.rhs = inst.types[t].demand;
    const auto [start, end] = table.type_ranges[t];
    for (int v = start; v < end; ++v) c.terms.push_back({1.0, v});
    model.constraints.push_back(std::move(c));
  }
}

}  // namespace detail

// DB model: min L subject to inner-fit bounds per variable, demand
// equalities, one edge inequality per conflict pair and L in [lb, ub].
inline LinearModel build_db_model(const Instance& inst,
                                  const VariableTable& table,
                                  const std::vector<std::pair<int, int>>& edges,
                                  double trivial_lb) {
  LinearModel model;
  model.name = inst.name + "_db";
  detail::add_placement_variables(model, inst.board, table);
  const int length_var = model.add_variable(
      {"L", VarKind::Continuous, trivial_lb, inst.board.length_ub});
  model.objective = {{1.0, length_var}};

  for (int v = 0; v < table.size(); ++v) {
    LinearConstraint c;
    c.name = "fit_v" + std::to_string(v);
    c.sense = Sense::LessEqual;
    c.rhs = 0.0;
    c.terms = {{table.bounds[static_cast<std::size_t>(v)], v},
               {-1.0, length_var}};
    model.constraints.push_back(std::move(c));
  }
  detail::add_demand_constraints(model, inst, table);
  int n = 0;
  for (const auto& [v, w] : edges) {
    LinearConstraint c;
    c.name = "e" + std::to_string(n++);
    c.sense = Sense::LessEqual;
    c.rhs = 1.0;
    c.terms = {{1.0, v}, {1.0, w}};
    model.constraints.push_back(std::move(c));
  }
  return model;
}

struct CliqueCover {
  std::vector<std::vector<int>> cliques;
};

namespace detail {

inline std::vector<BitVector> adjacency_bitsets(
    int v_count, const std::vector<std::pair<int, int>>& edges) {
  std::vector<BitVector> adj(static_cast<std::size_t>(v_count),
                             BitVector(static_cast<std::size_t>(v_count)));
  for (const auto& [v, w] : edges) {
    adj[static_cast<std::size_t>(v)].set(static_cast<std::size_t>(w));
    adj[static_cast<std::size_t>(w)].set(static_cast<std::size_t>(v));
  }
  return adj;
}

}  // namespace detail

// Greedy edge clique cover: scan edges; for each uncovered one, grow a
// maximal clique inside the common neighborhood, taking the largest-degree
// candidate first; mark every clique-internal edge covered.
inline CliqueCover edge_clique_cover(
    int v_count, const std::vector<std::pair<int, int>>& edges) {
  const std::vector<BitVector> adj = detail::adjacency_bitsets(v_count, edges);
  std::vector<std::size_t> degree(static_cast<std::size_t>(v_count));
  for (int v = 0; v < v_count; ++v)
    degree[static_cast<std::size_t>(v)] =
        adj[static_cast<std::size_t>(v)].popcount();

  std::map<std::pair<int, int>, bool> covered;
  for (const auto& e : edges) covered[e] = false;

  CliqueCover cover;
  for (const auto& [v, w] : edges) {
    if (covered[{v, w}]) continue;
    std::vector<int> clique = {v, w};
    BitVector common = adj[static_cast<std::size_t>(v)];
    common.and_assign(adj[static_cast<std::size_t>(w)]);
    while (true) {
      int best = -1;
      for (int u = 0; u < v_count; ++u) {
        if (!common.test(static_cast<std::size_t>(u))) continue;
        if (best < 0 || degree[static_cast<std::size_t>(u)] >
                            degree[static_cast<std::size_t>(best)])
          best = u;
      }
      if (best < 0) break;
      clique.push_back(best);
      common.and_assign(adj[static_cast<std::size_t>(best)]);
    }
    std::sort(clique.begin(), clique.end());
    for (std::size_t i = 0; i < clique.size(); ++i)
      for (std::size_t j = i + 1; j < clique.size(); ++j)
        covered[{clique[i], clique[j]}] = true;
    cover.cliques.push_back(std::move(clique));
  }
  return cover;
}

// Vertex clique cover of the subgraph induced by variables whose length
// bound exceeds the lower bound: RLF coloring of the complement, so each
// color class is a clique of the induced conflict subgraph.
inline CliqueCover vertex_clique_cover(
    int v_count, const std::vector<std::pair<int, int>>& edges,
    const std::vector<double>& bounds, double trivial_lb,
    double eps = k_eps_geom) {
  std::vector<int> tail;  // variables with bound > lb
  std::vector<int> pos(static_cast<std::size_t>(v_count), -1);
  for (int v = 0; v < v_count; ++v) {
    if (bounds[static_cast<std::size_t>(v)] > trivial_lb + eps) {
      pos[static_cast<std::size_t>(v)] = static_cast<int>(tail.size());
      tail.push_back(v);
    }
  }
  const int n = static_cast<int>(tail.size());
  CliqueCover cover;
  if (n == 0) return cover;

  // complement of the induced conflict subgraph
  std::vector<BitVector> comp(static_cast<std::size_t>(n),
                              BitVector(static_cast<std::size_t>(n), true));
  for (int i = 0; i < n; ++i) {
    comp[static_cast<std::size_t>(i)].reset(static_cast<std::size_t>(i));
  }
  for (const auto& [v, w] : edges) {
    const int i = pos[static_cast<std::size_t>(v)];
    const int j = pos[static_cast<std::size_t>(w)];
    if (i >= 0 && j >= 0) {
      comp[static_cast<std::size_t>(i)].reset(static_cast<std::size_t>(j));
      comp[static_cast<std::size_t>(j)].reset(static_cast<std::size_t>(i));
    }
  }

  BitVector uncolored(static_cast<std::size_t>(n), true);
  while (!uncolored.none()) {
    // seed: uncolored vertex of maximum degree within the uncolored set
    int seed = -1;
    std::size_t best_deg = 0;
    for (int i = 0; i < n; ++i) {
      if (!uncolored.test(static_cast<std::size_t>(i))) continue;
      BitVector d = comp[static_cast<std::size_t>(i)];
      d.and_assign(uncolored);
      const std::size_t deg = d.popcount();
      if (seed < 0 || deg > best_deg) {
        seed = i;
        best_deg = deg;
      }
    }
    std::vector<int> cls = {seed};
    BitVector candidates = uncolored;  // independent-in-complement candidates
    candidates.reset(static_cast<std::size_t>(seed));
    // remove complement-neighbors of the seed
    for (int i = 0; i < n; ++i)
      if (comp[static_cast<std::size_t>(seed)].test(
              static_cast<std::size_t>(i)))
        candidates.reset(static_cast<std::size_t>(i));
    while (!candidates.none()) {
      // RLF: prefer the candidate with most complement-neighbors among the
      // still-uncolored vertices outside the candidate set
      int best = -1;
      std::size_t best_score = 0;
      for (int i = 0; i < n; ++i) {
        if (!candidates.test(static_cast<std::size_t>(i))) continue;
        BitVector outside = uncolored;
        for (std::size_t w = 0; w < outside.word_count(); ++w)
          outside.word(w) &= ~candidates.word(w);
        outside.and_assign(comp[static_cast<std::size_t>(i)]);
        const std::size_t score = outside.popcount();
        if (best < 0 || score > best_score) {
          best = i;
          best_score = score;
        }
      }
      cls.push_back(best);
      candidates.reset(static_cast<std::size_t>(best));
      for (int i = 0; i < n; ++i)
        if (comp[static_cast<std::size_t>(best)].test(
                static_cast<std::size_t>(i)))
          candidates.reset(static_cast<std::size_t>(i));
    }
    std::vector<int> clique;
    for (int i : cls) {
      clique.push_back(tail[static_cast<std::size_t>(i)]);
      uncolored.reset(static_cast<std::size_t>(i));
    }
    std::sort(clique.begin(), clique.end());
    cover.cliques.push_back(std::move(clique));
  }
  return cover;
}

// DB-CC model: vertex-clique inner-fit constraints, demand equalities,
// one <= 1 constraint per edge clique, L in [lb, ub].
inline LinearModel build_dbcc_model(const Instance& inst,
                                    const VariableTable& table,
                                    const CliqueCover& ecc,
                                    const CliqueCover& vcc,
                                    double trivial_lb) {
  LinearModel model;
  model.name = inst.name + "_dbcc";
  detail::add_placement_variables(model, inst.board, table);
  const int length_var = model.add_variable(
      {"L", VarKind::Continuous, trivial_lb, inst.board.length_ub});
  model.objective = {{1.0, length_var}};

  int n = 0;
  for (const std::vector<int>& clique : vcc.cliques) {
    // lb + sum (bound_v - lb) x_v <= L
    LinearConstraint c;
    c.name = "vk" + std::to_string(n++);
    c.sense = Sense::LessEqual;
    c.rhs = -trivial_lb;
    for (int v : clique)
      c.terms.push_back(
          {table.bounds[static_cast<std::size_t>(v)] - trivial_lb, v});
    c.terms.push_back({-1.0, length_var});
    model.constraints.push_back(std::move(c));
  }
  detail::add_demand_constraints(model, inst, table);
  n = 0;
  for (const std::vector<int>& clique : ecc.cliques) {
    LinearConstraint c;
    c.name = "ek" + std::to_string(n++);
    c.sense = Sense::LessEqual;
    c.rhs = 1.0;
    for (int v : clique) c.terms.push_back({1.0, v});
    model.constraints.push_back(std::move(c));
  }
  return model;
}

namespace detail {

// Shared tail of the two 0-1 models: ladder chain, activation constraints
// and the all-binary objective.
inline void add_ladder_machinery(LinearModel& model, const Instance& inst,
                                 const VariableTable& table,
                                 const LengthLadder& ladder) {
  const int n_pieces = inst.total_pieces();
  std::vector<int> z_vars;
  for (int m = 0; m < ladder.size(); ++m) {
    z_vars.push_back(
        model.add_variable({"z" + std::to_string(m + 1), VarKind::Binary, 0, 1}));
  }
  for (int m = 1; m < ladder.size(); ++m) {
    LinearConstraint c;
    c.name = "chain" + std::to_string(m + 1);
    c.sense = Sense::LessEqual;
    c.rhs = 0.0;
    c.terms = {{1.0, z_vars[static_cast<std::size_t>(m)]},
               {-1.0, z_vars[static_cast<std::size_t>(m - 1)]}};
    model.constraints.push_back(std::move(c));
  }
  for (int m = 0; m < ladder.size(); ++m) {
    LinearConstraint c;
    c.name = "act" + std::to_string(m + 1);
    c.sense = Sense::LessEqual;
    c.rhs = 0.0;
    const double level = ladder.values[static_cast<std::size_t>(m)];
    for (int v = 0; v < table.size(); ++v) {
      if (table.bounds[static_cast<std::size_t>(v)] >= level - k_eps_geom)
        c.terms.push_back({1.0, v});
    }
    c.terms.push_back(
        {-static_cast<double>(n_pieces), z_vars[static_cast<std::size_t>(m)]});
    model.constraints.push_back(std::move(c));
  }
  model.objective.clear();
  for (int z : z_vars) model.objective.push_back({1.0, z});
}

}  // namespace detail

// 0-1 DB model: all-binary with the length ladder replacing the continuous
// L; pairwise edge inequalities for non-overlap.
inline LinearModel build_binary_db_model(
    const Instance& inst, const VariableTable& table,
    const std::vector<std::pair<int, int>>& edges, const LengthLadder& ladder) {
  LinearModel model;
  model.name = inst.name + "_bdb";
  detail::add_placement_variables(model, inst.board, table);
  detail::add_demand_constraints(model, inst, table);
  int n = 0;
  for (const auto& [v, w] : edges) {
    LinearConstraint c;
    c.name = "e" + std::to_string(n++);
    c.sense = Sense::LessEqual;
    c.rhs = 1.0;
    c.terms = {{1.0, v}, {1.0, w}};
    model.constraints.push_back(std::move(c));
  }
  detail::add_ladder_machinery(model, inst, table, ladder);
  return model;
}

// 0-1 DB-CC model: as 0-1 DB but with edge-clique constraints replacing the
// pairwise edges.
inline LinearModel build_binary_dbcc_model(const Instance& inst,
                                           const VariableTable& table,
                                           const CliqueCover& ecc,
                                           const LengthLadder& ladder) {
  LinearModel model;
  model.name = inst.name + "_bdbcc";
  detail::add_placement_variables(model, inst.board, table);
  detail::add_demand_constraints(model, inst, table);
  int n = 0;
  for (const std::vector<int>& clique : ecc.cliques) {
    LinearConstraint c;
    c.name = "ek" + std::to_string(n++);
    c.sense = Sense::LessEqual;
    c.rhs = 1.0;
    for (int v : clique) c.terms.push_back({1.0, v});
    model.constraints.push_back(std::move(c));
  }
  detail::add_ladder_machinery(model, inst, table, ladder);
  return model;
}

// Length recovery for the 0-1 models: L = lb when no ladder step is active,
// otherwise the ladder value indexed by the objective.
inline double recover_length(const LengthLadder& ladder, int z_objective) {
  if (z_objective == 0) return ladder.trivial_lb;
  return ladder.values[static_cast<std::size_t>(z_objective - 1)];
}

}  // namespace nesting
