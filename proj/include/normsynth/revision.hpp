/*!
  \file revision.hpp
  \brief Minimal revision of a reference norm against labeled traces: the
         symmetric-difference distance, the bounded decision form, and exact
         minimization.
*/

#pragma once

#include "synthesis.hpp"

namespace normsynth {

/*! \brief Symmetric-difference distance: the number of states added to or
 *         removed from the three sets, summed. Ranges over [0, 3·|S|]. */
inline std::size_t distance(const state_set_triple& a, const state_set_triple& b) {
  if (a.kind != b.kind)
    throw std::invalid_argument("distance requires triples of the same kind");
  if (a.condition.size() != b.condition.size())
    throw std::invalid_argument("distance requires triples over the same universe");
  std::size_t total = 0;
  for (std::size_t i = 0; i < a.condition.size(); ++i) {
    total += a.condition[i] != b.condition[i] ? 1 : 0;
    total += a.target[i] != b.target[i] ? 1 : 0;
    total += a.deadline[i] != b.deadline[i] ? 1 : 0;
  }
  return total;
}

/*! \brief Restrict a norm to set form by evaluating its three formulas on
 *         every universe state. Distances are always measured between such
 *         projections. */
inline state_set_triple project_norm_to_triple(const conditional_norm& n,
                                               const std::vector<state>& univ) {
  const std::size_t size = univ.size();
  state_set_triple t{n.kind, std::vector<bool>(size), std::vector<bool>(size),
                     std::vector<bool>(size)};
  for (std::size_t i = 0; i < size; ++i) {
    t.condition[i] = eval_formula(n.condition, univ[i]);
    t.target[i] = eval_formula(n.target, univ[i]);
    t.deadline[i] = eval_formula(n.deadline, univ[i]);
  }
  return t;
}

struct revision_solution {
  state_set_triple reference;  // the projected reference norm
  state_set_triple revised;
  conditional_norm norm;  // induced by the revised triple
  std::size_t distance;
};

struct revision_result {
  std::optional<revision_solution> solution;
  engine_stats stats;
};

/*! \brief Find a triple that classifies Γ correctly within edit distance
 *         \p max_distance of the reference norm, or — when \p max_distance is
 *         empty — at the minimum feasible distance.
 *
 * Each feasibility probe augments the synthesis encoding with one-directional
 * mismatch indicators against the projected reference and a cardinality bound.
 * Minimization binary-searches the bound over [0, 3|S|] and re-solves at the
 * minimum, so the reported triple is independent of the search path. An empty
 * result means no triple within the budget exists; with no budget this
 * coincides with plain synthesis infeasibility.
 */
inline revision_result revise(const labeled_trace_set& ts, const conditional_norm& reference,
                              std::optional<std::size_t> max_distance = std::nullopt,
                              std::uint64_t step_budget = default_step_budget) {
  const auto univ = universe(ts);
  const std::size_t n = univ.size();
  const auto ref = project_norm_to_triple(reference, univ);
  const auto ref_bit = [&](std::size_t index) {
    const std::size_t component = index / n;
    const std::size_t state_index = index % n;
    return component == 0   ? ref.condition[state_index]
           : component == 1 ? ref.target[state_index]
                            : ref.deadline[state_index];
  };

  revision_result result;
  auto probe = [&](std::size_t bound) -> std::optional<state_set_triple> {
    cnf_system sys = encode_synthesis(ts, reference.kind, univ);
    std::vector<lit> mismatch;
    mismatch.reserve(3 * n);
    for (std::size_t index = 0; index < 3 * n; ++index) {
      const lit mu = sys.new_variable(var_role::mismatch, index);
      const lit core = static_cast<lit>(index + 1);
      // deviating from the reference bit forces the indicator on
      sys.add_clause(ref_bit(index) ? clause{core, mu} : clause{-core, mu});
      mismatch.push_back(mu);
    }
    sys.add_at_most_k(mismatch, bound);
    const auto outcome = solve(sys, step_budget);
    result.stats.variables = sys.variable_count();
    result.stats.clauses = sys.clauses().size();
    result.stats.decisions += outcome.stats.decisions;
    if (!outcome.satisfiable)
      return std::nullopt;
    return decode_model(sys, outcome, n, reference.kind);
  };

  std::optional<state_set_triple> revised;
  std::optional<std::size_t> found_minimum;
  if (max_distance) {
    revised = probe(std::min(*max_distance, 3 * n));
  } else {
    if (probe(3 * n)) {
      std::size_t lo = 0, hi = 3 * n;
      while (lo < hi) {
        const std::size_t mid = lo + (hi - lo) / 2;
        if (probe(mid))
          hi = mid;
        else
          lo = mid + 1;
      }
      revised = probe(lo);
      if (!revised)
        throw std::logic_error("revision bound search lost a feasible bound");
      found_minimum = lo;
    }
  }
  if (revised) {
    if (verify_triple(*revised, ts, univ))
      throw std::logic_error("revised norm failed verification");
    const std::size_t dist = distance(*revised, ref);
    if (max_distance && dist > *max_distance)
      throw std::logic_error("revised norm exceeded the distance budget");
    if (found_minimum && dist != *found_minimum)
      throw std::logic_error("revised norm misses the minimal distance");
    result.solution =
        revision_solution{ref, *revised, triple_to_norm(*revised, univ, ts.vocab), dist};
  }
  return result;
}

}  // namespace normsynth
