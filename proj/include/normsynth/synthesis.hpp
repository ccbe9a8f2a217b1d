/*!
  \file synthesis.hpp
  \brief Exact norm synthesis from labeled traces: CNF encodings over the
         state universe, model decoding, solution verification, and a
         brute-force enumerating oracle.
*/

#pragma once

#include "monitor.hpp"
#include "satcore.hpp"

#include <map>
#include <optional>

namespace normsynth {

/*! \brief Set-form candidate solution: membership masks over the universe
 *         for the condition set X_C, the target set (X_P or X_O), and the
 *         deadline set X_D. */
struct state_set_triple {
  norm_kind kind;
  std::vector<bool> condition;
  std::vector<bool> target;
  std::vector<bool> deadline;

  bool operator==(const state_set_triple&) const = default;
};

inline std::vector<state> selected_states(const std::vector<bool>& mask,
                                          const std::vector<state>& univ) {
  if (mask.size() != univ.size())
    throw std::invalid_argument("membership mask does not match universe size");
  std::vector<state> out;
  for (std::size_t i = 0; i < mask.size(); ++i)
    if (mask[i])
      out.push_back(univ[i]);
  return out;
}

/*! \brief The conditional norm induced by a triple: each component becomes
 *         the disjunction of its members' state descriptions, so unobserved
 *         states fall outside all three sets. */
inline conditional_norm triple_to_norm(const state_set_triple& t, const std::vector<state>& univ,
                                       const vocabulary& vocab) {
  return conditional_norm{t.kind, formula_from_state_set(selected_states(t.condition, univ), vocab),
                          formula_from_state_set(selected_states(t.target, univ), vocab),
                          formula_from_state_set(selected_states(t.deadline, univ), vocab)};
}

/*! \brief CNF whose models are exactly the correctly classifying triples.
 *
 * Core variables are laid out role-major over the universe: condition
 * 1..n, target n+1..2n, deadline 2n+1..3n. Every negative trace contributes
 * one witness variable per index pair i ≤ j with one-directional defining
 * clauses (witness → its conjuncts) and a requirement clause demanding some
 * witness; every positive trace contributes a blocking clause per pair.
 * The deadline window is strict (i < k < j) for prohibitions and inclusive
 * (i ≤ k ≤ j, over the target set) for obligations.
 */
inline cnf_system encode_synthesis(const labeled_trace_set& ts, norm_kind kind,
                                   const std::vector<state>& univ) {
  cnf_system sys;
  const std::size_t n = univ.size();
  std::map<state, std::size_t> position;
  for (std::size_t i = 0; i < n; ++i)
    position.emplace(univ[i], i);
  std::vector<lit> cond(n), targ(n), dead(n);
  for (std::size_t i = 0; i < n; ++i)
    cond[i] = sys.new_variable(var_role::condition, i);
  for (std::size_t i = 0; i < n; ++i)
    targ[i] = sys.new_variable(var_role::target, i);
  for (std::size_t i = 0; i < n; ++i)
    dead[i] = sys.new_variable(var_role::deadline, i);

  auto positions_of = [&](const trace& rho) {
    std::vector<std::size_t> out;
    out.reserve(rho.size());
    for (const auto& s : rho) {
      const auto it = position.find(s);
      if (it == position.end())
        throw std::invalid_argument("trace state missing from the universe");
      out.push_back(it->second);
    }
    return out;
  };

  const bool prohibition = kind == norm_kind::prohibition;
  for (const auto& rho : ts.negative) {
    const auto at = positions_of(rho);
    clause requirement;
    for (std::size_t i = 0; i < at.size(); ++i) {
      for (std::size_t j = i; j < at.size(); ++j) {
        const lit w = sys.new_variable(var_role::witness);
        sys.add_clause({-w, cond[at[i]]});
        sys.add_clause({-w, prohibition ? targ[at[j]] : dead[at[j]]});
        if (prohibition) {
          for (std::size_t k = i + 1; k < j; ++k)
            sys.add_clause({-w, -dead[at[k]]});
        } else {
          for (std::size_t k = i; k <= j; ++k)
            sys.add_clause({-w, -targ[at[k]]});
        }
        requirement.push_back(w);
      }
    }
    sys.add_clause(std::move(requirement));
  }
  for (const auto& rho : ts.positive) {
    const auto at = positions_of(rho);
    for (std::size_t i = 0; i < at.size(); ++i) {
      for (std::size_t j = i; j < at.size(); ++j) {
        clause c{-cond[at[i]], prohibition ? -targ[at[j]] : -dead[at[j]]};
        if (prohibition) {
          for (std::size_t k = i + 1; k < j; ++k)
            c.push_back(dead[at[k]]);
        } else {
          for (std::size_t k = i; k <= j; ++k)
            c.push_back(targ[at[k]]);
        }
        sys.add_clause(std::move(c));
      }
    }
  }
  return sys;
}

inline cnf_system encode_prohibition(const labeled_trace_set& ts) {
  return encode_synthesis(ts, norm_kind::prohibition, universe(ts));
}

inline cnf_system encode_obligation(const labeled_trace_set& ts) {
  return encode_synthesis(ts, norm_kind::obligation, universe(ts));
}

/*! \brief Read the core variables of a model back into a triple; witness and
 *         other auxiliary variables are skipped by their role annotation. */
inline state_set_triple decode_model(const cnf_system& sys, const sat_outcome& outcome,
                                     std::size_t universe_size, norm_kind kind) {
  state_set_triple t{kind, std::vector<bool>(universe_size, false),
                     std::vector<bool>(universe_size, false),
                     std::vector<bool>(universe_size, false)};
  for (std::size_t v = 1; v <= sys.variable_count(); ++v) {
    if (!outcome.model.at(v))
      continue;
    const auto& info = sys.info(static_cast<lit>(v));
    switch (info.role) {
    case var_role::condition: t.condition.at(info.state_index) = true; break;
    case var_role::target: t.target.at(info.state_index) = true; break;
    case var_role::deadline: t.deadline.at(info.state_index) = true; break;
    default: break;
    }
  }
  return t;
}

enum class trace_side : std::uint8_t { negative, positive };

/*! \brief First trace misclassified by a candidate triple: a negative trace
 *         the induced norm fails to violate, or a positive trace it violates
 *         (with the violation witness). */
struct verify_counterexample {
  trace_side side;
  std::size_t trace_index;
  std::optional<violation_witness> witness;
};

/*! \brief Check a triple against every trace with the monitor on the induced
 *         norm. Returns nullopt when every negative trace is violated and no
 *         positive trace is; otherwise the first offending trace, negatives
 *         scanned first. */
inline std::optional<verify_counterexample> verify_triple(const state_set_triple& t,
                                                          const labeled_trace_set& ts,
                                                          const std::vector<state>& univ) {
  const auto norm = triple_to_norm(t, univ, ts.vocab);
  for (std::size_t i = 0; i < ts.negative.size(); ++i)
    if (!check_norm(norm, ts.negative[i]))
      return verify_counterexample{trace_side::negative, i, std::nullopt};
  for (std::size_t i = 0; i < ts.positive.size(); ++i)
    if (const auto w = check_norm(norm, ts.positive[i]))
      return verify_counterexample{trace_side::positive, i, w};
  return std::nullopt;
}

namespace detail {

/// traces rewritten as sequences of universe positions
struct indexed_traces {
  std::vector<std::vector<std::size_t>> positive;
  std::vector<std::vector<std::size_t>> negative;
};

inline indexed_traces index_traces(const labeled_trace_set& ts, const std::vector<state>& univ) {
  std::map<state, std::size_t> position;
  for (std::size_t i = 0; i < univ.size(); ++i)
    position.emplace(univ[i], i);
  indexed_traces out;
  auto convert = [&](const std::vector<trace>& traces, std::vector<std::vector<std::size_t>>& to) {
    for (const auto& t : traces) {
      std::vector<std::size_t> at;
      at.reserve(t.size());
      for (const auto& s : t)
        at.push_back(position.at(s));
      to.push_back(std::move(at));
    }
  };
  convert(ts.positive, out.positive);
  convert(ts.negative, out.negative);
  return out;
}

/*! \brief Verdict-only violation check reading set membership directly; the
 *         same single pass as the monitor, minus formula evaluation and
 *         witness bookkeeping. Equivalence with verify_triple is covered by
 *         tests. */
inline bool mask_violates(const state_set_triple& t, const std::vector<std::size_t>& at) {
  if (t.kind == norm_kind::prohibition) {
    bool open = false;
    for (const std::size_t s : at) {
      const bool cond = t.condition[s];
      open = open || cond;
      if (open && t.target[s])
        return true;
      if (t.deadline[s])
        open = cond;
    }
    return false;
  }
  bool open = false;
  for (const std::size_t s : at) {
    if (t.target[s])
      open = false;
    else if (t.condition[s])
      open = true;
    if (open && t.deadline[s])
      return true;
  }
  return false;
}

inline bool mask_classifies(const state_set_triple& t, const indexed_traces& ix) {
  for (const auto& at : ix.negative)
    if (!mask_violates(t, at))
      return false;
  for (const auto& at : ix.positive)
    if (mask_violates(t, at))
      return false;
  return true;
}

}  // namespace detail

/*! \brief Enumerate all 2^(3|S|) triples in ascending canonical order (mask
 *         bits: condition, then target, then deadline) and return every one
 *         that classifies Γ correctly. Guarded by a bit cap (default 18,
 *         i.e. |S| ≤ 6). */
inline std::vector<state_set_triple> brute_force_synthesize(const labeled_trace_set& ts,
                                                            norm_kind kind,
                                                            std::size_t bit_cap = 18) {
  const auto univ = universe(ts);
  const std::size_t n = univ.size();
  if (3 * n > bit_cap)
    throw resource_limit_error("brute-force synthesis needs 3*" + std::to_string(n) +
                               " candidate bits, above the cap of " + std::to_string(bit_cap));
  const auto ix = detail::index_traces(ts, univ);
  std::vector<state_set_triple> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << (3 * n)); ++mask) {
    state_set_triple t{kind, std::vector<bool>(n), std::vector<bool>(n), std::vector<bool>(n)};
    for (std::size_t i = 0; i < n; ++i) {
      t.condition[i] = (mask >> i) & 1;
      t.target[i] = (mask >> (n + i)) & 1;
      t.deadline[i] = (mask >> (2 * n + i)) & 1;
    }
    if (detail::mask_classifies(t, ix))
      out.push_back(std::move(t));
  }
  return out;
}

enum class synthesis_engine : std::uint8_t { sat, brute };

struct engine_stats {
  std::size_t variables = 0;
  std::size_t clauses = 0;
  std::uint64_t decisions = 0;
};

struct synthesis_solution {
  state_set_triple triple;
  conditional_norm norm;
  bool trivial = false;  // no negative traces: the never-detached norm suffices
};

struct synthesis_result {
  std::optional<synthesis_solution> solution;
  engine_stats stats;
};

/*! \brief Synthesize a norm violated on every negative trace and on no
 *         positive trace, or report that none exists over S(Γ).
 *
 * Both engines are complete; the returned triple is re-verified against every
 * trace before returning (a failure would be a bug, raised as logic_error).
 * With no negative traces the all-empty triple is returned and flagged
 * trivial.
 */
inline synthesis_result synthesize(const labeled_trace_set& ts, norm_kind kind,
                                   synthesis_engine engine = synthesis_engine::sat,
                                   std::uint64_t step_budget = default_step_budget) {
  const auto univ = universe(ts);
  synthesis_result result;
  std::optional<state_set_triple> triple;
  if (engine == synthesis_engine::sat) {
    const auto sys = encode_synthesis(ts, kind, univ);
    result.stats.variables = sys.variable_count();
    result.stats.clauses = sys.clauses().size();
    const auto outcome = solve(sys, step_budget);
    result.stats.decisions = outcome.stats.decisions;
    if (outcome.satisfiable)
      triple = decode_model(sys, outcome, univ.size(), kind);
  } else {
    const auto all = brute_force_synthesize(ts, kind);
    result.stats.decisions = std::uint64_t(1) << (3 * univ.size());
    if (!all.empty())
      triple = all.front();
  }
  if (triple) {
    if (verify_triple(*triple, ts, univ))
      throw std::logic_error("synthesized norm failed verification");
    result.solution =
        synthesis_solution{*triple, triple_to_norm(*triple, univ, ts.vocab), ts.negative.empty()};
  }
  return result;
}

}  // namespace normsynth
