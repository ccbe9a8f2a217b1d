/*!
  \file reductions.hpp
  \brief 3SAT-to-synthesis instance generators (prohibition and obligation
         variants), converters between satisfying assignments and solution
         triples, a random 3SAT generator, and an enumerating 3SAT oracle.
*/

#pragma once

#include "synthesis.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>

namespace normsynth {

/*! \brief A 3SAT instance: clauses of exactly three signed variable indices
 *         over variables 1..num_variables. Repeated and complementary
 *         literals within a clause are permitted. */
struct three_sat_instance {
  std::size_t num_variables = 0;
  std::vector<std::array<int, 3>> clauses;

  bool operator==(const three_sat_instance&) const = default;
};

/// How gadget states are told apart: one proposition per state, or a binary
/// code over ⌈log₂(2m+2)⌉ propositions.
enum class gadget_encoding : std::uint8_t { one_hot, binary };

/*! \brief A generated synthesis instance together with the map from gadget
 *         names to states: the anchors s and t plus u_i/v_i per variable
 *         (u_i ≙ x_i true, v_i ≙ x_i false). */
struct reduction_artifacts {
  labeled_trace_set traces;
  state s_state;
  state t_state;
  std::vector<state> u_states;
  std::vector<state> v_states;
};

namespace detail {

inline void validate_3sat(const three_sat_instance& phi) {
  if (phi.num_variables < 1)
    throw std::invalid_argument("a 3SAT instance needs at least one variable");
  for (const auto& c : phi.clauses)
    for (const int l : c)
      if (l == 0 || static_cast<std::size_t>(l > 0 ? l : -l) > phi.num_variables)
        throw std::invalid_argument("3SAT literal outside the declared variables");
}

struct gadget_states {
  vocabulary vocab;
  state s, t;
  std::vector<state> u, v;
};

inline gadget_states make_gadget_states(std::size_t m, gadget_encoding encoding) {
  if (encoding == gadget_encoding::one_hot) {
    std::vector<std::string> names{"q_s", "q_t"};
    for (std::size_t i = 1; i <= m; ++i) {
      names.push_back("q_u" + std::to_string(i));
      names.push_back("q_v" + std::to_string(i));
    }
    const std::size_t props = names.size();
    auto one_hot = [&](std::size_t hot) {
      std::vector<bool> bits(props, false);
      bits[hot] = true;
      return state(std::move(bits));
    };
    gadget_states g{vocabulary(std::move(names)), one_hot(0), one_hot(1), {}, {}};
    for (std::size_t i = 1; i <= m; ++i) {
      g.u.push_back(one_hot(2 * i));
      g.v.push_back(one_hot(2 * i + 1));
    }
    return g;
  }
  // binary codes: s = 0, t = 1, u_i = 2i, v_i = 2i + 1
  std::size_t bits = 1;
  while ((std::size_t(1) << bits) < 2 * m + 2)
    ++bits;
  std::vector<std::string> names;
  for (std::size_t b = 0; b < bits; ++b)
    names.push_back("b" + std::to_string(b));
  auto coded = [&](std::size_t code) {
    std::vector<bool> values(bits);
    for (std::size_t b = 0; b < bits; ++b)
      values[b] = (code >> b) & 1;
    return state(std::move(values));
  };
  gadget_states g{vocabulary(std::move(names)), coded(0), coded(1), {}, {}};
  for (std::size_t i = 1; i <= m; ++i) {
    g.u.push_back(coded(2 * i));
    g.v.push_back(coded(2 * i + 1));
  }
  return g;
}

inline reduction_artifacts generate_reduction(const three_sat_instance& phi,
                                              gadget_encoding encoding, bool prohibition) {
  validate_3sat(phi);
  const std::size_t m = phi.num_variables;
  auto g = make_gadget_states(m, encoding);

  std::vector<trace> negative;
  negative.push_back({g.s, g.t});
  for (std::size_t i = 0; i < m; ++i)
    negative.push_back({g.s, g.v[i], g.t, g.s, g.u[i], g.t});

  std::vector<trace> positive;
  positive.push_back({g.s});
  positive.push_back({g.t});
  if (prohibition) {
    for (std::size_t i = 0; i < m; ++i) {
      positive.push_back({g.s, g.v[i], g.u[i], g.t});
      positive.push_back({g.v[i]});
      positive.push_back({g.u[i]});
      positive.push_back({g.v[i], g.t});
      positive.push_back({g.u[i], g.t});
      positive.push_back({g.s, g.v[i]});
      positive.push_back({g.s, g.u[i]});
    }
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = i + 1; j < m; ++j) {
        positive.push_back({g.v[i], g.u[j]});
        positive.push_back({g.u[j], g.v[i]});
      }
  } else {
    for (std::size_t i = 0; i < m; ++i)
      positive.push_back({g.s, g.v[i], g.u[i], g.t});
  }
  auto truth_state = [&](int literal) {
    const std::size_t i = static_cast<std::size_t>(literal > 0 ? literal : -literal) - 1;
    return literal > 0 ? g.u[i] : g.v[i];
  };
  for (const auto& c : phi.clauses)
    positive.push_back({g.s, truth_state(c[0]), truth_state(c[1]), truth_state(c[2]), g.t});

  return reduction_artifacts{
      labeled_trace_set{std::move(g.vocab), std::move(positive), std::move(negative)},
      std::move(g.s), std::move(g.t), std::move(g.u), std::move(g.v)};
}

}  // namespace detail

/*! \brief Synthesis instance solvable as a prohibition iff \p phi is
 *         satisfiable: 1 + m negative traces, 2 + 7m + m(m−1) + n positive
 *         traces (endpoint anchors, per-variable gadgets, both orders of each
 *         unordered variable pair, one trace per clause). */
inline reduction_artifacts gen_prohibition(const three_sat_instance& phi,
                                           gadget_encoding encoding = gadget_encoding::one_hot) {
  return detail::generate_reduction(phi, encoding, true);
}

/*! \brief Obligation-flavored variant: the fulfilling state stands between s
 *         and t instead of a deadline. 1 + m negative and 2 + m + n positive
 *         traces. */
inline reduction_artifacts gen_obligation(const three_sat_instance& phi,
                                          gadget_encoding encoding = gadget_encoding::one_hot) {
  return detail::generate_reduction(phi, encoding, false);
}

namespace detail {

inline std::map<state, std::size_t> universe_positions(const reduction_artifacts& artifacts) {
  const auto univ = universe(artifacts.traces);
  std::map<state, std::size_t> position;
  for (std::size_t i = 0; i < univ.size(); ++i)
    position.emplace(univ[i], i);
  return position;
}

}  // namespace detail

/*! \brief The intended solution for a satisfying assignment: X_C = {s}, the
 *         target anchored at t, and u_i (x_i true) or v_i (x_i false) in the
 *         discharging set — X_D for prohibitions, X_O for obligations. */
inline state_set_triple assignment_to_triple(const std::vector<bool>& assignment,
                                             const reduction_artifacts& artifacts,
                                             norm_kind kind) {
  if (assignment.size() != artifacts.u_states.size())
    throw std::invalid_argument("assignment length does not match the instance variables");
  const auto position = detail::universe_positions(artifacts);
  const std::size_t n = position.size();
  state_set_triple t{kind, std::vector<bool>(n), std::vector<bool>(n), std::vector<bool>(n)};
  t.condition[position.at(artifacts.s_state)] = true;
  const std::size_t t_pos = position.at(artifacts.t_state);
  auto& endpoint = kind == norm_kind::prohibition ? t.target : t.deadline;
  auto& discharge = kind == norm_kind::prohibition ? t.deadline : t.target;
  endpoint[t_pos] = true;
  for (std::size_t i = 0; i < assignment.size(); ++i) {
    const auto& chosen = assignment[i] ? artifacts.u_states[i] : artifacts.v_states[i];
    discharge[position.at(chosen)] = true;
  }
  return t;
}

/*! \brief Read an assignment back from a solution triple: x_i is true iff u_i
 *         is in the discharging set. The triple must actually solve the
 *         generated instance (checked; invalid_argument otherwise). */
inline std::vector<bool> triple_to_assignment(const state_set_triple& t,
                                              const reduction_artifacts& artifacts) {
  if (verify_triple(t, artifacts.traces, universe(artifacts.traces)))
    throw std::invalid_argument("triple does not solve the generated instance");
  const auto position = detail::universe_positions(artifacts);
  const auto& discharge = t.kind == norm_kind::prohibition ? t.deadline : t.target;
  std::vector<bool> assignment(artifacts.u_states.size());
  for (std::size_t i = 0; i < assignment.size(); ++i)
    assignment[i] = discharge[position.at(artifacts.u_states[i])];
  return assignment;
}

/*! \brief Enumerate assignments in ascending order and return the first
 *         satisfying one, or nullopt. Capped at \p max_variables (default 20)
 *         to keep 2^m enumeration honest. */
inline std::optional<std::vector<bool>> sat3_oracle(const three_sat_instance& phi,
                                                    std::size_t max_variables = 20) {
  detail::validate_3sat(phi);
  if (phi.num_variables > max_variables)
    throw resource_limit_error("3SAT oracle capped at " + std::to_string(max_variables) +
                               " variables");
  const std::size_t m = phi.num_variables;
  for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << m); ++mask) {
    bool all = true;
    for (const auto& c : phi.clauses) {
      bool any = false;
      for (const int l : c) {
        const bool v = (mask >> (static_cast<std::size_t>(l > 0 ? l : -l) - 1)) & 1;
        any = any || (l > 0 ? v : !v);
      }
      if (!any) {
        all = false;
        break;
      }
    }
    if (all) {
      std::vector<bool> assignment(m);
      for (std::size_t i = 0; i < m; ++i)
        assignment[i] = (mask >> i) & 1;
      return assignment;
    }
  }
  return std::nullopt;
}

/*! \brief Uniform random 3SAT: each clause draws three variables with
 *         replacement and independent signs, reproducibly from the seed
 *         (identical across platforms; no distribution objects involved). */
inline three_sat_instance random_3sat(std::size_t num_variables, std::size_t num_clauses,
                                      std::uint64_t seed) {
  if (num_variables < 1 || num_clauses < 1)
    throw std::invalid_argument("random 3SAT needs at least one variable and one clause");
  std::mt19937 rng(static_cast<std::mt19937::result_type>(seed));
  const auto range = static_cast<std::uint32_t>(num_variables);
  const std::uint32_t limit = (0xFFFFFFFFu / range) * range;
  auto uniform_variable = [&] {
    while (true) {
      const std::uint32_t r = rng();
      if (r < limit)
        return static_cast<int>(1 + r % range);
    }
  };
  three_sat_instance phi{num_variables, {}};
  for (std::size_t c = 0; c < num_clauses; ++c) {
    std::array<int, 3> literals{};
    for (auto& l : literals) {
      const int variable = uniform_variable();
      l = (rng() & 1) ? -variable : variable;
    }
    phi.clauses.push_back(literals);
  }
  return phi;
}

/*! \brief DIMACS CNF text of the instance for external cross-checking. */
inline std::string to_dimacs(const three_sat_instance& phi) {
  std::string out = "p cnf " + std::to_string(phi.num_variables) + " " +
                    std::to_string(phi.clauses.size()) + "\n";
  for (const auto& c : phi.clauses) {
    for (const int l : c) {
      out += std::to_string(l);
      out += ' ';
    }
    out += "0\n";
  }
  return out;
}

}  // namespace normsynth
