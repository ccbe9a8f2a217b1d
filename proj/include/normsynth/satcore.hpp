/*!
  \file satcore.hpp
  \brief CNF constraint systems with variable role annotations, cardinality
         constraints, DIMACS export, and a complete backtracking solver with
         unit propagation.
*/

#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace normsynth {

/// Signed variable reference: +v is the variable, -v its negation; v ≥ 1.
using lit = std::int32_t;
using clause = std::vector<lit>;

/*! \brief Raised when a configured step or size budget runs out; distinct
 *         from an unsatisfiable outcome. */
class resource_limit_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/*! \brief What a variable stands for; lets model decoding skip auxiliaries. */
enum class var_role : std::uint8_t { condition, target, deadline, witness, mismatch, counter };

struct var_info {
  var_role role = var_role::counter;
  std::size_t state_index = 0;
};

/*! \brief A conjunctive-normal-form system under construction.
 *
 * Variables are handed out densely starting at 1. Clauses keep their
 * insertion order; duplicate literals within a clause are dropped. An empty
 * clause is accepted and makes the system trivially unsatisfiable.
 */
class cnf_system {
public:
  lit new_variable(var_info info = {}) {
    info_.push_back(info);
    return static_cast<lit>(info_.size());
  }

  lit new_variable(var_role role, std::size_t state_index = 0) {
    return new_variable(var_info{role, state_index});
  }

  void add_clause(clause c) {
    clause deduped;
    for (const lit l : c) {
      if (l == 0 || var_of(l) > variable_count())
        throw std::invalid_argument("literal references an unknown variable");
      if (std::find(deduped.begin(), deduped.end(), l) == deduped.end())
        deduped.push_back(l);
    }
    clauses_.push_back(std::move(deduped));
  }

  /*! \brief Constrain at most \p k of \p literals to be true, using the
   *         sequential-counter construction: O(|literals|·k) clauses and
   *         fresh counter variables. k = 0 emits unit negations; k ≥ n
   *         emits nothing. */
  void add_at_most_k(std::span<const lit> literals, std::size_t k) {
    for (const lit l : literals)
      if (l == 0 || var_of(l) > variable_count())
        throw std::invalid_argument("literal references an unknown variable");
    const std::size_t n = literals.size();
    if (k >= n)
      return;
    if (k == 0) {
      for (const lit l : literals)
        add_clause({-l});
      return;
    }
    // count[i][j] ≙ at least j+1 of the first i+1 literals are true
    std::vector<std::vector<lit>> count(n - 1, std::vector<lit>(k));
    for (auto& row : count)
      for (auto& v : row)
        v = new_variable(var_role::counter);
    add_clause({-literals[0], count[0][0]});
    for (std::size_t j = 1; j < k; ++j)
      add_clause({-count[0][j]});
    for (std::size_t i = 1; i + 1 < n; ++i) {
      add_clause({-literals[i], count[i][0]});
      add_clause({-count[i - 1][0], count[i][0]});
      for (std::size_t j = 1; j < k; ++j) {
        add_clause({-literals[i], -count[i - 1][j - 1], count[i][j]});
        add_clause({-count[i - 1][j], count[i][j]});
      }
      add_clause({-literals[i], -count[i - 1][k - 1]});
    }
    add_clause({-literals[n - 1], -count[n - 2][k - 1]});
  }

  std::size_t variable_count() const { return info_.size(); }
  const std::vector<clause>& clauses() const { return clauses_; }
  const var_info& info(lit v) const { return info_.at(var_of(v) - 1); }

  /*! \brief Standard DIMACS CNF text for debugging with external tools. */
  std::string to_dimacs() const {
    std::string out = "p cnf " + std::to_string(variable_count()) + " " +
                      std::to_string(clauses_.size()) + "\n";
    for (const auto& c : clauses_) {
      for (const lit l : c) {
        out += std::to_string(l);
        out += ' ';
      }
      out += "0\n";
    }
    return out;
  }

  static std::uint32_t var_of(lit l) { return static_cast<std::uint32_t>(l < 0 ? -l : l); }

private:
  std::vector<var_info> info_;
  std::vector<clause> clauses_;
};

struct sat_stats {
  std::uint64_t decisions = 0;
  std::uint64_t propagations = 0;
};

/*! \brief Complete decision: satisfiable with a total model, or unsatisfiable.
 *         Models index by variable number (entry 0 unused). */
struct sat_outcome {
  bool satisfiable = false;
  std::vector<bool> model;
  sat_stats stats;

  bool value(lit l) const {
    const auto v = cnf_system::var_of(l);
    return l > 0 ? model.at(v) : !model.at(v);
  }
};

inline constexpr std::uint64_t default_step_budget = 200'000'000;

namespace detail {

/*! \brief Chronological backtracking search with two-watched-literal unit
 *         propagation. Branching is deterministic: lowest-index unassigned
 *         variable, false before true. */
class dpll_search {
public:
  dpll_search(const cnf_system& sys, std::uint64_t budget)
      : num_vars_(sys.variable_count()), budget_(budget) {
    values_.assign(num_vars_ + 1, 0);
    watches_.assign(2 * (num_vars_ + 1), {});
    for (const auto& c : sys.clauses()) {
      if (c.empty()) {
        contradiction_ = true;
      } else if (c.size() == 1) {
        units_.push_back(c[0]);
      } else {
        const std::size_t index = clauses_.size();
        clauses_.push_back(c);
        watch_list(c[0]).push_back(index);
        watch_list(c[1]).push_back(index);
      }
    }
  }

  sat_outcome run() {
    if (contradiction_)
      return {false, {}, stats_};
    for (const lit u : units_)
      if (!assign(u))
        return {false, {}, stats_};
    if (!propagate())
      return {false, {}, stats_};

    struct decision {
      std::uint32_t variable;
      std::size_t trail_size;
      bool flipped;
    };
    std::vector<decision> decisions;
    std::uint32_t next_var = 1;
    while (true) {
      while (next_var <= num_vars_ && values_[next_var] != 0)
        ++next_var;
      if (next_var > num_vars_) {
        std::vector<bool> model(num_vars_ + 1, false);
        for (std::uint32_t v = 1; v <= num_vars_; ++v)
          model[v] = values_[v] > 0;
        return {true, std::move(model), stats_};
      }
      decisions.push_back({next_var, trail_.size(), false});
      step(stats_.decisions);
      assign(-static_cast<lit>(next_var));
      while (!propagate()) {
        while (!decisions.empty() && decisions.back().flipped) {
          undo_to(decisions.back().trail_size);
          decisions.pop_back();
        }
        if (decisions.empty())
          return {false, {}, stats_};
        auto& d = decisions.back();
        undo_to(d.trail_size);
        d.flipped = true;
        step(stats_.decisions);
        assign(static_cast<lit>(d.variable));
        next_var = d.variable;
      }
    }
  }

private:
  std::vector<std::size_t>& watch_list(lit l) {
    return watches_[2 * cnf_system::var_of(l) + (l < 0 ? 1 : 0)];
  }

  bool is_true(lit l) const { return values_[cnf_system::var_of(l)] == (l > 0 ? 1 : -1); }
  bool is_false(lit l) const { return values_[cnf_system::var_of(l)] == (l > 0 ? -1 : 1); }

  void step(std::uint64_t& counter) {
    ++counter;
    if (stats_.decisions + stats_.propagations > budget_)
      throw resource_limit_error("solver step budget exceeded");
  }

  bool assign(lit l) {
    const auto v = cnf_system::var_of(l);
    const std::int8_t want = l > 0 ? 1 : -1;
    if (values_[v] != 0)
      return values_[v] == want;
    values_[v] = want;
    trail_.push_back(l);
    return true;
  }

  void undo_to(std::size_t size) {
    while (trail_.size() > size) {
      values_[cnf_system::var_of(trail_.back())] = 0;
      trail_.pop_back();
    }
    queue_head_ = size;
  }

  bool propagate() {
    while (queue_head_ < trail_.size()) {
      const lit p = trail_[queue_head_++];
      step(stats_.propagations);
      auto& wl = watch_list(-p);  // clauses in which ¬p was watched and just became false
      std::size_t keep = 0;
      for (std::size_t w = 0; w < wl.size(); ++w) {
        const std::size_t ci = wl[w];
        auto& c = clauses_[ci];
        if (c[0] == -p)
          std::swap(c[0], c[1]);
        if (is_true(c[0])) {
          wl[keep++] = ci;
          continue;
        }
        bool moved = false;
        for (std::size_t j = 2; j < c.size(); ++j) {
          if (!is_false(c[j])) {
            std::swap(c[1], c[j]);
            watch_list(c[1]).push_back(ci);
            moved = true;
            break;
          }
        }
        if (moved)
          continue;
        wl[keep++] = ci;
        if (is_false(c[0])) {
          for (std::size_t j = w + 1; j < wl.size(); ++j)
            wl[keep++] = wl[j];
          wl.resize(keep);
          return false;
        }
        assign(c[0]);
      }
      wl.resize(keep);
    }
    return true;
  }

  std::uint32_t num_vars_;
  std::uint64_t budget_;
  bool contradiction_ = false;
  std::vector<clause> clauses_;
  std::vector<lit> units_;
  std::vector<std::int8_t> values_;
  std::vector<lit> trail_;
  std::size_t queue_head_ = 0;
  std::vector<std::vector<std::size_t>> watches_;
  sat_stats stats_;
};

}  // namespace detail

/*! \brief Decide \p sys completely (no "unknown").
 *
 * A satisfiable outcome carries a total model that has been checked against
 * every clause before returning. Throws resource_limit_error when the
 * combined decision/propagation count exceeds \p step_budget.
 */
inline sat_outcome solve(const cnf_system& sys, std::uint64_t step_budget = default_step_budget) {
  detail::dpll_search search(sys, step_budget);
  sat_outcome outcome = search.run();
  if (outcome.satisfiable) {
    for (const auto& c : sys.clauses()) {
      const bool satisfied =
          std::any_of(c.begin(), c.end(), [&](lit l) { return outcome.value(l); });
      if (!satisfied)
        throw std::logic_error("satisfiability engine produced a non-model");
    }
  }
  return outcome;
}

}  // namespace normsynth
