/*!
  \file monitor.hpp
  \brief Violation checking for conditional norms on finite traces, with
         witness reporting, plus a definition-level reference checker and the
         norm file format.
*/

#pragma once

#include "tracemodel.hpp"

#include <optional>
#include <string>

namespace normsynth {

enum class norm_kind : std::uint8_t { prohibition, obligation };

inline const char* to_string(norm_kind kind) {
  return kind == norm_kind::prohibition ? "prohibition" : "obligation";
}

/*! \brief A conditional norm (φ_C, Z(φ_Z), φ_D): once the condition detaches,
 *         the target is prohibited until the deadline discharges it (Z = P),
 *         or the target is obliged before the deadline falls due (Z = O). */
struct conditional_norm {
  norm_kind kind;
  prop_formula condition;
  prop_formula target;
  prop_formula deadline;
};

/*! \brief 1-based indices proving a violation: the condition detached at
 *         `detachment` and the violation completed at `violation` (the target
 *         index for prohibitions, the deadline index for obligations). */
struct violation_witness {
  std::size_t detachment;
  std::size_t violation;

  auto operator<=>(const violation_witness&) const = default;
};

/*! \brief Single-pass prohibition check.
 *
 * Violated iff there are i ≤ j with the condition true at ρ[i], the target
 * true at ρ[j], and no k with i < k < j where the deadline holds — a deadline
 * at j itself does not discharge. Returns the lexicographically smallest
 * witness (i, j), or nullopt when obeyed. O(|ρ|) formula evaluations.
 */
inline std::optional<violation_witness> check_prohibition(const conditional_norm& n, const trace& rho) {
  if (n.kind != norm_kind::prohibition)
    throw std::invalid_argument("check_prohibition requires a prohibition");
  if (rho.empty())
    throw std::invalid_argument("trace must not be empty");
  // earliest detachment index whose window is still open (no deadline state
  // strictly between it and the current position)
  std::optional<std::size_t> open;
  for (std::size_t k = 1; k <= rho.size(); ++k) {
    const state& s = rho[k - 1];
    const bool cond = eval_formula(n.condition, s);
    if (cond && !open)
      open = k;
    if (open && eval_formula(n.target, s))
      return violation_witness{*open, k};
    if (eval_formula(n.deadline, s)) {
      // the deadline kills every earlier window for future positions; a
      // condition at this very state opens a fresh window at k
      open = cond ? std::optional<std::size_t>(k) : std::nullopt;
    }
  }
  return std::nullopt;
}

/*! \brief Single-pass obligation check.
 *
 * Violated iff there are i ≤ j with the condition true at ρ[i], the deadline
 * true at ρ[j], and no k with i ≤ k ≤ j where the target holds — fulfilling
 * the obligation at i or j itself discharges. Returns the lexicographically
 * smallest witness (i, j), or nullopt when obeyed.
 */
inline std::optional<violation_witness> check_obligation(const conditional_norm& n, const trace& rho) {
  if (n.kind != norm_kind::obligation)
    throw std::invalid_argument("check_obligation requires an obligation");
  if (rho.empty())
    throw std::invalid_argument("trace must not be empty");
  std::optional<std::size_t> open;
  for (std::size_t k = 1; k <= rho.size(); ++k) {
    const state& s = rho[k - 1];
    if (eval_formula(n.target, s))
      open = std::nullopt;  // fulfilled for every window covering k
    else if (!open && eval_formula(n.condition, s))
      open = k;
    if (open && eval_formula(n.deadline, s))
      return violation_witness{*open, k};
  }
  return std::nullopt;
}

/*! \brief Check a norm of either kind. */
inline std::optional<violation_witness> check_norm(const conditional_norm& n, const trace& rho) {
  return n.kind == norm_kind::prohibition ? check_prohibition(n, rho) : check_obligation(n, rho);
}

/*! \brief Definition-level checker: enumerate every (i, j) pair ascending and
 *         scan the window for a discharging k. Cubic; exists to cross-check
 *         the single-pass implementation. */
inline std::optional<violation_witness> check_norm_reference(const conditional_norm& n, const trace& rho) {
  if (rho.empty())
    throw std::invalid_argument("trace must not be empty");
  const bool prohibition = n.kind == norm_kind::prohibition;
  for (std::size_t i = 1; i <= rho.size(); ++i) {
    if (!eval_formula(n.condition, rho[i - 1]))
      continue;
    for (std::size_t j = i; j <= rho.size(); ++j) {
      const auto& violating = prohibition ? n.target : n.deadline;
      if (!eval_formula(violating, rho[j - 1]))
        continue;
      bool discharged = false;
      if (prohibition) {
        for (std::size_t k = i + 1; k < j && !discharged; ++k)
          discharged = eval_formula(n.deadline, rho[k - 1]);
      } else {
        for (std::size_t k = i; k <= j && !discharged; ++k)
          discharged = eval_formula(n.target, rho[k - 1]);
      }
      if (!discharged)
        return violation_witness{i, j};
    }
  }
  return std::nullopt;
}

/*! \brief Parse the JSON norm file format against a vocabulary.
 *
 * Expected shape: `{"kind": "prohibition"|"obligation", "condition": "<formula>",
 * "target": "<formula>", "deadline": "<formula>"}`.
 */
inline conditional_norm load_norm(std::istream& in, const vocabulary& vocab) {
  nlohmann::ordered_json doc;
  try {
    doc = nlohmann::ordered_json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw format_error(std::string("malformed norm file: ") + e.what());
  }
  if (!doc.is_object())
    throw format_error("norm file must be a JSON object");
  if (!doc.contains("kind") || !doc["kind"].is_string())
    throw format_error("norm file missing \"kind\" string");
  const auto kind_text = doc["kind"].get<std::string>();
  norm_kind kind;
  if (kind_text == "prohibition")
    kind = norm_kind::prohibition;
  else if (kind_text == "obligation")
    kind = norm_kind::obligation;
  else
    throw format_error("norm kind must be \"prohibition\" or \"obligation\"");
  auto field = [&](const char* name) {
    if (!doc.contains(name) || !doc[name].is_string())
      throw format_error(std::string("norm file missing \"") + name + "\" formula");
    try {
      return parse_formula(doc[name].get<std::string>(), vocab);
    } catch (const parse_error& e) {
      throw format_error(std::string("in norm field \"") + name + "\": " + e.what());
    }
  };
  return conditional_norm{kind, field("condition"), field("target"), field("deadline")};
}

inline conditional_norm load_norm(const std::filesystem::path& path, const vocabulary& vocab) {
  std::ifstream in(path);
  if (!in)
    throw format_error("cannot open norm file '" + path.string() + "'");
  return load_norm(in, vocab);
}

inline conditional_norm parse_norm(const std::string& text, const vocabulary& vocab) {
  std::istringstream in(text);
  return load_norm(in, vocab);
}

/*! \brief Canonical textual form of a norm; loading it back yields a
 *         structurally equal norm. */
inline std::string save_norm(const conditional_norm& n, const vocabulary& vocab) {
  auto field = [&](const char* name, const std::string& value) {
    std::string out = "  ";
    detail::append_json_string(out, name);
    out += ": ";
    detail::append_json_string(out, value);
    return out;
  };
  std::string out = "{\n";
  out += field("kind", to_string(n.kind)) + ",\n";
  out += field("condition", to_string(n.condition, vocab)) + ",\n";
  out += field("target", to_string(n.target, vocab)) + ",\n";
  out += field("deadline", to_string(n.deadline, vocab)) + "\n}\n";
  return out;
}

inline void save_norm(const conditional_norm& n, const vocabulary& vocab,
                      const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out)
    throw format_error("cannot write norm file '" + path.string() + "'");
  out << save_norm(n, vocab);
}

}  // namespace normsynth
