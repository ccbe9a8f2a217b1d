/*!
  \file propcore.hpp
  \brief Propositional vocabulary, formula AST, parser, evaluation, and
         disjunctive formulas built from state sets.
*/

#pragma once

#include <algorithm>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace normsynth {

/*! \brief Raised on unparsable formula text; carries the 0-based offset. */
class parse_error : public std::runtime_error {
public:
  parse_error(const std::string& message, std::size_t position)
      : std::runtime_error(message + " at offset " + std::to_string(position)),
        position(position) {}

  std::size_t position;
};

/*! \brief Ordered, duplicate-free list of proposition names.
 *
 * The declaration order is canonical: states, formulas, and all file formats
 * index propositions by their position here.
 */
class vocabulary {
public:
  explicit vocabulary(std::vector<std::string> names) : names_(std::move(names)) {
    if (names_.empty())
      throw std::invalid_argument("vocabulary must declare at least one proposition");
    for (const auto& name : names_) {
      if (!is_identifier(name))
        throw std::invalid_argument("invalid proposition name '" + name + "'");
      if (name == "true" || name == "false")
        throw std::invalid_argument("proposition name '" + name + "' is reserved");
    }
    auto sorted = names_;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw std::invalid_argument("duplicate proposition name in vocabulary");
  }

  std::size_t size() const { return names_.size(); }
  const std::string& name(std::size_t index) const { return names_.at(index); }
  const std::vector<std::string>& names() const { return names_; }

  std::optional<std::uint32_t> index_of(std::string_view name) const {
    for (std::size_t i = 0; i < names_.size(); ++i)
      if (names_[i] == name)
        return static_cast<std::uint32_t>(i);
    return std::nullopt;
  }

  bool operator==(const vocabulary&) const = default;

  static bool is_identifier(std::string_view text) {
    if (text.empty())
      return false;
    auto head = [](char c) { return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_'; };
    auto tail = [&](char c) { return head(c) || (c >= '0' && c <= '9'); };
    if (!head(text.front()))
      return false;
    return std::all_of(text.begin() + 1, text.end(), tail);
  }

private:
  std::vector<std::string> names_;
};

/*! \brief Total truth assignment over a vocabulary, in declaration order.
 *
 * Comparison is lexicographic on the bit pattern, which doubles as the
 * canonical key for deduplication.
 */
class state {
public:
  state() = default;
  explicit state(std::vector<bool> values) : values_(std::move(values)) {}

  std::size_t size() const { return values_.size(); }
  bool value(std::size_t index) const { return values_.at(index); }
  const std::vector<bool>& values() const { return values_; }

  auto operator<=>(const state&) const = default;

private:
  std::vector<bool> values_;
};

/*! \brief Immutable propositional formula: constants, vocabulary atoms,
 *         negation, conjunction, disjunction, implication.
 *
 * Nodes are shared and never mutated, so formulas are cheap to copy and safe
 * to use from concurrent code.
 */
class prop_formula {
public:
  enum class op : std::uint8_t { constant, atom, negation, conjunction, disjunction, implication };

  /// Defaults to the constant false.
  prop_formula() : prop_formula(make(node{op::constant, false, 0, nullptr, nullptr})) {}

  static prop_formula constant(bool value) {
    return prop_formula(make(node{op::constant, value, 0, nullptr, nullptr}));
  }

  static prop_formula atom(std::uint32_t index) {
    return prop_formula(make(node{op::atom, false, index, nullptr, nullptr}));
  }

  op kind() const { return root_->kind; }
  bool constant_value() const { return root_->value; }
  std::uint32_t atom_index() const { return root_->atom; }

  /// Left child (the sole child of a negation).
  prop_formula lhs() const { return prop_formula(root_->lhs); }
  prop_formula rhs() const { return prop_formula(root_->rhs); }

  bool operator==(const prop_formula& other) const { return equal(root_.get(), other.root_.get()); }

  friend prop_formula operator!(const prop_formula& f) {
    return prop_formula(make(node{op::negation, false, 0, f.root_, nullptr}));
  }
  friend prop_formula operator&(const prop_formula& a, const prop_formula& b) {
    return prop_formula(make(node{op::conjunction, false, 0, a.root_, b.root_}));
  }
  friend prop_formula operator|(const prop_formula& a, const prop_formula& b) {
    return prop_formula(make(node{op::disjunction, false, 0, a.root_, b.root_}));
  }
  friend prop_formula implies(const prop_formula& a, const prop_formula& b) {
    return prop_formula(make(node{op::implication, false, 0, a.root_, b.root_}));
  }

  friend bool eval_formula(const prop_formula& f, const state& s);

private:
  struct node;
  using node_ptr = std::shared_ptr<const node>;

  struct node {
    op kind;
    bool value;          // constant
    std::uint32_t atom;  // atom
    node_ptr lhs;
    node_ptr rhs;
  };

  explicit prop_formula(node_ptr root) : root_(std::move(root)) {
    if (!root_)
      throw std::invalid_argument("formula node is null");
  }

  static node_ptr make(node n) { return std::make_shared<const node>(std::move(n)); }

  static bool equal(const node* a, const node* b) {
    if (a == b)
      return true;
    if (a->kind != b->kind)
      return false;
    switch (a->kind) {
    case op::constant: return a->value == b->value;
    case op::atom: return a->atom == b->atom;
    case op::negation: return equal(a->lhs.get(), b->lhs.get());
    default: return equal(a->lhs.get(), b->lhs.get()) && equal(a->rhs.get(), b->rhs.get());
    }
  }

  static bool eval(const node* n, const std::vector<bool>& bits) {
    switch (n->kind) {
    case op::constant: return n->value;
    case op::atom:
      if (n->atom >= bits.size())
        throw std::invalid_argument("formula atom outside the state's vocabulary");
      return bits[n->atom];
    case op::negation: return !eval(n->lhs.get(), bits);
    case op::conjunction: return eval(n->lhs.get(), bits) && eval(n->rhs.get(), bits);
    case op::disjunction: return eval(n->lhs.get(), bits) || eval(n->rhs.get(), bits);
    case op::implication: return !eval(n->lhs.get(), bits) || eval(n->rhs.get(), bits);
    }
    throw std::logic_error("unreachable formula kind");
  }

  node_ptr root_;
};

/*! \brief Standard boolean semantics of \p f in state \p s. Pure and total on
 *         valid inputs; throws if an atom falls outside the state. */
inline bool eval_formula(const prop_formula& f, const state& s) {
  return prop_formula::eval(f.root_.get(), s.values());
}

namespace detail {

enum class token_kind : std::uint8_t {
  ident, lit_true, lit_false, bang, amp, pipe, arrow, lparen, rparen, end
};

struct token {
  token_kind kind;
  std::size_t offset;
  std::string_view text;
};

inline std::vector<token> lex_formula(std::string_view text) {
  std::vector<token> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const char c = text[pos];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      ++pos;
      continue;
    }
    switch (c) {
    case '!': out.push_back({token_kind::bang, pos, {}}); ++pos; continue;
    case '&': out.push_back({token_kind::amp, pos, {}}); ++pos; continue;
    case '|': out.push_back({token_kind::pipe, pos, {}}); ++pos; continue;
    case '(': out.push_back({token_kind::lparen, pos, {}}); ++pos; continue;
    case ')': out.push_back({token_kind::rparen, pos, {}}); ++pos; continue;
    case '-':
      if (pos + 1 < text.size() && text[pos + 1] == '>') {
        out.push_back({token_kind::arrow, pos, {}});
        pos += 2;
        continue;
      }
      throw parse_error("expected '->'", pos);
    default: break;
    }
    if (vocabulary::is_identifier(text.substr(pos, 1))) {
      std::size_t end = pos + 1;
      while (end < text.size() && vocabulary::is_identifier(text.substr(pos, end - pos + 1)))
        ++end;
      const auto word = text.substr(pos, end - pos);
      token_kind kind = token_kind::ident;
      if (word == "true")
        kind = token_kind::lit_true;
      else if (word == "false")
        kind = token_kind::lit_false;
      out.push_back({kind, pos, word});
      pos = end;
      continue;
    }
    throw parse_error(std::string("unexpected character '") + c + "'", pos);
  }
  out.push_back({token_kind::end, text.size(), {}});
  return out;
}

class formula_parser {
public:
  formula_parser(std::string_view text, const vocabulary& vocab)
      : tokens_(lex_formula(text)), vocab_(vocab) {}

  prop_formula parse() {
    auto f = parse_implication();
    if (current().kind != token_kind::end)
      throw parse_error("expected end of input", current().offset);
    return f;
  }

private:
  const token& current() const { return tokens_[index_]; }
  void advance() { ++index_; }

  // imp := disj ('->' imp)?   right-associative
  prop_formula parse_implication() {
    auto lhs = parse_disjunction();
    if (current().kind == token_kind::arrow) {
      advance();
      return implies(lhs, parse_implication());
    }
    return lhs;
  }

  prop_formula parse_disjunction() {
    auto f = parse_conjunction();
    while (current().kind == token_kind::pipe) {
      advance();
      f = f | parse_conjunction();
    }
    return f;
  }

  prop_formula parse_conjunction() {
    auto f = parse_unary();
    while (current().kind == token_kind::amp) {
      advance();
      f = f & parse_unary();
    }
    return f;
  }

  prop_formula parse_unary() {
    const token tok = current();
    switch (tok.kind) {
    case token_kind::bang:
      advance();
      return !parse_unary();
    case token_kind::lit_true:
      advance();
      return prop_formula::constant(true);
    case token_kind::lit_false:
      advance();
      return prop_formula::constant(false);
    case token_kind::ident: {
      advance();
      if (auto index = vocab_.index_of(tok.text))
        return prop_formula::atom(*index);
      throw parse_error("unknown proposition '" + std::string(tok.text) + "'", tok.offset);
    }
    case token_kind::lparen: {
      advance();
      auto f = parse_implication();
      if (current().kind != token_kind::rparen)
        throw parse_error("expected ')'", current().offset);
      advance();
      return f;
    }
    default:
      throw parse_error("expected formula", tok.offset);
    }
  }

  std::vector<token> tokens_;
  const vocabulary& vocab_;
  std::size_t index_ = 0;
};

}  // namespace detail

/*! \brief Parse concrete syntax into an AST.
 *
 * Grammar: `formula := imp ; imp := disj ('->' imp)? ; disj := conj ('|' conj)* ;
 * conj := unary ('&' unary)* ; unary := '!' unary | 'true' | 'false' | ident |
 * '(' formula ')'`. Whitespace is insignificant; precedence is `!` > `&` > `|`
 * > `->` with right-associative `->`.
 */
inline prop_formula parse_formula(std::string_view text, const vocabulary& vocab) {
  return detail::formula_parser(text, vocab).parse();
}

namespace detail {

inline int formula_precedence(prop_formula::op kind) {
  switch (kind) {
  case prop_formula::op::implication: return 0;
  case prop_formula::op::disjunction: return 1;
  case prop_formula::op::conjunction: return 2;
  case prop_formula::op::negation: return 3;
  default: return 4;
  }
}

inline void print_formula(const prop_formula& f, const vocabulary& vocab, std::string& out,
                          int parent_precedence, bool right_of_same) {
  using op = prop_formula::op;
  const int prec = formula_precedence(f.kind());
  // Parenthesize when binding looser than the context, when associativity
  // would regroup, and around `&` under `|` for readability.
  bool parens = prec < parent_precedence || (prec == parent_precedence && right_of_same);
  if (parent_precedence == 1 && f.kind() == op::conjunction)
    parens = true;
  if (parens)
    out += '(';
  switch (f.kind()) {
  case op::constant:
    out += f.constant_value() ? "true" : "false";
    break;
  case op::atom:
    if (f.atom_index() >= vocab.size())
      throw std::invalid_argument("formula atom outside vocabulary");
    out += vocab.name(f.atom_index());
    break;
  case op::negation:
    out += '!';
    print_formula(f.lhs(), vocab, out, 3, false);
    break;
  case op::conjunction:
    print_formula(f.lhs(), vocab, out, 2, false);
    out += " & ";
    print_formula(f.rhs(), vocab, out, 2, true);
    break;
  case op::disjunction:
    print_formula(f.lhs(), vocab, out, 1, false);
    out += " | ";
    print_formula(f.rhs(), vocab, out, 1, true);
    break;
  case op::implication:
    // right-associative: the left side needs parentheses at equal precedence
    print_formula(f.lhs(), vocab, out, 0, true);
    out += " -> ";
    print_formula(f.rhs(), vocab, out, 0, false);
    break;
  }
  if (parens)
    out += ')';
}

}  // namespace detail

/*! \brief Concrete syntax for \p f; re-parsing yields a structurally equal AST. */
inline std::string to_string(const prop_formula& f, const vocabulary& vocab) {
  std::string out;
  detail::print_formula(f, vocab, out, -1, false);
  return out;
}

/*! \brief Full conjunction of literals pinning down \p s (every proposition or
 *         its negation, in vocabulary order). */
inline prop_formula state_description(const state& s, const vocabulary& vocab) {
  if (s.size() != vocab.size())
    throw std::invalid_argument("state does not match vocabulary size");
  prop_formula f = s.value(0) ? prop_formula::atom(0) : !prop_formula::atom(0);
  for (std::uint32_t i = 1; i < vocab.size(); ++i) {
    const auto lit = s.value(i) ? prop_formula::atom(i) : !prop_formula::atom(i);
    f = f & lit;
  }
  return f;
}

/*! \brief Disjunction of the state descriptions of \p states, one disjunct per
 *         state in the given order; the empty set yields the constant false.
 *
 * The result is true exactly on the member states, and its size is linear in
 * the total size of the set.
 */
inline prop_formula formula_from_state_set(std::span<const state> states, const vocabulary& vocab) {
  if (states.empty())
    return prop_formula::constant(false);
  prop_formula f = state_description(states[0], vocab);
  for (std::size_t i = 1; i < states.size(); ++i)
    f = f | state_description(states[i], vocab);
  return f;
}

}  // namespace normsynth
