#include <catch2/catch_amalgamated.hpp>

#include <normsynth/monitor.hpp>

#include "helpers.hpp"

#include <filesystem>
#include <random>

using namespace normsynth;
using test_helpers::all_states;
using test_helpers::make_state;
using test_helpers::random_formula;
using test_helpers::random_trace;

namespace {

// norm whose condition/target/deadline are true exactly on the given state sets
conditional_norm set_norm(norm_kind kind, const std::vector<state>& condition,
                          const std::vector<state>& target, const std::vector<state>& deadline,
                          const vocabulary& vocab) {
  return conditional_norm{kind, formula_from_state_set(condition, vocab),
                          formula_from_state_set(target, vocab),
                          formula_from_state_set(deadline, vocab)};
}

}  // namespace

TEST_CASE("prohibition violations and their witnesses", "[monitor]") {
  const vocabulary vocab({"p", "q"});
  const auto s = make_state({false, false});
  const auto v1 = make_state({true, false});
  const auto u1 = make_state({false, true});
  const auto t = make_state({true, true});

  SECTION("condition and target at the same single state") {
    const auto n = set_norm(norm_kind::prohibition, {s}, {s}, {}, vocab);
    CHECK(check_prohibition(n, {s}) == violation_witness{1, 1});
  }

  SECTION("a window without a discharging state violates") {
    const auto n = set_norm(norm_kind::prohibition, {s}, {t}, {u1}, vocab);
    CHECK(check_prohibition(n, {s, v1, t, s, u1, t}) == violation_witness{1, 3});
  }

  SECTION("a deadline strictly inside the window discharges") {
    const auto n = set_norm(norm_kind::prohibition, {s}, {t}, {u1}, vocab);
    CHECK(check_prohibition(n, {s, v1, u1, t}) == std::nullopt);
  }

  SECTION("a deadline at the target state itself does not discharge") {
    const vocabulary ab({"a", "b"});
    const conditional_norm n{norm_kind::prohibition, parse_formula("a", ab), parse_formula("b", ab),
                             parse_formula("b", ab)};
    CHECK(check_prohibition(n, {make_state({true, false}), make_state({false, true})}) ==
          violation_witness{1, 2});
  }
}

TEST_CASE("prohibition windows reopen after a discharge", "[monitor]") {
  const vocabulary vocab({"a", "b", "d"});
  const conditional_norm n{norm_kind::prohibition, parse_formula("a", vocab),
                           parse_formula("b", vocab), parse_formula("d", vocab)};
  const auto detach = make_state({true, false, false});
  const auto discharge = make_state({false, false, true});
  const auto both = make_state({true, false, true});
  const auto hit = make_state({false, true, false});

  // the first window is discharged; the second detachment violates
  CHECK(check_prohibition(n, {detach, discharge, hit}) == std::nullopt);
  CHECK(check_prohibition(n, {detach, discharge, detach, hit}) == violation_witness{3, 4});
  // a state satisfying condition and deadline together restarts the window at itself
  CHECK(check_prohibition(n, {detach, both, hit}) == violation_witness{2, 3});
}

TEST_CASE("obligation violations and their witnesses", "[monitor]") {
  const vocabulary vocab({"p", "q"});
  const auto s = make_state({false, false});
  const auto v1 = make_state({true, false});
  const auto u1 = make_state({false, true});
  const auto t = make_state({true, true});

  SECTION("condition and deadline at the same unfulfilled state") {
    const auto n = set_norm(norm_kind::obligation, {s}, {}, {s}, vocab);
    CHECK(check_obligation(n, {s}) == violation_witness{1, 1});
  }

  SECTION("a window without a fulfilling state violates") {
    const auto n = set_norm(norm_kind::obligation, {s}, {u1}, {t}, vocab);
    CHECK(check_obligation(n, {s, v1, t, s, u1, t}) == violation_witness{1, 3});
  }

  SECTION("a fulfilling state inside the window discharges") {
    const auto n = set_norm(norm_kind::obligation, {s}, {u1}, {t}, vocab);
    CHECK(check_obligation(n, {s, v1, u1, t}) == std::nullopt);
  }

  SECTION("fulfilling at the detachment or deadline state discharges") {
    const vocabulary abo({"a", "b", "o"});
    const conditional_norm n{norm_kind::obligation, parse_formula("a", abo),
                             parse_formula("o", abo), parse_formula("b", abo)};
    CHECK(check_obligation(n, {make_state({true, false, false}), make_state({false, true, true})}) ==
          std::nullopt);
    CHECK(check_obligation(n, {make_state({true, false, true}), make_state({false, true, false})}) ==
          std::nullopt);
    CHECK(check_obligation(n, {make_state({true, false, false}), make_state({false, true, false})}) ==
          violation_witness{1, 2});
  }

  SECTION("the earliest open detachment wins") {
    const vocabulary ado({"a", "d", "o"});
    const conditional_norm n{norm_kind::obligation, parse_formula("a", ado),
                             parse_formula("o", ado), parse_formula("d", ado)};
    const auto detach = make_state({true, false, false});
    const auto due = make_state({false, true, false});
    CHECK(check_obligation(n, {detach, detach, due}) == violation_witness{1, 3});
  }
}

TEST_CASE("norms with an unsatisfiable condition are always obeyed", "[monitor]") {
  const auto vocab = test_helpers::numbered_vocabulary(3);
  std::mt19937 rng(101);
  for (int round = 0; round < 200; ++round) {
    const conditional_norm n{(rng() & 1) ? norm_kind::prohibition : norm_kind::obligation,
                             prop_formula::constant(false), random_formula(rng, 3, 3),
                             random_formula(rng, 3, 3)};
    CHECK(check_norm(n, random_trace(rng, 3, 8)) == std::nullopt);
  }
}

TEST_CASE("an always-true deadline limits prohibition witnesses to adjacent indices", "[monitor]") {
  const auto vocab = test_helpers::numbered_vocabulary(3);
  std::mt19937 rng(103);
  for (int round = 0; round < 300; ++round) {
    const conditional_norm n{norm_kind::prohibition, random_formula(rng, 3, 3),
                             random_formula(rng, 3, 3), prop_formula::constant(true)};
    const auto rho = random_trace(rng, 3, 8);
    const auto w = check_prohibition(n, rho);
    REQUIRE(w == check_norm_reference(n, rho));
    if (w)
      CHECK(w->violation - w->detachment <= 1);
  }
}

TEST_CASE("the single pass matches the definition-level checker", "[monitor]") {
  std::mt19937 rng(107);
  for (int round = 0; round < 4000; ++round) {
    const conditional_norm n{(rng() & 1) ? norm_kind::prohibition : norm_kind::obligation,
                             random_formula(rng, 3, 3), random_formula(rng, 3, 3),
                             random_formula(rng, 3, 3)};
    const auto rho = random_trace(rng, 3, 8);
    REQUIRE(check_norm(n, rho) == check_norm_reference(n, rho));
  }
}

TEST_CASE("the single pass matches the definition-level checker exhaustively", "[monitor]") {
  // every norm built from state sets over a 1-proposition universe, on every
  // trace of length up to 3
  const vocabulary vocab({"p"});
  const auto states = all_states(1);
  std::vector<trace> traces;
  for (const auto& a : states) {
    traces.push_back({a});
    for (const auto& b : states) {
      traces.push_back({a, b});
      for (const auto& c : states)
        traces.push_back({a, b, c});
    }
  }
  std::vector<std::vector<state>> subsets = {{}, {states[0]}, {states[1]}, {states[0], states[1]}};
  for (const auto kind : {norm_kind::prohibition, norm_kind::obligation})
    for (const auto& xc : subsets)
      for (const auto& xz : subsets)
        for (const auto& xd : subsets) {
          const auto n = set_norm(kind, xc, xz, xd, vocab);
          for (const auto& rho : traces)
            REQUIRE(check_norm(n, rho) == check_norm_reference(n, rho));
        }
}

TEST_CASE("checkers reject misuse", "[monitor]") {
  const vocabulary vocab({"a"});
  const conditional_norm p{norm_kind::prohibition, parse_formula("a", vocab),
                           parse_formula("a", vocab), parse_formula("a", vocab)};
  const conditional_norm o{norm_kind::obligation, p.condition, p.target, p.deadline};
  CHECK_THROWS_AS(check_prohibition(o, {make_state({true})}), std::invalid_argument);
  CHECK_THROWS_AS(check_obligation(p, {make_state({true})}), std::invalid_argument);
  CHECK_THROWS_AS(check_prohibition(p, {}), std::invalid_argument);
  CHECK_THROWS_AS(check_norm_reference(p, {}), std::invalid_argument);
  // states over a smaller vocabulary than the formulas
  const conditional_norm wide{norm_kind::prohibition, prop_formula::atom(4), prop_formula::atom(4),
                              prop_formula::atom(4)};
  CHECK_THROWS_AS(check_norm(wide, {make_state({true})}), std::invalid_argument);
}

TEST_CASE("norm files parse and save canonically", "[monitor]") {
  const vocabulary vocab({"a", "b", "c"});
  const std::string canonical =
      "{\n"
      "  \"kind\": \"prohibition\",\n"
      "  \"condition\": \"a & !b\",\n"
      "  \"target\": \"c\",\n"
      "  \"deadline\": \"a -> b\"\n"
      "}\n";
  const auto n = parse_norm(canonical, vocab);
  CHECK(n.kind == norm_kind::prohibition);
  CHECK(n.condition == parse_formula("a & !b", vocab));
  CHECK(n.target == parse_formula("c", vocab));
  CHECK(n.deadline == parse_formula("a -> b", vocab));
  CHECK(save_norm(n, vocab) == canonical);

  const auto path = std::filesystem::temp_directory_path() / "normsynth_monitor_norm.json";
  save_norm(n, vocab, path);
  const auto reloaded = load_norm(path, vocab);
  CHECK(reloaded.kind == n.kind);
  CHECK(reloaded.condition == n.condition);
  std::filesystem::remove(path);
}

TEST_CASE("norm files reject structural and formula errors", "[monitor]") {
  const vocabulary vocab({"a"});
  CHECK_THROWS_AS(parse_norm("{", vocab), format_error);
  CHECK_THROWS_AS(parse_norm("[]", vocab), format_error);
  CHECK_THROWS_AS(parse_norm(R"({"condition":"a","target":"a","deadline":"a"})", vocab), format_error);
  CHECK_THROWS_AS(
      parse_norm(R"({"kind":"permission","condition":"a","target":"a","deadline":"a"})", vocab),
      format_error);
  CHECK_THROWS_AS(parse_norm(R"({"kind":"prohibition","target":"a","deadline":"a"})", vocab),
                  format_error);
  try {
    parse_norm(R"({"kind":"prohibition","condition":"a &","target":"a","deadline":"a"})", vocab);
    FAIL("expected format_error");
  } catch (const format_error& e) {
    const std::string what = e.what();
    CHECK(what.find("in norm field \"condition\"") != std::string::npos);
    CHECK(what.find("at offset 3") != std::string::npos);
  }
}
