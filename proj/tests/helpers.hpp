#pragma once

#include <normsynth/monitor.hpp>
#include <normsynth/tracemodel.hpp>

#include <random>
#include <string>
#include <vector>

namespace test_helpers {

inline normsynth::state make_state(std::initializer_list<bool> bits) {
  return normsynth::state(std::vector<bool>(bits));
}

inline std::vector<normsynth::state> all_states(std::size_t n) {
  std::vector<normsynth::state> out;
  for (std::size_t mask = 0; mask < (std::size_t(1) << n); ++mask) {
    std::vector<bool> bits(n);
    for (std::size_t i = 0; i < n; ++i)
      bits[i] = (mask >> i) & 1;
    out.emplace_back(std::move(bits));
  }
  return out;
}

inline normsynth::vocabulary numbered_vocabulary(std::size_t n) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i)
    names.push_back("p" + std::to_string(i));
  return normsynth::vocabulary(names);
}

inline normsynth::prop_formula random_formula(std::mt19937& rng, std::size_t num_atoms, int depth) {
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 6);
  switch (pick(rng)) {
  case 0:
    return normsynth::prop_formula::constant(std::uniform_int_distribution<int>(0, 1)(rng) != 0);
  case 1:
  case 2: {
    std::uniform_int_distribution<std::size_t> atom(0, num_atoms - 1);
    return normsynth::prop_formula::atom(static_cast<std::uint32_t>(atom(rng)));
  }
  case 3: return !random_formula(rng, num_atoms, depth - 1);
  case 4:
    return random_formula(rng, num_atoms, depth - 1) & random_formula(rng, num_atoms, depth - 1);
  case 5:
    return random_formula(rng, num_atoms, depth - 1) | random_formula(rng, num_atoms, depth - 1);
  default:
    return implies(random_formula(rng, num_atoms, depth - 1),
                   random_formula(rng, num_atoms, depth - 1));
  }
}

inline normsynth::state random_state(std::mt19937& rng, std::size_t props) {
  std::vector<bool> bits(props);
  for (std::size_t i = 0; i < props; ++i)
    bits[i] = (rng() & 1) != 0;
  return normsynth::state(std::move(bits));
}

inline normsynth::trace random_trace(std::mt19937& rng, std::size_t props, std::size_t max_length) {
  std::uniform_int_distribution<std::size_t> len(1, max_length);
  normsynth::trace t;
  const std::size_t length = len(rng);
  for (std::size_t i = 0; i < length; ++i)
    t.push_back(random_state(rng, props));
  return t;
}

// small labeled set over two propositions: |S(Γ)| ≤ 4, up to 6 traces of length ≤ 5
inline normsynth::labeled_trace_set random_labeled_set(std::mt19937& rng) {
  normsynth::labeled_trace_set ts{normsynth::vocabulary({"p0", "p1"}), {}, {}};
  std::uniform_int_distribution<std::size_t> count(1, 6);
  const std::size_t traces = count(rng);
  for (std::size_t i = 0; i < traces; ++i) {
    auto t = random_trace(rng, 2, 5);
    if (rng() & 1)
      ts.positive.push_back(std::move(t));
    else
      ts.negative.push_back(std::move(t));
  }
  return ts;
}

}  // namespace test_helpers
