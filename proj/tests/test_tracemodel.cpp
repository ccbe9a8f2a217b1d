#include <catch2/catch_amalgamated.hpp>

#include <normsynth/tracemodel.hpp>

#include <cstdio>
#include <filesystem>
#include <random>
#include <string>

using namespace normsynth;

namespace {

state make_state(std::initializer_list<bool> bits) { return state(std::vector<bool>(bits)); }

std::string error_of(const std::string& text) {
  try {
    parse_traces(text);
  } catch (const format_error& e) {
    return e.what();
  }
  return "(no error)";
}

}  // namespace

TEST_CASE("loading a minimal trace file", "[tracemodel]") {
  const auto ts = parse_traces(R"({"propositions": ["a"], "positive": [[{"a": true}]], "negative": []})");
  REQUIRE(ts.vocab.names() == std::vector<std::string>{"a"});
  REQUIRE(ts.positive.size() == 1);
  REQUIRE(ts.positive[0] == trace{make_state({true})});
  CHECK(ts.negative.empty());
}

TEST_CASE("trace files reject empty traces and partial states", "[tracemodel]") {
  CHECK(error_of(R"({"propositions": ["a"], "positive": [], "negative": [[]]})") ==
        "empty trace at negative[0]");
  CHECK(error_of(R"({"propositions": ["a"], "positive": [[]], "negative": []})") ==
        "empty trace at positive[0]");
  CHECK(error_of(R"({"propositions": ["a","b"], "positive": [[{"a": true, "b": true}], [{"a": true}]], "negative": []})") ==
        "missing proposition 'b' at positive[1][0]");
  CHECK(error_of(R"({"propositions": ["a"], "positive": [], "negative": [[{"a": true}, {"a": true, "c": false}]]})") ==
        "unknown proposition 'c' at negative[0][1]");
  CHECK(error_of(R"({"propositions": ["a"], "positive": [[{"a": 1}]], "negative": []})") ==
        "proposition 'a' at positive[0][0] must be a boolean");
  CHECK(error_of(R"({"propositions": ["a"], "positive": [[{"a": true}]], "negative": [{"a": true}]})") ==
        "trace at negative[0] must be an array of states");
  CHECK(error_of(R"({"propositions": ["a"], "positive": [["yes"]], "negative": []})") ==
        "state at positive[0][0] must be an object");
}

TEST_CASE("trace files reject structural damage", "[tracemodel]") {
  CHECK_THROWS_AS(parse_traces("{"), format_error);
  CHECK_THROWS_AS(parse_traces("[1,2]"), format_error);
  CHECK_THROWS_AS(parse_traces(R"({"positive": [], "negative": []})"), format_error);
  CHECK_THROWS_AS(parse_traces(R"({"propositions": ["a"], "negative": []})"), format_error);
  CHECK_THROWS_AS(parse_traces(R"({"propositions": ["a"], "positive": []})"), format_error);
  CHECK_THROWS_AS(parse_traces(R"({"propositions": [1], "positive": [], "negative": []})"), format_error);
  CHECK_THROWS_AS(parse_traces(R"({"propositions": ["a","a"], "positive": [], "negative": []})"), format_error);
  CHECK_THROWS_AS(parse_traces(R"({"propositions": [], "positive": [], "negative": []})"), format_error);
}

TEST_CASE("universe lists states once in first-occurrence order", "[tracemodel]") {
  // three distinct states shared between a positive and a negative trace
  const auto s1 = make_state({false, false});
  const auto s2 = make_state({true, false});
  const auto s3 = make_state({false, true});
  const labeled_trace_set ts{vocabulary({"p", "q"}), {{s1, s2, s3}}, {{s1, s1, s2, s3}}};
  CHECK(universe(ts) == std::vector<state>{s1, s2, s3});

  const labeled_trace_set single{vocabulary({"p", "q"}), {{s2}}, {}};
  CHECK(universe(single) == std::vector<state>{s2});

  // negative-only states come after all positive ones
  const labeled_trace_set mixed{vocabulary({"p", "q"}), {{s3}}, {{s2, s3, s1}}};
  CHECK(universe(mixed) == std::vector<state>{s3, s2, s1});
}

TEST_CASE("saving canonical text is byte-identical after a load", "[tracemodel]") {
  const std::string canonical =
      "{\n"
      "  \"propositions\": [\"a\", \"b\"],\n"
      "  \"positive\": [\n"
      "    [{\"a\": true, \"b\": false}, {\"a\": true, \"b\": true}],\n"
      "    [{\"a\": false, \"b\": false}]\n"
      "  ],\n"
      "  \"negative\": [\n"
      "    [{\"a\": false, \"b\": true}]\n"
      "  ]\n"
      "}\n";
  CHECK(save_traces(parse_traces(canonical)) == canonical);

  const std::string no_traces =
      "{\n"
      "  \"propositions\": [\"a\"],\n"
      "  \"positive\": [],\n"
      "  \"negative\": []\n"
      "}\n";
  CHECK(save_traces(parse_traces(no_traces)) == no_traces);
}

TEST_CASE("load inverts save on randomly generated sets", "[tracemodel]") {
  std::mt19937 rng(23);
  std::uniform_int_distribution<int> coin(0, 1);
  for (int round = 0; round < 100; ++round) {
    const std::size_t props = 1 + rng() % 4;
    std::vector<std::string> names;
    for (std::size_t i = 0; i < props; ++i)
      names.push_back("p" + std::to_string(i));
    labeled_trace_set ts{vocabulary(names), {}, {}};
    auto random_trace = [&] {
      trace t;
      const std::size_t len = 1 + rng() % 5;
      for (std::size_t i = 0; i < len; ++i) {
        std::vector<bool> bits(props);
        for (std::size_t p = 0; p < props; ++p)
          bits[p] = coin(rng) != 0;
        t.emplace_back(std::move(bits));
      }
      return t;
    };
    for (std::size_t i = rng() % 4; i > 0; --i)
      ts.positive.push_back(random_trace());
    for (std::size_t i = rng() % 4; i > 0; --i)
      ts.negative.push_back(random_trace());
    REQUIRE(parse_traces(save_traces(ts)) == ts);
  }
}

TEST_CASE("trace files round-trip through the filesystem", "[tracemodel]") {
  const auto path = std::filesystem::temp_directory_path() / "normsynth_tracemodel_roundtrip.json";
  const labeled_trace_set ts{
      vocabulary({"a", "b"}), {{make_state({true, false})}}, {{make_state({false, true}), make_state({true, true})}}};
  save_traces(ts, path);
  CHECK(load_traces(path) == ts);
  std::filesystem::remove(path);

  CHECK_THROWS_AS(load_traces(std::filesystem::path("/nonexistent/traces.json")), format_error);
}

TEST_CASE("states serialize to ordered JSON objects", "[tracemodel]") {
  const vocabulary vocab({"b", "a"});
  const auto obj = state_to_json(make_state({true, false}), vocab);
  CHECK(obj.dump() == R"({"b":true,"a":false})");
}
