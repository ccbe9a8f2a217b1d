/*!
  \file normsynth.cpp
  \brief Command line frontend: check a norm against traces, synthesize or
         revise norms from labeled traces, enumerate solutions by brute
         force, and generate random 3SAT-reduction instances.

  Exit codes: 0 success / solution found; 1 clean negative (violation found
  when checking, no solution, no revision); 2 input or usage error;
  3 resource limit exceeded.
*/

#include <CLI11.hpp>

#include <normsynth/reductions.hpp>
#include <normsynth/revision.hpp>

#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

using namespace normsynth;

struct command_outcome {
  int code = 0;
  std::string report;
};

/// A state rendered as the set of propositions it makes true: "{q_s}".
std::string render_state(const state& s, const vocabulary& vocab) {
  std::string out = "{";
  bool first = true;
  for (std::size_t i = 0; i < vocab.size(); ++i)
    if (s.value(i)) {
      if (!first)
        out += ", ";
      out += vocab.names()[i];
      first = false;
    }
  out += '}';
  return out;
}

std::string render_state_set(const std::vector<bool>& mask, const std::vector<state>& univ,
                             const vocabulary& vocab) {
  std::string out;
  for (std::size_t i = 0; i < univ.size(); ++i)
    if (mask[i]) {
      if (!out.empty())
        out += ", ";
      out += render_state(univ[i], vocab);
    }
  return out.empty() ? "(none)" : out;
}

nlohmann::ordered_json state_set_json(const std::vector<bool>& mask,
                                      const std::vector<state>& univ, const vocabulary& vocab) {
  auto arr = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < univ.size(); ++i)
    if (mask[i])
      arr.push_back(state_to_json(univ[i], vocab));
  return arr;
}

nlohmann::ordered_json norm_json(const conditional_norm& n, const vocabulary& vocab) {
  return {{"kind", to_string(n.kind)},
          {"condition", to_string(n.condition, vocab)},
          {"target", to_string(n.target, vocab)},
          {"deadline", to_string(n.deadline, vocab)}};
}

nlohmann::ordered_json stats_json(const engine_stats& s) {
  return {{"variables", s.variables}, {"clauses", s.clauses}, {"decisions", s.decisions}};
}

std::string dump(const nlohmann::ordered_json& doc) { return doc.dump(2) + "\n"; }

norm_kind parse_kind(const std::string& name) {
  return name == "obligation" ? norm_kind::obligation : norm_kind::prohibition;
}

/*! \brief Append the solution triple to both report flavors: membership sets
 *         plus a verification recheck line (the engines verify before
 *         returning, so the recheck can only ever read "ok"). */
void describe_triple(const state_set_triple& triple, const labeled_trace_set& ts,
                     const std::vector<state>& univ, std::string& text,
                     nlohmann::ordered_json& doc) {
  text += "condition: " + render_state_set(triple.condition, univ, ts.vocab) + "\n";
  text += "target: " + render_state_set(triple.target, univ, ts.vocab) + "\n";
  text += "deadline: " + render_state_set(triple.deadline, univ, ts.vocab) + "\n";
  doc["condition_states"] = state_set_json(triple.condition, univ, ts.vocab);
  doc["target_states"] = state_set_json(triple.target, univ, ts.vocab);
  doc["deadline_states"] = state_set_json(triple.deadline, univ, ts.vocab);
  if (verify_triple(triple, ts, univ))
    throw std::logic_error("reported solution failed the verification recheck");
  text += "verification: ok\n";
  doc["verification"] = "ok";
}

void describe_stats(const engine_stats& stats, std::string& text, nlohmann::ordered_json& doc) {
  text += "variables: " + std::to_string(stats.variables) + "\n";
  text += "clauses: " + std::to_string(stats.clauses) + "\n";
  text += "decisions: " + std::to_string(stats.decisions) + "\n";
  doc["stats"] = stats_json(stats);
}

command_outcome run_check(const std::string& norm_path, const std::string& traces_path,
                          bool json) {
  const auto ts = load_traces(traces_path);
  const auto n = load_norm(norm_path, ts.vocab);

  std::string text = "kind: " + std::string(to_string(n.kind)) + "\n";
  text += "condition: " + to_string(n.condition, ts.vocab) + "\n";
  text += "target: " + to_string(n.target, ts.vocab) + "\n";
  text += "deadline: " + to_string(n.deadline, ts.vocab) + "\n";

  nlohmann::ordered_json doc{{"schema", 1}, {"command", "check"}};
  doc["norm"] = norm_json(n, ts.vocab);
  auto results = nlohmann::ordered_json::array();

  std::size_t violated = 0;
  std::size_t total = 0;
  const auto report_group = [&](const char* side, const std::vector<trace>& traces) {
    for (std::size_t i = 0; i < traces.size(); ++i) {
      const auto witness = check_norm(n, traces[i]);
      const std::string label = std::string(side) + "[" + std::to_string(i) + "]";
      nlohmann::ordered_json row{{"side", side}, {"index", i}, {"violated", witness.has_value()}};
      if (witness) {
        ++violated;
        text += label + ": violated (" + std::to_string(witness->detachment) + ", " +
                std::to_string(witness->violation) + ")\n";
        row["witness"] = {{"detachment", witness->detachment}, {"violation", witness->violation}};
      } else {
        text += label + ": obeyed\n";
      }
      results.push_back(std::move(row));
      ++total;
    }
  };
  report_group("positive", ts.positive);
  report_group("negative", ts.negative);

  text += "violated: " + std::to_string(violated) + " of " + std::to_string(total) + "\n";
  doc["results"] = std::move(results);
  doc["violated"] = violated;
  doc["total"] = total;

  return {violated > 0 ? 1 : 0, json ? dump(doc) : text};
}

command_outcome run_synth(const std::string& kind_name, const std::string& traces_path,
                          const std::string& engine_name, const std::string& out_norm,
                          std::uint64_t budget, bool json) {
  const auto ts = load_traces(traces_path);
  const auto kind = parse_kind(kind_name);
  const auto engine = engine_name == "brute" ? synthesis_engine::brute : synthesis_engine::sat;
  const auto result = synthesize(ts, kind, engine, budget);
  const auto univ = universe(ts);

  std::string text = "kind: " + kind_name + "\n" + "engine: " + engine_name + "\n";
  nlohmann::ordered_json doc{
      {"schema", 1}, {"command", "synth"}, {"kind", kind_name}, {"engine", engine_name}};

  if (!result.solution) {
    text += "status: NO SOLUTION\n";
    doc["status"] = "no_solution";
    describe_stats(result.stats, text, doc);
    return {1, json ? dump(doc) : text};
  }

  const auto& sol = *result.solution;
  text += sol.trivial ? "status: SOLUTION (trivial)\n" : "status: SOLUTION\n";
  doc["status"] = "solution";
  doc["trivial"] = sol.trivial;
  doc["norm"] = norm_json(sol.norm, ts.vocab);
  describe_triple(sol.triple, ts, univ, text, doc);
  describe_stats(result.stats, text, doc);
  if (!out_norm.empty()) {
    save_norm(sol.norm, ts.vocab, out_norm);
    text += "wrote: " + out_norm + "\n";
    doc["out_norm"] = out_norm;
  }
  return {0, json ? dump(doc) : text};
}

command_outcome run_revise(const std::string& norm_path, const std::string& traces_path,
                           std::optional<std::size_t> max_distance, const std::string& out_norm,
                           std::uint64_t budget, bool json) {
  const auto ts = load_traces(traces_path);
  const auto reference = load_norm(norm_path, ts.vocab);
  const auto result = revise(ts, reference, max_distance, budget);
  const auto univ = universe(ts);

  const std::string kind_name = to_string(reference.kind);
  std::string text = "kind: " + kind_name + "\n";
  nlohmann::ordered_json doc{{"schema", 1}, {"command", "revise"}, {"kind", kind_name}};
  if (max_distance) {
    text += "mode: budget " + std::to_string(*max_distance) + "\n";
    doc["mode"] = "budget";
    doc["max_distance"] = *max_distance;
  } else {
    text += "mode: minimize\n";
    doc["mode"] = "minimize";
  }

  if (!result.solution) {
    text += "status: NO REVISION\n";
    doc["status"] = "no_revision";
    describe_stats(result.stats, text, doc);
    return {1, json ? dump(doc) : text};
  }

  const auto& sol = *result.solution;
  text += "status: REVISED\n";
  text += "distance: " + std::to_string(sol.distance) + "\n";
  doc["status"] = "revised";
  doc["distance"] = sol.distance;
  doc["norm"] = norm_json(sol.norm, ts.vocab);
  describe_triple(sol.revised, ts, univ, text, doc);
  describe_stats(result.stats, text, doc);
  if (!out_norm.empty()) {
    save_norm(sol.norm, ts.vocab, out_norm);
    text += "wrote: " + out_norm + "\n";
    doc["out_norm"] = out_norm;
  }
  return {0, json ? dump(doc) : text};
}

command_outcome run_oracle(const std::string& kind_name, const std::string& traces_path,
                           bool json) {
  const auto ts = load_traces(traces_path);
  const auto solutions = brute_force_synthesize(ts, parse_kind(kind_name));
  const auto univ = universe(ts);

  std::string text = "kind: " + kind_name + "\n";
  nlohmann::ordered_json doc{{"schema", 1}, {"command", "oracle"}, {"kind", kind_name}};

  if (solutions.empty()) {
    text += "status: NO SOLUTION\nsolutions: 0\n";
    doc["status"] = "no_solution";
    doc["solutions"] = 0;
    return {1, json ? dump(doc) : text};
  }

  text += "status: SOLUTION\n";
  text += "solutions: " + std::to_string(solutions.size()) + "\n";
  doc["status"] = "solution";
  doc["solutions"] = solutions.size();
  // the first solution in enumeration order keeps the report small and stable
  describe_triple(solutions.front(), ts, univ, text, doc);
  return {0, json ? dump(doc) : text};
}

command_outcome run_gen3sat(const std::string& kind_name, std::size_t vars, std::size_t clauses,
                            std::uint64_t seed, const std::string& encoding_name,
                            const std::string& out, const std::string& dimacs, bool json) {
  const auto phi = random_3sat(vars, clauses, seed);
  const auto encoding =
      encoding_name == "binary" ? gadget_encoding::binary : gadget_encoding::one_hot;
  const auto art = parse_kind(kind_name) == norm_kind::prohibition
                       ? gen_prohibition(phi, encoding)
                       : gen_obligation(phi, encoding);

  if (!dimacs.empty()) {
    std::ofstream file(dimacs, std::ios::binary);
    if (!file)
      throw format_error("cannot write '" + dimacs + "'");
    file << to_dimacs(phi);
  }
  if (out.empty())  // no destination file: the trace document is the report
    return {0, save_traces(art.traces)};
  save_traces(art.traces, out);

  std::string text = "instance: " + std::to_string(vars) + " variables, " +
                     std::to_string(clauses) + " clauses, seed " + std::to_string(seed) + "\n";
  text += "kind: " + kind_name + "\n";
  text += "encoding: " + encoding_name + "\n";
  text += "states: " + std::to_string(universe(art.traces).size()) + "\n";
  text += "negative traces: " + std::to_string(art.traces.negative.size()) + "\n";
  text += "positive traces: " + std::to_string(art.traces.positive.size()) + "\n";
  text += "wrote: " + out + "\n";
  nlohmann::ordered_json doc{{"schema", 1},
                             {"command", "gen3sat"},
                             {"variables", vars},
                             {"clauses", clauses},
                             {"seed", seed},
                             {"kind", kind_name},
                             {"encoding", encoding_name},
                             {"states", universe(art.traces).size()},
                             {"negative_traces", art.traces.negative.size()},
                             {"positive_traces", art.traces.positive.size()},
                             {"out", out}};
  if (!dimacs.empty()) {
    text += "wrote: " + dimacs + "\n";
    doc["dimacs"] = dimacs;
  }
  return {0, json ? dump(doc) : text};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact checking, synthesis, and revision of conditional norms on finite traces"};
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);

  const auto add_format = [](CLI::App* cmd, std::string& format) {
    cmd->add_option("--format", format, "report format")
        ->check(CLI::IsMember({"human", "json"}))
        ->capture_default_str();
  };
  const auto add_kind = [](CLI::App* cmd, std::string& kind) {
    cmd->add_option("--kind", kind, "norm kind")
        ->check(CLI::IsMember({"prohibition", "obligation"}))
        ->required();
  };

  auto* check = app.add_subcommand("check", "evaluate a norm on every trace in a file");
  std::string check_norm, check_traces, check_format = "human";
  check->add_option("--norm", check_norm, "norm file")->required();
  check->add_option("--traces", check_traces, "labeled trace file")->required();
  add_format(check, check_format);

  auto* synth = app.add_subcommand("synth", "synthesize a norm separating the labeled traces");
  std::string synth_kind, synth_traces, synth_engine = "sat", synth_out, synth_format = "human";
  std::uint64_t synth_budget = default_step_budget;
  add_kind(synth, synth_kind);
  synth->add_option("--traces", synth_traces, "labeled trace file")->required();
  synth->add_option("--engine", synth_engine, "search engine")
      ->check(CLI::IsMember({"sat", "brute"}))
      ->capture_default_str();
  synth->add_option("--out-norm", synth_out, "write the synthesized norm here");
  synth->add_option("--budget", synth_budget, "search step budget");
  add_format(synth, synth_format);

  auto* revise = app.add_subcommand("revise", "minimally revise a norm to fit the labeled traces");
  std::string revise_norm, revise_traces, revise_out, revise_format = "human";
  std::uint64_t revise_budget = default_step_budget;
  std::size_t revise_max = 0;
  bool revise_minimize = false;
  revise->add_option("--norm", revise_norm, "reference norm file")->required();
  revise->add_option("--traces", revise_traces, "labeled trace file")->required();
  auto* max_opt = revise->add_option("--max-dist", revise_max, "edit distance budget");
  auto* min_flag = revise->add_flag("--minimize", revise_minimize, "find the minimum distance");
  max_opt->excludes(min_flag);
  min_flag->excludes(max_opt);
  revise->add_option("--out-norm", revise_out, "write the revised norm here");
  revise->add_option("--budget", revise_budget, "search step budget");
  add_format(revise, revise_format);

  auto* oracle = app.add_subcommand("oracle", "enumerate all solutions by brute force");
  std::string oracle_kind, oracle_traces, oracle_format = "human";
  add_kind(oracle, oracle_kind);
  oracle->add_option("--traces", oracle_traces, "labeled trace file")->required();
  add_format(oracle, oracle_format);

  auto* gen = app.add_subcommand("gen3sat", "generate a labeled trace instance from random 3SAT");
  std::string gen_kind, gen_encoding = "onehot", gen_out, gen_dimacs, gen_format = "human";
  std::size_t gen_vars = 0, gen_clauses = 0;
  std::uint64_t gen_seed = 0;
  add_kind(gen, gen_kind);
  gen->add_option("--vars", gen_vars, "number of 3SAT variables")
      ->check(CLI::PositiveNumber)
      ->required();
  gen->add_option("--clauses", gen_clauses, "number of 3SAT clauses")
      ->check(CLI::PositiveNumber)
      ->required();
  gen->add_option("--seed", gen_seed, "random seed")->required();
  gen->add_option("--encoding", gen_encoding, "gadget state encoding")
      ->check(CLI::IsMember({"onehot", "binary"}))
      ->capture_default_str();
  gen->add_option("--out", gen_out, "write the trace file here instead of stdout");
  gen->add_option("--dimacs", gen_dimacs, "also write the instance as DIMACS CNF");
  add_format(gen, gen_format);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    command_outcome outcome;
    if (*check) {
      outcome = run_check(check_norm, check_traces, check_format == "json");
    } else if (*synth) {
      outcome = run_synth(synth_kind, synth_traces, synth_engine, synth_out, synth_budget,
                          synth_format == "json");
    } else if (*revise) {
      if (!*max_opt && !revise_minimize)
        throw std::invalid_argument("revise needs --max-dist or --minimize");
      outcome = run_revise(revise_norm, revise_traces,
                           revise_minimize ? std::nullopt : std::optional(revise_max), revise_out,
                           revise_budget, revise_format == "json");
    } else if (*oracle) {
      outcome = run_oracle(oracle_kind, oracle_traces, oracle_format == "json");
    } else {
      outcome = run_gen3sat(gen_kind, gen_vars, gen_clauses, gen_seed, gen_encoding, gen_out,
                            gen_dimacs, gen_format == "json");
    }
    std::cout << outcome.report;
    return outcome.code;
  } catch (const resource_limit_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
