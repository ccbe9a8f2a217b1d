/*!
  \file tracemodel.hpp
  \brief Traces, labeled trace sets, universe extraction, and the JSON trace
         file format.
*/

#pragma once

#include "propcore.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace normsynth {

/// Finite non-empty sequence of states; reports index it 1-based.
using trace = std::vector<state>;

/*! \brief A set of traces partitioned into positives (no violation expected)
 *         and negatives (a violation expected). Immutable after load. */
struct labeled_trace_set {
  vocabulary vocab;
  std::vector<trace> positive;
  std::vector<trace> negative;

  bool operator==(const labeled_trace_set&) const = default;
};

/*! \brief Raised when a trace or norm file violates the expected format. */
class format_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/*! \brief Deduplicated states in first-occurrence order: positives before
 *         negatives, each trace left to right.
 *
 * The order is canonical; solver variable numbering and reports index states
 * by their position here.
 */
inline std::vector<state> universe(const labeled_trace_set& ts) {
  std::vector<state> out;
  auto scan = [&](const std::vector<trace>& traces) {
    for (const auto& t : traces)
      for (const auto& s : t)
        if (std::find(out.begin(), out.end(), s) == out.end())
          out.push_back(s);
  };
  scan(ts.positive);
  scan(ts.negative);
  return out;
}

namespace detail {

inline std::string trace_location(const char* group, std::size_t trace_index) {
  return std::string(group) + "[" + std::to_string(trace_index) + "]";
}

inline std::vector<trace> parse_trace_group(const nlohmann::ordered_json& doc, const char* group,
                                            const vocabulary& vocab) {
  if (!doc.contains(group) || !doc[group].is_array())
    throw format_error(std::string("trace file missing \"") + group + "\" array");
  std::vector<trace> out;
  std::size_t trace_index = 0;
  for (const auto& trace_node : doc[group]) {
    const auto where = trace_location(group, trace_index);
    if (!trace_node.is_array())
      throw format_error("trace at " + where + " must be an array of states");
    if (trace_node.empty())
      throw format_error("empty trace at " + where);
    trace t;
    std::size_t state_index = 0;
    for (const auto& state_node : trace_node) {
      const auto state_where = where + "[" + std::to_string(state_index) + "]";
      if (!state_node.is_object())
        throw format_error("state at " + state_where + " must be an object");
      for (const auto& [key, value] : state_node.items()) {
        if (!vocab.index_of(key))
          throw format_error("unknown proposition '" + key + "' at " + state_where);
        if (!value.is_boolean())
          throw format_error("proposition '" + key + "' at " + state_where + " must be a boolean");
      }
      std::vector<bool> bits(vocab.size());
      for (std::size_t i = 0; i < vocab.size(); ++i) {
        const auto& name = vocab.name(i);
        if (!state_node.contains(name))
          throw format_error("missing proposition '" + name + "' at " + state_where);
        bits[i] = state_node[name].get<bool>();
      }
      t.emplace_back(std::move(bits));
      ++state_index;
    }
    out.push_back(std::move(t));
    ++trace_index;
  }
  return out;
}

inline void append_json_string(std::string& out, std::string_view text) {
  out += '"';
  for (const char c : text) {
    if (c == '"' || c == '\\')
      out += '\\';
    out += c;
  }
  out += '"';
}

inline void append_state_object(std::string& out, const state& s, const vocabulary& vocab) {
  out += '{';
  for (std::size_t i = 0; i < vocab.size(); ++i) {
    if (i)
      out += ", ";
    append_json_string(out, vocab.name(i));
    out += ": ";
    out += s.value(i) ? "true" : "false";
  }
  out += '}';
}

inline void append_trace_group(std::string& out, const char* group, const std::vector<trace>& traces,
                               const vocabulary& vocab) {
  out += "  ";
  append_json_string(out, group);
  out += ": [";
  if (traces.empty()) {
    out += ']';
    return;
  }
  out += '\n';
  for (std::size_t t = 0; t < traces.size(); ++t) {
    out += "    [";
    for (std::size_t i = 0; i < traces[t].size(); ++i) {
      if (i)
        out += ", ";
      append_state_object(out, traces[t][i], vocab);
    }
    out += ']';
    if (t + 1 < traces.size())
      out += ',';
    out += '\n';
  }
  out += "  ]";
}

}  // namespace detail

/*! \brief Parse the JSON trace file format from a stream.
 *
 * Expected shape:
 * `{"propositions": ["a","b"], "positive": [[{"a":true,"b":false}, ...], ...],
 *   "negative": [...]}` where every state object assigns every declared
 * proposition. Throws format_error on any violation, naming the offending
 * trace and state.
 */
inline labeled_trace_set load_traces(std::istream& in) {
  nlohmann::ordered_json doc;
  try {
    doc = nlohmann::ordered_json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw format_error(std::string("malformed trace file: ") + e.what());
  }
  if (!doc.is_object())
    throw format_error("trace file must be a JSON object");
  if (!doc.contains("propositions") || !doc["propositions"].is_array())
    throw format_error("trace file missing \"propositions\" array");
  std::vector<std::string> names;
  for (const auto& node : doc["propositions"]) {
    if (!node.is_string())
      throw format_error("proposition names must be strings");
    names.push_back(node.get<std::string>());
  }
  try {
    vocabulary vocab(std::move(names));
    auto positive = detail::parse_trace_group(doc, "positive", vocab);
    auto negative = detail::parse_trace_group(doc, "negative", vocab);
    return labeled_trace_set{std::move(vocab), std::move(positive), std::move(negative)};
  } catch (const std::invalid_argument& e) {
    throw format_error(e.what());
  }
}

/*! \brief Load a trace file from disk. */
inline labeled_trace_set load_traces(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in)
    throw format_error("cannot open trace file '" + path.string() + "'");
  return load_traces(in);
}

inline labeled_trace_set parse_traces(const std::string& text) {
  std::istringstream in(text);
  return load_traces(in);
}

/*! \brief Canonical textual form of a trace set: propositions inline, one
 *         trace per line, states as inline objects in vocabulary order.
 *
 * Loading canonical text and saving it again is byte-identical.
 */
inline std::string save_traces(const labeled_trace_set& ts) {
  std::string out = "{\n  \"propositions\": [";
  for (std::size_t i = 0; i < ts.vocab.size(); ++i) {
    if (i)
      out += ", ";
    detail::append_json_string(out, ts.vocab.name(i));
  }
  out += "],\n";
  detail::append_trace_group(out, "positive", ts.positive, ts.vocab);
  out += ",\n";
  detail::append_trace_group(out, "negative", ts.negative, ts.vocab);
  out += "\n}\n";
  return out;
}

/*! \brief Write the canonical form to disk. */
inline void save_traces(const labeled_trace_set& ts, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out)
    throw format_error("cannot write trace file '" + path.string() + "'");
  out << save_traces(ts);
}

/*! \brief State as a JSON object, propositions in vocabulary order. */
inline nlohmann::ordered_json state_to_json(const state& s, const vocabulary& vocab) {
  nlohmann::ordered_json obj = nlohmann::ordered_json::object();
  for (std::size_t i = 0; i < vocab.size(); ++i)
    obj[vocab.name(i)] = s.value(i);
  return obj;
}

}  // namespace normsynth
