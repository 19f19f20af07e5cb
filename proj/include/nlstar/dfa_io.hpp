#pragma once

// Line-based DFA text format:
//
//   dfa <num_states> <alphabet_size> <initial>
//   finals <k> <f1> ... <fk>            (ascending)
//   trans <q> <t_0> ... <t_{|Σ|-1}>      (one row per state, ascending q)
//   counter <c_lambda> <c_0> ... <c_{|Σ|-1}>   (optional, counter devices only)
//
// '#' starts a comment running to end of line; blank lines are skipped.

#include <charconv>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "nlstar/automaton.hpp"
#include "nlstar/noise.hpp"

namespace nlstar {

inline std::string serialize_dfa(const Dfa& dfa) {
  std::ostringstream out;
  out << "dfa " << dfa.num_states() << ' ' << dfa.alphabet_size() << ' ' << dfa.initial() << '\n';
  const auto finals = dfa.finals();
  out << "finals " << finals.size();
  for (State f : finals) out << ' ' << f;
  out << '\n';
  for (State q = 0; q < dfa.num_states(); ++q) {
    out << "trans " << q;
    for (State t : dfa.row(q)) out << ' ' << t;
    out << '\n';
  }
  return out.str();
}

inline std::string serialize_counter(const CounterFunction& counter) {
  std::ostringstream out;
  out << "counter " << counter.c_lambda;
  for (auto c : counter.per_letter) out << ' ' << c;
  out << '\n';
  return out.str();
}

struct DeviceFile {
  Dfa dfa;
  std::optional<CounterFunction> counter;
};

namespace detail {

struct TextLine {
  std::size_t number;
  std::vector<std::string_view> fields;
};

inline std::vector<TextLine> tokenize(std::string_view text) {
  std::vector<TextLine> lines;
  std::size_t number = 0;
  while (!text.empty()) {
    ++number;
    const auto eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    TextLine parsed{number, {}};
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
      std::size_t j = i;
      while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
      if (j > i) parsed.fields.push_back(line.substr(i, j - i));
      i = j;
    }
    if (!parsed.fields.empty()) lines.push_back(std::move(parsed));
  }
  return lines;
}

template <class Int>
Int parse_int(const TextLine& line, std::size_t field, std::string_view what) {
  if (field >= line.fields.size()) {
    throw ParseError(line.number, "missing field " + std::to_string(field) + " (" + std::string(what) + ")");
  }
  const auto token = line.fields[field];
  Int value{};
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size()) {
    throw ParseError(line.number, "field " + std::to_string(field) + " (" + std::string(what) +
                                      "): not an integer: '" + std::string(token) + "'");
  }
  return value;
}

inline void expect_keyword(const TextLine& line, std::string_view keyword) {
  if (line.fields.front() != keyword) {
    throw ParseError(line.number, "expected '" + std::string(keyword) + "', found '" +
                                      std::string(line.fields.front()) + "'");
  }
}

inline void expect_arity(const TextLine& line, std::size_t count) {
  if (line.fields.size() != count) {
    throw ParseError(line.number, "expected " + std::to_string(count) + " fields, found " +
                                      std::to_string(line.fields.size()));
  }
}

} // namespace detail

// Parses a DFA optionally followed by a counter line.
inline DeviceFile parse_device(std::string_view text) {
  using detail::expect_arity;
  using detail::expect_keyword;
  using detail::parse_int;

  const auto lines = detail::tokenize(text);
  if (lines.empty()) throw ParseError(1, "empty input, expected 'dfa' header");

  const auto& header = lines[0];
  expect_keyword(header, "dfa");
  expect_arity(header, 4);
  const auto n = parse_int<std::size_t>(header, 1, "num_states");
  const auto k = parse_int<std::size_t>(header, 2, "alphabet_size");
  const auto initial = parse_int<State>(header, 3, "initial");
  if (n == 0) throw ParseError(header.number, "num_states must be positive");
  if (k == 0) throw ParseError(header.number, "alphabet_size must be positive");
  if (initial >= n) throw ParseError(header.number, "initial state out of range");

  if (lines.size() < 2) throw ParseError(header.number + 1, "missing 'finals' line");
  const auto& finals_line = lines[1];
  expect_keyword(finals_line, "finals");
  const auto count = parse_int<std::size_t>(finals_line, 1, "final count");
  expect_arity(finals_line, count + 2);
  std::vector<State> finals;
  finals.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const auto f = parse_int<State>(finals_line, i + 2, "final state");
    if (f >= n) throw ParseError(finals_line.number, "final state " + std::to_string(f) + " out of range");
    if (!finals.empty() && f <= finals.back()) {
      throw ParseError(finals_line.number, "final states must be strictly ascending");
    }
    finals.push_back(f);
  }

  std::vector<State> transitions;
  transitions.reserve(n * k);
  for (std::size_t q = 0; q < n; ++q) {
    if (2 + q >= lines.size()) {
      const std::size_t at = lines.back().number + 1;
      throw ParseError(at, "transition table is not complete: missing row for state " + std::to_string(q));
    }
    const auto& row = lines[2 + q];
    if (row.fields.front() != "trans") {
      throw ParseError(row.number, "transition table is not complete: expected row for state " +
                                       std::to_string(q) + ", found '" + std::string(row.fields.front()) + "'");
    }
    if (parse_int<std::size_t>(row, 1, "state") != q) {
      throw ParseError(row.number, "expected transition row for state " + std::to_string(q));
    }
    if (row.fields.size() != k + 2) {
      throw ParseError(row.number, "transition table is not complete: expected " + std::to_string(k) +
                                       " targets, found " + std::to_string(row.fields.size() - 2));
    }
    for (std::size_t a = 0; a < k; ++a) {
      const auto t = parse_int<State>(row, a + 2, "target");
      if (t >= n) throw ParseError(row.number, "target " + std::to_string(t) + " out of range");
      transitions.push_back(t);
    }
  }

  DeviceFile out{Dfa(n, Alphabet{k}, initial, std::move(finals), std::move(transitions)), std::nullopt};

  std::size_t next = 2 + n;
  if (next < lines.size() && lines[next].fields.front() == "counter") {
    const auto& line = lines[next];
    expect_arity(line, k + 2);
    CounterFunction counter;
    counter.c_lambda = parse_int<std::int64_t>(line, 1, "c_lambda");
    for (std::size_t a = 0; a < k; ++a) counter.per_letter.push_back(parse_int<std::int64_t>(line, a + 2, "c"));
    out.counter = std::move(counter);
    ++next;
  }
  if (next < lines.size()) {
    throw ParseError(lines[next].number, "unexpected '" + std::string(lines[next].fields.front()) + "' line");
  }
  return out;
}

// Plain DFA; a trailing counter line is rejected.
inline Dfa parse_dfa(std::string_view text) {
  auto device = parse_device(text);
  if (device.counter) throw ParseError(1, "counter device given where a plain DFA was expected");
  return std::move(device.dfa);
}

} // namespace nlstar
