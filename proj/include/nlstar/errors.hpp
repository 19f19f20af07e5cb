#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace nlstar {

// Argument outside an operation's domain (letter out of range, bad probability, ...).
class DomainError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// Invalid experiment or oracle configuration.
class ConfigError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// A caller broke an operation's precondition in a way only detectable at run time,
// e.g. handing the learner a word that is not a counterexample.
class ContractError : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

class ParseError : public std::runtime_error {
public:
  ParseError(std::size_t line, const std::string& message)
      : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}

  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

} // namespace nlstar
