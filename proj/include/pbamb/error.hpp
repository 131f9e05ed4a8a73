#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pbamb {

/// Base of all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed automaton text. Carries the 1-based line number.
class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& msg)
        : Error("line " + std::to_string(line) + ": " + msg), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

/// Structurally invalid automaton (bad distribution, undeclared name, ...).
class ValidationError : public Error {
public:
    using Error::Error;
};

enum class Precondition {
    empty_automaton,
    not_countably_ambiguous,
    not_finitely_ambiguous,
    not_exponentially_ambiguous,
    not_flat,
    not_deterministic,
    not_limit_deterministic,
    invalid_threshold,
    wrong_kind,
    not_weak,
};

inline const char* to_string(Precondition p) {
    switch (p) {
    case Precondition::empty_automaton: return "EmptyAutomaton";
    case Precondition::not_countably_ambiguous: return "NotCountablyAmbiguous";
    case Precondition::not_finitely_ambiguous: return "NotFinitelyAmbiguous";
    case Precondition::not_exponentially_ambiguous: return "NotExponentiallyAmbiguous";
    case Precondition::not_flat: return "NotFlat";
    case Precondition::not_deterministic: return "NotDeterministic";
    case Precondition::not_limit_deterministic: return "NotLimitDeterministic";
    case Precondition::invalid_threshold: return "InvalidThreshold";
    case Precondition::wrong_kind: return "WrongKind";
    case Precondition::not_weak: return "NotWeak";
    }
    return "Precondition";
}

/// A semantic precondition of an operation does not hold. `detail` holds a
/// human-readable witness (e.g. the offending ambiguity pattern) when known.
class PreconditionError : public Error {
public:
    PreconditionError(Precondition which, const std::string& detail)
        : Error(std::string(to_string(which)) + (detail.empty() ? "" : ": " + detail)),
          which_(which), detail_(detail) {}
    Precondition which() const { return which_; }
    const std::string& detail() const { return detail_; }

private:
    Precondition which_;
    std::string detail_;
};

}  // namespace pbamb
