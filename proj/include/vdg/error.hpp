#pragma once

#include <stdexcept>
#include <string>

namespace vdg {

// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed group spec, JSON document or CLI input.
class SpecError : public Error {
 public:
  using Error::Error;
};

// A Cayley table that violates a group law. `law` names the failed law and
// (a, b, c) is a witness; unused witness slots are -1.
class GroupLawError : public Error {
 public:
  GroupLawError(std::string law, int a, int b, int c)
      : Error("group law violated: " + law + " (witness " + std::to_string(a) +
              ", " + std::to_string(b) + ", " + std::to_string(c) + ")"),
        law_(std::move(law)),
        a_(a),
        b_(b),
        c_(c) {}

  const std::string& law() const { return law_; }
  int a() const { return a_; }
  int b() const { return b_; }
  int c() const { return c_; }

 private:
  std::string law_;
  int a_, b_, c_;
};

// A configured size guardrail would be exceeded.
class LimitError : public Error {
 public:
  using Error::Error;
};

// A caller broke an operation's precondition (unknown vertex, bad index...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// A challenge naming a group index outside 1..k.
class BadIndexError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

// A move on a game whose rounds are all played.
class GameOverError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

// A construction failed its machine-checked invariants.
class VerificationError : public Error {
 public:
  using Error::Error;
};

}  // namespace vdg
