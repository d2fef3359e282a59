#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace simconj {

enum class ErrorCode {
  RepeatedPoint,          // a point appears twice in a cycle list
  Malformed,              // unparseable cycle text
  InverseFactorPresent,   // profile precondition: g has a cycle whose inverse is in h
  ClassificationFailure,  // pair fits no template
  PointNotInCycle,        // anchor point not on the given cycle
  LengthMismatch,         // cycles that must have equal length do not
  NotDisjoint,            // cycles required to be disjoint overlap
  PreconditionViolated,   // generic contract breach (documented per function)
  NotCommuting,           // commuting-case entry point got a non-commuting pair
  InvalidChain,           // chain reduction input is not an actual chain
  TemplateMismatch,       // case data does not reproduce the pair
  NotSameConjugate,       // transfer requires alpha^beta' == alpha^beta0
  NoEqualLengthSwap,      // transfer residue permutes factors but no swap fits
  Overflow,               // checked integer arithmetic overflowed
  BudgetExceeded,         // enumeration would exceed the configured budget
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what, std::size_t position = npos)
      : std::runtime_error(what), code_(code), position_(position) {}

  ErrorCode code() const { return code_; }
  // Byte offset into the input text for parse errors, npos otherwise.
  std::size_t position() const { return position_; }

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  ErrorCode code_;
  std::size_t position_;
};

}  // namespace simconj
