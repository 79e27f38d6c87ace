#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fgdyn {

// Every failure raised by the library carries one of these codes. The CLI maps
// each code to exactly one exit status.
enum class ErrorCode {
  InvalidArgument,
  PrecisionExhausted,
  DivisionByZero,
  MixedContext,
  ImpreciseValuation,
  BadModulus,
  NonzeroConstantTerm,
  NotInvertible,
  DivergentPoint,
  AxiomViolation,
  NotEndomorphism,
  StabilizationFailure,
  Unsupported,
  SingularStep,
  NonCommutingTarget,
  VerificationFailure,
  LiftDivergence,
  ParseError,
  VersionMismatch,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class AxiomViolation : public Error {
 public:
  AxiomViolation(std::string axiom, int degree, std::string witness)
      : Error(ErrorCode::AxiomViolation,
              "axiom '" + axiom + "' fails at degree " + std::to_string(degree) + " (witness " + witness + ")"),
        axiom_(std::move(axiom)),
        degree_(degree),
        witness_(std::move(witness)) {}

  const std::string& axiom() const noexcept { return axiom_; }
  int degree() const noexcept { return degree_; }
  const std::string& witness() const noexcept { return witness_; }

 private:
  std::string axiom_;
  int degree_;
  std::string witness_;
};

class NotEndomorphism : public Error {
 public:
  NotEndomorphism(int degree, std::string witness)
      : Error(ErrorCode::NotEndomorphism,
              "not an endomorphism: mismatch at degree " + std::to_string(degree) + " (witness " + witness + ")"),
        degree_(degree),
        witness_(std::move(witness)) {}

  int degree() const noexcept { return degree_; }
  const std::string& witness() const noexcept { return witness_; }

 private:
  int degree_;
  std::string witness_;
};

class SingularStep : public Error {
 public:
  explicit SingularStep(int degree)
      : Error(ErrorCode::SingularStep,
              "difference operator is singular at degree " + std::to_string(degree)),
        degree_(degree) {}

  int degree() const noexcept { return degree_; }

 private:
  int degree_;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t offset, const std::string& what)
      : Error(ErrorCode::ParseError,
              "parse error at line " + std::to_string(line) + ", offset " + std::to_string(offset) + ": " + what),
        line_(line),
        offset_(offset) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t line_;
  std::size_t offset_;
};

}  // namespace fgdyn
