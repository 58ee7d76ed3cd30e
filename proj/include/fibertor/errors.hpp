#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fibertor {

// Machine-readable failure codes. Every error path in the library maps to
// exactly one of these; the CLI prints the name verbatim.
enum class ErrorCode {
  InvalidInput,
  DimensionMismatch,
  SingularBasis,
  NotAComplex,
  MissingHomologyBasis,
  NotAHomologyBasis,
  DegenerateLift,
  NotExact,
  BasesIncompatible,
  RelatorViolation,
  ReducibleFiberRestriction,
  CoboundariesNotPreserved,
  NoUnitEigenvalue,
  NonSimpleUnitEigenvalue,
  UnitEigenvalueDivision,
  ReducibleCharacter,
  NotFixedPoint,
  NonInvertibleIntertwiner,
  DegenerateMonodromy,
  NotCoprime,
  AOutOfRange,
  BOutOfRange,
  ParityMismatch,
  NotGenusOne,
  ParseError,
  IoError,
  EmptyGrid,
  UnknownKnot,
  NotUnitarizable,
  NoTraceMap,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidInput: return "INVALID_INPUT";
    case ErrorCode::DimensionMismatch: return "DIMENSION_MISMATCH";
    case ErrorCode::SingularBasis: return "SINGULAR_BASIS";
    case ErrorCode::NotAComplex: return "NOT_A_COMPLEX";
    case ErrorCode::MissingHomologyBasis: return "MISSING_HOMOLOGY_BASIS";
    case ErrorCode::NotAHomologyBasis: return "NOT_A_HOMOLOGY_BASIS";
    case ErrorCode::DegenerateLift: return "DEGENERATE_LIFT";
    case ErrorCode::NotExact: return "NOT_EXACT";
    case ErrorCode::BasesIncompatible: return "BASES_INCOMPATIBLE";
    case ErrorCode::RelatorViolation: return "RELATOR_VIOLATION";
    case ErrorCode::ReducibleFiberRestriction: return "REDUCIBLE_FIBER_RESTRICTION";
    case ErrorCode::CoboundariesNotPreserved: return "COBOUNDARIES_NOT_PRESERVED";
    case ErrorCode::NoUnitEigenvalue: return "NO_UNIT_EIGENVALUE";
    case ErrorCode::NonSimpleUnitEigenvalue: return "NON_SIMPLE_UNIT_EIGENVALUE";
    case ErrorCode::UnitEigenvalueDivision: return "UNIT_EIGENVALUE_DIVISION";
    case ErrorCode::ReducibleCharacter: return "REDUCIBLE_CHARACTER";
    case ErrorCode::NotFixedPoint: return "NOT_FIXED_POINT";
    case ErrorCode::NonInvertibleIntertwiner: return "NON_INVERTIBLE_INTERTWINER";
    case ErrorCode::DegenerateMonodromy: return "DEGENERATE_MONODROMY";
    case ErrorCode::NotCoprime: return "NOT_COPRIME";
    case ErrorCode::AOutOfRange: return "A_OUT_OF_RANGE";
    case ErrorCode::BOutOfRange: return "B_OUT_OF_RANGE";
    case ErrorCode::ParityMismatch: return "PARITY_MISMATCH";
    case ErrorCode::NotGenusOne: return "NOT_GENUS_ONE";
    case ErrorCode::ParseError: return "PARSE_ERROR";
    case ErrorCode::IoError: return "IO_ERROR";
    case ErrorCode::EmptyGrid: return "EMPTY_GRID";
    case ErrorCode::UnknownKnot: return "UNKNOWN_KNOT";
    case ErrorCode::NotUnitarizable: return "NOT_UNITARIZABLE";
    case ErrorCode::NoTraceMap: return "NO_TRACE_MAP";
  }
  return "UNKNOWN";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace fibertor
