#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lassoeq {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad input data, arguments, or configuration. The CLI maps these to exit 2.
class InputError : public Error {
 public:
  using Error::Error;
};

/// Numerical failure (non-convergence, unbounded/infeasible programs,
/// problems too large to enumerate). The CLI maps these to exit 3.
class NumericalError : public Error {
 public:
  using Error::Error;
};

#define LASSOEQ_DEFINE_ERROR(Name, Base) \
  class Name : public Base {             \
   public:                               \
    using Base::Base;                    \
  }

LASSOEQ_DEFINE_ERROR(MissingColumn, InputError);
LASSOEQ_DEFINE_ERROR(NonBinaryTarget, InputError);
LASSOEQ_DEFINE_ERROR(ConstantTarget, InputError);
LASSOEQ_DEFINE_ERROR(AllColumnsConstant, InputError);
LASSOEQ_DEFINE_ERROR(TooFewSamples, InputError);
LASSOEQ_DEFINE_ERROR(EmptyGrid, InputError);
LASSOEQ_DEFINE_ERROR(DimensionMismatch, InputError);
LASSOEQ_DEFINE_ERROR(InvalidSigns, DimensionMismatch);
LASSOEQ_DEFINE_ERROR(InvalidBox, InputError);
LASSOEQ_DEFINE_ERROR(IndexOutOfRange, InputError);
LASSOEQ_DEFINE_ERROR(FoldTooSmall, InputError);
LASSOEQ_DEFINE_ERROR(EmptySupport, InputError);
LASSOEQ_DEFINE_ERROR(ZeroMean, InputError);
LASSOEQ_DEFINE_ERROR(TooFew, InputError);

LASSOEQ_DEFINE_ERROR(SeparableData, NumericalError);
LASSOEQ_DEFINE_ERROR(Unbounded, NumericalError);
LASSOEQ_DEFINE_ERROR(Infeasible, NumericalError);

#undef LASSOEQ_DEFINE_ERROR

class ParseError : public InputError {
 public:
  ParseError(std::size_t row, std::size_t col, const std::string& what)
      : InputError("parse error at row " + std::to_string(row) + ", column " +
                   std::to_string(col) + ": " + what),
        row_(row),
        col_(col) {}

  std::size_t row() const noexcept { return row_; }
  std::size_t col() const noexcept { return col_; }

 private:
  std::size_t row_;
  std::size_t col_;
};

class NoConvergence : public NumericalError {
 public:
  NoConvergence(const std::string& what, long iterations)
      : NumericalError(what + " did not converge after " +
                       std::to_string(iterations) + " iterations"),
        iterations_(iterations) {}

  long iterations() const noexcept { return iterations_; }

 private:
  long iterations_;
};

class DimensionTooLarge : public NumericalError {
 public:
  DimensionTooLarge(long dimension, long cap)
      : NumericalError("polytope dimension " + std::to_string(dimension) +
                       " exceeds the enumeration cap (dim_cap = " +
                       std::to_string(cap) + ")"),
        dimension_(dimension),
        cap_(cap) {}

  long dimension() const noexcept { return dimension_; }
  long cap() const noexcept { return cap_; }

 private:
  long dimension_;
  long cap_;
};

}  // namespace lassoeq
