// Named failure kinds. `code()` is the stable identifier surfaced by the CLI.
#pragma once

#include <stdexcept>
#include <string>

namespace hplab {

class HpError : public std::runtime_error {
 public:
  HpError(std::string code, const std::string& what)
      : std::runtime_error(code + ": " + what), code_(std::move(code)) {}
  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

#define HPLAB_DEFINE_ERROR(Name)                                        \
  class Name : public HpError {                                         \
   public:                                                              \
    explicit Name(const std::string& what) : HpError(#Name, what) {}    \
  };

// Input validation: the CLI maps these to exit code 1.
HPLAB_DEFINE_ERROR(ExponentSumNonzero)
HPLAB_DEFINE_ERROR(IntegerExponent)
HPLAB_DEFINE_ERROR(InvalidArgument)
HPLAB_DEFINE_ERROR(DivisionByZero)
HPLAB_DEFINE_ERROR(OnBranchCut)
HPLAB_DEFINE_ERROR(OutsideSupport)
HPLAB_DEFINE_ERROR(OnBoundary)
HPLAB_DEFINE_ERROR(OrderMismatch)
HPLAB_DEFINE_ERROR(TruncationTooShort)

// Computational or invariant failures: exit code 2.
HPLAB_DEFINE_ERROR(NonPolynomialTail)
HPLAB_DEFINE_ERROR(GridTooCoarse)
HPLAB_DEFINE_ERROR(SupportMismatch)
HPLAB_DEFINE_ERROR(StructureMismatch)
HPLAB_DEFINE_ERROR(NewtonDivergence)
HPLAB_DEFINE_ERROR(PathCrossesCut)
HPLAB_DEFINE_ERROR(NonConvergence)
HPLAB_DEFINE_ERROR(QuadratureFailure)
HPLAB_DEFINE_ERROR(InternalInconsistency)

#undef HPLAB_DEFINE_ERROR

}  // namespace hplab
