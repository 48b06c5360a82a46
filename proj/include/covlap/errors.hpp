#ifndef COVLAP_ERRORS_HPP
#define COVLAP_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace covlap {

/// Base class for all library errors.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

#define COVLAP_DEFINE_ERROR(Name)                                \
  struct Name : Error {                                          \
    explicit Name(const std::string& msg) : Error(#Name ": " + msg) {} \
  }

// Algebra validation
COVLAP_DEFINE_ERROR(AntisymmetryViolation);
COVLAP_DEFINE_ERROR(JacobiViolation);
COVLAP_DEFINE_ERROR(MetricNotPositiveDefinite);
COVLAP_DEFINE_ERROR(MetricNotInvariant);
COVLAP_DEFINE_ERROR(DimensionMismatch);

// Grid / field operations
COVLAP_DEFINE_ERROR(AxisOutOfRange);
COVLAP_DEFINE_ERROR(GridMismatch);
COVLAP_DEFINE_ERROR(AlgebraMismatch);
COVLAP_DEFINE_ERROR(DeltaNonpositive);
COVLAP_DEFINE_ERROR(MNonpositive);
COVLAP_DEFINE_ERROR(BallOutsideBox);

// Norms
COVLAP_DEFINE_ERROR(POutOfRange);
COVLAP_DEFINE_ERROR(SigmaOutOfRange);
COVLAP_DEFINE_ERROR(OrderTooLargeForGrid);

// Solver
COVLAP_DEFINE_ERROR(GridTooSmall);
COVLAP_DEFINE_ERROR(BasisDegenerate);

// Inequality checks
COVLAP_DEFINE_ERROR(EmptyFamily);
COVLAP_DEFINE_ERROR(PNotGreaterThanOne);
COVLAP_DEFINE_ERROR(ExponentOutOfRange);
COVLAP_DEFINE_ERROR(OrderUnsupported);
COVLAP_DEFINE_ERROR(DeltaListEmpty);

// CLI / IO
COVLAP_DEFINE_ERROR(ConfigError);
COVLAP_DEFINE_ERROR(IoError);

#undef COVLAP_DEFINE_ERROR

}  // namespace covlap

#endif  // COVLAP_ERRORS_HPP
