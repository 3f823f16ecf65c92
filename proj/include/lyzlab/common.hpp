#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace lyzlab {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Failure categories surfaced by the library. The CLI maps SchemaError to
/// exit code 2 and every other kind to exit code 3.
enum class ErrorKind {
    ZeroDirection,
    OriginNotInterior,
    DegenerateFacet,
    DegenerateSample,
    NotPositiveDefinite,
    NonSmoothPoint,
    NonConvexGrid,
    SingularMap,
    PositivityViolation,
    BackendUnavailable,
    NotIsotropic,
    NonPositiveWeight,
    NonUnitImage,
    NotIsotropicPosition,
    BarycenterOffOrigin,
    InvalidLevel,
    NotSymmetric,
    OriginNotMinimum,
    SchemaError,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const { return kind_; }

  private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
    throw Error(kind, what);
}

/// Volume of the Euclidean unit ball in dimension n.
double unit_ball_volume(int n);

}  // namespace lyzlab
