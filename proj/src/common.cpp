#include "lyzlab/common.hpp"

#include <cmath>

namespace lyzlab {

const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::ZeroDirection: return "ZeroDirection";
        case ErrorKind::OriginNotInterior: return "OriginNotInterior";
        case ErrorKind::DegenerateFacet: return "DegenerateFacet";
        case ErrorKind::DegenerateSample: return "DegenerateSample";
        case ErrorKind::NotPositiveDefinite: return "NotPositiveDefinite";
        case ErrorKind::NonSmoothPoint: return "NonSmoothPoint";
        case ErrorKind::NonConvexGrid: return "NonConvexGrid";
        case ErrorKind::SingularMap: return "SingularMap";
        case ErrorKind::PositivityViolation: return "PositivityViolation";
        case ErrorKind::BackendUnavailable: return "BackendUnavailable";
        case ErrorKind::NotIsotropic: return "NotIsotropic";
        case ErrorKind::NonPositiveWeight: return "NonPositiveWeight";
        case ErrorKind::NonUnitImage: return "NonUnitImage";
        case ErrorKind::NotIsotropicPosition: return "NotIsotropicPosition";
        case ErrorKind::BarycenterOffOrigin: return "BarycenterOffOrigin";
        case ErrorKind::InvalidLevel: return "InvalidLevel";
        case ErrorKind::NotSymmetric: return "NotSymmetric";
        case ErrorKind::OriginNotMinimum: return "OriginNotMinimum";
        case ErrorKind::SchemaError: return "SchemaError";
    }
    return "Error";
}

double unit_ball_volume(int n) {
    return std::pow(M_PI, n / 2.0) / std::tgamma(n / 2.0 + 1.0);
}

}  // namespace lyzlab
