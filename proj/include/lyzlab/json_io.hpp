#pragma once

#include "lyzlab/common.hpp"
#include "lyzlab/isotropic.hpp"
#include "lyzlab/log_concave.hpp"
#include "lyzlab/polytope.hpp"
#include "lyzlab/verify.hpp"

#include <json.hpp>

#include <string>

namespace lyzlab::io {

using nlohmann::json;

// readers throw Error(SchemaError, ...) with a field diagnostic
bodies::Polytope read_polytope(const json& j);
logconcave::LogConcaveFn read_function(const json& j);
logconcave::DiscreteMeasure read_discrete_measure(const json& j);
isotropic::SphericalMeasure read_spherical_measure(const json& j);

json write_polytope(const bodies::Polytope& p);
json write_ellipsoid(const Mat& matrix);
json write_function(const logconcave::LogConcaveFn& f);
json write_discrete_measure(const logconcave::DiscreteMeasure& m);
json write_spherical_measure(const isotropic::SphericalMeasure& mu);
json write_report(const verify::VerificationReport& r);

/// header + one line per report; LF endings, flags joined with ';'
std::string reports_csv(const std::vector<verify::VerificationReport>& reports);

json load_file(const std::string& path);
void save_file(const std::string& path, const json& j);

}  // namespace lyzlab::io
