#include "lyzlab/json_io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace lyzlab::io {

namespace {

const json& need(const json& j, const char* key) {
    const auto it = j.find(key);
    if (it == j.end()) fail(ErrorKind::SchemaError, std::string("missing field '") + key + "'");
    return *it;
}

double need_number(const json& j, const char* key) {
    const json& v = need(j, key);
    if (!v.is_number()) fail(ErrorKind::SchemaError, std::string("field '") + key + "' must be a number");
    return v.get<double>();
}

Vec read_vec(const json& j, const char* key) {
    if (!j.is_array()) fail(ErrorKind::SchemaError, std::string("field '") + key + "' must be an array");
    Vec v(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_number())
            fail(ErrorKind::SchemaError, std::string("field '") + key + "' must hold numbers");
        v[static_cast<int>(i)] = j[i].get<double>();
    }
    return v;
}

json write_vec(const Vec& v) {
    json a = json::array();
    for (int i = 0; i < v.size(); ++i) a.push_back(v[i]);
    return a;
}

Mat read_mat(const json& j, const char* key) {
    if (!j.is_array() || j.empty())
        fail(ErrorKind::SchemaError, std::string("field '") + key + "' must be a nonempty array of rows");
    const std::size_t cols = j[0].size();
    Mat m(j.size(), cols);
    for (std::size_t r = 0; r < j.size(); ++r) {
        if (!j[r].is_array() || j[r].size() != cols)
            fail(ErrorKind::SchemaError, std::string("field '") + key + "' rows must have equal length");
        for (std::size_t c = 0; c < cols; ++c) m(static_cast<int>(r), static_cast<int>(c)) = j[r][c].get<double>();
    }
    return m;
}

json write_mat(const Mat& m) {
    json rows = json::array();
    for (int r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (int c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(row);
    }
    return rows;
}

/// numbers pass through; non-finite values travel as the string "inf"
json write_extended(double v) {
    if (std::isfinite(v)) return v;
    return v > 0 ? "inf" : "-inf";
}

double read_extended(const json& j) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        if (s == "inf") return std::numeric_limits<double>::infinity();
        if (s == "-inf") return -std::numeric_limits<double>::infinity();
    }
    fail(ErrorKind::SchemaError, "expected a number or 'inf'");
}

}  // namespace

bodies::Polytope read_polytope(const json& j) {
    const std::string type = need(j, "type").get<std::string>();
    if (type != "polytope") fail(ErrorKind::SchemaError, "type must be 'polytope'");
    const int n = static_cast<int>(need_number(j, "dimension"));
    const json& verts = need(j, "vertices");
    if (!verts.is_array() || verts.empty()) fail(ErrorKind::SchemaError, "vertices must be a nonempty array");
    std::vector<Vec> points;
    points.reserve(verts.size());
    for (const json& v : verts) {
        Vec p = read_vec(v, "vertices");
        if (static_cast<int>(p.size()) != n)
            fail(ErrorKind::SchemaError, "vertex length disagrees with 'dimension'");
        points.push_back(std::move(p));
    }
    const int ah = bodies::affine_hull_dimension(points);
    if (ah < n)
        fail(ErrorKind::SchemaError, "vertices are not full-dimensional: affine hull dimension " +
                                         std::to_string(ah) + ", expected " + std::to_string(n));
    return bodies::Polytope(std::move(points));
}

logconcave::LogConcaveFn read_function(const json& j) {
    const std::string family = need(j, "family").get<std::string>();
    if (family == "gaussian") {
        const int n = static_cast<int>(need_number(j, "dimension"));
        return logconcave::LogConcaveFn::gaussian(n, need_number(j, "scale"));
    }
    if (family == "quad-form") return logconcave::LogConcaveFn::quad_form(read_mat(need(j, "matrix"), "matrix"));
    if (family == "quad-minkowski")
        return logconcave::LogConcaveFn::quad_minkowski(read_polytope(need(j, "body")),
                                                        need_number(j, "scale"));
    if (family == "cone")
        return logconcave::LogConcaveFn::cone(read_polytope(need(j, "body")), need_number(j, "offset"));
    if (family == "indicator")
        return logconcave::LogConcaveFn::indicator(read_polytope(need(j, "body")), need_number(j, "offset"));
    if (family == "grid") {
        logconcave::GridPotential g;
        g.origin = read_vec(need(j, "origin"), "origin");
        g.spacing = read_vec(need(j, "spacing"), "spacing");
        for (const json& s : need(j, "shape")) g.shape.push_back(s.get<int>());
        for (const json& v : need(j, "values")) g.values.push_back(read_extended(v));
        return logconcave::LogConcaveFn::grid(std::move(g));
    }
    fail(ErrorKind::SchemaError, "unknown family '" + family + "'");
}

logconcave::DiscreteMeasure read_discrete_measure(const json& j) {
    const std::string type = need(j, "type").get<std::string>();
    if (type != "discrete-measure") fail(ErrorKind::SchemaError, "type must be 'discrete-measure'");
    logconcave::DiscreteMeasure m;
    for (const json& p : need(j, "points")) m.points.push_back(read_vec(p, "points"));
    for (const json& w : need(j, "weights")) m.weights.push_back(w.get<double>());
    m.validate();
    return m;
}

isotropic::SphericalMeasure read_spherical_measure(const json& j) {
    const std::string type = need(j, "type").get<std::string>();
    if (type != "spherical-measure") fail(ErrorKind::SchemaError, "type must be 'spherical-measure'");
    isotropic::SphericalMeasure mu;
    mu.dim = static_cast<int>(need_number(j, "dimension"));
    for (const json& atom : need(j, "atoms")) {
        mu.atoms.push_back(read_vec(need(atom, "u"), "u"));
        mu.weights.push_back(need_number(atom, "w"));
    }
    mu.validate();
    return mu;
}

json write_polytope(const bodies::Polytope& p) {
    json verts = json::array();
    for (const Vec& v : p.vertices()) verts.push_back(write_vec(v));
    return json{{"type", "polytope"}, {"dimension", p.dimension()}, {"vertices", verts}};
}

json write_ellipsoid(const Mat& matrix) {
    return json{{"type", "ellipsoid"}, {"matrix", write_mat(matrix)}};
}

json write_function(const logconcave::LogConcaveFn& f) {
    using namespace logconcave;
    if (const auto* g = f.as<Gaussian>())
        return json{{"family", "gaussian"}, {"dimension", f.dimension()}, {"scale", g->scale}};
    if (const auto* q = f.as<QuadForm>()) return json{{"family", "quad-form"}, {"matrix", write_mat(q->a)}};
    if (const auto* q = f.as<QuadMinkowski>())
        return json{{"family", "quad-minkowski"}, {"body", write_polytope(q->body)}, {"scale", q->scale}};
    if (const auto* c = f.as<ConeFn>())
        return json{{"family", "cone"}, {"body", write_polytope(c->body)}, {"offset", c->offset}};
    if (const auto* i = f.as<IndicatorFn>())
        return json{{"family", "indicator"}, {"body", write_polytope(i->body)}, {"offset", i->offset}};
    const auto* g = f.as<GridPotential>();
    json values = json::array();
    for (double v : g->values) values.push_back(write_extended(v));
    return json{{"family", "grid"},
                {"origin", write_vec(g->origin)},
                {"spacing", write_vec(g->spacing)},
                {"shape", g->shape},
                {"values", values}};
}

json write_discrete_measure(const logconcave::DiscreteMeasure& m) {
    json pts = json::array();
    for (const Vec& p : m.points) pts.push_back(write_vec(p));
    return json{{"type", "discrete-measure"}, {"points", pts}, {"weights", m.weights}};
}

json write_spherical_measure(const isotropic::SphericalMeasure& mu) {
    json atoms = json::array();
    for (std::size_t k = 0; k < mu.atoms.size(); ++k)
        atoms.push_back(json{{"u", write_vec(mu.atoms[k])}, {"w", mu.weights[k]}});
    return json{{"type", "spherical-measure"}, {"dimension", mu.dim}, {"atoms", atoms}};
}

json write_report(const verify::VerificationReport& r) {
    return json{{"id", r.id},
                {"kind", r.kind},
                {"n", r.n},
                {"lhs", write_extended(r.lhs)},
                {"rhs", r.rhs},
                {"ratio", write_extended(r.ratio)},
                {"tolerance", r.tolerance},
                {"backend", r.backend},
                {"error_bound", r.error_bound},
                {"seed", r.seed},
                {"flags", r.flags},
                {"pass", r.pass}};
}

std::string reports_csv(const std::vector<verify::VerificationReport>& reports) {
    std::ostringstream out;
    out << "id,kind,n,ratio,pass,flags,seed\n";
    for (const auto& r : reports) {
        out << r.id << ',' << r.kind << ',' << r.n << ',';
        if (std::isfinite(r.ratio))
            out << r.ratio;
        else
            out << "inf";
        out << ',' << (r.pass ? "true" : "false") << ',';
        for (std::size_t i = 0; i < r.flags.size(); ++i) out << (i ? ";" : "") << r.flags[i];
        out << ',' << r.seed << '\n';
    }
    return out.str();
}

json load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::SchemaError, "cannot open '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        fail(ErrorKind::SchemaError, e.what());
    }
}

void save_file(const std::string& path, const json& j) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorKind::SchemaError, "cannot open '" + path + "' for writing");
    out << j.dump(2) << '\n';
}

}  // namespace lyzlab::io
