#include "lyzlab/polytope.hpp"

#include "lyzlab/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace lyzlab::bodies {

namespace {

constexpr double kHullEps = 1e-9;

double scale_of(const std::vector<Vec>& points) {
    double s = 0.0;
    for (const Vec& p : points) s = std::max(s, p.lpNorm<Eigen::Infinity>());
    return std::max(s, 1.0);
}

bool close(const Vec& a, const Vec& b, double tol) { return (a - b).lpNorm<Eigen::Infinity>() <= tol; }

std::vector<Vec> dedupe(const std::vector<Vec>& points, double tol) {
    std::vector<Vec> out;
    for (const Vec& p : points) {
        bool seen = false;
        for (const Vec& q : out)
            if (close(p, q, tol)) {
                seen = true;
                break;
            }
        if (!seen) out.push_back(p);
    }
    return out;
}

// ---- 1-D ----------------------------------------------------------------

void build_1d(const std::vector<Vec>& points, std::vector<Vec>& verts, std::vector<Facet>& facets) {
    double lo = points.front()[0], hi = points.front()[0];
    for (const Vec& p : points) {
        lo = std::min(lo, p[0]);
        hi = std::max(hi, p[0]);
    }
    verts = {Vec::Constant(1, lo), Vec::Constant(1, hi)};
    Facet right{Vec::Constant(1, 1.0), 1.0, hi};
    Facet left{Vec::Constant(1, -1.0), 1.0, -lo};
    facets = {left, right};
}

// ---- 2-D ----------------------------------------------------------------

// Monotone-chain hull, counterclockwise, no collinear points kept.
std::vector<Vec> hull_2d(std::vector<Vec> pts, double tol) {
    std::sort(pts.begin(), pts.end(), [](const Vec& a, const Vec& b) {
        return a[0] < b[0] || (a[0] == b[0] && a[1] < b[1]);
    });
    auto cross = [](const Vec& o, const Vec& a, const Vec& b) {
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
    };
    const std::size_t m = pts.size();
    std::vector<Vec> h(2 * m);
    std::size_t k = 0;
    for (std::size_t i = 0; i < m; ++i) {
        while (k >= 2 && cross(h[k - 2], h[k - 1], pts[i]) <= tol) --k;
        h[k++] = pts[i];
    }
    for (std::size_t i = m - 1, t = k + 1; i-- > 0;) {
        while (k >= t && cross(h[k - 2], h[k - 1], pts[i]) <= tol) --k;
        h[k++] = pts[i];
    }
    h.resize(k - 1);
    return h;
}

void build_2d(const std::vector<Vec>& points, std::vector<Vec>& verts, std::vector<Facet>& facets) {
    const double s = scale_of(points);
    std::vector<Vec> hull = hull_2d(points, kHullEps * s * s);
    if (hull.size() < 3) fail(ErrorKind::DegenerateSample, "2-D hull collapsed to a segment");

    // Canonical order: counterclockwise, starting at the vertex of smallest
    // angle around the origin (ties broken by radius). Sorting happens around
    // the vertex mean so the cycle is correct even while the body is being
    // recentered and the origin is not yet interior.
    Vec mean = Vec::Zero(2);
    for (const Vec& v : hull) mean += v;
    mean /= static_cast<double>(hull.size());
    std::sort(hull.begin(), hull.end(), [&](const Vec& a, const Vec& b) {
        const double aa = std::atan2(a[1] - mean[1], a[0] - mean[0]);
        const double ab = std::atan2(b[1] - mean[1], b[0] - mean[0]);
        if (aa != ab) return aa < ab;
        return (a - mean).norm() < (b - mean).norm();
    });
    std::size_t start = 0;
    for (std::size_t i = 1; i < hull.size(); ++i) {
        const double ai = std::atan2(hull[i][1], hull[i][0]);
        const double as = std::atan2(hull[start][1], hull[start][0]);
        if (ai < as || (ai == as && hull[i].norm() < hull[start].norm())) start = i;
    }
    std::rotate(hull.begin(), hull.begin() + static_cast<std::ptrdiff_t>(start), hull.end());

    verts = hull;
    const std::size_t m = hull.size();
    for (std::size_t i = 0; i < m; ++i) {
        const Vec& a = hull[i];
        const Vec& b = hull[(i + 1) % m];
        Vec edge = b - a;
        const double len = edge.norm();
        if (len < kHullEps * s) continue;  // DegenerateFacet: dropped
        Vec normal(2);
        normal << edge[1], -edge[0];
        normal /= len;
        facets.push_back({normal, len, normal.dot(a)});
    }
}

// ---- 3-D ----------------------------------------------------------------

struct Plane {
    Vec normal;   // unit
    double offset;  // n.x = offset on the plane, n.x <= offset inside
};

// Supporting-plane enumeration over vertex triples. Quadratic-to-quartic in
// the vertex count, which is fine for the <= 64 vertices this library sees;
// coplanar triangles merge naturally because equal planes dedupe.
void build_3d(const std::vector<Vec>& points, std::vector<Vec>& verts, std::vector<Facet>& facets) {
    const double s = scale_of(points);
    const double tol = kHullEps * s;
    const std::size_t m = points.size();

    std::vector<Plane> planes;
    auto have_plane = [&](const Vec& n, double d) {
        for (const Plane& p : planes)
            if ((p.normal - n).lpNorm<Eigen::Infinity>() <= 1e-7 && std::abs(p.offset - d) <= 1e-7 * s)
                return true;
        return false;
    };

    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j)
            for (std::size_t k = j + 1; k < m; ++k) {
                Eigen::Vector3d a = points[i], b = points[j], c = points[k];
                Eigen::Vector3d n3 = (b - a).cross(c - a);
                const double nn = n3.norm();
                if (nn <= kHullEps * s * s) continue;
                n3 /= nn;
                double d = n3.dot(a);
                double lo = 0.0, hi = 0.0;
                for (const Vec& p : points) {
                    const double v = n3.dot(Eigen::Vector3d(p)) - d;
                    lo = std::min(lo, v);
                    hi = std::max(hi, v);
                }
                int side = 0;
                if (hi <= tol)
                    side = 1;  // all points below: n3 is outer
                else if (lo >= -tol)
                    side = -1;  // all above: flip
                else
                    continue;
                Vec n = side == 1 ? Vec(n3) : Vec(-n3);
                d = side == 1 ? d : -d;
                if (!have_plane(n, d)) planes.push_back({n, d});
            }

    if (planes.size() < 4) fail(ErrorKind::DegenerateSample, "3-D hull has fewer than 4 facets");

    std::vector<Vec> hull_verts;
    for (const Plane& pl : planes) {
        // Points on the plane, ordered as a convex polygon in-plane.
        std::vector<Vec> on;
        for (const Vec& p : points)
            if (std::abs(pl.normal.dot(p) - pl.offset) <= tol) on.push_back(p);
        if (on.size() < 3) continue;

        Eigen::Vector3d nz = pl.normal;
        Eigen::Vector3d ax = std::abs(nz[0]) < 0.9 ? Eigen::Vector3d::UnitX() : Eigen::Vector3d::UnitY();
        Eigen::Vector3d u = nz.cross(ax).normalized();
        Eigen::Vector3d v = nz.cross(u);

        std::vector<Vec> plane2;
        plane2.reserve(on.size());
        for (const Vec& p : on) {
            Vec q(2);
            q << u.dot(Eigen::Vector3d(p)), v.dot(Eigen::Vector3d(p));
            plane2.push_back(q);
        }
        std::vector<Vec> poly = hull_2d(plane2, kHullEps * s * s);
        if (poly.size() < 3) continue;

        double area2 = 0.0;  // twice the polygon area (shoelace)
        for (std::size_t i = 0; i < poly.size(); ++i) {
            const Vec& a = poly[i];
            const Vec& b = poly[(i + 1) % poly.size()];
            area2 += a[0] * b[1] - a[1] * b[0];
        }
        const double area = std::abs(area2) / 2.0;
        if (area <= kHullEps * s * s) continue;  // DegenerateFacet: dropped

        facets.push_back({pl.normal, area, pl.offset});
        for (const Vec& q : poly) {
            Eigen::Vector3d p3 = pl.offset * nz + q[0] * u + q[1] * v;
            hull_verts.push_back(Vec(p3));
        }
    }

    verts = dedupe(hull_verts, 10 * tol);
    std::sort(verts.begin(), verts.end(), [](const Vec& a, const Vec& b) {
        if (a[0] != b[0]) return a[0] < b[0];
        if (a[1] != b[1]) return a[1] < b[1];
        return a[2] < b[2];
    });
}

}  // namespace

Polytope::Polytope(std::vector<Vec> points, bool require_origin_interior) {
    if (points.empty()) fail(ErrorKind::DegenerateSample, "empty vertex set");
    dim_ = static_cast<int>(points.front().size());
    if (dim_ < 1 || dim_ > 3) fail(ErrorKind::DegenerateSample, "exact pipeline limited to n <= 3");
    for (const Vec& p : points)
        if (static_cast<int>(p.size()) != dim_) fail(ErrorKind::SchemaError, "mixed vertex dimensions");

    const int ah = affine_hull_dimension(points);
    if (ah < dim_)
        fail(ErrorKind::DegenerateSample,
             "affine hull dimension " + std::to_string(ah) + ", expected " + std::to_string(dim_));

    points = dedupe(points, 1e-12 * scale_of(points));
    switch (dim_) {
        case 1: build_1d(points, vertices_, facets_); break;
        case 2: build_2d(points, vertices_, facets_); break;
        default: build_3d(points, vertices_, facets_); break;
    }

    if (require_origin_interior)
        for (const Facet& f : facets_)
            if (f.support <= 0.0)
                fail(ErrorKind::OriginNotInterior,
                     "facet with support value " + std::to_string(f.support));

    double acc = 0.0;
    for (const Facet& f : facets_) acc += f.area * f.support;
    volume_ = acc / dim_;
    for (const Vec& v : vertices_) radius_ = std::max(radius_, v.norm());
}

double support(const Polytope& p, const Vec& x) {
    double best = -std::numeric_limits<double>::infinity();
    for (const Vec& v : p.vertices()) best = std::max(best, x.dot(v));
    return best;
}

double minkowski_norm(const Polytope& p, const Vec& x) {
    double best = 0.0;
    for (const Facet& f : p.facets()) best = std::max(best, f.normal.dot(x) / f.support);
    return best;
}

double radial(const Polytope& p, const Vec& x) {
    if (x.norm() == 0.0) fail(ErrorKind::ZeroDirection, "radial function needs x != 0");
    return 1.0 / minkowski_norm(p, x);
}

Polytope polar(const Polytope& p) {
    std::vector<Vec> verts;
    verts.reserve(p.facets().size());
    for (const Facet& f : p.facets()) verts.push_back(f.normal / f.support);
    return Polytope(std::move(verts));
}

Vec centroid(const Polytope& p) {
    const int n = p.dimension();
    const auto& verts = p.vertices();
    if (n == 1) return 0.5 * (verts.front() + verts.back());

    Vec apex = Vec::Zero(n);
    for (const Vec& v : verts) apex += v;
    apex /= static_cast<double>(verts.size());

    Vec acc = Vec::Zero(n);
    double total = 0.0;
    if (n == 2) {
        const std::size_t m = verts.size();
        for (std::size_t i = 0; i < m; ++i) {
            const Vec& a = verts[i];
            const Vec& b = verts[(i + 1) % m];
            const double w = ((a[0] - apex[0]) * (b[1] - apex[1]) - (a[1] - apex[1]) * (b[0] - apex[0])) / 2.0;
            acc += w * (a + b + apex) / 3.0;
            total += w;
        }
    } else {
        // Fan every facet polygon and cone it to the apex.
        for (const Facet& f : p.facets()) {
            std::vector<Vec> on;
            for (const Vec& v : verts)
                if (std::abs(f.normal.dot(v) - f.support) <= 1e-8 * std::max(1.0, p.radius())) on.push_back(v);
            // order around the facet
            Eigen::Vector3d nz = f.normal;
            Eigen::Vector3d ax = std::abs(nz[0]) < 0.9 ? Eigen::Vector3d::UnitX() : Eigen::Vector3d::UnitY();
            Eigen::Vector3d u = nz.cross(ax).normalized();
            Eigen::Vector3d v2 = nz.cross(u);
            Vec center = Vec::Zero(3);
            for (const Vec& q : on) center += q;
            center /= static_cast<double>(on.size());
            std::sort(on.begin(), on.end(), [&](const Vec& a, const Vec& b) {
                const Eigen::Vector3d da = Eigen::Vector3d(a) - Eigen::Vector3d(center);
                const Eigen::Vector3d db = Eigen::Vector3d(b) - Eigen::Vector3d(center);
                return std::atan2(v2.dot(da), u.dot(da)) < std::atan2(v2.dot(db), u.dot(db));
            });
            for (std::size_t i = 1; i + 1 < on.size(); ++i) {
                Eigen::Matrix3d mdet;
                mdet.col(0) = Eigen::Vector3d(on[0]) - Eigen::Vector3d(apex);
                mdet.col(1) = Eigen::Vector3d(on[i]) - Eigen::Vector3d(apex);
                mdet.col(2) = Eigen::Vector3d(on[i + 1]) - Eigen::Vector3d(apex);
                const double w = mdet.determinant() / 6.0;
                acc += w * (on[0] + on[i] + on[i + 1] + apex) / 4.0;
                total += w;
            }
        }
    }
    return acc / total;
}

double volume_by_simplices(const Polytope& p) {
    const int n = p.dimension();
    const auto& verts = p.vertices();
    if (n == 1) return verts.back()[0] - verts.front()[0];
    const Vec c = centroid(p);
    double total = 0.0;
    if (n == 2) {
        const std::size_t m = verts.size();
        for (std::size_t i = 0; i < m; ++i) {
            const Vec& a = verts[i];
            const Vec& b = verts[(i + 1) % m];
            total += std::abs((a[0] - c[0]) * (b[1] - c[1]) - (a[1] - c[1]) * (b[0] - c[0])) / 2.0;
        }
    } else {
        for (const Facet& f : p.facets()) {
            std::vector<Vec> on;
            for (const Vec& v : verts)
                if (std::abs(f.normal.dot(v) - f.support) <= 1e-8 * std::max(1.0, p.radius())) on.push_back(v);
            Eigen::Vector3d nz = f.normal;
            Eigen::Vector3d ax = std::abs(nz[0]) < 0.9 ? Eigen::Vector3d::UnitX() : Eigen::Vector3d::UnitY();
            Eigen::Vector3d u = nz.cross(ax).normalized();
            Eigen::Vector3d v2 = nz.cross(u);
            Vec center = Vec::Zero(3);
            for (const Vec& q : on) center += q;
            center /= static_cast<double>(on.size());
            std::sort(on.begin(), on.end(), [&](const Vec& a, const Vec& b) {
                const Eigen::Vector3d da = Eigen::Vector3d(a) - Eigen::Vector3d(center);
                const Eigen::Vector3d db = Eigen::Vector3d(b) - Eigen::Vector3d(center);
                return std::atan2(v2.dot(da), u.dot(da)) < std::atan2(v2.dot(db), u.dot(db));
            });
            for (std::size_t i = 1; i + 1 < on.size(); ++i) {
                Eigen::Matrix3d mdet;
                mdet.col(0) = Eigen::Vector3d(on[0]) - Eigen::Vector3d(c);
                mdet.col(1) = Eigen::Vector3d(on[i]) - Eigen::Vector3d(c);
                mdet.col(2) = Eigen::Vector3d(on[i + 1]) - Eigen::Vector3d(c);
                total += std::abs(mdet.determinant()) / 6.0;
            }
        }
    }
    return total;
}

Polytope random_body(std::uint64_t seed, int n, int vertex_count) {
    if (n < 1 || n > 3) fail(ErrorKind::DegenerateSample, "random_body needs n in {1,2,3}");
    if (vertex_count < n + 1) fail(ErrorKind::DegenerateSample, "need at least n+1 vertices");
    Rng rng = Rng::stream(seed, 0x626f6479);  // "body"
    for (int attempt = 0; attempt < 32; ++attempt) {
        std::vector<Vec> pts;
        pts.reserve(vertex_count);
        for (int i = 0; i < vertex_count; ++i) pts.push_back(rng.uniform(0.7, 1.3) * rng.unit_vec(n));
        if (affine_hull_dimension(pts) < n) continue;
        try {
            Polytope hull(pts, /*require_origin_interior=*/false);
            const Vec c = centroid(hull);
            std::vector<Vec> recentered;
            recentered.reserve(hull.vertices().size());
            for (const Vec& v : hull.vertices()) recentered.push_back(v - c);
            return Polytope(std::move(recentered));
        } catch (const Error&) {
            continue;
        }
    }
    fail(ErrorKind::DegenerateSample, "resampling exhausted");
}

Polytope apply_linear(const Mat& t, const Polytope& p) {
    if (std::abs(t.determinant()) < 1e-12) fail(ErrorKind::SingularMap, "det T ~ 0");
    std::vector<Vec> verts;
    verts.reserve(p.vertices().size());
    for (const Vec& v : p.vertices()) verts.push_back(t * v);
    return Polytope(std::move(verts));
}

Polytope regular_simplex(int n) {
    // n+1 unit vectors with pairwise inner product -1/n.
    std::vector<Vec> verts;
    if (n == 1) {
        verts = {Vec::Constant(1, -1.0), Vec::Constant(1, 1.0)};
    } else if (n == 2) {
        for (int k = 0; k < 3; ++k) {
            Vec v(2);
            v << std::cos(2.0 * M_PI * k / 3.0), std::sin(2.0 * M_PI * k / 3.0);
            verts.push_back(v);
        }
    } else {
        const double s = 1.0 / std::sqrt(3.0);
        for (auto [a, b, c] : {std::array{1., 1., 1.}, {1., -1., -1.}, {-1., 1., -1.}, {-1., -1., 1.}}) {
            Vec v(3);
            v << a * s, b * s, c * s;
            verts.push_back(v);
        }
    }
    return Polytope(std::move(verts));
}

Polytope cube(int n) {
    std::vector<Vec> verts;
    for (int mask = 0; mask < (1 << n); ++mask) {
        Vec v(n);
        for (int i = 0; i < n; ++i) v[i] = (mask >> i) & 1 ? 1.0 : -1.0;
        verts.push_back(v);
    }
    return Polytope(std::move(verts));
}

Polytope regular_polygon(int m) {
    std::vector<Vec> verts;
    for (int k = 0; k < m; ++k) {
        Vec v(2);
        v << std::cos(2.0 * M_PI * k / m), std::sin(2.0 * M_PI * k / m);
        verts.push_back(v);
    }
    return Polytope(std::move(verts));
}

int affine_hull_dimension(const std::vector<Vec>& points, double tol) {
    if (points.size() < 2) return 0;
    const int n = static_cast<int>(points.front().size());
    Mat centered(static_cast<int>(points.size()), n);
    Vec mean = Vec::Zero(n);
    for (const Vec& p : points) mean += p;
    mean /= static_cast<double>(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) centered.row(static_cast<int>(i)) = (points[i] - mean).transpose();
    Eigen::JacobiSVD<Mat> svd(centered);
    const auto& sv = svd.singularValues();
    const double cutoff = tol * std::max(1.0, sv.size() > 0 ? sv[0] : 0.0);
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv[i] > cutoff) ++rank;
    return rank;
}

}  // namespace lyzlab::bodies
