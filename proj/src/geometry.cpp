#include "relmech/geometry.hpp"

#include <cmath>
#include <sstream>
#include <utility>

namespace relmech {

namespace {

std::string fmt_param(double s) {
    std::ostringstream os;
    os.precision(17);
    os << s;
    return os.str();
}

}  // namespace

ManifoldChart::ManifoldChart(std::size_t dim, TableFn fill, std::string name, bool flat)
    : dim_(dim), fill_(std::move(fill)), name_(std::move(name)), flat_(flat) {
    if (dim_ < 1 || dim_ > kMaxDim) throw PreconditionError("chart dimension must be in [1, 8]");
}

ManifoldChart::ManifoldChart(std::size_t dim, CoefficientFn connection, std::string name)
    : ManifoldChart(
          dim,
          [dim, fn = std::move(connection)](const Coords& x, ConnectionCoefficients& g) {
              for (std::size_t out = 0; out < dim; ++out)
                  for (std::size_t i = 0; i < dim; ++i)
                      for (std::size_t j = 0; j < dim; ++j) g(out, i, j) = fn(x, i, j, out);
          },
          std::move(name), false) {}

ManifoldChart ManifoldChart::from_table(std::size_t dim, TableFn fill, std::string name) {
    return ManifoldChart(dim, std::move(fill), std::move(name), false);
}

ManifoldChart ManifoldChart::flat(std::size_t dim, std::string name) {
    return ManifoldChart(
        dim, [](const Coords&, ConnectionCoefficients&) {}, std::move(name), true);
}

ManifoldChart ManifoldChart::constant(const ConnectionCoefficients& gamma, std::string name) {
    const std::size_t n = gamma.size();
    bool zero = true;
    for (std::size_t o = 0; o < n; ++o)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) zero = zero && gamma(o, i, j) == 0.0;
    return ManifoldChart(
        n, [gamma](const Coords&, ConnectionCoefficients& g) { g = gamma; }, std::move(name), zero);
}

ManifoldChart ManifoldChart::polar_plane() {
    return from_table(
        2,
        [](const Coords& x, ConnectionCoefficients& g) {
            const double r = x[0];
            g(0, 1, 1) = -r;
            g(1, 0, 1) = 1.0 / r;
            g(1, 1, 0) = 1.0 / r;
        },
        "polar-plane");
}

ManifoldChart ManifoldChart::unit_sphere() {
    return from_table(
        2,
        [](const Coords& x, ConnectionCoefficients& g) {
            const double th = x[0];
            g(0, 1, 1) = -std::sin(th) * std::cos(th);
            g(1, 0, 1) = std::cos(th) / std::sin(th);
            g(1, 1, 0) = std::cos(th) / std::sin(th);
        },
        "unit-sphere");
}

double ManifoldChart::coefficient(const Coords& point, std::size_t in1, std::size_t in2,
                                  std::size_t out) const {
    return coefficients(point)(out, in1, in2);
}

ConnectionCoefficients ManifoldChart::coefficients(const Coords& point) const {
    if (point.size() != dim_) throw PreconditionError("point dimension does not match chart " + name_);
    ConnectionCoefficients g(dim_);
    if (flat_) return g;
    fill_(point, g);
    for (std::size_t o = 0; o < dim_; ++o)
        for (std::size_t i = 0; i < dim_; ++i)
            for (std::size_t j = 0; j < dim_; ++j)
                if (!std::isfinite(g(o, i, j)))
                    throw NumericError("non-finite connection coefficient in chart " + name_);
    return g;
}

Path::Path(double a, double b, PointFn eval, PointFn tangent)
    : a_(a), b_(b), eval_(std::move(eval)), tangent_(std::move(tangent)) {
    if (!(a_ <= b_) || !std::isfinite(a_) || !std::isfinite(b_))
        throw PreconditionError("path domain must be a finite interval [a, b] with a <= b");
    dim_ = eval_(a_).size();
}

Path Path::from_eval(double a, double b, PointFn eval) {
    const double h = 1e-6 * (b - a);
    auto tangent = [eval, a, b, h](double s) {
        if (h == 0.0) return Coords(eval(s).size());
        if (s - h >= a && s + h <= b) return (eval(s + h) - eval(s - h)) * (0.5 / h);
        // Second-order one-sided stencils at the ends of the domain.
        if (s - h < a)
            return (eval(s) * -3.0 + eval(s + h) * 4.0 - eval(s + 2 * h)) * (0.5 / h);
        return (eval(s) * 3.0 - eval(s - h) * 4.0 + eval(s - 2 * h)) * (0.5 / h);
    };
    return Path(a, b, std::move(eval), std::move(tangent));
}

Path Path::line(const Coords& from, const Coords& to) {
    if (from.size() != to.size()) throw PreconditionError("line endpoints differ in dimension");
    const Coords delta = to - from;
    return Path(
        0.0, 1.0,
        [from, to](double u) {
            Coords p(from.size());
            for (std::size_t i = 0; i < p.size(); ++i) p[i] = (1.0 - u) * from[i] + u * to[i];
            return p;
        },
        [delta](double) { return delta; });
}

Path Path::constant(const Coords& point, double a, double b) {
    const std::size_t n = point.size();
    return Path(
        a, b, [point](double) { return point; }, [n](double) { return Coords(n); });
}

bool Path::contains(double s) const {
    const double slack = 1e-12 * std::max(1.0, b_ - a_);
    return s >= a_ - slack && s <= b_ + slack;
}

bool same_base(const TangentVector& a, const TangentVector& b, double tol) {
    return a.base.size() == b.base.size() && max_abs_diff(a.base, b.base) <= tol;
}

void require_base(const TangentVector& v, const Coords& point, const char* what, double tol) {
    if (v.base.size() != point.size() || v.comps.size() != point.size())
        throw PreconditionError(std::string(what) + ": dimension mismatch");
    if (max_abs_diff(v.base, point) > tol)
        throw PreconditionError(std::string(what) + ": vector is not attached at the required point");
}

TangentVector subtract(const TangentVector& a, const TangentVector& b) {
    if (!same_base(a, b)) throw PreconditionError("subtract: vectors attached at different points");
    return {a.base, a.comps - b.comps};
}

TangentVector scaled(const TangentVector& v, double k) { return {v.base, v.comps * k}; }

Coords path_point(const Path& p, double s) {
    if (!p.contains(s))
        throw DomainError("parameter " + fmt_param(s) + " outside path domain [" + fmt_param(p.lower()) +
                          ", " + fmt_param(p.upper()) + "]");
    Coords x = p.point(s);
    if (!x.all_finite()) throw NumericError("path evaluated to non-finite point");
    return x;
}

TangentVector path_tangent_vector(const Path& p, double s) {
    Coords x = path_point(p, s);
    Coords v = p.tangent(s);
    if (!v.all_finite()) throw NumericError("path tangent is non-finite");
    return {std::move(x), std::move(v)};
}

}  // namespace relmech
