#include "relmech/covariant.hpp"

#include <cmath>
#include <utility>

namespace relmech {

namespace {

Coords components(const FieldAlongPath& f, double s) {
    TangentVector v = f.value(s);
    if (!v.comps.all_finite()) throw NumericError("field along path evaluated to non-finite components");
    return v.comps;
}

Coords parameter_derivative(const FieldAlongPath& f, double s, const CovariantDerivativeConfig& cfg,
                            StencilReport* report) {
    const double h = cfg.fd_step;
    const Path& p = f.path;
    const int reach = cfg.scheme == StencilScheme::central4 ? 2 : 1;
    if (p.contains(s - reach * h) && p.contains(s + reach * h)) {
        if (cfg.scheme == StencilScheme::central2)
            return (components(f, s + h) - components(f, s - h)) * (0.5 / h);
        return (components(f, s - 2 * h) - components(f, s + 2 * h) +
                (components(f, s + h) - components(f, s - h)) * 8.0) *
               (1.0 / (12.0 * h));
    }
    if (report) report->one_sided = true;
    if (p.contains(s + 2 * h))
        return (components(f, s) * -3.0 + components(f, s + h) * 4.0 - components(f, s + 2 * h)) * (0.5 / h);
    if (p.contains(s - 2 * h))
        return (components(f, s) * 3.0 - components(f, s - h) * 4.0 + components(f, s - 2 * h)) * (0.5 / h);
    throw DomainError("covariant_derivative: path domain shorter than the stencil");
}

}  // namespace

TangentVector covariant_derivative(const ManifoldChart& chart, const FieldAlongPath& f, double s,
                                   const CovariantDerivativeConfig& cfg, StencilReport* report) {
    if (!(cfg.fd_step > 0.0)) throw PreconditionError("fd_step must be positive");
    const Coords x = path_point(f.path, s);
    if (x.size() != chart.dim()) throw PreconditionError("covariant_derivative: chart dimension mismatch");
    Coords d = parameter_derivative(f, s, cfg, report);
    if (chart.is_flat()) return {x, d};

    const TangentVector here = f.value(s);
    require_base(here, x, "covariant_derivative");
    const Coords xdot = f.path.tangent(s);
    const ConnectionCoefficients g = chart.coefficients(x);
    const std::size_t n = chart.dim();
    for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) acc += g(i, j, k) * xdot[j] * here.comps[k];
        d[i] += acc;
    }
    if (!d.all_finite()) throw NumericError("covariant derivative is non-finite");
    return {x, d};
}

FieldAlongPath covariant_derivative_field(const ManifoldChart& chart, FieldAlongPath f,
                                          const CovariantDerivativeConfig& cfg) {
    Path path = f.path;
    return {std::move(path), [chart, f = std::move(f), cfg](double s) {
                return covariant_derivative(chart, f, s, cfg);
            }};
}

TangentVector second_covariant_derivative(const ManifoldChart& chart, const FieldAlongPath& f, double s,
                                          const CovariantDerivativeConfig& cfg, StencilReport* report) {
    StencilReport inner;
    auto inner_cfg = cfg;
    // Inner stencils near the domain ends must be able to fall back as well.
    FieldAlongPath first{f.path, [&chart, &f, inner_cfg, &inner](double u) {
                             return covariant_derivative(chart, f, u, inner_cfg, &inner);
                         }};
    TangentVector out = covariant_derivative(chart, first, s, cfg, report);
    if (report && inner.one_sided) report->one_sided = true;
    return out;
}

}  // namespace relmech
