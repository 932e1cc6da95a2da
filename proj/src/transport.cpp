#include "relmech/transport.hpp"

#include <cmath>
#include <utility>

namespace relmech {

int StepPolicy::steps_for(double span) const {
    if (steps < 1) throw PreconditionError("RK4 step count must be positive");
    if (!per_unit_length) return steps;
    return std::max(1, static_cast<int>(std::ceil(steps * std::abs(span) - 1e-9)));
}

Transport::Transport(TransportKind kind, ApplyFn fn, std::optional<ManifoldChart> chart, StepPolicy steps,
                     std::string label)
    : kind_(kind), fn_(std::move(fn)), chart_(std::move(chart)), steps_(steps), label_(std::move(label)) {}

Transport Transport::flat() {
    return Transport(
        TransportKind::flat, [](const Path&, double, double, const TangentVector& v) { return v.comps; },
        std::nullopt, {}, "flat");
}

Transport Transport::linear_connection(ManifoldChart chart, StepPolicy steps) {
    steps.steps_for(1.0);  // validates
    auto fn = [chart, steps](const Path& gamma, double s, double t, const TangentVector& v) {
        return linear_transport_matrix(chart, gamma, s, t, steps.steps_for(t - s)).apply(v.comps);
    };
    std::string label = "linear-connection(" + chart.name() + ")";
    return Transport(TransportKind::linear_connection, std::move(fn), std::move(chart), steps, std::move(label));
}

Transport Transport::custom(ApplyFn fn, std::string label) {
    return Transport(TransportKind::custom, std::move(fn), std::nullopt, {}, std::move(label));
}

Coords Transport::apply(const Path& path, double s, double t, const TangentVector& v) const {
    return fn_(path, s, t, v);
}

TangentVector transport_vector(const Transport& T, const Path& gamma, double s, double t, const TangentVector& v) {
    const Coords from = path_point(gamma, s);
    Coords to = path_point(gamma, t);
    require_base(v, from, "transport_vector");
    if (s == t) return v;
    Coords comps = T.apply(gamma, s, t, v);
    if (comps.size() != v.dim() || !comps.all_finite())
        throw NumericError("transport '" + T.label() + "' produced malformed or non-finite components");
    return {std::move(to), std::move(comps)};
}

namespace {

// A^i_k(u) = Gamma^i_{jk}(gamma(u)) gamma'^j(u)
SquareMatrix generator(const ManifoldChart& chart, const Path& gamma, double u) {
    const std::size_t n = chart.dim();
    const ConnectionCoefficients g = chart.coefficients(gamma.point(u));
    const Coords d = gamma.tangent(u);
    if (!d.all_finite()) throw NumericError("non-finite path tangent during transport");
    SquareMatrix a(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (d[j] == 0.0) continue;
            for (std::size_t k = 0; k < n; ++k) a(i, k) += g(i, j, k) * d[j];
        }
    return a;
}

// One RK4 step of dY/du = -A(u) Y.
SquareMatrix rk4_forward(const ManifoldChart& chart, const Path& gamma, double u, double h, const SquareMatrix& y) {
    const SquareMatrix a0 = generator(chart, gamma, u);
    const SquareMatrix ah = generator(chart, gamma, u + 0.5 * h);
    const SquareMatrix a1 = generator(chart, gamma, u + h);
    const SquareMatrix k1 = (a0 * y) * -1.0;
    const SquareMatrix k2 = (ah * (y + k1 * (0.5 * h))) * -1.0;
    const SquareMatrix k3 = (ah * (y + k2 * (0.5 * h))) * -1.0;
    const SquareMatrix k4 = (a1 * (y + k3 * h)) * -1.0;
    return y + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0);
}

// One RK4 step of dZ/du = Z A(u).
SquareMatrix rk4_adjoint(const ManifoldChart& chart, const Path& gamma, double u, double h, const SquareMatrix& z) {
    const SquareMatrix a0 = generator(chart, gamma, u);
    const SquareMatrix ah = generator(chart, gamma, u + 0.5 * h);
    const SquareMatrix a1 = generator(chart, gamma, u + h);
    const SquareMatrix k1 = z * a0;
    const SquareMatrix k2 = (z + k1 * (0.5 * h)) * ah;
    const SquareMatrix k3 = (z + k2 * (0.5 * h)) * ah;
    const SquareMatrix k4 = (z + k3 * h) * a1;
    return z + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0);
}

}  // namespace

TransportMatrix linear_transport_matrix(const ManifoldChart& chart, const Path& gamma, double s, double t,
                                        int steps) {
    if (steps < 1) throw PreconditionError("linear_transport_matrix: steps must be >= 1");
    path_point(gamma, s);
    path_point(gamma, t);
    if (gamma.dim() != chart.dim()) throw PreconditionError("path and chart dimensions differ");
    TransportMatrix out{s, t, SquareMatrix::identity(chart.dim())};
    if (s == t || chart.is_flat()) return out;
    const double h = (t - s) / steps;
    for (int k = 0; k < steps; ++k) {
        const double u = (k + 1 == steps) ? t - h : s + k * h;
        out.matrix = rk4_forward(chart, gamma, u, h, out.matrix);
    }
    if (!out.matrix.all_finite()) throw NumericError("transport matrix became non-finite");
    return out;
}

std::vector<SquareMatrix> transport_to_anchor_on_grid(const ManifoldChart& chart, const Path& gamma, double anchor,
                                                      double end, int intervals, int substeps) {
    if (intervals < 1 || substeps < 1) throw PreconditionError("grid intervals and substeps must be >= 1");
    path_point(gamma, anchor);
    path_point(gamma, end);
    std::vector<SquareMatrix> out;
    out.reserve(intervals + 1);
    SquareMatrix z = SquareMatrix::identity(chart.dim());
    out.push_back(z);
    const double H = (end - anchor) / intervals;
    const double h = H / substeps;
    for (int k = 0; k < intervals; ++k) {
        if (!chart.is_flat())
            for (int j = 0; j < substeps; ++j) z = rk4_adjoint(chart, gamma, anchor + k * H + j * h, h, z);
        out.push_back(z);
    }
    if (!z.all_finite()) throw NumericError("adjoint transport matrix became non-finite");
    return out;
}

FieldAlongPath transported_field(const Transport& T, const Path& gamma, double s0, const TangentVector& v0) {
    require_base(v0, path_point(gamma, s0), "transported_field");
    return {gamma, [T, gamma, s0, v0](double u) { return transport_vector(T, gamma, s0, u, v0); }};
}

double composition_residual(const Transport& T, const Path& gamma, double r, double s, double t,
                            const TangentVector& v) {
    const TangentVector two_step = transport_vector(T, gamma, t, r, transport_vector(T, gamma, s, t, v));
    const TangentVector direct = transport_vector(T, gamma, s, r, v);
    return max_abs_diff(two_step.comps, direct.comps);
}

double metric_consistency_residual(const Transport& T, const BundleMetric& g, const Path& gamma, double s, double t,
                                   const TangentVector& u, const TangentVector& v) {
    const double before = scalar_product(g, u, v);
    const double after = scalar_product(g, transport_vector(T, gamma, s, t, u), transport_vector(T, gamma, s, t, v));
    return std::abs(before - after);
}

double scaling_residual(const Transport& T, const Path& gamma, double s, double t, const TangentVector& v,
                        double lambda) {
    const TangentVector scaled_first = transport_vector(T, gamma, s, t, scaled(v, lambda));
    const TangentVector transported = transport_vector(T, gamma, s, t, v);
    return max_abs_diff(scaled_first.comps, transported.comps * lambda);
}

bool check_composition(const Transport& T, const Path& gamma, double r, double s, double t, const TangentVector& v,
                       double tol) {
    return composition_residual(T, gamma, r, s, t, v) <= tol;
}

bool check_metric_consistency(const Transport& T, const BundleMetric& g, const Path& gamma, double s, double t,
                              const TangentVector& u, const TangentVector& v, double tol) {
    return metric_consistency_residual(T, g, gamma, s, t, u, v) <= tol;
}

bool check_scaling_consistency(const Transport& T, const Path& gamma, double s, double t, const TangentVector& v,
                               double lambda, double tol) {
    return scaling_residual(T, gamma, s, t, v, lambda) <= tol;
}

}  // namespace relmech
