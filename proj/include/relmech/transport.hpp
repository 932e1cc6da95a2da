#pragma once
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "relmech/geometry.hpp"
#include "relmech/metric.hpp"

namespace relmech {

enum class TransportKind { flat, linear_connection, custom };

// RK4 step count for a transport over a parameter span.
struct StepPolicy {
    int steps = 256;
    bool per_unit_length = true;  // false: `steps` is the total per solve

    int steps_for(double span) const;
};

// A rule assigning to each path gamma and parameters (s, t) a map T_{gamma(s)} -> T_{gamma(t)}.
// Identity at s == t is enforced by transport_vector; composition is a property of the rule.
class Transport {
public:
    // Components of the transported vector at gamma(t).
    using ApplyFn = std::function<Coords(const Path&, double s, double t, const TangentVector&)>;

    static Transport flat();
    // Parallel transport of the chart's connection, solved with fixed-step RK4.
    static Transport linear_connection(ManifoldChart chart, StepPolicy steps = {});
    // Arbitrary user map; need not be linear.
    static Transport custom(ApplyFn fn, std::string label = "custom");

    TransportKind kind() const { return kind_; }
    const std::string& label() const { return label_; }
    // Present for linear_connection only.
    const ManifoldChart* chart() const { return chart_ ? &*chart_ : nullptr; }
    const StepPolicy& step_policy() const { return steps_; }

    Coords apply(const Path& path, double s, double t, const TangentVector& v) const;

private:
    Transport(TransportKind kind, ApplyFn fn, std::optional<ManifoldChart> chart, StepPolicy steps,
              std::string label);

    TransportKind kind_;
    ApplyFn fn_;
    std::optional<ManifoldChart> chart_;
    StepPolicy steps_;
    std::string label_;
};

// Matrix of L^gamma_{from -> to} in the chart basis.
struct TransportMatrix {
    double from_param = 0.0;
    double to_param = 0.0;
    SquareMatrix matrix;

    Coords apply(const Coords& comps) const { return matrix * comps; }
};

TangentVector transport_vector(const Transport& T, const Path& gamma, double s, double t, const TangentVector& v);

// Fundamental matrix of dY/du = -Gamma^i_{jk}(gamma(u)) gamma'^j(u) Y^k, Y(s) = I, evaluated at t.
// Integrates from s toward t, backwards when t < s.
TransportMatrix linear_transport_matrix(const ManifoldChart& chart, const Path& gamma, double s, double t,
                                        int steps);

// Matrices of L^gamma_{u_k -> anchor} on the uniform grid u_k = anchor + k (end - anchor) / intervals,
// k = 0..intervals, from one forward pass of the adjoint system dZ/du = Z A(u), Z(anchor) = I.
std::vector<SquareMatrix> transport_to_anchor_on_grid(const ManifoldChart& chart, const Path& gamma,
                                                      double anchor, double end, int intervals,
                                                      int substeps);

// The transported field u -> T^gamma_{s0 -> u} v0 along gamma.
FieldAlongPath transported_field(const Transport& T, const Path& gamma, double s0, const TangentVector& v0);

// Max-norm residuals of the consistency identities.
double composition_residual(const Transport& T, const Path& gamma, double r, double s, double t,
                            const TangentVector& v);
double metric_consistency_residual(const Transport& T, const BundleMetric& g, const Path& gamma, double s,
                                   double t, const TangentVector& u, const TangentVector& v);
double scaling_residual(const Transport& T, const Path& gamma, double s, double t, const TangentVector& v,
                        double lambda);

// T_{t->r} o T_{s->t} == T_{s->r} for v at gamma(s).
bool check_composition(const Transport& T, const Path& gamma, double r, double s, double t,
                       const TangentVector& v, double tol);
bool check_metric_consistency(const Transport& T, const BundleMetric& g, const Path& gamma, double s, double t,
                              const TangentVector& u, const TangentVector& v, double tol);
bool check_scaling_consistency(const Transport& T, const Path& gamma, double s, double t, const TangentVector& v,
                               double lambda, double tol);

}  // namespace relmech
