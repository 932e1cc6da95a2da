#pragma once
#include "relmech/geometry.hpp"

namespace relmech {

enum class StencilScheme { central2, central4 };

struct CovariantDerivativeConfig {
    double fd_step = 1e-4;
    StencilScheme scheme = StencilScheme::central2;
};

// Set when the stencil did not fit inside the path domain and a
// second-order one-sided stencil was used instead.
struct StencilReport {
    bool one_sided = false;
};

// (Df/ds)^i = df^i/ds + Gamma^i_{jk} x'^j f^k along f.path, at f.path(s).
// The field callback is re-evaluated at stencil points and may be called concurrently.
TangentVector covariant_derivative(const ManifoldChart& chart, const FieldAlongPath& f, double s,
                                   const CovariantDerivativeConfig& cfg, StencilReport* report = nullptr);

// The field s -> Df/ds.
FieldAlongPath covariant_derivative_field(const ManifoldChart& chart, FieldAlongPath f,
                                          const CovariantDerivativeConfig& cfg);

TangentVector second_covariant_derivative(const ManifoldChart& chart, const FieldAlongPath& f, double s,
                                          const CovariantDerivativeConfig& cfg, StencilReport* report = nullptr);

}  // namespace relmech
