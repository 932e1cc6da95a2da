#pragma once
#include <functional>
#include <optional>

#include "relmech/covariant.hpp"
#include "relmech/geometry.hpp"
#include "relmech/metric.hpp"
#include "relmech/transport.hpp"

namespace relmech {

// Observed point particle: worldline x_a, map tau_a from the observer parameter s to the
// particle parameter s_a, rest mass, and the nonzero scalar mu_a with p_a = mu_a V_a.
struct Particle {
    Path worldline;
    std::function<double(double)> time_map;
    double mass = 0.0;
    std::function<double(double)> mu;

    // mu == mass; mass must be nonzero.
    static Particle massive(Path worldline, double mass, std::function<double(double)> time_map = {});
    // Massless: the momentum is primary and mu is supplied directly (e.g. E / c^2 for photons).
    static Particle massless(Path worldline, std::function<double(double)> mu,
                             std::function<double(double)> time_map = {});

    // s_a = tau_a(s), checked against the worldline domain.
    double particle_parameter(double s) const;
    Coords position(double s) const;
    TangentVector velocity(double s) const;
    // Throws InvalidParticleError when mu vanishes.
    double mu_at(double s) const;
    TangentVector momentum(double s) const;
};

// Samples tau on [s_min, s_max]; throws PreconditionError if it is not strictly increasing
// or leaves the worldline domain.
void validate_time_map(const Particle& p, double s_min, double s_max, int samples = 64);

using PathFamily = std::function<Path(double s)>;

struct KinematicsNumerics {
    int simpson_panels = 256;  // even
    ZeroSign zero_sign = ZeroSign::positive;
    double tolerance = 1e-9;
};

// Everything needed to evaluate relative quantities at observer parameter s.
// Connecting families are anchored at parameters 0 and 1:
//   connect_12(s)(0) = x1(tau1(s)),   connect_12(s)(1) = x2(tau2(s))
//   connect_1obs(s)(0) = x1(tau1(s)), connect_1obs(s)(1) = x(s)
//   connect_2obs(s)(0) = x2(tau2(s)), connect_2obs(s)(1) = x(s)
struct ObserverConfiguration {
    Path observer;
    Particle particle1;
    Particle particle2;
    PathFamily connect_12;
    PathFamily connect_1obs;
    PathFamily connect_2obs;
    Transport transport;
    ManifoldChart chart;
    std::optional<BundleMetric> metric;
    // Declares that `transport` preserves `metric` along the connecting paths.
    bool metric_consistent = false;
    KinematicsNumerics numerics;

    // Chart-coordinate straight connecting paths.
    static ObserverConfiguration with_straight_connections(Path observer, Particle p1, Particle p2,
                                                           Transport transport, ManifoldChart chart,
                                                           std::optional<BundleMetric> metric = std::nullopt,
                                                           bool metric_consistent = false);

    // Endpoint conditions of the three families at s, within 1e-9.
    void check_endpoints(double s) const;
    const BundleMetric& require_metric() const;
};

enum class Direction { second_wrt_first, first_wrt_second };

// I^{gamma_s}_{1 -> 0} X2: vector at x2(tau2(s)) moved to x1(tau1(s)).
TangentVector pull_to_particle1(const ObserverConfiguration& cfg, double s, const TangentVector& X2);
// I^{gamma_s}_{0 -> 1} X1.
TangentVector push_to_particle2(const ObserverConfiguration& cfg, double s, const TangentVector& X1);
// I^{eta_s}_{0 -> 1}: from x1(tau1(s)) to the observer.
TangentVector to_observer_from_1(const ObserverConfiguration& cfg, double s, const TangentVector& v);
// I^{eta*_s}_{0 -> 1}: from x2(tau2(s)) to the observer.
TangentVector to_observer_from_2(const ObserverConfiguration& cfg, double s, const TangentVector& v);

// second_wrt_first: Delta X21 = I^eta (I^gamma_{1->0} X2 - X1)
// first_wrt_second: Delta X12 = I^eta* (I^gamma_{0->1} X1 - X2)
TangentVector generic_difference(const ObserverConfiguration& cfg, double s, const TangentVector& X1,
                                 const TangentVector& X2, Direction direction = Direction::second_wrt_first);

TangentVector relative_velocity(const ObserverConfiguration& cfg, double s);

// d_s(t) = int_0^t I^{gamma_s}_{u -> 0} gamma_s'(u) du, attached at x1(tau1(s)).
TangentVector deviation_map(const ObserverConfiguration& cfg, double s, double t);
// h21(s) = I^{eta_s}_{0 -> 1} d_s(1), attached at x(s).
TangentVector deviation_vector(const ObserverConfiguration& cfg, double s);
FieldAlongPath deviation_field(const ObserverConfiguration& cfg);

TangentVector deviation_velocity(const ObserverConfiguration& cfg, double s, const CovariantDerivativeConfig& cd);
TangentVector deviation_acceleration(const ObserverConfiguration& cfg, double s,
                                     const CovariantDerivativeConfig& cd);

// A_a = D/ds_a V_a along the particle's own worldline, at parameter tau_a(s).
TangentVector particle_acceleration(const ObserverConfiguration& cfg, int which, double s,
                                    const CovariantDerivativeConfig& cd);
TangentVector relative_acceleration(const ObserverConfiguration& cfg, double s, const CovariantDerivativeConfig& cd);

TangentVector relative_momentum(const ObserverConfiguration& cfg, double s);

// E21 = eps((V1)^2) (I^{gamma_s}_{1->0} p2) . V1 at x1; E12 symmetric with the transport reversed.
double relative_energy(const ObserverConfiguration& cfg, double s, Direction direction = Direction::second_wrt_first);

// E_aa = mu |(V)^2| cross-checked against |(p)^2| / mu.
double proper_energy(const Particle& p, const BundleMetric& g, double s, ZeroSign zero = ZeroSign::positive,
                     double tol = 1e-9);

// First components of momenta in adapted bases; nullopt marks a null (degenerate) direction.
struct EnergyMomentumComponents {
    std::optional<double> p1_first;             // p1^1 in {lambda_i}
    std::optional<double> p1_transverse_max;    // max_{i != 1} |p1^i| in {lambda_i}
    std::optional<double> p21_first;            // (p2)_1^1 in {lambda_i}
    std::optional<double> dpi21_first;          // Delta pi21^1 in {lambda_i}
    std::optional<double> dp21_first;           // Delta p21^1 in {l_i} at x(s)
    std::optional<double> p1_first_prime;       // p1^{1'} in {lambda_i'}
};
EnergyMomentumComponents energy_momentum_components(const ObserverConfiguration& cfg, double s);

struct MomentumInvariantTerms {
    double direct = 0.0;        // (Delta pi21)^2 at x1
    double via_energies = 0.0;  // eps1 mu1 E11 + eps2 mu2 E22 - 2 eps1 mu1 E21
    double symmetric = 0.0;     // eps1 mu1 E11 + eps2 mu2 E22 - eps1 mu1 E21 - eps2 mu2 E12
    double dp21_square = 0.0;   // (Delta p21)^2 at x(s)
};
MomentumInvariantTerms momentum_invariant_terms(const ObserverConfiguration& cfg, double s);

// (Delta pi21)^2; when the configuration is metric consistent both energy forms are
// asserted against it and a ConsistencyError is thrown on disagreement.
double momentum_invariant(const ObserverConfiguration& cfg, double s);

// |eps((V2)^2) mu1 E21 - eps((V1)^2) mu2 E12| / max(1, |mu1 E21|)
double reciprocity_residual(const ObserverConfiguration& cfg, double s);
bool energy_reciprocity_check(const ObserverConfiguration& cfg, double s, double tol);

// eps((V1)^2) [Delta p21 . I^{eta_s} V1 + p1 . V1]; compared with relative_energy when the
// configuration is metric consistent.
double energy_via_relative_momentum(const ObserverConfiguration& cfg, double s);

struct RelativeState {
    double s = 0.0;
    TangentVector dV21;
    TangentVector h21;
    TangentVector V21;
    TangentVector dA21;
    TangentVector A21;
    TangentVector dp21;
    std::optional<double> E21, E12, E11, E22;
    std::optional<double> invariant_dpi2;
};

RelativeState relative_state(const ObserverConfiguration& cfg, double s, const CovariantDerivativeConfig& cd);

}  // namespace relmech
