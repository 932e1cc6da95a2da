#include "relmech/kinematics.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>
#include <utility>

namespace relmech {

namespace {

std::function<double(double)> identity_or(std::function<double(double)> tm) {
    if (tm) return tm;
    return [](double s) { return s; };
}

bool close(double a, double b, double tol) { return std::abs(a - b) <= tol * std::max(1.0, std::abs(a)); }

// The transport leaves chart components unchanged.
bool acts_as_identity(const Transport& T) {
    return T.kind() == TransportKind::flat ||
           (T.kind() == TransportKind::linear_connection && T.chart()->is_flat());
}

}  // namespace

// ---------------------------------------------------------------------------------------------
// Particle

Particle Particle::massive(Path worldline, double mass, std::function<double(double)> time_map) {
    if (mass == 0.0 || !std::isfinite(mass))
        throw InvalidParticleError("massive particle needs a finite nonzero mass");
    return Particle{std::move(worldline), identity_or(std::move(time_map)), mass, [mass](double) { return mass; }};
}

Particle Particle::massless(Path worldline, std::function<double(double)> mu, std::function<double(double)> time_map) {
    if (!mu) throw InvalidParticleError("massless particle needs a mu function");
    return Particle{std::move(worldline), identity_or(std::move(time_map)), 0.0, std::move(mu)};
}

double Particle::particle_parameter(double s) const {
    const double sa = time_map ? time_map(s) : s;
    if (!std::isfinite(sa)) throw NumericError("time map produced a non-finite parameter");
    if (!worldline.contains(sa)) throw DomainError("time map sends observer parameter outside the worldline domain");
    return sa;
}

Coords Particle::position(double s) const { return path_point(worldline, particle_parameter(s)); }

TangentVector Particle::velocity(double s) const { return path_tangent_vector(worldline, particle_parameter(s)); }

double Particle::mu_at(double s) const {
    const double m = mu(particle_parameter(s));
    if (m == 0.0) throw InvalidParticleError("mu vanished: the case m = mu = 0 is the vacuum, not a particle");
    if (!std::isfinite(m)) throw NumericError("mu is non-finite");
    return m;
}

TangentVector Particle::momentum(double s) const { return scaled(velocity(s), mu_at(s)); }

void validate_time_map(const Particle& p, double s_min, double s_max, int samples) {
    samples = std::max(samples, 2);
    double prev = 0.0;
    for (int k = 0; k < samples; ++k) {
        const double s = s_min + (s_max - s_min) * k / (samples - 1);
        const double sa = p.particle_parameter(s);
        if (k > 0 && s_max > s_min && !(sa > prev))
            throw PreconditionError("time map is not strictly increasing on the sweep range");
        prev = sa;
    }
}

// ---------------------------------------------------------------------------------------------
// Observer configuration

ObserverConfiguration ObserverConfiguration::with_straight_connections(Path observer, Particle p1, Particle p2,
                                                                       Transport transport, ManifoldChart chart,
                                                                       std::optional<BundleMetric> metric,
                                                                       bool metric_consistent) {
    auto a = std::make_shared<const Particle>(p1);
    auto b = std::make_shared<const Particle>(p2);
    auto x = std::make_shared<const Path>(observer);
    return ObserverConfiguration{
        std::move(observer),
        std::move(p1),
        std::move(p2),
        [a, b](double s) { return Path::line(a->position(s), b->position(s)); },
        [a, x](double s) { return Path::line(a->position(s), path_point(*x, s)); },
        [b, x](double s) { return Path::line(b->position(s), path_point(*x, s)); },
        std::move(transport),
        std::move(chart),
        std::move(metric),
        metric_consistent,
        {}};
}

void ObserverConfiguration::check_endpoints(double s) const {
    const Coords x1 = particle1.position(s);
    const Coords x2 = particle2.position(s);
    const Coords xo = path_point(observer, s);
    auto check = [](const Path& p, double u, const Coords& want, const char* what) {
        if (max_abs_diff(path_point(p, u), want) > kBaseTolerance)
            throw PreconditionError(std::string("connecting path endpoint condition violated: ") + what);
    };
    const Path g = connect_12(s);
    check(g, 0.0, x1, "gamma_s(0) = x1");
    check(g, 1.0, x2, "gamma_s(1) = x2");
    const Path e = connect_1obs(s);
    check(e, 0.0, x1, "eta_s(0) = x1");
    check(e, 1.0, xo, "eta_s(1) = x");
    const Path es = connect_2obs(s);
    check(es, 0.0, x2, "eta*_s(0) = x2");
    check(es, 1.0, xo, "eta*_s(1) = x");
}

const BundleMetric& ObserverConfiguration::require_metric() const {
    if (!metric) throw ConfigurationError("this quantity needs a bundle metric; none is configured");
    return *metric;
}

// ---------------------------------------------------------------------------------------------
// Differences

TangentVector pull_to_particle1(const ObserverConfiguration& cfg, double s, const TangentVector& X2) {
    return transport_vector(cfg.transport, cfg.connect_12(s), 1.0, 0.0, X2);
}

TangentVector push_to_particle2(const ObserverConfiguration& cfg, double s, const TangentVector& X1) {
    return transport_vector(cfg.transport, cfg.connect_12(s), 0.0, 1.0, X1);
}

TangentVector to_observer_from_1(const ObserverConfiguration& cfg, double s, const TangentVector& v) {
    return transport_vector(cfg.transport, cfg.connect_1obs(s), 0.0, 1.0, v);
}

TangentVector to_observer_from_2(const ObserverConfiguration& cfg, double s, const TangentVector& v) {
    return transport_vector(cfg.transport, cfg.connect_2obs(s), 0.0, 1.0, v);
}

TangentVector generic_difference(const ObserverConfiguration& cfg, double s, const TangentVector& X1,
                                 const TangentVector& X2, Direction direction) {
    if (direction == Direction::second_wrt_first)
        return to_observer_from_1(cfg, s, subtract(pull_to_particle1(cfg, s, X2), X1));
    return to_observer_from_2(cfg, s, subtract(push_to_particle2(cfg, s, X1), X2));
}

TangentVector relative_velocity(const ObserverConfiguration& cfg, double s) {
    return generic_difference(cfg, s, cfg.particle1.velocity(s), cfg.particle2.velocity(s));
}

TangentVector relative_momentum(const ObserverConfiguration& cfg, double s) {
    return generic_difference(cfg, s, cfg.particle1.momentum(s), cfg.particle2.momentum(s));
}

// ---------------------------------------------------------------------------------------------
// Deviation

TangentVector deviation_map(const ObserverConfiguration& cfg, double s, double t) {
    const Path gamma = cfg.connect_12(s);
    const Coords start = path_point(gamma, 0.0);
    path_point(gamma, t);
    if (t == 0.0) return {start, Coords(start.size())};

    // Identity transport: the integrand is gamma' itself and the integral is the chord.
    if (acts_as_identity(cfg.transport)) return {start, gamma.point(t) - start};

    int n = cfg.numerics.simpson_panels;
    if (n < 2) throw PreconditionError("simpson_panels must be >= 2");
    if (n % 2 != 0) ++n;
    const double H = t / n;

    std::vector<Coords> integrand;
    integrand.reserve(n + 1);
    if (cfg.transport.kind() == TransportKind::linear_connection) {
        const ManifoldChart& chart = *cfg.transport.chart();
        const int total = cfg.transport.step_policy().steps_for(t);
        const int substeps = std::max(1, (total + n - 1) / n);
        const auto back = transport_to_anchor_on_grid(chart, gamma, 0.0, t, n, substeps);
        for (int k = 0; k <= n; ++k) integrand.push_back(back[k] * gamma.tangent(k * H));
    } else {
        for (int k = 0; k <= n; ++k) {
            const double u = k * H;
            integrand.push_back(transport_vector(cfg.transport, gamma, u, 0.0, path_tangent_vector(gamma, u)).comps);
        }
    }

    Coords sum = integrand.front() + integrand.back();
    for (int k = 1; k < n; ++k) sum += integrand[k] * (k % 2 == 1 ? 4.0 : 2.0);
    Coords result = sum * (H / 3.0);
    if (!result.all_finite()) throw NumericError("deviation map quadrature produced non-finite values");
    return {start, result};
}

TangentVector deviation_vector(const ObserverConfiguration& cfg, double s) {
    return to_observer_from_1(cfg, s, deviation_map(cfg, s, 1.0));
}

FieldAlongPath deviation_field(const ObserverConfiguration& cfg) {
    auto shared = std::make_shared<const ObserverConfiguration>(cfg);
    return {cfg.observer, [shared](double s) { return deviation_vector(*shared, s); }};
}

TangentVector deviation_velocity(const ObserverConfiguration& cfg, double s, const CovariantDerivativeConfig& cd) {
    const FieldAlongPath h{cfg.observer, [&cfg](double u) { return deviation_vector(cfg, u); }};
    return covariant_derivative(cfg.chart, h, s, cd);
}

TangentVector deviation_acceleration(const ObserverConfiguration& cfg, double s,
                                     const CovariantDerivativeConfig& cd) {
    const FieldAlongPath h{cfg.observer, [&cfg](double u) { return deviation_vector(cfg, u); }};
    return second_covariant_derivative(cfg.chart, h, s, cd);
}

// ---------------------------------------------------------------------------------------------
// Accelerations

TangentVector particle_acceleration(const ObserverConfiguration& cfg, int which, double s,
                                    const CovariantDerivativeConfig& cd) {
    if (which != 1 && which != 2) throw PreconditionError("particle index must be 1 or 2");
    const Particle& p = which == 1 ? cfg.particle1 : cfg.particle2;
    const FieldAlongPath v{p.worldline, [&p](double u) { return path_tangent_vector(p.worldline, u); }};
    return covariant_derivative(cfg.chart, v, p.particle_parameter(s), cd);
}

TangentVector relative_acceleration(const ObserverConfiguration& cfg, double s, const CovariantDerivativeConfig& cd) {
    return generic_difference(cfg, s, particle_acceleration(cfg, 1, s, cd), particle_acceleration(cfg, 2, s, cd));
}

// ---------------------------------------------------------------------------------------------
// Energies

double relative_energy(const ObserverConfiguration& cfg, double s, Direction direction) {
    const BundleMetric& g = cfg.require_metric();
    const ZeroSign z = cfg.numerics.zero_sign;
    if (direction == Direction::second_wrt_first) {
        const TangentVector v1 = cfg.particle1.velocity(s);
        const TangentVector p2 = pull_to_particle1(cfg, s, cfg.particle2.momentum(s));
        return epsilon(causal_square(g, v1), z) * scalar_product(g, p2, v1);
    }
    const TangentVector v2 = cfg.particle2.velocity(s);
    const TangentVector p1 = push_to_particle2(cfg, s, cfg.particle1.momentum(s));
    return epsilon(causal_square(g, v2), z) * scalar_product(g, p1, v2);
}

double proper_energy(const Particle& p, const BundleMetric& g, double s, ZeroSign zero, double tol) {
    const double mu = p.mu_at(s);
    const double from_velocity = mu * signed_abs(causal_square(g, p.velocity(s)), zero);
    const double from_momentum = signed_abs(causal_square(g, p.momentum(s)), zero) / mu;
    if (!close(from_velocity, from_momentum, tol))
        throw ConsistencyError("proper energy: mu|(V)^2| and |(p)^2|/mu disagree");
    return from_velocity;
}

EnergyMomentumComponents energy_momentum_components(const ObserverConfiguration& cfg, double s) {
    const BundleMetric& g = cfg.require_metric();
    EnergyMomentumComponents out;
    const TangentVector v1 = cfg.particle1.velocity(s);
    const TangentVector v2 = cfg.particle2.velocity(s);
    const TangentVector p1 = cfg.particle1.momentum(s);

    if (causal_square(g, v1) != 0.0) {
        const AdaptedBasis basis = adapted_basis(g, v1);
        const std::vector<double> comps = basis_components(g, p1, basis);
        out.p1_first = comps.front();
        double transverse = 0.0;
        for (std::size_t i = 1; i < comps.size(); ++i) transverse = std::max(transverse, std::abs(comps[i]));
        out.p1_transverse_max = transverse;

        const TangentVector p21 = pull_to_particle1(cfg, s, cfg.particle2.momentum(s));
        out.p21_first = first_component(g, p21, basis);
        out.dpi21_first = first_component(g, subtract(p21, p1), basis);

        const TangentVector l1 = to_observer_from_1(cfg, s, basis.first());
        const double l1_square = scalar_square(g, l1);
        if (!is_effectively_null(l1_square, l1.comps))
            out.dp21_first = scalar_product(g, relative_momentum(cfg, s), l1) / l1_square;
    }

    const double v2_square = causal_square(g, v2);
    if (v2_square != 0.0) {
        const TangentVector lambda1p = pull_to_particle1(cfg, s, scaled(v2, 1.0 / std::sqrt(std::abs(v2_square))));
        const double lp_square = scalar_square(g, lambda1p);
        if (!is_effectively_null(lp_square, lambda1p.comps))
            out.p1_first_prime = scalar_product(g, p1, lambda1p) / lp_square;
    }
    return out;
}

MomentumInvariantTerms momentum_invariant_terms(const ObserverConfiguration& cfg, double s) {
    const BundleMetric& g = cfg.require_metric();
    const ZeroSign z = cfg.numerics.zero_sign;
    const double tol = cfg.numerics.tolerance;
    const TangentVector p1 = cfg.particle1.momentum(s);
    const TangentVector dpi = subtract(pull_to_particle1(cfg, s, cfg.particle2.momentum(s)), p1);

    const double eps1 = epsilon(causal_square(g, cfg.particle1.velocity(s)), z);
    const double eps2 = epsilon(causal_square(g, cfg.particle2.velocity(s)), z);
    const double mu1 = cfg.particle1.mu_at(s);
    const double mu2 = cfg.particle2.mu_at(s);
    const double e11 = proper_energy(cfg.particle1, g, s, z, tol);
    const double e22 = proper_energy(cfg.particle2, g, s, z, tol);
    const double e21 = relative_energy(cfg, s, Direction::second_wrt_first);
    const double e12 = relative_energy(cfg, s, Direction::first_wrt_second);

    MomentumInvariantTerms t;
    t.direct = scalar_square(g, dpi);
    t.via_energies = eps1 * mu1 * e11 + eps2 * mu2 * e22 - 2.0 * eps1 * mu1 * e21;
    t.symmetric = eps1 * mu1 * e11 + eps2 * mu2 * e22 - eps1 * mu1 * e21 - eps2 * mu2 * e12;
    t.dp21_square = scalar_square(g, relative_momentum(cfg, s));
    return t;
}

double momentum_invariant(const ObserverConfiguration& cfg, double s) {
    const MomentumInvariantTerms t = momentum_invariant_terms(cfg, s);
    if (cfg.metric_consistent) {
        const double tol = cfg.numerics.tolerance;
        if (!close(t.direct, t.via_energies, tol))
            throw ConsistencyError("momentum invariant disagrees with its energy decomposition");
        if (!close(t.direct, t.symmetric, tol) || !close(t.direct, t.dp21_square, tol))
            throw ConsistencyError("momentum invariant disagrees with its symmetric form");
    }
    return t.direct;
}

double reciprocity_residual(const ObserverConfiguration& cfg, double s) {
    const BundleMetric& g = cfg.require_metric();
    const ZeroSign z = cfg.numerics.zero_sign;
    const double eps1 = epsilon(causal_square(g, cfg.particle1.velocity(s)), z);
    const double eps2 = epsilon(causal_square(g, cfg.particle2.velocity(s)), z);
    const double lhs = eps2 * cfg.particle1.mu_at(s) * relative_energy(cfg, s, Direction::second_wrt_first);
    const double rhs = eps1 * cfg.particle2.mu_at(s) * relative_energy(cfg, s, Direction::first_wrt_second);
    return std::abs(lhs - rhs) / std::max(1.0, std::abs(cfg.particle1.mu_at(s) * relative_energy(cfg, s)));
}

bool energy_reciprocity_check(const ObserverConfiguration& cfg, double s, double tol) {
    return reciprocity_residual(cfg, s) <= tol;
}

double energy_via_relative_momentum(const ObserverConfiguration& cfg, double s) {
    const BundleMetric& g = cfg.require_metric();
    const TangentVector v1 = cfg.particle1.velocity(s);
    const TangentVector p1 = cfg.particle1.momentum(s);
    const double eps1 = epsilon(causal_square(g, v1), cfg.numerics.zero_sign);
    const double value =
        eps1 * (scalar_product(g, relative_momentum(cfg, s), to_observer_from_1(cfg, s, v1)) + scalar_product(g, p1, v1));
    if (cfg.metric_consistent && !close(value, relative_energy(cfg, s), cfg.numerics.tolerance))
        throw ConsistencyError("relative energy via relative momentum disagrees with the direct definition");
    return value;
}

RelativeState relative_state(const ObserverConfiguration& cfg, double s, const CovariantDerivativeConfig& cd) {
    RelativeState st;
    st.s = s;
    st.dV21 = relative_velocity(cfg, s);
    st.h21 = deviation_vector(cfg, s);
    st.V21 = deviation_velocity(cfg, s, cd);
    st.dA21 = relative_acceleration(cfg, s, cd);
    st.A21 = deviation_acceleration(cfg, s, cd);
    st.dp21 = relative_momentum(cfg, s);
    if (cfg.metric) {
        const ZeroSign z = cfg.numerics.zero_sign;
        st.E21 = relative_energy(cfg, s, Direction::second_wrt_first);
        st.E12 = relative_energy(cfg, s, Direction::first_wrt_second);
        st.E11 = proper_energy(cfg.particle1, *cfg.metric, s, z, cfg.numerics.tolerance);
        st.E22 = proper_energy(cfg.particle2, *cfg.metric, s, z, cfg.numerics.tolerance);
        st.invariant_dpi2 = momentum_invariant(cfg, s);
    }
    return st;
}

}  // namespace relmech
