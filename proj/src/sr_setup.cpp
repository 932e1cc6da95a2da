#include "relmech/sr_setup.hpp"

#include <utility>

namespace relmech::sr {

Path minkowski_worldline(const ParticleSpec& p, double c, double lo, double hi) {
    validate(p, c);
    const double g = p.massless() ? 1.0 : lorentz_factor(p.v3, c);
    const Vec4 y = p.offset;
    const Coords V{c * g, p.v3[0] * g, p.v3[1] * g, p.v3[2] * g};
    return Path(
        lo, hi,
        [V, y](double s) { return Coords{V[0] * s + y[0], V[1] * s + y[1], V[2] * s + y[2], V[3] * s + y[3]}; },
        [V](double) { return V; });
}

std::function<double(double)> minkowski_time_map(const ParticleSpec& p, double c) {
    const double g = p.massless() ? 1.0 : lorentz_factor(p.v3, c);
    const double t0 = p.offset[0] / c;
    return [g, t0](double t) { return (t - t0) / g; };
}

Particle minkowski_particle(const ParticleSpec& p, double c) {
    Path wl = minkowski_worldline(p, c);
    auto tm = minkowski_time_map(p, c);
    if (p.massless()) {
        const double mu = p.energy / (c * c);
        return Particle::massless(std::move(wl), [mu](double) { return mu; }, std::move(tm));
    }
    return Particle::massive(std::move(wl), p.mass, std::move(tm));
}

Path rest_observer(double c, const Vec3& position, double t_lo, double t_hi) {
    const Coords x{0.0, position[0], position[1], position[2]};
    return Path(
        t_lo, t_hi,
        [c, x](double t) {
            Coords p = x;
            p[0] = c * t;
            return p;
        },
        [c](double) { return Coords{c, 0.0, 0.0, 0.0}; });
}

ObserverConfiguration minkowski_configuration(const ParticleSpec& p1, const ParticleSpec& p2, double c,
                                              Path observer, bool use_flat_transport) {
    ManifoldChart chart = ManifoldChart::flat(4, "minkowski");
    Transport T = use_flat_transport ? Transport::flat() : Transport::linear_connection(chart);
    return ObserverConfiguration::with_straight_connections(std::move(observer), minkowski_particle(p1, c),
                                                            minkowski_particle(p2, c), std::move(T),
                                                            std::move(chart), BundleMetric::minkowski(), true);
}

}  // namespace relmech::sr
