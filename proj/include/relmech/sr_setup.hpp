#pragma once
#include <functional>

#include "relmech/kinematics.hpp"
#include "relmech/sr_oracle.hpp"

// Builds pipeline inputs (worldlines, time maps, configurations) for inertial
// particles in Minkowski space-time. The observer parameter is the frame time t.
namespace relmech::sr {

// Massive: x(s_a) = (c gamma s_a, gamma s_a v) + y, parametrized by proper time.
// Massless: x(s_a) = (c s_a, s_a v) + y with s_a the frame time.
Path minkowski_worldline(const ParticleSpec& p, double c, double lo = -1e6, double hi = 1e6);

// t -> parameter of the event with frame time t: (t - y^0/c)/gamma, or t - y^0/c when massless.
std::function<double(double)> minkowski_time_map(const ParticleSpec& p, double c);

// mu = m for massive particles, E / c^2 for massless ones.
Particle minkowski_particle(const ParticleSpec& p, double c);

// x(t) = (c t, position).
Path rest_observer(double c, const Vec3& position, double t_lo, double t_hi);

// Straight connecting paths, Minkowski metric, parallel transport of the flat chart
// (or the plain flat transport when use_flat_transport is set).
ObserverConfiguration minkowski_configuration(const ParticleSpec& p1, const ParticleSpec& p2, double c,
                                              Path observer, bool use_flat_transport = false);

}  // namespace relmech::sr
