#pragma once
#include <array>

#include "relmech/linalg.hpp"

// Closed-form special-relativity reference values. Nothing here touches the
// transport or kinematics code, so it can serve as an independent oracle.
namespace relmech::sr {

using Vec3 = std::array<double, 3>;
using Vec4 = std::array<double, 4>;

// Inertial particle x(t) = (ct, t v) + offset in a fixed frame K.
// Massless particles have |v| == c and carry their frame energy.
struct ParticleSpec {
    double mass = 1.0;
    Vec3 v3{};
    Vec4 offset{};
    double energy = 0.0;  // E_a in K; required when mass == 0

    bool massless() const { return mass == 0.0; }
};

// Throws PreconditionError when the spec is inconsistent with c.
void validate(const ParticleSpec& p, double c);

double dot3(const Vec3& a, const Vec3& b);
// (1 - v^2/c^2)^{-1/2}
double lorentz_factor(const Vec3& v, double c);
// Signature (+,-,-,-).
double minkowski_square(const Vec4& x);

// (c, v) gamma for massive particles, c (1, n) for massless ones.
Vec4 four_velocity(const ParticleSpec& p, double c);
double four_velocity_square(const ParticleSpec& p, double c);

struct Energies {
    double E21 = 0.0;
    double E12 = 0.0;
    double E11 = 0.0;
    double E22 = 0.0;
};

// Dispatches on which particles are massless.
Energies relative_energies(const ParticleSpec& p1, const ParticleSpec& p2, double c);

// Frame energy of quanta emitted with energy E0 by a source moving with v, direction n.
// Throws DomainError when v.n == c.
double doppler_energy(double E0, const Vec3& v, const Vec3& n, double c);
// Source-frame energy from the frame energy E (inverse of doppler_energy).
double doppler_source_energy(double E, const Vec3& v, const Vec3& n, double c);

// Pure boost into the frame moving with velocity v relative to K.
SquareMatrix boost_matrix(const Vec3& v, double c);
Vec4 mat_vec(const SquareMatrix& m, const Vec4& x);

struct DeviationQuantities {
    // Frame K, particles compared at equal K-time t.
    Vec4 dV21_K{};
    Vec4 h21_K{};
    Vec4 dh21_dt_K{};
    Vec4 V21_K{};  // (dt/ds) (0, v2 - v1)
    // Rest frame K' of particle 1 (origin on particle 1), equal K'-time t'.
    Vec3 v_rel{};  // velocity of particle 2 in K'
    Vec4 dV21_Kp{};
    Vec4 h21_Kp{};
    Vec4 V21_Kp{};  // (dt'/ds) (0, v')
};

// Both particles must be massive and inertial.
DeviationQuantities deviation_quantities(const ParticleSpec& p1, const ParticleSpec& p2, double c, double t,
                                         double t_prime, double dt_ds = 1.0, double dtprime_ds = 1.0);

}  // namespace relmech::sr
