#include "relmech/sr_oracle.hpp"

#include <cmath>

#include "relmech/errors.hpp"

namespace relmech::sr {

double dot3(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

double lorentz_factor(const Vec3& v, double c) {
    const double beta2 = dot3(v, v) / (c * c);
    if (!(beta2 < 1.0)) throw PreconditionError("speed must be below c for a Lorentz factor");
    return 1.0 / std::sqrt(1.0 - beta2);
}

double minkowski_square(const Vec4& x) { return x[0] * x[0] - x[1] * x[1] - x[2] * x[2] - x[3] * x[3]; }

void validate(const ParticleSpec& p, double c) {
    if (!(c > 0.0)) throw PreconditionError("speed of light must be positive");
    if (p.mass < 0.0) throw PreconditionError("mass must be non-negative");
    const double speed2 = dot3(p.v3, p.v3);
    if (p.massless()) {
        if (std::abs(std::sqrt(speed2) - c) > 1e-12 * c)
            throw PreconditionError("massless particle must move with speed c");
        if (!(p.energy > 0.0)) throw PreconditionError("massless particle needs a positive energy");
    } else if (!(speed2 < c * c)) {
        throw PreconditionError("massive particle must move slower than c");
    }
}

Vec4 four_velocity(const ParticleSpec& p, double c) {
    validate(p, c);
    if (p.massless()) return {c, p.v3[0], p.v3[1], p.v3[2]};
    const double g = lorentz_factor(p.v3, c);
    return {c * g, p.v3[0] * g, p.v3[1] * g, p.v3[2] * g};
}

double four_velocity_square(const ParticleSpec& p, double c) { return minkowski_square(four_velocity(p, c)); }

Energies relative_energies(const ParticleSpec& p1, const ParticleSpec& p2, double c) {
    validate(p1, c);
    validate(p2, c);
    const double c2 = c * c;
    Energies e;
    if (!p1.massless() && !p2.massless()) {
        const double k = (1.0 - dot3(p1.v3, p2.v3) / c2) * lorentz_factor(p1.v3, c) * lorentz_factor(p2.v3, c);
        e.E21 = p2.mass * c2 * k;
        e.E12 = p1.mass * c2 * k;
        e.E11 = p1.mass * c2;
        e.E22 = p2.mass * c2;
    } else if (!p1.massless()) {
        const Vec3 n2{p2.v3[0] / c, p2.v3[1] / c, p2.v3[2] / c};
        const double k = (1.0 - dot3(p1.v3, n2) / c) * lorentz_factor(p1.v3, c);
        e.E21 = p2.energy * k;
        e.E12 = p1.mass * c2 * k;
        e.E11 = p1.mass * c2;
        e.E22 = 0.0;
    } else if (!p2.massless()) {
        const Vec3 n1{p1.v3[0] / c, p1.v3[1] / c, p1.v3[2] / c};
        const double k = (1.0 - dot3(p2.v3, n1) / c) * lorentz_factor(p2.v3, c);
        e.E12 = p1.energy * k;
        e.E21 = p2.mass * c2 * k;
        e.E22 = p2.mass * c2;
        e.E11 = 0.0;
    } else {
        const double k = 1.0 - dot3(p1.v3, p2.v3) / c2;
        e.E21 = p2.energy * k;
        e.E12 = p1.energy * k;
    }
    return e;
}

double doppler_energy(double E0, const Vec3& v, const Vec3& n, double c) {
    const double denom = 1.0 - dot3(v, n) / c;
    if (denom <= 0.0) throw DomainError("doppler_energy: source moves with c along the emission direction");
    return E0 / denom / lorentz_factor(v, c);
}

double doppler_source_energy(double E, const Vec3& v, const Vec3& n, double c) {
    return E * (1.0 - dot3(v, n) / c) * lorentz_factor(v, c);
}

SquareMatrix boost_matrix(const Vec3& v, double c) {
    const double g = lorentz_factor(v, c);
    const Vec3 b{v[0] / c, v[1] / c, v[2] / c};
    const double b2 = dot3(b, b);
    SquareMatrix m = SquareMatrix::identity(4);
    if (b2 == 0.0) return m;
    m(0, 0) = g;
    for (int i = 0; i < 3; ++i) {
        m(0, i + 1) = -g * b[i];
        m(i + 1, 0) = -g * b[i];
        for (int j = 0; j < 3; ++j) m(i + 1, j + 1) += (g - 1.0) * b[i] * b[j] / b2;
    }
    return m;
}

Vec4 mat_vec(const SquareMatrix& m, const Vec4& x) {
    Vec4 r{};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) r[i] += m(i, j) * x[j];
    return r;
}

DeviationQuantities deviation_quantities(const ParticleSpec& p1, const ParticleSpec& p2, double c, double t,
                                         double t_prime, double dt_ds, double dtprime_ds) {
    if (p1.massless() || p2.massless())
        throw PreconditionError("deviation_quantities: both particles must be massive and inertial");
    const Vec4 V1 = four_velocity(p1, c);
    const Vec4 V2 = four_velocity(p2, c);
    DeviationQuantities q;

    for (int i = 0; i < 4; ++i) q.dV21_K[i] = V2[i] - V1[i];
    // Spatial position of particle a at K-time t.
    auto position = [c, t](const ParticleSpec& p, int i) {
        return (t - p.offset[0] / c) * p.v3[i] + p.offset[i + 1];
    };
    for (int i = 0; i < 3; ++i) {
        q.h21_K[i + 1] = position(p2, i) - position(p1, i);
        q.dh21_dt_K[i + 1] = p2.v3[i] - p1.v3[i];
        q.V21_K[i + 1] = dt_ds * q.dh21_dt_K[i + 1];
    }

    // K' coordinates: x' = L (x - y1), particle 1 rests at the spatial origin.
    const SquareMatrix L = boost_matrix(p1.v3, c);
    const Vec4 V2p = mat_vec(L, V2);
    const Vec4 V1p = mat_vec(L, V1);
    for (int i = 0; i < 4; ++i) q.dV21_Kp[i] = V2p[i] - V1p[i];
    for (int i = 0; i < 3; ++i) q.v_rel[i] = c * V2p[i + 1] / V2p[0];

    Vec4 y21{};
    for (int i = 0; i < 4; ++i) y21[i] = p2.offset[i] - p1.offset[i];
    const Vec4 a = mat_vec(L, y21);
    const Vec4 b = mat_vec(L, Vec4{c, p2.v3[0], p2.v3[1], p2.v3[2]});
    const double tk = (c * t_prime - a[0]) / b[0];  // K-parameter of particle 2's event at K'-time t'
    for (int i = 1; i < 4; ++i) {
        q.h21_Kp[i] = a[i] + tk * b[i];
        q.V21_Kp[i] = dtprime_ds * q.v_rel[i - 1];
    }
    return q;
}

}  // namespace relmech::sr
