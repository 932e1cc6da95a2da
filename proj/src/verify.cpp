#include "relmech/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>

namespace relmech {

namespace {

constexpr double kStencilTolerance = 1e-6;

// Residual of one identity at a given resolution, maximized over the sweep.
using ResidualFn = std::function<double(const ObserverConfiguration&, const CovariantDerivativeConfig&, double s)>;

struct Check {
    std::string name;
    ResidualFn residual;
    double tolerance;
    bool refines;  // discretization-limited: report the 2x-resolution ratio
};

double rel(double got, double want) { return std::abs(got - want) / std::max(1.0, std::abs(want)); }

double vec_rel(const Coords& got, const Coords& want) {
    return max_abs_diff(got, want) / std::max(1.0, max_norm(want));
}

Coords to_coords(const sr::Vec4& v) { return {v[0], v[1], v[2], v[3]}; }

// Event of an inertial particle at frame time t.
sr::Vec4 sr_position(const sr::ParticleSpec& p, double c, double t) {
    const double dt = t - p.offset[0] / c;
    return {c * t, dt * p.v3[0] + p.offset[1], dt * p.v3[1] + p.offset[2], dt * p.v3[2] + p.offset[3]};
}

// The same configuration without the built-in consistency assertions, so both sides are reported.
ObserverConfiguration unasserted(const ObserverConfiguration& cfg) {
    ObserverConfiguration c = cfg;
    c.metric_consistent = false;
    return c;
}

bool identity_transport(const Scenario& sc) {
    if (sc.numerics.transport == TransportChoice::flat) return true;
    return sc.numerics.transport == TransportChoice::parallel && sc.chart.is_flat();
}

double tau_rate(const Particle& p, double s) {
    const double h = 1e-6 * std::max(1.0, std::abs(s));
    return (p.time_map(s + h) - p.time_map(s - h)) / (2.0 * h);
}

// Checks shared by every suite that has a metric.
void add_identity_checks(std::vector<Check>& checks, const Scenario& sc, double tol) {
    checks.push_back({"momentum decomposition",
                      [](const ObserverConfiguration& cfg, const CovariantDerivativeConfig&, double s) {
                          const double mu1 = cfg.particle1.mu_at(s), mu2 = cfg.particle2.mu_at(s);
                          const Coords rhs =
                              relative_velocity(cfg, s).comps * mu2 +
                              to_observer_from_1(cfg, s, cfg.particle1.momentum(s)).comps * (mu2 / mu1 - 1.0);
                          return vec_rel(relative_momentum(cfg, s).comps, rhs);
                      },
                      tol, false});
    if (!sc.metric) return;
    checks.push_back({"energy via relative momentum",
                      [](const ObserverConfiguration& cfg, const CovariantDerivativeConfig&, double s) {
                          const ObserverConfiguration c = unasserted(cfg);
                          return rel(energy_via_relative_momentum(c, s), relative_energy(c, s));
                      },
                      tol, true});
    checks.push_back({"energy reciprocity",
                      [](const ObserverConfiguration& cfg, const CovariantDerivativeConfig&, double s) {
                          return reciprocity_residual(cfg, s);
                      },
                      tol, true});
    checks.push_back({"momentum invariant via energies",
                      [](const ObserverConfiguration& cfg, const CovariantDerivativeConfig&, double s) {
                          const MomentumInvariantTerms t = momentum_invariant_terms(cfg, s);
                          return rel(t.via_energies, t.direct);
                      },
                      tol, true});
    checks.push_back({"momentum invariant, symmetric form",
                      [](const ObserverConfiguration& cfg, const CovariantDerivativeConfig&, double s) {
                          const MomentumInvariantTerms t = momentum_invariant_terms(cfg, s);
                          return std::max(rel(t.symmetric, t.direct), rel(t.dp21_square, t.direct));
                      },
                      tol, true});
}

// Adapted-basis components; only meaningful when both velocities are non-null.
void add_component_checks(std::vector<Check>& checks, double tol) {
    checks.push_back(
        {"adapted-basis components",
         [](const ObserverConfiguration& cfg, const CovariantDerivativeConfig&, double s) {
             const BundleMetric& g = *cfg.metric;
             const ZeroSign z = cfg.numerics.zero_sign;
             const EnergyMomentumComponents c = energy_momentum_components(cfg, s);
             if (!c.p1_first || !c.dp21_first || !c.p1_first_prime) return std::numeric_limits<double>::infinity();
             const double e11 = proper_energy(cfg.particle1, g, s, z, 1.0);
             const double e21 = relative_energy(cfg, s);
             const double e12 = relative_energy(cfg, s, Direction::first_wrt_second);
             const double n1 = std::sqrt(std::abs(scalar_square(g, cfg.particle1.velocity(s))));
             const double n2 = std::sqrt(std::abs(scalar_square(g, cfg.particle2.velocity(s))));
             const double scale = std::max({1.0, std::abs(e11), std::abs(e21), std::abs(e12)});
             double r = std::abs(*c.p1_first - e11 / n1);
             r = std::max(r, *c.p1_transverse_max);
             r = std::max(r, std::abs(*c.p21_first - e21 / n1));
             r = std::max(r, std::abs(*c.dpi21_first - (e21 - e11) / n1));
             r = std::max(r, std::abs(*c.dp21_first - (e21 - e11) / n1));
             r = std::max(r, std::abs(*c.p1_first_prime - e12 / n2));
             return r / scale;
         },
         tol, true});
}

void add_antisymmetry_check(std::vector<Check>& checks) {
    checks.push_back({"flat antisymmetry",
                      [](const ObserverConfiguration& cfg, const CovariantDerivativeConfig&, double s) {
                          const TangentVector X1 = cfg.particle1.momentum(s), X2 = cfg.particle2.velocity(s);
                          const Coords d21 = generic_difference(cfg, s, X1, X2).comps;
                          const Coords d12 = generic_difference(cfg, s, X1, X2, Direction::first_wrt_second).comps;
                          return max_norm(d12 + d21);
                      },
                      0.0, false});
}

std::vector<Check> sr_checks(const Scenario& sc, double tol) {
    if (!sc.sr) throw ScenarioError("suite sr needs geometry minkowski4 with two inertial particles");
    const SrDescription d = *sc.sr;
    const sr::ParticleSpec p1 = d.particles[0], p2 = d.particles[1];
    const double c = d.c;
    const sr::Energies E = sr::relative_energies(p1, p2, c);
    const double stencil_tol = std::max(tol, kStencilTolerance);
    std::vector<Check> checks;

    auto energy = [&](const char* name, double want, std::function<double(const ObserverConfiguration&, double)> got) {
        checks.push_back({name,
                          [want, got](const ObserverConfiguration& cfg, const CovariantDerivativeConfig&, double s) {
                              return rel(got(cfg, s), want);
                          },
                          tol, false});
    };
    energy("relative energy E21 vs closed form", E.E21,
           [](const ObserverConfiguration& cfg, double s) { return relative_energy(cfg, s); });
    energy("relative energy E12 vs closed form", E.E12, [](const ObserverConfiguration& cfg, double s) {
        return relative_energy(cfg, s, Direction::first_wrt_second);
    });
    energy("proper energy E11 vs closed form", E.E11, [](const ObserverConfiguration& cfg, double s) {
        return proper_energy(cfg.particle1, *cfg.metric, s, cfg.numerics.zero_sign, 1.0);
    });
    energy("proper energy E22 vs closed form", E.E22, [](const ObserverConfiguration& cfg, double s) {
        return proper_energy(cfg.particle2, *cfg.metric, s, cfg.numerics.zero_sign, 1.0);
    });

    const Coords dV = to_coords(sr::four_velocity(p2, c)) - to_coords(sr::four_velocity(p1, c));
    checks.push_back({"relative velocity vs SR oracle",
                      [dV](const ObserverConfiguration& cfg, const CovariantDerivativeConfig&, double s) {
                          return vec_rel(relative_velocity(cfg, s).comps, dV);
                      },
                      tol, false});
    checks.push_back({"deviation vector vs SR oracle",
                      [p1, p2, c](const ObserverConfiguration& cfg, const CovariantDerivativeConfig&, double s) {
                          Coords want = to_coords(sr_position(p2, c, s)) - to_coords(sr_position(p1, c, s));
                          return vec_rel(deviation_vector(cfg, s).comps, want);
                      },
                      tol, false});
    const Coords V21{0.0, p2.v3[0] - p1.v3[0], p2.v3[1] - p1.v3[1], p2.v3[2] - p1.v3[2]};
    checks.push_back({"deviation velocity vs SR oracle",
                      [V21](const ObserverConfiguration& cfg, const CovariantDerivativeConfig& cd, double s) {
                          return vec_rel(deviation_velocity(cfg, s, cd).comps, V21);
                      },
                      stencil_tol, true});

    const bool m1 = p1.massless(), m2 = p2.massless();
    if (m1 != m2) {
        // The photon's energy relative to the massive source inverts the Doppler formula.
        const sr::ParticleSpec& src = m1 ? p2 : p1;
        const sr::ParticleSpec& ph = m1 ? p1 : p2;
        const sr::Vec3 n{ph.v3[0] / c, ph.v3[1] / c, ph.v3[2] / c};
        const Direction dir = m1 ? Direction::first_wrt_second : Direction::second_wrt_first;
        checks.push_back({"Doppler shift",
                          [src, ph, n, c, dir](const ObserverConfiguration& cfg, const CovariantDerivativeConfig&,
                                               double s) {
                              const double emitted = relative_energy(cfg, s, dir);
                              return rel(sr::doppler_energy(emitted, src.v3, n, c), ph.energy);
                          },
                          tol, false});
    }
    if (m1 || m2) {
        checks.push_back({"massless velocities are null",
                          [m1, m2](const ObserverConfiguration& cfg, const CovariantDerivativeConfig&, double s) {
                              double r = 0.0;
                              const BundleMetric& g = *cfg.metric;
                              if (m1) r = std::max(r, std::abs(scalar_square(g, cfg.particle1.velocity(s))) /
                                                          std::pow(max_norm(cfg.particle1.velocity(s).comps), 2));
                              if (m2) r = std::max(r, std::abs(scalar_square(g, cfg.particle2.velocity(s))) /
                                                          std::pow(max_norm(cfg.particle2.velocity(s).comps), 2));
                              return r;
                          },
                          1e-12, false});
    } else {
        add_component_checks(checks, tol);
    }
    add_identity_checks(checks, sc, tol);
    if (identity_transport(sc)) add_antisymmetry_check(checks);
    return checks;
}

// Cartesian image of polar components at a point.
Coords cart(const Coords& p, const Coords& v) {
    const double r = p[0], th = p[1];
    return {std::cos(th) * v[0] - r * std::sin(th) * v[1], std::sin(th) * v[0] + r * std::cos(th) * v[1]};
}

Coords from_cart(const Coords& p, const Coords& w) {
    const double r = p[0], th = p[1];
    return {std::cos(th) * w[0] + std::sin(th) * w[1], (-std::sin(th) * w[0] + std::cos(th) * w[1]) / r};
}

Coords cart_point(const Coords& p) { return {p[0] * std::cos(p[1]), p[0] * std::sin(p[1])}; }

std::vector<Check> euclidean_checks(const Scenario& sc, double tol) {
    const double stencil_tol = std::max(tol, kStencilTolerance);
    std::vector<Check> checks;
    if (sc.geometry == GeometryKind::euclidean) {
        // Flat reductions hold with identical arithmetic: residual exactly 0.
        checks.push_back({"relative velocity V2 - V1",
                          [](const ObserverConfiguration& cfg, const CovariantDerivativeConfig&, double s) {
                              return max_abs_diff(relative_velocity(cfg, s).comps,
                                                  cfg.particle2.velocity(s).comps - cfg.particle1.velocity(s).comps);
                          },
                          0.0, false});
        checks.push_back({"relative momentum p2 - p1",
                          [](const ObserverConfiguration& cfg, const CovariantDerivativeConfig&, double s) {
                              return max_abs_diff(relative_momentum(cfg, s).comps,
                                                  cfg.particle2.momentum(s).comps - cfg.particle1.momentum(s).comps);
                          },
                          0.0, false});
        checks.push_back({"deviation vector x2 - x1",
                          [](const ObserverConfiguration& cfg, const CovariantDerivativeConfig&, double s) {
                              return max_abs_diff(deviation_vector(cfg, s).comps,
                                                  cfg.particle2.position(s) - cfg.particle1.position(s));
                          },
                          0.0, false});
        checks.push_back({"deviation velocity d/ds (x2 - x1)",
                          [](const ObserverConfiguration& cfg, const CovariantDerivativeConfig& cd, double s) {
                              const Coords want = cfg.particle2.velocity(s).comps * tau_rate(cfg.particle2, s) -
                                                  cfg.particle1.velocity(s).comps * tau_rate(cfg.particle1, s);
                              return vec_rel(deviation_velocity(cfg, s, cd).comps, want);
                          },
                          stencil_tol, true});
        checks.push_back({"relative energy p2 . V1",
                          [](const ObserverConfiguration& cfg, const CovariantDerivativeConfig&, double s) {
                              const TangentVector v1 = cfg.particle1.velocity(s);
                              const TangentVector p2{v1.base, cfg.particle2.momentum(s).comps};
                              return rel(relative_energy(cfg, s), scalar_product(*cfg.metric, p2, v1));
                          },
                          tol, false});
        if (identity_transport(sc)) add_antisymmetry_check(checks);
    } else if (sc.geometry == GeometryKind::polar_plane) {
        // Parallel transport of the flat plane keeps Cartesian components.
        auto cart_vel = [](const Particle& p, double s) {
            const TangentVector v = p.velocity(s);
            return cart(v.base, v.comps);
        };
        checks.push_back({"relative velocity vs Cartesian V2 - V1",
                          [cart_vel](const ObserverConfiguration& cfg, const CovariantDerivativeConfig&, double s) {
                              const TangentVector dv = relative_velocity(cfg, s);
                              const Coords want = cart_vel(cfg.particle2, s) - cart_vel(cfg.particle1, s);
                              return vec_rel(cart(dv.base, dv.comps), want);
                          },
                          tol, true});
        checks.push_back({"relative momentum vs Cartesian p2 - p1",
                          [cart_vel](const ObserverConfiguration& cfg, const CovariantDerivativeConfig&, double s) {
                              const TangentVector dp = relative_momentum(cfg, s);
                              const Coords want = cart_vel(cfg.particle2, s) * cfg.particle2.mu_at(s) -
                                                  cart_vel(cfg.particle1, s) * cfg.particle1.mu_at(s);
                              return vec_rel(cart(dp.base, dp.comps), want);
                          },
                          tol, true});
        checks.push_back({"deviation vector vs Cartesian chord",
                          [](const ObserverConfiguration& cfg, const CovariantDerivativeConfig&, double s) {
                              const TangentVector h = deviation_vector(cfg, s);
                              const Coords want =
                                  cart_point(cfg.particle2.position(s)) - cart_point(cfg.particle1.position(s));
                              return vec_rel(cart(h.base, h.comps), want);
                          },
                          tol, true});
        checks.push_back({"deviation velocity vs Cartesian d/ds chord",
                          [cart_vel](const ObserverConfiguration& cfg, const CovariantDerivativeConfig& cd, double s) {
                              const TangentVector V = deviation_velocity(cfg, s, cd);
                              const Coords want = cart_vel(cfg.particle2, s) * tau_rate(cfg.particle2, s) -
                                                  cart_vel(cfg.particle1, s) * tau_rate(cfg.particle1, s);
                              return vec_rel(cart(V.base, V.comps), want);
                          },
                          stencil_tol, true});
        checks.push_back({"relative energy vs Cartesian p2 . V1",
                          [cart_vel](const ObserverConfiguration& cfg, const CovariantDerivativeConfig&, double s) {
                              const Coords a = cart_vel(cfg.particle2, s) * cfg.particle2.mu_at(s);
                              const Coords b = cart_vel(cfg.particle1, s);
                              return rel(relative_energy(cfg, s), a[0] * b[0] + a[1] * b[1]);
                          },
                          tol, true});
    } else {
        throw ScenarioError("suite euclidean needs geometry euclidean-n or polar-plane");
    }
    if (sc.metric) add_component_checks(checks, tol);
    add_identity_checks(checks, sc, tol);
    return checks;
}

std::vector<Path> connecting_paths(const ObserverConfiguration& cfg, double s) {
    return {cfg.connect_12(s), cfg.connect_1obs(s), cfg.connect_2obs(s)};
}

std::vector<TangentVector> basis_at(const Coords& x) {
    std::vector<TangentVector> out;
    for (std::size_t i = 0; i < x.size(); ++i) out.push_back({x, Coords::unit(x.size(), i)});
    return out;
}

std::vector<Check> axiom_checks(const Scenario& sc, double tol) {
    std::vector<Check> checks;
    checks.push_back({"identity",
                      [](const ObserverConfiguration& cfg, const CovariantDerivativeConfig&, double s) {
                          double r = 0.0;
                          for (const Path& p : connecting_paths(cfg, s))
                              for (double u : {0.0, 0.5, 1.0})
                                  for (const TangentVector& v : basis_at(p.point(u)))
                                      r = std::max(r, max_abs_diff(cfg.transport.apply(p, u, u, v), v.comps));
                          return r;
                      },
                      tol, false});
    checks.push_back({"composition",
                      [](const ObserverConfiguration& cfg, const CovariantDerivativeConfig&, double s) {
                          static constexpr double triples[][3] = {{1.0, 0.0, 0.37}, {0.0, 1.0, 0.25}, {0.6, 0.2, 0.9}};
                          double r = 0.0;
                          for (const Path& p : connecting_paths(cfg, s))
                              for (const auto& q : triples)
                                  for (const TangentVector& v : basis_at(p.point(q[1])))
                                      r = std::max(r, composition_residual(cfg.transport, p, q[0], q[1], q[2], v));
                          return r;
                      },
                      tol, true});
    checks.push_back({"linearity",
                      [](const ObserverConfiguration& cfg, const CovariantDerivativeConfig&, double s) {
                          double r = 0.0;
                          for (const Path& p : connecting_paths(cfg, s)) {
                              const std::vector<TangentVector> e = basis_at(p.point(0.0));
                              for (const TangentVector& v : e) r = std::max(r, scaling_residual(cfg.transport, p, 0.0, 1.0, v, -2.5));
                              // Additivity on the first two axes.
                              if (e.size() >= 2) {
                                  const TangentVector sum{e[0].base, e[0].comps + e[1].comps * 0.75};
                                  const Coords lhs = cfg.transport.apply(p, 0.0, 1.0, sum);
                                  const Coords rhs = cfg.transport.apply(p, 0.0, 1.0, e[0]) +
                                                     cfg.transport.apply(p, 0.0, 1.0, e[1]) * 0.75;
                                  r = std::max(r, vec_rel(lhs, rhs));
                              }
                          }
                          return r;
                      },
                      tol, false});
    if (sc.metric && sc.configuration().metric_consistent) {
        checks.push_back({"metric consistency",
                          [](const ObserverConfiguration& cfg, const CovariantDerivativeConfig&, double s) {
                              double r = 0.0;
                              for (const Path& p : connecting_paths(cfg, s)) {
                                  const std::vector<TangentVector> e = basis_at(p.point(0.0));
                                  for (std::size_t i = 0; i < e.size(); ++i)
                                      for (std::size_t j = i; j < e.size(); ++j)
                                          r = std::max(r, metric_consistency_residual(cfg.transport, *cfg.metric, p,
                                                                                      0.0, 1.0, e[i], e[j]));
                              }
                              return r;
                          },
                          tol, true});
    }
    if (sc.geometry == GeometryKind::polar_plane && sc.numerics.transport == TransportChoice::parallel) {
        checks.push_back({"polar transport vs Cartesian oracle",
                          [](const ObserverConfiguration& cfg, const CovariantDerivativeConfig&, double s) {
                              double r = 0.0;
                              for (const Path& p : connecting_paths(cfg, s)) {
                                  const Coords a = p.point(0.0), b = p.point(1.0);
                                  for (const TangentVector& v : basis_at(a)) {
                                      const Coords want = from_cart(b, cart(a, v.comps));
                                      r = std::max(r, vec_rel(transport_vector(cfg.transport, p, 0.0, 1.0, v).comps, want));
                                  }
                              }
                              return r;
                          },
                          tol, true});
    }
    return checks;
}

}  // namespace

Suite parse_suite(const std::string& name) {
    if (name == "sr") return Suite::sr;
    if (name == "euclidean") return Suite::euclidean;
    if (name == "axioms") return Suite::axioms;
    throw ScenarioError("--suite: expected sr, euclidean or axioms, got '" + name + "'");
}

const char* suite_name(Suite suite) {
    switch (suite) {
        case Suite::sr: return "sr";
        case Suite::euclidean: return "euclidean";
        case Suite::axioms: return "axioms";
    }
    return "?";
}

double default_tolerance(Suite suite) { return suite == Suite::axioms ? 1e-8 : 1e-9; }

bool VerifyReport::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

VerifyReport verify(const Scenario& sc, Suite suite, std::optional<double> tol) {
    const double t = tol.value_or(default_tolerance(suite));
    if (!(t >= 0.0)) throw ScenarioError("--tol: must be non-negative");
    std::vector<Check> checks;
    switch (suite) {
        case Suite::sr: checks = sr_checks(sc, t); break;
        case Suite::euclidean: checks = euclidean_checks(sc, t); break;
        case Suite::axioms: checks = axiom_checks(sc, t); break;
    }

    const ObserverConfiguration base = sc.configuration(1);
    const CovariantDerivativeConfig cd = sc.derivative_config(1);
    std::optional<ObserverConfiguration> fine;
    CovariantDerivativeConfig cd_fine = sc.derivative_config(2);

    auto sweep_max = [&sc](const Check& c, const ObserverConfiguration& cfg, const CovariantDerivativeConfig& d) {
        double r = 0.0;
        for (int k = 0; k < sc.sweep.samples; ++k) {
            const double v = c.residual(cfg, d, sc.sweep.at(k));
            r = std::isnan(v) ? std::numeric_limits<double>::infinity() : std::max(r, v);
        }
        return r;
    };

    VerifyReport report{suite, sc.name, {}};
    for (const Check& c : checks) {
        CheckResult res{c.name, sweep_max(c, base, cd), c.tolerance, false, std::nullopt};
        res.passed = res.residual <= c.tolerance;
        if (c.refines && res.residual > 0.0 && std::isfinite(res.residual)) {
            if (!fine) fine = sc.configuration(2);
            const double r2 = sweep_max(c, *fine, cd_fine);
            if (r2 > 0.0) res.ratio = res.residual / r2;
        }
        report.checks.push_back(std::move(res));
    }
    return report;
}

void write_report(const VerifyReport& report, std::ostream& out) {
    out << "suite " << suite_name(report.suite) << ": " << report.scenario << '\n';
    std::size_t width = 0;
    for (const CheckResult& c : report.checks) width = std::max(width, c.name.size());
    char buf[128];
    for (const CheckResult& c : report.checks) {
        out << (c.passed ? "  PASS  " : "  FAIL  ") << c.name << std::string(width - c.name.size(), ' ');
        std::snprintf(buf, sizeof buf, "  residual %.3e  tol %.1e", c.residual, c.tolerance);
        out << buf;
        if (c.ratio) {
            std::snprintf(buf, sizeof buf, "  ratio(2x) %.2f", *c.ratio);
            out << buf;
        }
        out << '\n';
    }
    const auto failed = std::count_if(report.checks.begin(), report.checks.end(), [](const CheckResult& c) { return !c.passed; });
    out << (failed ? "FAILED: " + std::to_string(failed) + " of " + std::to_string(report.checks.size()) + " checks\n"
                   : "all " + std::to_string(report.checks.size()) + " checks passed\n");
}

}  // namespace relmech
