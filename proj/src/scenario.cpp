#include "relmech/scenario.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_spline.h>
#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <memory>
#include <set>
#include <sstream>

#include "relmech/sr_setup.hpp"

namespace relmech {

namespace {

constexpr double kPolyDomain = 1e3;

[[noreturn]] void fail(const std::string& field, const std::string& what) { throw ScenarioError(field + ": " + what); }

std::string key_path(const std::string& parent, const std::string& key) {
    return parent.empty() ? key : parent + "." + key;
}

std::string index_path(const std::string& parent, std::size_t i) { return parent + "[" + std::to_string(i) + "]"; }

void allow_keys(const YAML::Node& node, const std::string& path, std::initializer_list<const char*> keys) {
    if (!node.IsMap()) fail(path.empty() ? "<document>" : path, "expected a mapping");
    const std::set<std::string> allowed(keys.begin(), keys.end());
    for (const auto& kv : node) {
        const std::string k = kv.first.as<std::string>();
        if (!allowed.count(k)) fail(key_path(path, k), "unknown key");
    }
}

YAML::Node require(const YAML::Node& node, const char* key, const std::string& path) {
    const YAML::Node n = node[key];
    if (!n) fail(key_path(path, key), "required field is missing");
    return n;
}

double real(const YAML::Node& n, const std::string& path) {
    double v;
    try {
        v = n.as<double>();
    } catch (const YAML::Exception&) {
        fail(path, "expected a real number");
    }
    if (!std::isfinite(v)) fail(path, "must be finite");
    return v;
}

int integer(const YAML::Node& n, const std::string& path) {
    try {
        return n.as<int>();
    } catch (const YAML::Exception&) {
        fail(path, "expected an integer");
    }
}

std::string text(const YAML::Node& n, const std::string& path) {
    if (!n.IsScalar()) fail(path, "expected a string");
    return n.as<std::string>();
}

std::vector<double> reals(const YAML::Node& n, const std::string& path, std::optional<std::size_t> size = {}) {
    if (!n.IsSequence()) fail(path, "expected a list of real numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < n.size(); ++i) out.push_back(real(n[i], index_path(path, i)));
    if (size && out.size() != *size)
        fail(path, "expected " + std::to_string(*size) + " entries, got " + std::to_string(out.size()));
    return out;
}

double real_or(const YAML::Node& node, const char* key, const std::string& path, double fallback) {
    return node[key] ? real(node[key], key_path(path, key)) : fallback;
}

// tau(s) = scale s + shift
struct AffineMap {
    double scale = 1.0;
    double shift = 0.0;
    std::function<double(double)> fn() const {
        return [a = scale, b = shift](double s) { return a * s + b; };
    }
};

AffineMap parse_time_map(const YAML::Node& node, const std::string& path) {
    if (!node) return {};
    allow_keys(node, path, {"scale", "shift"});
    AffineMap m{real_or(node, "scale", path, 1.0), real_or(node, "shift", path, 0.0)};
    if (!(m.scale > 0.0)) fail(key_path(path, "scale"), "time map must be strictly increasing (scale > 0)");
    return m;
}

std::vector<double> polynomial_derivative(const std::vector<double>& c) {
    std::vector<double> d;
    for (std::size_t k = 1; k < c.size(); ++k) d.push_back(static_cast<double>(k) * c[k]);
    return d;
}

double horner(const std::vector<double>& c, double s) {
    double acc = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * s + *it;
    return acc;
}

Path polynomial_path(const YAML::Node& node, const std::string& path, std::size_t dim) {
    const YAML::Node coeffs = require(node, "coefficients", path);
    const std::string cpath = key_path(path, "coefficients");
    if (!coeffs.IsSequence() || coeffs.size() != dim)
        fail(cpath, "expected one coefficient list per coordinate (" + std::to_string(dim) + ")");
    std::vector<std::vector<double>> c, d;
    for (std::size_t i = 0; i < dim; ++i) {
        c.push_back(reals(coeffs[i], index_path(cpath, i)));
        if (c.back().empty()) fail(index_path(cpath, i), "needs at least one coefficient");
        d.push_back(polynomial_derivative(c.back()));
    }
    double lo = -kPolyDomain, hi = kPolyDomain;
    if (node["domain"]) {
        const auto dom = reals(node["domain"], key_path(path, "domain"), 2);
        lo = dom[0];
        hi = dom[1];
        if (!(hi > lo)) fail(key_path(path, "domain"), "upper bound must exceed the lower bound");
    }
    return Path(
        lo, hi,
        [c](double s) {
            Coords x(c.size());
            for (std::size_t i = 0; i < c.size(); ++i) x[i] = horner(c[i], s);
            return x;
        },
        [d](double s) {
            Coords x(d.size());
            for (std::size_t i = 0; i < d.size(); ++i) x[i] = horner(d[i], s);
            return x;
        });
}

// Natural cubic spline per coordinate; evaluation uses no accelerator so it is safe to share.
Path table_path(const YAML::Node& node, const std::string& path, std::size_t dim) {
    const std::vector<double> t = reals(require(node, "parameter", path), key_path(path, "parameter"));
    const YAML::Node pts = require(node, "points", path);
    const std::string ppath = key_path(path, "points");
    if (t.size() < 3) fail(key_path(path, "parameter"), "a table needs at least 3 samples");
    for (std::size_t k = 1; k < t.size(); ++k)
        if (!(t[k] > t[k - 1])) fail(key_path(path, "parameter"), "samples must be strictly increasing");
    if (!pts.IsSequence() || pts.size() != t.size()) fail(ppath, "expected one point per parameter sample");
    std::vector<std::vector<double>> columns(dim, std::vector<double>(t.size()));
    for (std::size_t k = 0; k < t.size(); ++k) {
        const auto p = reals(pts[k], index_path(ppath, k), dim);
        for (std::size_t i = 0; i < dim; ++i) columns[i][k] = p[i];
    }
    // Out-of-range evaluations then yield NaN, which the pipeline reports as a NumericError.
    gsl_set_error_handler_off();
    using SplinePtr = std::shared_ptr<const gsl_spline>;
    std::vector<SplinePtr> splines;
    for (const auto& col : columns) {
        gsl_spline* sp = gsl_spline_alloc(gsl_interp_cspline, t.size());
        gsl_spline_init(sp, t.data(), col.data(), t.size());
        splines.emplace_back(sp, [](const gsl_spline* p) { gsl_spline_free(const_cast<gsl_spline*>(p)); });
    }
    return Path(
        t.front(), t.back(),
        [splines](double s) {
            Coords x(splines.size());
            for (std::size_t i = 0; i < splines.size(); ++i) x[i] = gsl_spline_eval(splines[i].get(), s, nullptr);
            return x;
        },
        [splines](double s) {
            Coords x(splines.size());
            for (std::size_t i = 0; i < splines.size(); ++i)
                x[i] = gsl_spline_eval_deriv(splines[i].get(), s, nullptr);
            return x;
        });
}

struct ParsedParticle {
    Particle particle;
    AffineMap time_map;
    std::optional<sr::ParticleSpec> sr;
};

Particle with_mass(const YAML::Node& node, const std::string& path, Path wl, const AffineMap& tm) {
    const double mass = real(require(node, "mass", path), key_path(path, "mass"));
    if (mass < 0.0) fail(key_path(path, "mass"), "must be non-negative");
    if (mass > 0.0) {
        if (node["mu"]) fail(key_path(path, "mu"), "only massless particles take mu; massive ones use mu = mass");
        return Particle::massive(std::move(wl), mass, tm.fn());
    }
    const double mu = real(require(node, "mu", path), key_path(path, "mu"));
    if (mu == 0.0) fail(key_path(path, "mu"), "mu = 0 with mass 0 describes the vacuum, not a particle");
    return Particle::massless(std::move(wl), [mu](double) { return mu; }, tm.fn());
}

ParsedParticle parse_minkowski_inertial(const YAML::Node& node, const std::string& path, double c) {
    allow_keys(node, path, {"kind", "mass", "velocity", "direction", "offset", "energy"});
    sr::ParticleSpec spec;
    spec.mass = real(require(node, "mass", path), key_path(path, "mass"));
    if (spec.mass < 0.0) fail(key_path(path, "mass"), "must be non-negative");
    if (node["velocity"] && node["direction"]) fail(path, "give either velocity or direction, not both");
    if (node["direction"]) {
        if (spec.mass > 0.0) fail(key_path(path, "direction"), "only massless particles take a direction");
        const auto n = reals(node["direction"], key_path(path, "direction"), 3);
        const double len = std::sqrt(n[0] * n[0] + n[1] * n[1] + n[2] * n[2]);
        if (!(len > 0.0)) fail(key_path(path, "direction"), "must be nonzero");
        spec.v3 = {c * n[0] / len, c * n[1] / len, c * n[2] / len};
    } else {
        const auto v = reals(require(node, "velocity", path), key_path(path, "velocity"), 3);
        spec.v3 = {v[0], v[1], v[2]};
    }
    if (node["offset"]) {
        const auto y = reals(node["offset"], key_path(path, "offset"), 4);
        spec.offset = {y[0], y[1], y[2], y[3]};
    }
    if (spec.massless()) {
        spec.energy = real(require(node, "energy", path), key_path(path, "energy"));
    } else if (node["energy"]) {
        fail(key_path(path, "energy"), "only massless particles take an energy");
    }
    try {
        sr::validate(spec, c);
    } catch (const PreconditionError& e) {
        fail(path, e.what());
    }
    const double scale = spec.massless() ? 1.0 : 1.0 / sr::lorentz_factor(spec.v3, c);
    return {sr::minkowski_particle(spec, c), {scale, -scale * spec.offset[0] / c}, spec};
}

ParsedParticle parse_particle(const YAML::Node& node, const std::string& path, GeometryKind geometry,
                              std::size_t dim, double c) {
    const std::string kind = text(require(node, "kind", path), key_path(path, "kind"));
    if (kind == "inertial") {
        if (geometry == GeometryKind::minkowski) return parse_minkowski_inertial(node, path, c);
        if (geometry != GeometryKind::euclidean)
            fail(key_path(path, "kind"), "inertial particles need geometry euclidean-n or minkowski4");
        allow_keys(node, path, {"kind", "mass", "mu", "velocity", "offset", "time_map"});
        const auto v = reals(require(node, "velocity", path), key_path(path, "velocity"), dim);
        const std::vector<double> y =
            node["offset"] ? reals(node["offset"], key_path(path, "offset"), dim) : std::vector<double>(dim, 0.0);
        const Coords V = Coords::from(v), Y = Coords::from(y);
        Path wl(-1e6, 1e6, [V, Y](double s) { return Y + V * s; }, [V](double) { return V; });
        const AffineMap tm = parse_time_map(node["time_map"], key_path(path, "time_map"));
        return {with_mass(node, path, std::move(wl), tm), tm, std::nullopt};
    }
    if (kind == "polynomial" || kind == "table") {
        if (kind == "polynomial")
            allow_keys(node, path, {"kind", "mass", "mu", "coefficients", "domain", "time_map"});
        else
            allow_keys(node, path, {"kind", "mass", "mu", "parameter", "points", "time_map"});
        Path wl = kind == "polynomial" ? polynomial_path(node, path, dim) : table_path(node, path, dim);
        const AffineMap tm = parse_time_map(node["time_map"], key_path(path, "time_map"));
        return {with_mass(node, path, std::move(wl), tm), tm, std::nullopt};
    }
    fail(key_path(path, "kind"), "unknown particle kind '" + kind + "' (inertial, polynomial, table)");
}

Path parse_observer(const YAML::Node& node, const std::string& path, const Scenario& sc,
                    const std::array<ParsedParticle, 2>& parts, double c) {
    const std::string kind = text(require(node, "kind", path), key_path(path, "kind"));
    const std::size_t dim = sc.dim();
    if (kind == "rest") {
        if (sc.geometry != GeometryKind::minkowski) fail(key_path(path, "kind"), "rest observers need geometry minkowski4");
        allow_keys(node, path, {"kind", "position"});
        sr::Vec3 x{};
        if (node["position"]) {
            const auto p = reals(node["position"], key_path(path, "position"), 3);
            x = {p[0], p[1], p[2]};
        }
        const double pad = 1.0 + (sc.sweep.s_max - sc.sweep.s_min);
        return sr::rest_observer(c, x, sc.sweep.s_min - pad, sc.sweep.s_max + pad);
    }
    if (kind == "follow") {
        allow_keys(node, path, {"kind", "particle"});
        const int which = integer(require(node, "particle", path), key_path(path, "particle"));
        if (which != 1 && which != 2) fail(key_path(path, "particle"), "must be 1 or 2");
        const ParsedParticle& p = parts[which - 1];
        const Path wl = p.particle.worldline;
        const AffineMap tm = p.time_map;
        const double lo = (wl.lower() - tm.shift) / tm.scale, hi = (wl.upper() - tm.shift) / tm.scale;
        return Path(
            lo, hi, [wl, tm](double s) { return wl.point(tm.scale * s + tm.shift); },
            [wl, tm](double s) { return wl.tangent(tm.scale * s + tm.shift) * tm.scale; });
    }
    if (kind == "inertial") {
        if (sc.geometry != GeometryKind::euclidean) fail(key_path(path, "kind"), "inertial observers need geometry euclidean-n");
        allow_keys(node, path, {"kind", "velocity", "offset"});
        const Coords V = Coords::from(reals(require(node, "velocity", path), key_path(path, "velocity"), dim));
        const Coords Y = node["offset"] ? Coords::from(reals(node["offset"], key_path(path, "offset"), dim)) : Coords(dim);
        return Path(-1e6, 1e6, [V, Y](double s) { return Y + V * s; }, [V](double) { return V; });
    }
    if (kind == "polynomial") {
        allow_keys(node, path, {"kind", "coefficients", "domain"});
        return polynomial_path(node, path, dim);
    }
    if (kind == "table") {
        allow_keys(node, path, {"kind", "parameter", "points"});
        return table_path(node, path, dim);
    }
    fail(key_path(path, "kind"), "unknown observer kind '" + kind + "' (rest, follow, inertial, polynomial, table)");
}

void parse_geometry(const YAML::Node& node, Scenario& sc, double& c) {
    const std::string path = "geometry";
    const std::string kind = text(require(node, "kind", path), "geometry.kind");
    if (kind == "euclidean-n") {
        allow_keys(node, path, {"kind", "dim"});
        const int dim = integer(require(node, "dim", path), "geometry.dim");
        if (dim < 1 || dim > static_cast<int>(kMaxDim)) fail("geometry.dim", "must be between 1 and " + std::to_string(kMaxDim));
        sc.geometry = GeometryKind::euclidean;
        sc.chart = ManifoldChart::flat(dim);
        sc.metric = BundleMetric::euclidean(dim);
        sc.metric_consistent = true;
    } else if (kind == "minkowski4") {
        allow_keys(node, path, {"kind", "c"});
        c = real_or(node, "c", path, 1.0);
        if (!(c > 0.0)) fail("geometry.c", "speed of light must be positive");
        sc.geometry = GeometryKind::minkowski;
        sc.chart = ManifoldChart::flat(4, "minkowski");
        sc.metric = BundleMetric::minkowski();
        sc.metric_consistent = true;
    } else if (kind == "polar-plane") {
        allow_keys(node, path, {"kind"});
        sc.geometry = GeometryKind::polar_plane;
        sc.chart = ManifoldChart::polar_plane();
        sc.metric = BundleMetric::polar_plane();
        sc.metric_consistent = true;
    } else if (kind == "custom-connection") {
        allow_keys(node, path, {"kind", "dim", "connection", "metric", "metric_consistent"});
        const int dim = integer(require(node, "dim", path), "geometry.dim");
        if (dim < 1 || dim > static_cast<int>(kMaxDim)) fail("geometry.dim", "must be between 1 and " + std::to_string(kMaxDim));
        ConnectionCoefficients gamma(dim);
        if (node["connection"]) {
            const YAML::Node entries = node["connection"];
            if (!entries.IsSequence()) fail("geometry.connection", "expected a list of {out, in, value} entries");
            for (std::size_t k = 0; k < entries.size(); ++k) {
                const std::string ep = index_path("geometry.connection", k);
                allow_keys(entries[k], ep, {"out", "in", "value"});
                const int out = integer(require(entries[k], "out", ep), key_path(ep, "out"));
                const auto in = reals(require(entries[k], "in", ep), key_path(ep, "in"), 2);
                auto index_ok = [dim](double i) { return i >= 0 && i < dim && i == std::floor(i); };
                if (out < 0 || out >= dim || !index_ok(in[0]) || !index_ok(in[1]))
                    fail(ep, "indices must lie in [0, dim)");
                gamma(out, static_cast<std::size_t>(in[0]), static_cast<std::size_t>(in[1])) =
                    real(require(entries[k], "value", ep), key_path(ep, "value"));
            }
        }
        sc.geometry = GeometryKind::custom_connection;
        sc.chart = ManifoldChart::constant(gamma, "custom");
        if (node["metric"]) {
            const YAML::Node rows = node["metric"];
            if (!rows.IsSequence() || rows.size() != static_cast<std::size_t>(dim))
                fail("geometry.metric", "expected " + std::to_string(dim) + " rows");
            SquareMatrix g(dim);
            for (int i = 0; i < dim; ++i) {
                const auto row = reals(rows[i], index_path("geometry.metric", i), dim);
                for (int j = 0; j < dim; ++j) g(i, j) = row[j];
            }
            sc.metric = BundleMetric::constant(g);
            try {
                sc.metric->at(Coords(dim));
            } catch (const NumericError& e) {
                fail("geometry.metric", e.what());
            }
        }
        if (node["metric_consistent"]) {
            try {
                sc.metric_consistent = node["metric_consistent"].as<bool>();
            } catch (const YAML::Exception&) {
                fail("geometry.metric_consistent", "expected true or false");
            }
        }
    } else {
        fail("geometry.kind", "unknown geometry '" + kind + "' (euclidean-n, minkowski4, polar-plane, custom-connection)");
    }
}

void parse_numerics(const YAML::Node& node, ScenarioNumerics& n) {
    if (!node) return;
    const std::string path = "numerics";
    allow_keys(node, path, {"rk4_steps", "simpson_panels", "fd_step", "scheme", "tolerance", "epsilon_zero",
                            "transport", "transport_rate"});
    if (node["rk4_steps"]) {
        n.rk4_steps = integer(node["rk4_steps"], "numerics.rk4_steps");
        if (n.rk4_steps < 1) fail("numerics.rk4_steps", "must be at least 1");
    }
    if (node["simpson_panels"]) {
        n.simpson_panels = integer(node["simpson_panels"], "numerics.simpson_panels");
        if (n.simpson_panels < 2 || n.simpson_panels % 2 != 0)
            fail("numerics.simpson_panels", "must be an even number >= 2");
    }
    if (node["fd_step"]) {
        n.fd_step = real(node["fd_step"], "numerics.fd_step");
        if (!(*n.fd_step > 0.0)) fail("numerics.fd_step", "must be positive");
    }
    if (node["scheme"]) {
        const std::string s = text(node["scheme"], "numerics.scheme");
        if (s == "central2") n.scheme = StencilScheme::central2;
        else if (s == "central4") n.scheme = StencilScheme::central4;
        else fail("numerics.scheme", "expected central2 or central4");
    }
    if (node["tolerance"]) {
        n.tolerance = real(node["tolerance"], "numerics.tolerance");
        if (!(n.tolerance > 0.0)) fail("numerics.tolerance", "must be positive");
    }
    if (node["epsilon_zero"]) {
        const std::string s = text(node["epsilon_zero"], "numerics.epsilon_zero");
        if (s == "positive" || s == "+1" || s == "1") n.zero_sign = ZeroSign::positive;
        else if (s == "negative" || s == "-1") n.zero_sign = ZeroSign::negative;
        else fail("numerics.epsilon_zero", "expected positive or negative");
    }
    if (node["transport"]) {
        const std::string s = text(node["transport"], "numerics.transport");
        if (s == "parallel") n.transport = TransportChoice::parallel;
        else if (s == "flat") n.transport = TransportChoice::flat;
        else if (s == "scaled") n.transport = TransportChoice::scaled;
        else fail("numerics.transport", "expected parallel, flat or scaled");
    }
    if (node["transport_rate"]) {
        if (n.transport != TransportChoice::scaled) fail("numerics.transport_rate", "only the scaled transport takes a rate");
        n.transport_rate = real(node["transport_rate"], "numerics.transport_rate");
    }
}

bool is_known_output(const std::string& name) {
    const auto& v = vector_outputs();
    const auto& s = scalar_outputs();
    return std::find(v.begin(), v.end(), name) != v.end() || std::find(s.begin(), s.end(), name) != s.end();
}

bool needs_metric(const std::string& name) { return name.rfind("E", 0) == 0 || name.find("first") != std::string::npos ||
                                                    name == "dpi21_sq" || name == "reciprocity_residual"; }

// Post-construction checks that need the assembled pieces.
void validate_assembled(const Scenario& sc) {
    for (int i = 0; i < 2; ++i) {
        const std::string path = index_path("particles", i);
        try {
            validate_time_map(*sc.particles[i], sc.sweep.s_min, sc.sweep.s_max);
        } catch (const std::exception& e) {
            fail(path, std::string("sweep range is not usable: ") + e.what());
        }
    }
    if (!sc.observer->contains(sc.sweep.s_min) || !sc.observer->contains(sc.sweep.s_max))
        fail("observer", "observer domain does not cover the sweep range");
    for (const std::string& o : sc.outputs)
        if (needs_metric(o) && !sc.metric) fail("outputs", "'" + o + "' needs a bundle metric (geometry.metric)");

    for (int k = 0; k < sc.sweep.samples; ++k) {
        const double s = sc.sweep.at(k);
        const Coords pts[] = {sc.particles[0]->position(s), sc.particles[1]->position(s), path_point(*sc.observer, s)};
        for (const Coords& p : pts) {
            if (!p.all_finite()) fail("particles", "worldline produced non-finite coordinates");
            if (sc.geometry == GeometryKind::polar_plane && !(p[0] > 0.0))
                fail("particles", "polar radius must stay positive over the sweep");
        }
    }
}

}  // namespace

double Sweep::at(int k) const {
    if (samples <= 1) return s_min;
    if (k == samples - 1) return s_max;
    return s_min + (s_max - s_min) * k / (samples - 1);
}

const std::vector<std::string>& vector_outputs() {
    static const std::vector<std::string> v{"dV21", "h21", "V21", "dA21", "A21", "dp21"};
    return v;
}

const std::vector<std::string>& scalar_outputs() {
    static const std::vector<std::string> v{"E21",         "E12",         "E11",          "E22",
                                            "dpi21_sq",    "p1_first",    "p21_first",    "dpi21_first",
                                            "dp21_first",  "p1_first_prime", "reciprocity_residual"};
    return v;
}

const std::vector<std::string>& default_outputs() {
    static const std::vector<std::string> v{"dV21", "h21", "V21", "dp21", "E21", "E12", "E11", "E22", "dpi21_sq"};
    return v;
}

ObserverConfiguration Scenario::configuration(int refine) const {
    Transport T = Transport::flat();
    switch (numerics.transport) {
        case TransportChoice::parallel:
            T = Transport::linear_connection(chart, {numerics.rk4_steps * refine, true});
            break;
        case TransportChoice::flat:
            break;
        case TransportChoice::scaled: {
            const double k = numerics.transport_rate;
            T = Transport::custom(
                [k](const Path&, double s, double t, const TangentVector& v) { return v.comps * std::exp(k * (t - s)); },
                "scaled");
            break;
        }
    }
    const bool consistent = metric_consistent && numerics.transport != TransportChoice::scaled;
    ObserverConfiguration cfg = ObserverConfiguration::with_straight_connections(
        *observer, *particles[0], *particles[1], std::move(T), chart, metric, consistent);
    cfg.numerics = {numerics.simpson_panels * refine, numerics.zero_sign, numerics.tolerance};
    return cfg;
}

CovariantDerivativeConfig Scenario::derivative_config(int refine) const {
    const double span = sweep.s_max - sweep.s_min;
    const double h = numerics.fd_step.value_or(span > 0.0 ? 1e-4 * span : 1e-4);
    return {h / refine, numerics.scheme};
}

Scenario parse_scenario(const std::string& yaml_text, const std::string& name) {
    YAML::Node root;
    try {
        root = YAML::Load(yaml_text);
    } catch (const YAML::Exception& e) {
        throw ScenarioError(name + ": YAML syntax error: " + e.what());
    }
    if (!root || !root.IsMap()) throw ScenarioError(name + ": expected a YAML mapping at the top level");
    allow_keys(root, "", {"format", "name", "geometry", "particles", "observer", "sweep", "numerics", "outputs"});
    const std::string format = text(require(root, "format", ""), "format");
    if (format != kScenarioFormat) fail("format", "expected '" + std::string(kScenarioFormat) + "', got '" + format + "'");

    Scenario sc;
    sc.name = root["name"] ? text(root["name"], "name") : name;
    double c = 1.0;
    parse_geometry(require(root, "geometry", ""), sc, c);

    const YAML::Node sweep = require(root, "sweep", "");
    allow_keys(sweep, "sweep", {"s_min", "s_max", "samples"});
    sc.sweep.s_min = real(require(sweep, "s_min", "sweep"), "sweep.s_min");
    sc.sweep.s_max = real(require(sweep, "s_max", "sweep"), "sweep.s_max");
    sc.sweep.samples = integer(require(sweep, "samples", "sweep"), "sweep.samples");
    if (sc.sweep.samples < 1) fail("sweep.samples", "must be at least 1");
    if (sc.sweep.s_max < sc.sweep.s_min) fail("sweep.s_max", "must not be below s_min");

    parse_numerics(root["numerics"], sc.numerics);

    const YAML::Node particles = require(root, "particles", "");
    if (!particles.IsSequence() || particles.size() != 2) fail("particles", "expected exactly two particles");
    std::array<ParsedParticle, 2> parsed{
        parse_particle(particles[0], "particles[0]", sc.geometry, sc.dim(), c),
        parse_particle(particles[1], "particles[1]", sc.geometry, sc.dim(), c)};
    sc.particles = {parsed[0].particle, parsed[1].particle};
    sc.observer = parse_observer(require(root, "observer", ""), "observer", sc, parsed, c);

    if (parsed[0].sr && parsed[1].sr) {
        SrDescription d;
        d.c = c;
        d.particles = {*parsed[0].sr, *parsed[1].sr};
        if (root["observer"]["kind"].as<std::string>() == "rest") {
            d.rest_observer = sr::Vec3{};
            if (root["observer"]["position"]) {
                const auto p = reals(root["observer"]["position"], "observer.position", 3);
                d.rest_observer = sr::Vec3{p[0], p[1], p[2]};
            }
        }
        sc.sr = d;
    }

    if (root["outputs"]) {
        const YAML::Node outs = root["outputs"];
        if (!outs.IsSequence() || outs.size() == 0) fail("outputs", "expected a non-empty list of quantity names");
        for (std::size_t i = 0; i < outs.size(); ++i) {
            const std::string o = text(outs[i], index_path("outputs", i));
            if (!is_known_output(o)) fail(index_path("outputs", i), "unknown quantity '" + o + "'");
            if (std::find(sc.outputs.begin(), sc.outputs.end(), o) != sc.outputs.end())
                fail(index_path("outputs", i), "duplicate quantity '" + o + "'");
            sc.outputs.push_back(o);
        }
    } else {
        sc.outputs = default_outputs();
        if (!sc.metric)
            sc.outputs.erase(std::remove_if(sc.outputs.begin(), sc.outputs.end(), needs_metric), sc.outputs.end());
    }

    validate_assembled(sc);
    return sc;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ScenarioError(path + ": cannot open scenario file");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str(), path);
}

}  // namespace relmech
