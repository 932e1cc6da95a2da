#pragma once
#include <array>
#include <optional>
#include <string>
#include <vector>

#include "relmech/errors.hpp"
#include "relmech/kinematics.hpp"
#include "relmech/sr_oracle.hpp"

// Scenario files: versioned YAML documents describing a geometry, two particles,
// an observer, a sweep over the observer parameter and the numerics.
namespace relmech {

// Invalid scenario input; the message names the offending field.
class ScenarioError : public ConfigurationError {
public:
    using ConfigurationError::ConfigurationError;
};

inline constexpr const char* kScenarioFormat = "relmech-scenario/1";

enum class GeometryKind { euclidean, minkowski, polar_plane, custom_connection };
enum class TransportChoice { parallel, flat, scaled };

struct Sweep {
    double s_min = 0.0;
    double s_max = 0.0;
    int samples = 1;

    double at(int k) const;
};

struct ScenarioNumerics {
    int rk4_steps = 256;
    int simpson_panels = 256;
    std::optional<double> fd_step;  // default 1e-4 of the sweep span
    StencilScheme scheme = StencilScheme::central2;
    double tolerance = 1e-9;
    ZeroSign zero_sign = ZeroSign::positive;
    TransportChoice transport = TransportChoice::parallel;
    double transport_rate = 0.0;  // exponent rate of the scaled transport
};

// Closed-form description of an inertial Minkowski setup, kept for the oracle suites.
struct SrDescription {
    double c = 1.0;
    std::array<sr::ParticleSpec, 2> particles;
    std::optional<sr::Vec3> rest_observer;
};

struct Scenario {
    std::string name;
    GeometryKind geometry = GeometryKind::euclidean;
    ManifoldChart chart = ManifoldChart::flat(1);
    std::optional<BundleMetric> metric;
    bool metric_consistent = false;
    std::array<std::optional<Particle>, 2> particles;
    std::optional<Path> observer;
    Sweep sweep;
    ScenarioNumerics numerics;
    std::vector<std::string> outputs;
    std::optional<SrDescription> sr;

    std::size_t dim() const { return chart.dim(); }
    // Step counts and panels multiplied by refine, stencil step divided by it.
    ObserverConfiguration configuration(int refine = 1) const;
    CovariantDerivativeConfig derivative_config(int refine = 1) const;
};

// Throws ScenarioError with a field-level message on invalid input.
Scenario parse_scenario(const std::string& yaml_text, const std::string& name = "<string>");
Scenario load_scenario(const std::string& path);

// Output quantities a scenario may request.
const std::vector<std::string>& vector_outputs();
const std::vector<std::string>& scalar_outputs();
const std::vector<std::string>& default_outputs();

}  // namespace relmech
