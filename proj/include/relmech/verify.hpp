#pragma once
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "relmech/scenario.hpp"

namespace relmech {

enum class Suite { sr, euclidean, axioms };

// Throws ScenarioError for an unknown name.
Suite parse_suite(const std::string& name);
const char* suite_name(Suite suite);
double default_tolerance(Suite suite);

struct CheckResult {
    std::string name;
    double residual = 0.0;  // max over the sweep samples
    double tolerance = 0.0;
    bool passed = false;
    // residual / residual at twice the resolution, for checks limited by discretization.
    std::optional<double> ratio;
};

struct VerifyReport {
    Suite suite = Suite::sr;
    std::string scenario;
    std::vector<CheckResult> checks;

    bool passed() const;
};

// Compares the pipeline against closed forms and identities on every sweep sample.
// Throws ScenarioError when the suite does not apply to the scenario's geometry.
// Without `tol` the suite default is used; stencil-limited checks never go below 1e-6.
VerifyReport verify(const Scenario& sc, Suite suite, std::optional<double> tol = std::nullopt);

void write_report(const VerifyReport& report, std::ostream& out);

}  // namespace relmech
