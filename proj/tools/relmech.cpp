#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "relmech/runner.hpp"
#include "relmech/scenario.hpp"
#include "relmech/verify.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kInvalid = 1;
constexpr int kVerifyFailed = 2;

int run_command(const std::string& file, const std::string& out_path, const std::string& format) {
    const relmech::Scenario sc = relmech::load_scenario(file);
    const relmech::ResultTable table = relmech::run_scenario(sc);
    std::ofstream file_out;
    std::ostream* out = &std::cout;
    if (!out_path.empty()) {
        file_out.open(out_path, std::ios::binary);
        if (!file_out) {
            std::cerr << "error: cannot write " << out_path << '\n';
            return kInvalid;
        }
        out = &file_out;
    }
    if (format == "table")
        relmech::write_table(table, *out);
    else
        relmech::write_csv(table, *out);
    out->flush();
    return *out ? kOk : kInvalid;
}

int verify_command(const std::string& file, const std::string& suite, std::optional<double> tol) {
    const relmech::Suite which = relmech::parse_suite(suite);
    const relmech::Scenario sc = relmech::load_scenario(file);
    const relmech::VerifyReport report = relmech::verify(sc, which, tol);
    relmech::write_report(report, std::cout);
    return report.passed() ? kOk : kVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Relative kinematics of two particles seen by an observer, via transports along paths"};
    app.require_subcommand(1);

    std::string run_file, out_path, format = "csv";
    CLI::App* run = app.add_subcommand("run", "Evaluate the requested quantities over the scenario's sweep");
    run->add_option("scenario", run_file, "Scenario file")->required();
    run->add_option("--out", out_path, "Write output to this file instead of stdout");
    run->add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "table"}));

    std::string verify_file, suite;
    std::optional<double> tol;
    CLI::App* ver = app.add_subcommand("verify", "Check the pipeline against closed forms and identities");
    ver->add_option("scenario", verify_file, "Scenario file")->required();
    ver->add_option("--suite", suite, "Verification suite")->required()->check(CLI::IsMember({"sr", "euclidean", "axioms"}));
    ver->add_option("--tol", tol, "Tolerance (default: 1e-9, axioms 1e-8)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kInvalid;
    }

    try {
        if (*run) return run_command(run_file, out_path, format);
        return verify_command(verify_file, suite, tol);
    } catch (const relmech::ScenarioError& e) {
        std::cerr << "invalid scenario: " << e.what() << '\n';
        return kInvalid;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInvalid;
    }
}
