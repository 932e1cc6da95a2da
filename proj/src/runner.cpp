#include "relmech/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>

namespace relmech {

namespace {

std::string format_number(double v, const char* fmt) {
    char buf[64];
    std::snprintf(buf, sizeof buf, fmt, v);
    return buf;
}

std::string format_cell(const Cell& c, const char* fmt) { return c ? format_number(*c, fmt) : "DEGENERATE"; }

bool is_vector_output(const std::string& name) {
    const auto& v = vector_outputs();
    return std::find(v.begin(), v.end(), name) != v.end();
}

// Degenerate directions become flagged cells; every other failure aborts the run.
template <class F>
Cell guarded(F&& f) {
    try {
        return f();
    } catch (const DegenerateDirectionError&) {
        return std::nullopt;
    }
}

class RowEvaluator {
public:
    RowEvaluator(const Scenario& sc, const ObserverConfiguration& cfg, double s)
        : cfg_(cfg), s_(s), cd_(sc.derivative_config()) {}

    void append(const std::string& name, std::vector<Cell>& row) {
        if (is_vector_output(name)) {
            const TangentVector v = vector(name);
            for (double x : v.comps) row.push_back(x);
            return;
        }
        row.push_back(scalar(name));
    }

private:
    TangentVector vector(const std::string& name) {
        if (name == "dV21") return relative_velocity(cfg_, s_);
        if (name == "h21") return deviation_vector(cfg_, s_);
        if (name == "V21") return deviation_velocity(cfg_, s_, cd_);
        if (name == "dA21") return relative_acceleration(cfg_, s_, cd_);
        if (name == "A21") return deviation_acceleration(cfg_, s_, cd_);
        return relative_momentum(cfg_, s_);
    }

    const EnergyMomentumComponents& components() {
        if (!components_) components_ = energy_momentum_components(cfg_, s_);
        return *components_;
    }

    Cell scalar(const std::string& name) {
        const BundleMetric* g = cfg_.metric ? &*cfg_.metric : nullptr;
        const ZeroSign z = cfg_.numerics.zero_sign;
        const double tol = cfg_.numerics.tolerance;
        if (name == "E21") return relative_energy(cfg_, s_, Direction::second_wrt_first);
        if (name == "E12") return relative_energy(cfg_, s_, Direction::first_wrt_second);
        if (name == "E11") return proper_energy(cfg_.particle1, *g, s_, z, tol);
        if (name == "E22") return proper_energy(cfg_.particle2, *g, s_, z, tol);
        if (name == "dpi21_sq") return momentum_invariant(cfg_, s_);
        if (name == "reciprocity_residual") return reciprocity_residual(cfg_, s_);
        if (name == "p1_first") return guarded([&] { return components().p1_first; });
        if (name == "p21_first") return guarded([&] { return components().p21_first; });
        if (name == "dpi21_first") return guarded([&] { return components().dpi21_first; });
        if (name == "dp21_first") return guarded([&] { return components().dp21_first; });
        return guarded([&] { return components().p1_first_prime; });
    }

    const ObserverConfiguration& cfg_;
    double s_;
    CovariantDerivativeConfig cd_;
    std::optional<EnergyMomentumComponents> components_;
};

}  // namespace

ResultTable run_scenario(const Scenario& sc, unsigned threads) {
    ResultTable table;
    table.header.push_back("s");
    for (const std::string& name : sc.outputs) {
        if (is_vector_output(name)) {
            for (std::size_t i = 0; i < sc.dim(); ++i) table.header.push_back(name + "_" + std::to_string(i));
        } else {
            table.header.push_back(name);
        }
    }

    const ObserverConfiguration cfg = sc.configuration();
    const int n = sc.sweep.samples;
    table.rows.resize(n);
    auto compute = [&](int k) {
        const double s = sc.sweep.at(k);
        std::vector<Cell> row{s};
        RowEvaluator eval(sc, cfg, s);
        for (const std::string& name : sc.outputs) eval.append(name, row);
        table.rows[k] = std::move(row);
    };

    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(n));
    std::atomic<int> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (int k = next++; k < n; k = next++) {
            try {
                compute(k);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
                next = n;
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
    return table;
}

void write_csv(const ResultTable& table, std::ostream& out) {
    for (std::size_t i = 0; i < table.header.size(); ++i) out << (i ? "," : "") << table.header[i];
    out << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_cell(row[i], "%.17g");
        out << '\n';
    }
}

void write_table(const ResultTable& table, std::ostream& out) {
    std::vector<std::vector<std::string>> cells;
    cells.push_back(table.header);
    for (const auto& row : table.rows) {
        std::vector<std::string> r;
        for (const Cell& c : row) r.push_back(format_cell(c, "%.10g"));
        cells.push_back(std::move(r));
    }
    std::vector<std::size_t> width(table.header.size(), 0);
    for (const auto& r : cells)
        for (std::size_t i = 0; i < r.size(); ++i) width[i] = std::max(width[i], r[i].size());
    for (const auto& r : cells) {
        for (std::size_t i = 0; i < r.size(); ++i) {
            if (i) out << "  ";
            out << std::string(width[i] - r[i].size(), ' ') << r[i];
        }
        out << '\n';
    }
}

}  // namespace relmech
