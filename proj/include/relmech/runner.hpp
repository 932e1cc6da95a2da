#pragma once
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "relmech/scenario.hpp"

namespace relmech {

// nullopt marks a degenerate cell (a component formula along a null direction).
using Cell = std::optional<double>;

struct ResultTable {
    std::vector<std::string> header;
    std::vector<std::vector<Cell>> rows;
};

// One row per sweep sample, in sweep order. Samples run on up to `threads` workers
// (0 picks the hardware concurrency); the result does not depend on the count.
ResultTable run_scenario(const Scenario& sc, unsigned threads = 0);

// Header row, %.17g numbers, DEGENERATE for degenerate cells.
void write_csv(const ResultTable& table, std::ostream& out);
// Aligned columns for reading in a terminal.
void write_table(const ResultTable& table, std::ostream& out);

}  // namespace relmech
