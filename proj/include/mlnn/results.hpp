#pragma once

// Result directories: bounds.csv, accessibility.csv, history.csv and
// summary.json.

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mlnn/model_spec.hpp"

namespace mlnn {

struct BoundRow {
    std::string formula;
    std::string state;
    Interval bounds;
};

// Named formulas at every state: from the fixpoint store when given, otherwise
// one upward evaluation of the current model.
std::vector<BoundRow> formula_bounds(const BuiltModel& built, const FixpointResult* fixpoint = nullptr);

struct RunReport {
    std::string command;
    const TrainHistory* history = nullptr;
    const FixpointResult* fixpoint = nullptr;
    std::map<std::string, double> metrics;
    std::map<std::string, std::string> notes;
};

void write_bounds_csv(const std::vector<BoundRow>& rows, std::ostream& out);
// One block of rows per relation: relation,from,<state labels...>
void write_accessibility_csv(const BuiltModel& built, std::ostream& out);

void save_results(const BuiltModel& built, const RunReport& report, const std::filesystem::path& dir);

}  // namespace mlnn
