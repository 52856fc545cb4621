#pragma once

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "quantkit/experiment.hpp"

namespace quantkit {

/// Published population-panel values for the default experiment, rows in
/// estimator_labels order, columns on the default prevalence grid. NaN marks
/// an undefined F-measure.
struct ReferenceTable {
    ShiftKind scenario;
    OutputMetric metric;
    std::array<std::array<double, 9>, estimator_count> cells;
};

const std::vector<ReferenceTable>& reference_tables();

/// Published table for (scenario, metric), or nullptr if none was published.
const ReferenceTable* find_reference(ShiftKind scenario, OutputMetric metric);

struct CellMismatch {
    std::string row;
    double prevalence;
    double expected;    // NaN when the published cell is undefined
    double actual;      // NaN when ours is undefined
};

/// Cells of `table` that differ from `ref` by more than `tol`, or where only
/// one side is undefined.
std::vector<CellMismatch> compare_to_reference(const ResultTable& table, const ReferenceTable& ref,
                                               double tol);

} // namespace quantkit
