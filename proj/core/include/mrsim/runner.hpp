#pragma once

#include <string>
#include <vector>

#include "mrsim/analyses.hpp"
#include "mrsim/circuit.hpp"
#include "mrsim/netlist.hpp"

namespace mrsim {

struct RunOptions {
    Tolerances tol;
    bool limiting = true;
    std::string output_dir = ".";
    std::string base_name = "out";  ///< stem for auto-named CSV files
};

struct RunResult {
    int exit_code = 0;  ///< nonzero when any analysis failed
    std::vector<std::string> files;
    std::string console;
};

/// Execute the document's directives in order. Sweep/tran/ac/homotopy
/// write CSV (auto-named unless the directive carried a .print path);
/// .op results go to `console`. Analysis failures set exit_code = 1 but
/// later directives still run and partial outputs are written.
RunResult run(const NetlistDocument& doc, const RunOptions& opts);

}  // namespace mrsim
