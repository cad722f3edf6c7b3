#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qbo {

// Entry point behind the qbo binary. Exit codes: 0 = solved or feasible at
// the requested level, 2 = certified outside / infeasible, 1 = any error.
// Reports are JSON on `out`; diagnostics go to `err`.
int cli_run(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace qbo
