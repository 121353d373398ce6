#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "percolation/graph.hpp"

namespace percolation::cli {

enum ExitCode : int { kOk = 0, kUsage = 2, kInput = 3, kBudget = 4 };

/// Edge list from a plain or gzip-compressed file.
Graph load_graph_file(const std::string& path, bool directed);

/// Entry point; `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace percolation::cli
