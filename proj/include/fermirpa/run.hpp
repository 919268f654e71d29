#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "fermirpa/config.hpp"
#include "json.hpp"

namespace fermirpa {

//=============================================================================
// Mode execution and artifact emission.
//
// Every mode produces one rectangular table; cells are JSON scalars so the
// same table renders as CSV (17 significant digits, LF endings, empty cell
// for null) or as a JSON array of row objects with identical field names.
// Row and column order are fixed per mode, so two runs of one config are
// byte-identical up to the optional CSV timestamp header.
//=============================================================================

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<nlohmann::ordered_json>> rows;
};

std::string table_to_csv(const Table& t, bool timestamp);
std::string table_to_json(const Table& t);

// Compute the result table for a validated config.  Throws on numeric
// failure (the message names the failing operation).
Table build_run_table(const RunConfig& cfg, int threads);

// Validate, compute, and write cfg.out_path (or `fallback` when the path is
// empty).  Returns the process exit code: 0 success, 1 invalid config,
// 2 numeric or output failure (reported on `err`).
int execute_run(const RunConfig& cfg, int threads, std::ostream& fallback,
                std::ostream& err);

} // namespace fermirpa
