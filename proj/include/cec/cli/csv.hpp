#ifndef CEC_CLI_CSV_HPP
#define CEC_CLI_CSV_HPP

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>

#include "cec/init.hpp"
#include "cec/linalg.hpp"

namespace cec::cli {

/**
 * Reads comma-separated numeric rows. A first row containing any non-numeric
 * cell is taken as a header and skipped; cells may be double-quoted. Blank
 * lines are ignored. Throws DataError (with the line number) for ragged rows,
 * non-numeric cells, or fewer than two data rows.
 */
DataMatrix read_csv(std::istream& in);
DataMatrix ingest_csv(const std::filesystem::path& path);

void write_csv(std::ostream& out, const DataMatrix& data);

/// One label per line.
void write_membership_csv(std::ostream& out, const Assignment& membership);

}  // namespace cec::cli

#endif  // CEC_CLI_CSV_HPP
