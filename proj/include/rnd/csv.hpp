#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "rnd/types.hpp"

namespace rnd {

// CSV dialect used everywhere: comma separator, '.' decimal point, LF line
// endings (CRLF tolerated on input), one header row.

// Reads a numeric matrix; a first row with any non-numeric token is treated
// as a header and skipped.  All rows must have equal width.
Matrix read_csv_matrix(const std::string& path);

Sample read_sample_csv(const std::string& path, SampleLabel label);

// Writes one header row followed by rows of formatted cells.
void write_csv(std::ostream& out, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

std::string csv_num(double v);   // shortest round-trip decimal for CSV cells

}  // namespace rnd
