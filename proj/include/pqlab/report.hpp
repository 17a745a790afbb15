#pragma once

#include <string>
#include <vector>

#include "pqlab/verify.hpp"

namespace pqlab {

// 17 significant digits: doubles round-trip bit-faithfully.
std::string format_real(double x);

// RFC-4180 style: wrap in quotes (doubling inner quotes) when the field
// contains a comma, quote, or newline.
std::string csv_escape(const std::string& field);

// Header exactly "section,check_id,location,lhs,rhs,margin,passed", one row
// per record; passed serialized as true/false. Section notes are not part
// of the row schema (use JSON for them). Throws std::invalid_argument on
// empty input.
std::string report_to_csv(const std::vector<ReportSection>& sections);

// Array of section objects mirroring every field, records included.
// Throws std::invalid_argument on empty input.
std::string report_to_json(const std::vector<ReportSection>& sections);

// Inverse of report_to_json; parse(write(x)) == x field-for-field.
std::vector<ReportSection> report_from_json(const std::string& text);

// format is "csv" or "json". Throws std::invalid_argument on empty
// sections or unknown format, std::runtime_error on an unwritable path.
void write_report(const std::vector<ReportSection>& sections,
                  const std::string& format, const std::string& path);

}  // namespace pqlab
