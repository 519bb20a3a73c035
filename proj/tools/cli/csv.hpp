#ifndef COPKIT_TOOLS_CSV_HPP_
#define COPKIT_TOOLS_CSV_HPP_

#include <string>
#include <utility>
#include <vector>

#include "copkit/coupling.hpp"
#include "copkit/multisensory.hpp"

namespace copkit::cli {

struct CsvRow
{
    std::size_t line;                 ///< 1-based line number in the file
    std::vector<std::string> fields;
};

/// Reads a headed CSV file. The header must equal `columns` exactly (after
/// trimming whitespace and a UTF-8 BOM); LF and CRLF line endings are
/// accepted and blank lines are skipped. Errors are IngestionError with
/// the offending line number in the message.
std::vector<CsvRow> readCsv(const std::string& path, const std::vector<std::string>& columns);

/// Parses a whole field as a finite double or throws IngestionError
/// mentioning `line` and `column`.
double parseNumber(const std::string& field, std::size_t line, const std::string& column);

/// `condition,rt`
RTDataset readRtCsv(const std::string& path);

/// `x,y`
std::vector<std::pair<double, double>> readPairCsv(const std::string& path);

/// `value,prob`
Pmf readPmfCsv(const std::string& path);

}

#endif // COPKIT_TOOLS_CSV_HPP_
