#include "csv.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "copkit/error.hpp"

namespace copkit::cli {

namespace {
    std::string trim(const std::string& s)
    {
        const auto b = s.find_first_not_of(" \t\r");
        if (b == std::string::npos)
            return {};
        const auto e = s.find_last_not_of(" \t\r");
        return s.substr(b, e - b + 1);
    }

    std::vector<std::string> split(const std::string& line)
    {
        std::vector<std::string> out;
        std::string field;
        std::istringstream is(line);
        while (std::getline(is, field, ','))
            out.push_back(trim(field));
        if (!line.empty() && line.back() == ',')
            out.emplace_back();
        return out;
    }

    [[noreturn]] void fail(const std::string& path, const std::size_t line, const std::string& what)
    {
        std::ostringstream os;
        os << path << ": line " << line << ": " << what;
        throw IngestionError(os.str());
    }
}

std::vector<CsvRow> readCsv(const std::string& path, const std::vector<std::string>& columns)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IngestionError("cannot open '" + path + "'");

    std::vector<CsvRow> rows;
    std::string line;
    std::size_t lineNo = 0;
    bool headerSeen = false;
    while (std::getline(in, line))
    {
        ++lineNo;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (lineNo == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0)
            line.erase(0, 3);
        if (trim(line).empty())
            continue;

        auto fields = split(line);
        if (!headerSeen)
        {
            if (fields != columns)
            {
                std::string expected;
                for (std::size_t i = 0; i < columns.size(); ++i)
                    expected += (i ? "," : "") + columns[i];
                fail(path, lineNo, "expected header '" + expected + "'");
            }
            headerSeen = true;
            continue;
        }
        if (fields.size() != columns.size())
        {
            std::ostringstream os;
            os << "expected " << columns.size() << " fields, found " << fields.size();
            fail(path, lineNo, os.str());
        }
        rows.push_back(CsvRow{lineNo, std::move(fields)});
    }
    if (!headerSeen)
        fail(path, lineNo == 0 ? 1 : lineNo, "missing header");
    return rows;
}

double parseNumber(const std::string& field, const std::size_t line, const std::string& column)
{
    const char* begin = field.c_str();
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(begin, &end);
    if (field.empty() || end != begin + field.size() || errno == ERANGE || !std::isfinite(v))
    {
        std::ostringstream os;
        os << "line " << line << ": " << column << " value '" << field << "' is not a finite number";
        throw IngestionError(os.str());
    }
    return v;
}

RTDataset readRtCsv(const std::string& path)
{
    RTDataset data;
    for (const auto& row : readCsv(path, {"condition", "rt"}))
    {
        if (row.fields[0].empty())
            fail(path, row.line, "empty condition label");
        const double rt = parseNumber(row.fields[1], row.line, "rt");
        try {
            data.add(row.fields[0], rt);
        } catch (const IngestionError& e) {
            fail(path, row.line, e.what());
        }
    }
    return data;
}

std::vector<std::pair<double, double>> readPairCsv(const std::string& path)
{
    std::vector<std::pair<double, double>> out;
    for (const auto& row : readCsv(path, {"x", "y"}))
        out.emplace_back(parseNumber(row.fields[0], row.line, "x"),
                         parseNumber(row.fields[1], row.line, "y"));
    return out;
}

Pmf readPmfCsv(const std::string& path)
{
    std::vector<double> values, probs;
    for (const auto& row : readCsv(path, {"value", "prob"}))
    {
        values.push_back(parseNumber(row.fields[0], row.line, "value"));
        probs.push_back(parseNumber(row.fields[1], row.line, "prob"));
    }
    try {
        return Pmf(std::move(values), std::move(probs));
    } catch (const Error& e) {
        throw IngestionError(path + ": " + e.what());
    }
}

}
