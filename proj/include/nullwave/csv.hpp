#pragma once

// Numeric tables on disk, as CSV (header row, then values) or JSON lines
// (one object per row). Values are written with 17 significant digits, so a
// table round-trips exactly and identical runs give identical bytes.

#include <fstream>
#include <string>
#include <vector>

namespace nullwave {

enum class TableFormat { Csv, Jsonl };

TableFormat parse_table_format(const std::string& s);
/// ".csv" or ".jsonl"
std::string table_extension(TableFormat f);

class TableWriter {
public:
    /// Throws InputError if the file cannot be created.
    TableWriter(const std::string& path, std::vector<std::string> header, TableFormat format = TableFormat::Csv);

    /// NaN is written as an empty CSV cell or a JSON null.
    void row(const std::vector<double>& values);
    void close();

private:
    std::ofstream out_;
    std::vector<std::string> header_;
    TableFormat format_;
};

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    /// Index of a named column; throws InputError if absent.
    std::size_t column(const std::string& name) const;
    std::vector<double> column_values(const std::string& name) const;
};

/// Reads either format, chosen by extension. Empty cells and nulls read as NaN.
/// Throws InputError on a missing file, a ragged row or a non-numeric cell.
Table read_table(const std::string& path);

/// Formats a double with 17 significant digits ("nan" for NaN).
std::string format_number(double v);

}  // namespace nullwave
