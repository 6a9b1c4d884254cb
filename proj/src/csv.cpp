#include "nullwave/csv.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "nullwave/errors.hpp"

namespace nullwave {

TableFormat parse_table_format(const std::string& s) {
    if (s == "csv") return TableFormat::Csv;
    if (s == "jsonl") return TableFormat::Jsonl;
    throw UsageError("unknown table format '" + s + "' (expected csv or jsonl)");
}

std::string table_extension(TableFormat f) { return f == TableFormat::Csv ? ".csv" : ".jsonl"; }

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

TableWriter::TableWriter(const std::string& path, std::vector<std::string> header, TableFormat format)
    : out_(path, std::ios::binary), header_(std::move(header)), format_(format) {
    if (!out_) throw InputError("cannot create '" + path + "'");
    if (format_ == TableFormat::Csv) {
        for (std::size_t i = 0; i < header_.size(); ++i) out_ << (i ? "," : "") << header_[i];
        out_ << '\n';
    }
}

void TableWriter::row(const std::vector<double>& values) {
    if (values.size() != header_.size()) throw UsageError("table row has the wrong number of values");
    if (format_ == TableFormat::Csv) {
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (i) out_ << ',';
            if (!std::isnan(values[i])) out_ << format_number(values[i]);
        }
        out_ << '\n';
        return;
    }
    // hand-rolled so the number text matches the CSV form exactly
    out_ << '{';
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out_ << ',';
        out_ << nlohmann::json(header_[i]).dump() << ':';
        if (std::isfinite(values[i])) {
            out_ << format_number(values[i]);
        } else {
            out_ << "null";
        }
    }
    out_ << "}\n";
}

void TableWriter::close() { out_.close(); }

std::size_t Table::column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) return i;
    }
    throw InputError("table has no column '" + name + "'");
}

std::vector<double> Table::column_values(const std::string& name) const {
    const std::size_t c = column(name);
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(r[c]);
    return out;
}

namespace {

double parse_cell(const std::string& cell, const std::string& path) {
    if (cell.empty() || cell == "nan") return std::numeric_limits<double>::quiet_NaN();
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(cell, &used);
    } catch (const std::exception&) {
        throw InputError(path + ": non-numeric cell '" + cell + "'");
    }
    if (used != cell.size()) throw InputError(path + ": non-numeric cell '" + cell + "'");
    return v;
}

bool ends_with(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace

Table read_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open '" + path + "'");
    Table t;
    std::string line;
    if (ends_with(path, ".jsonl")) {
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            nlohmann::ordered_json obj;
            try {
                obj = nlohmann::ordered_json::parse(line);
            } catch (const nlohmann::json::exception&) {
                throw InputError(path + ": malformed JSON line");
            }
            if (t.header.empty()) {
                for (const auto& [k, v] : obj.items()) t.header.push_back(k);
            }
            if (obj.size() != t.header.size()) throw InputError(path + ": ragged row");
            std::vector<double> r;
            for (const auto& name : t.header) {
                if (!obj.contains(name)) throw InputError(path + ": row lacks '" + name + "'");
                const auto& v = obj[name];
                r.push_back(v.is_null() ? std::numeric_limits<double>::quiet_NaN() : v.get<double>());
            }
            t.rows.push_back(std::move(r));
        }
        return t;
    }
    if (!std::getline(in, line)) throw InputError(path + ": empty table");
    {
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) t.header.push_back(cell);
    }
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> r;
        std::size_t start = 0;
        while (true) {
            const std::size_t comma = line.find(',', start);
            r.push_back(parse_cell(line.substr(start, comma == std::string::npos ? std::string::npos : comma - start), path));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        if (r.size() != t.header.size()) throw InputError(path + ": ragged row");
        t.rows.push_back(std::move(r));
    }
    return t;
}

}  // namespace nullwave
