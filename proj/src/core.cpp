#include "asbench/core.hpp"
#include "asbench/csv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace asbench {

std::string hex64(std::uint64_t h)
{
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

double FeatureVector::at(const std::string& name) const
{
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (names[i] == name) {
            return values[i];
        }
    }
    throw InvariantError("no feature named '" + name + "'");
}

std::string format_double(double v)
{
    if (v == 0.0) {
        return "0";  // folds -0
    }
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc{}) {
        throw InvariantError("format_double: to_chars failed");
    }
    return std::string(buf, end);
}

std::string format_alpha(double alpha)
{
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", alpha);
    return buf;
}

namespace csv {

namespace {

std::vector<std::string> split_line(const std::string& line)
{
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(',', start);
        out.push_back(line.substr(start, pos == std::string::npos ? std::string::npos : pos - start));
        if (pos == std::string::npos) {
            break;
        }
        start = pos + 1;
    }
    return out;
}

}  // namespace

std::size_t Table::column(const std::string& name) const
{
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) {
            return i;
        }
    }
    throw DataError("missing CSV column '" + name + "'");
}

Table parse(const std::string& text, const std::string& origin)
{
    Table table;
    std::istringstream in(text);
    std::string line;
    bool have_header = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        if (line.front() == '#') {
            table.comments.push_back(line.substr(1));
            continue;
        }
        auto fields = split_line(line);
        if (!have_header) {
            table.header = std::move(fields);
            have_header = true;
            continue;
        }
        if (fields.size() != table.header.size()) {
            throw DataError(origin + ": row " + std::to_string(table.rows.size() + 1) + " has " +
                            std::to_string(fields.size()) + " fields, header has " +
                            std::to_string(table.header.size()));
        }
        table.rows.push_back(std::move(fields));
    }
    if (!have_header) {
        throw DataError(origin + ": empty CSV");
    }
    return table;
}

Table read(const std::filesystem::path& path)
{
    return parse(read_text(path), path.string());
}

double to_double(const std::string& cell, std::size_t row, std::size_t col, const std::string& origin)
{
    double value = 0.0;
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last || cell.empty()) {
        throw DataError(origin + ": non-numeric cell '" + cell + "' at row " + std::to_string(row + 1) +
                        ", column " + std::to_string(col + 1));
    }
    return value;
}

Writer::Writer(std::vector<std::string> header) : width_(header.size())
{
    row(header);
}

void Writer::comment(const std::string& line)
{
    const std::string text = "#" + line + "\n";
    out_.insert(comment_end_, text);
    comment_end_ += text.size();
}

void Writer::row(const std::vector<std::string>& fields)
{
    if (fields.size() != width_) {
        throw InvariantError("csv::Writer: row width mismatch");
    }
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) {
            out_ += ',';
        }
        out_ += fields[i];
    }
    out_ += '\n';
}

void Writer::save(const std::filesystem::path& path) const
{
    write_text(path, out_);
}

void write_text(const std::filesystem::path& path, const std::string& text)
{
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw DataError("cannot write " + path.string());
    }
    out << text;
}

std::string read_text(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DataError("cannot read " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace csv
}  // namespace asbench
