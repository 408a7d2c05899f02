#ifndef ASBENCH_CSV_HPP
#define ASBENCH_CSV_HPP

#include "asbench/core.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace asbench::csv {

/// A parsed CSV table. Lines starting with '#' are comments; the first
/// non-comment line is the header. Fields never contain commas.
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> comments;

    /// Column index of `name`; throws DataError if absent.
    std::size_t column(const std::string& name) const;
};

Table read(const std::filesystem::path& path);
Table parse(const std::string& text, const std::string& origin = "<memory>");

/// Parses a numeric cell; throws DataError naming the row and column.
double to_double(const std::string& cell, std::size_t row, std::size_t col, const std::string& origin);

class Writer {
public:
    explicit Writer(std::vector<std::string> header);

    void comment(const std::string& line);
    void row(const std::vector<std::string>& fields);

    std::string str() const { return out_; }
    void save(const std::filesystem::path& path) const;

private:
    std::size_t width_;
    std::size_t comment_end_ = 0;
    std::string out_;
};

void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

}  // namespace asbench::csv

#endif
