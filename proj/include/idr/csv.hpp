#pragma once

#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace idr::csv {

using Row = std::vector<std::string>;

/// Streaming reader for RFC 4180-style CSV (quoted cells, doubled quotes).
/// Tracks the physical line number of the row last returned.
class Reader {
public:
    explicit Reader(std::istream& in, std::string source = {});

    /// Next record, or nullopt at end of input. Blank lines are skipped.
    std::optional<Row> next();

    std::size_t line() const noexcept { return line_; }
    const std::string& source() const noexcept { return source_; }

private:
    std::istream& in_;
    std::string source_;
    std::size_t line_ = 0;
    std::size_t next_line_ = 1;
};

/// Splits an intra-cell list on '|', trimming blanks and dropping empty items.
std::vector<std::string> split_list(std::string_view cell);
std::string join_list(const std::vector<std::string>& items);

std::string escape(std::string_view cell);
void write_row(std::ostream& out, const Row& row);

}  // namespace idr::csv
