#include "idr/csv.hpp"

#include "idr/error.hpp"

namespace idr::csv {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

}  // namespace

Reader::Reader(std::istream& in, std::string source) : in_(in), source_(std::move(source)) {}

std::optional<Row> Reader::next() {
    std::string physical;
    while (true) {
        if (!std::getline(in_, physical)) return std::nullopt;
        line_ = next_line_++;
        if (!physical.empty() && physical.back() == '\r') physical.pop_back();
        if (line_ == 1 && physical.starts_with("\xEF\xBB\xBF")) physical.erase(0, 3);
        if (!trim(physical).empty()) break;
    }

    Row row;
    std::string cell;
    bool quoted = false;
    std::size_t i = 0;
    while (true) {
        if (i == physical.size()) {
            if (!quoted) break;
            // Quoted cell spans a line break.
            std::string more;
            if (!std::getline(in_, more)) {
                throw Error(ErrorCode::MalformedRow,
                            source_ + ":" + std::to_string(line_) + ": unterminated quoted cell");
            }
            ++next_line_;
            if (!more.empty() && more.back() == '\r') more.pop_back();
            cell.push_back('\n');
            physical = std::move(more);
            i = 0;
            continue;
        }
        char c = physical[i++];
        if (quoted) {
            if (c == '"') {
                if (i < physical.size() && physical[i] == '"') {
                    cell.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cell.push_back(c);
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            row.push_back(std::move(cell));
            cell.clear();
        } else {
            cell.push_back(c);
        }
    }
    row.push_back(std::move(cell));
    for (auto& c : row) c = std::string(trim(c));
    return row;
}

std::vector<std::string> split_list(std::string_view cell) {
    std::vector<std::string> out;
    while (true) {
        auto pos = cell.find('|');
        auto item = trim(cell.substr(0, pos));
        if (!item.empty()) out.emplace_back(item);
        if (pos == std::string_view::npos) break;
        cell.remove_prefix(pos + 1);
    }
    return out;
}

std::string join_list(const std::vector<std::string>& items) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out.push_back('|');
        out += items[i];
    }
    return out;
}

std::string escape(std::string_view cell) {
    if (cell.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(cell);
    std::string out = "\"";
    for (char c : cell) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

void write_row(std::ostream& out, const Row& row) {
    for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) out << ',';
        out << escape(row[i]);
    }
    out << '\n';
}

}  // namespace idr::csv
