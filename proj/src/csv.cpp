#include "depfid/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "depfid/errors.hpp"

namespace depfid {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    for (;;) {
        const auto comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            fields.push_back(trim(line.substr(start)));
            return fields;
        }
        fields.push_back(trim(line.substr(start, comma - start)));
        start = comma + 1;
    }
}

std::vector<std::string_view> split_lines(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto nl = text.find('\n', start);
        if (nl == std::string_view::npos) nl = text.size();
        std::string_view line = text.substr(start, nl - start);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        lines.push_back(line);
        start = nl + 1;
    }
    while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
    return lines;
}

} // namespace

DataMatrix parse_csv(std::string_view text, bool has_header) {
    const auto lines = split_lines(text);
    std::vector<std::string> names;
    std::size_t first_data = 0;
    std::size_t width = 0;
    if (has_header) {
        if (lines.empty()) throw Error(ErrorKind::InsufficientSamples, "CSV has no header row");
        for (auto f : split_fields(lines[0])) names.emplace_back(f);
        width = names.size();
        first_data = 1;
    }

    std::vector<double> values;
    std::size_t rows = 0;
    for (std::size_t li = first_data; li < lines.size(); ++li) {
        const std::size_t line_no = li + 1;
        const auto fields = split_fields(lines[li]);
        if (width == 0) width = fields.size();
        if (fields.size() != width) throw Error::ragged_rows(line_no);
        for (std::size_t c = 0; c < fields.size(); ++c) {
            const auto cell = fields[c];
            double v = 0.0;
            const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
            if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size() ||
                !std::isfinite(v)) {
                throw Error::parse_error(line_no, c + 1, cell);
            }
            values.push_back(v);
        }
        ++rows;
    }
    if (rows < 2) throw Error(ErrorKind::InsufficientSamples, "CSV needs at least 2 data rows");
    return DataMatrix(Matrix(rows, width, std::move(values)), std::move(names));
}

DataMatrix ingest_csv(const std::filesystem::path& path, bool has_header) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::IoError, "cannot open " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) throw Error(ErrorKind::IoError, "cannot read " + path.string());
    return parse_csv(buffer.str(), has_header);
}

std::string format_csv_number(double value) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    if (ec != std::errc()) throw Error(ErrorKind::InvalidData, "cannot format number");
    return std::string(buf, ptr);
}

void write_csv(const std::filesystem::path& path, const Matrix& values,
               const std::vector<std::string>& header) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::IoError, "cannot open " + path.string() + " for writing");
    if (!header.empty()) {
        for (std::size_t j = 0; j < header.size(); ++j) out << (j ? "," : "") << header[j];
        out << '\n';
    }
    for (std::size_t i = 0; i < values.rows(); ++i) {
        for (std::size_t j = 0; j < values.cols(); ++j) {
            out << (j ? "," : "") << format_csv_number(values(i, j));
        }
        out << '\n';
    }
    if (!out) throw Error(ErrorKind::IoError, "write failed for " + path.string());
}

} // namespace depfid
