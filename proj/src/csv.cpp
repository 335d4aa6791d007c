#include "disparity/csv.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <string_view>

#include "disparity/error.hpp"

namespace disparity {
namespace {

std::string_view trim(std::string_view s)
{
    const auto ws = " \t\r\n";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split(std::string_view line)
{
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(',', start);
        if (pos == std::string_view::npos) {
            out.push_back(trim(line.substr(start)));
            break;
        }
        out.push_back(trim(line.substr(start, pos - start)));
        start = pos + 1;
    }
    return out;
}

std::string_view unquote(std::string_view s)
{
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"') return s.substr(1, s.size() - 2);
    return s;
}

double parse_cell(std::string_view s)
{
    s = trim(unquote(s));
    if (s.empty()) return kMissing;
    if (s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) return kMissing;
    return v;
}

}  // namespace

Dataset read_csv(std::istream& in, const RoleMap& roles)
{
    std::string line;
    bool have_header = false;
    while (std::getline(in, line)) {
        if (!trim(line).empty()) {
            have_header = true;
            break;
        }
    }
    if (!have_header) throw Error(ErrorKind::EmptyFile, "no header row");

    // Strip a UTF-8 byte order mark.
    if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);

    std::vector<std::string> names;
    for (auto h : split(line)) names.emplace_back(unquote(h));
    std::vector<Column> cols(names.size());

    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto cells = split(line);
        if (cells.size() != names.size()) {
            throw Error(ErrorKind::Parse, "line " + std::to_string(line_no) + " has " +
                                              std::to_string(cells.size()) + " fields, header has " +
                                              std::to_string(names.size()));
        }
        for (std::size_t j = 0; j < cells.size(); ++j) cols[j].push_back(parse_cell(cells[j]));
    }

    for (const auto& [role, bound] : roles) {
        for (const auto& c : bound) {
            if (std::find(names.begin(), names.end(), c) == names.end()) {
                throw Error(ErrorKind::MissingColumn, "declared " + std::string(to_string(role)) +
                                                          " column '" + c + "' is not in the header");
            }
        }
    }

    std::vector<std::pair<std::string, Column>> columns;
    columns.reserve(names.size());
    for (std::size_t j = 0; j < names.size(); ++j) columns.emplace_back(names[j], std::move(cols[j]));
    return Dataset(std::move(columns), roles);
}

Dataset load_csv(const std::filesystem::path& path, const RoleMap& roles)
{
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Io, "cannot open '" + path.string() + "'");
    return read_csv(in, roles);
}

std::string format_number(double v)
{
    if (is_missing(v)) return {};
    std::array<char, 32> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), ptr);
}

void write_csv(std::ostream& out, const Dataset& d)
{
    const auto& names = d.column_names();
    for (std::size_t j = 0; j < names.size(); ++j) out << (j ? "," : "") << names[j];
    out << '\n';
    std::vector<const Column*> cols;
    for (const auto& n : names) cols.push_back(&d.column(n));
    for (std::size_t i = 0; i < d.n_rows(); ++i) {
        for (std::size_t j = 0; j < cols.size(); ++j) out << (j ? "," : "") << format_number((*cols[j])[i]);
        out << '\n';
    }
}

void save_csv(const std::filesystem::path& path, const Dataset& d)
{
    std::ofstream out(path);
    if (!out) throw Error(ErrorKind::Io, "cannot write '" + path.string() + "'");
    write_csv(out, d);
}

}  // namespace disparity
