#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>

#include "disparity/dataset.hpp"

namespace disparity {

// CSV dialect: UTF-8, comma separated, one header row, '.' decimal point.
// An empty or unparseable cell is read as missing. Numbers are written in
// shortest round-trip form, so write_csv(read_csv(f)) preserves every value
// bit for bit.

Dataset read_csv(std::istream& in, const RoleMap& roles = {});
Dataset load_csv(const std::filesystem::path& path, const RoleMap& roles = {});

void write_csv(std::ostream& out, const Dataset& d);
void save_csv(const std::filesystem::path& path, const Dataset& d);

std::string format_number(double v);

}  // namespace disparity
