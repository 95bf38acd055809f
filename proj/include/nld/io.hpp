#pragma once

#include <string>

namespace nld {

// Writes to path.tmp then renames, so readers never see a partial file.
void write_file_atomic(const std::string& path, const std::string& content);

std::string read_file(const std::string& path);

// 17 significant digits, enough to round-trip a double.
std::string fmt17(double v);

}  // namespace nld
