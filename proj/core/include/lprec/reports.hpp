#pragma once

#include <string>

namespace lprec {

// Shortest decimal form that round-trips to the same double. Locale
// independent, always '.' as the decimal separator. Used for every numeric
// field we write, so reruns produce byte-identical files.
std::string format_double(double v);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace lprec
