#pragma once

#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

namespace sdls::csv {

/// Shortest decimal form that parses back to the same double; "nan"/"inf" otherwise.
std::string format(double v);
std::string format(long v);
std::string format(int v);
std::string format(unsigned long v);
inline std::string format(std::string_view s) { return std::string(s); }
inline std::string format(const char* s) { return std::string(s); }
inline std::string format(const std::string& s) { return s; }

std::string join_row(const std::vector<std::string>& fields);

/// Splits one CSV line on commas (no quoting support; none of our fields need it).
std::vector<std::string> split_row(std::string_view line);

}  // namespace sdls::csv
