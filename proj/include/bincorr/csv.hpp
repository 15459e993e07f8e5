#pragma once

#include <initializer_list>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace bincorr {

/// Shortest decimal text that parses back to exactly `v` ('.' separator, no
/// locale involvement).
std::string format_number(double v);
/// Empty string for an absent value.
std::string format_number(std::optional<double> v);

void write_csv_row(std::ostream& out, std::initializer_list<std::string_view> fields);
void write_csv_row(std::ostream& out, std::span<const std::string> fields);

}  // namespace bincorr
