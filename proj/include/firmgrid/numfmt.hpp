#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace firmgrid {

// Shortest decimal text that parses back to exactly the same double.
std::string format_number(double value);

// Parses a whole field as a double; leading/trailing blanks allowed.
// Returns nullopt on anything else, including an empty field.
std::optional<double> parse_number(std::string_view text);

std::string_view trim(std::string_view text);

}  // namespace firmgrid
