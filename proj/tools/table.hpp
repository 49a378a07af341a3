#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace graphprobe::cli {

/// Left-aligned text columns separated by two spaces, with a dashed rule
/// under the header.
void print_table(std::ostream& out, const std::vector<std::string>& header,
                 const std::vector<std::vector<std::string>>& rows);

std::string fixed(double value, int digits);

}  // namespace graphprobe::cli
