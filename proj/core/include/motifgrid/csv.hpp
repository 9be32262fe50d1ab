#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace motifgrid::csv {

/// Quotes a field only when it contains a comma, quote or line break.
std::string escape(std::string_view field);

/// Splits one CSV record (RFC 4180 quoting, no embedded newlines).
std::vector<std::string> split(std::string_view line);

std::string join(const std::vector<std::string>& fields);

}  // namespace motifgrid::csv
