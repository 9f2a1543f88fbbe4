#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace riskyish::csv {

using Row = std::vector<std::string>;

/// RFC 4180 reader: quoted fields, doubled quotes, CRLF or LF line ends.
/// A trailing newline does not produce an empty row. Throws Error(validation)
/// on an unterminated quote.
std::vector<Row> parse(std::string_view text);

/// Quotes a field only when it contains a comma, quote, or line break.
std::string escape(std::string_view field);

std::string format_row(const Row& row);

} // namespace riskyish::csv
