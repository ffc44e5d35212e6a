#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace tweetnet::csv {

/// Reads one RFC 4180 record; quoted fields may span lines. Returns false
/// at end of input. Sets `well_formed` to false on an unterminated quote.
bool read_record(std::istream& in, std::vector<std::string>& fields,
                 bool& well_formed);

/// Quotes a field only when it contains a delimiter, quote or newline.
std::string escape(std::string_view field);

void write_row(std::ostream& out, const std::vector<std::string>& fields);

}  // namespace tweetnet::csv
