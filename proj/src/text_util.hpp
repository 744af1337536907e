#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace urmflow::detail {

/// Drops a trailing `#` comment.
std::string_view strip_comment(std::string_view line);

std::vector<std::string_view> split_ws(std::string_view line);

std::string_view trim(std::string_view s);

/// Decimal natural; throws ParseError tagged with `line`.
std::uint64_t parse_u64(std::string_view token, std::size_t line,
                        std::string_view what);

/// Splits `text` into lines, numbering from 1.
std::vector<std::pair<std::size_t, std::string_view>> numbered_lines(
    std::string_view text);

}  // namespace urmflow::detail
