#include "text_util.hpp"

#include <charconv>

#include "urmflow/error.hpp"

namespace urmflow::detail {

std::string_view strip_comment(std::string_view line) {
  if (auto hash = line.find('#'); hash != std::string_view::npos) {
    line = line.substr(0, hash);
  }
  return line;
}

std::string_view trim(std::string_view s) {
  constexpr std::string_view ws = " \t\r\n\v\f";
  auto first = s.find_first_not_of(ws);
  if (first == std::string_view::npos) return {};
  auto last = s.find_last_not_of(ws);
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_ws(std::string_view line) {
  constexpr std::string_view ws = " \t\r\n\v\f";
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (pos < line.size()) {
    auto begin = line.find_first_not_of(ws, pos);
    if (begin == std::string_view::npos) break;
    auto end = line.find_first_of(ws, begin);
    if (end == std::string_view::npos) end = line.size();
    out.push_back(line.substr(begin, end - begin));
    pos = end;
  }
  return out;
}

std::uint64_t parse_u64(std::string_view token, std::size_t line,
                        std::string_view what) {
  std::uint64_t value = 0;
  auto [ptr, ec] =
      std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec == std::errc::result_out_of_range) {
    throw ParseError(line, std::string(what) + " out of range: '" +
                               std::string(token) + "'");
  }
  if (ec != std::errc{} || ptr != token.data() + token.size()) {
    throw ParseError(line, "expected " + std::string(what) + ", got '" +
                               std::string(token) + "'");
  }
  return value;
}

std::vector<std::pair<std::size_t, std::string_view>> numbered_lines(
    std::string_view text) {
  std::vector<std::pair<std::size_t, std::string_view>> out;
  std::size_t number = 1;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) {
      if (pos < text.size()) out.emplace_back(number, text.substr(pos));
      break;
    }
    out.emplace_back(number, text.substr(pos, nl - pos));
    pos = nl + 1;
    ++number;
  }
  return out;
}

}  // namespace urmflow::detail
