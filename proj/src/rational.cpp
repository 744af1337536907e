#include "urmflow/rational.hpp"

#include "text_util.hpp"
#include "urmflow/error.hpp"

namespace urmflow {

Rational parse_rational(std::string_view text) {
  auto t = detail::trim(text);
  if (t.empty()) throw ParseError(0, "empty rational");
  std::string s(t);
  Rational q;
  if (q.set_str(s, 10) != 0 || q.get_den() == 0) {
    throw ParseError(0, "malformed rational '" + s + "'");
  }
  q.canonicalize();
  return q;
}

std::string to_string(const Rational& q) { return q.get_str(); }

}  // namespace urmflow
