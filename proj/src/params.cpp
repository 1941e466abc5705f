#include "tmlab/params.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <sstream>

namespace tmlab {

Radius Radius::parse(const std::string& text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += static_cast<char>(std::tolower(c));
  if (s == "inf" || s == "infinity" || s == "+inf") return infinite();
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw DomainError("bad radius '" + text + "'");
    return finite(v);
  } catch (const std::logic_error&) {
    throw DomainError("bad radius '" + text + "'");
  }
}

std::string Radius::to_string() const {
  if (is_infinite()) return "inf";
  std::ostringstream os;
  os.precision(17);
  os << value_;
  return os.str();
}

}  // namespace tmlab
