#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "panelkit/deck_io.hpp"
#include "panelkit/error.hpp"

namespace panelkit {

std::string format_field10(double x) {
  if (!std::isfinite(x) || std::abs(x) >= 1e100) {
    throw Error(ErrorKind::FieldOverflow, "value " + std::to_string(x) + " does not fit a 10-column field");
  }
  if (std::abs(x) < 1e-99) x = 0.0;  // also folds -0.0

  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4E", x);  // five significant digits, already rounded
  std::string s(buf);
  const auto epos = s.find('E');
  const int exp10 = std::atoi(s.c_str() + epos + 1);
  if (std::abs(exp10) >= 100) {
    throw Error(ErrorKind::FieldOverflow, "value " + std::to_string(x) + " rounds out of the field range");
  }
  const std::string sign = x < 0.0 ? "-" : " ";
  std::string mant = s.substr(x < 0.0 ? 1 : 0, epos - (x < 0.0 ? 1 : 0));  // d.dddd
  const bool fifth_zero = mant.back() == '0';

  char out[16];
  if (fifth_zero || std::abs(exp10) > 9) {
    // Four significant digits with a two-digit exponent. A zero fifth digit is
    // exact; otherwise the value is re-rounded at four digits.
    if (!fifth_zero) {
      std::snprintf(buf, sizeof buf, "%.3E", std::abs(x));
      std::string r(buf);
      const auto e2 = r.find('E');
      if (std::abs(std::atoi(r.c_str() + e2 + 1)) >= 100) {
        throw Error(ErrorKind::FieldOverflow, "value " + std::to_string(x) + " rounds out of the field range");
      }
      std::snprintf(out, sizeof out, "%s%sE%c%02d", sign.c_str(), r.substr(0, e2).c_str(),
                    std::atoi(r.c_str() + e2 + 1) < 0 ? '-' : '+', std::abs(std::atoi(r.c_str() + e2 + 1)));
      return out;
    }
    mant.pop_back();
    std::snprintf(out, sizeof out, "%s%sE%c%02d", sign.c_str(), mant.c_str(), exp10 < 0 ? '-' : '+',
                  std::abs(exp10));
    return out;
  }
  std::snprintf(out, sizeof out, "%s%sE%c%d", sign.c_str(), mant.c_str(), exp10 < 0 ? '-' : '+', std::abs(exp10));
  return out;
}

double parse_field10(const std::string& field) {
  std::size_t b = field.find_first_not_of(' ');
  if (b == std::string::npos) return 0.0;
  std::size_t e = field.find_last_not_of(' ');
  std::string s = field.substr(b, e - b + 1);
  if (!s.empty() && s.front() == '+') s.erase(0, 1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw Error(ErrorKind::ParseError, "field '" + field + "' is not a number");
  }
  return v;
}

std::string format_records(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    out += format_field10(values[i]);
    if (i % 6 == 5 || i + 1 == values.size()) out += '\n';
  }
  return out;
}

std::string shortest(double x) {
  if (x == 0.0) x = 0.0;  // drop the sign of negative zero
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  (void)ec;
  return std::string(buf, ptr);
}

}  // namespace panelkit
