#pragma once

#include <cctype>
#include <charconv>
#include <cstdlib>
#include <string>
#include <string_view>
#include <system_error>

#include "dexarb/errors.hpp"

namespace dexarb {

// Exact non-negative decimal: value = digits * 10^exponent.
//
// Raw pool reserves are 256-bit integers rendered as decimal strings; they are
// kept verbatim until scaled by the token's decimals, at which point a single
// correctly rounded conversion to double happens.
class Decimal {
 public:
  Decimal() = default;

  // Accepts `digits[.digits]`. No sign, no exponent, no whitespace.
  static Decimal parse(std::string_view s) {
    Decimal d;
    d.digits_.clear();
    bool seen_point = false;
    bool any_digit = false;
    for (char c : s) {
      if (c == '.' && !seen_point) {
        seen_point = true;
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        any_digit = true;
        d.digits_.push_back(c);
        if (seen_point) --d.exponent_;
      } else {
        throw ParseError("invalid decimal '" + std::string(s) + "'");
      }
    }
    if (!any_digit) throw ParseError("invalid decimal '" + std::string(s) + "'");
    d.normalize();
    return d;
  }

  // Shortest round-trip representation of `value`, multiplied by 10^shift.
  static Decimal from_double(double value, int shift = 0) {
    if (!(value >= 0.0) || value > 1.7e308) throw DomainError("decimal must be finite and non-negative");
    Decimal d;
    if (value == 0.0) return d;
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::scientific);
    std::string_view sv(buf, static_cast<std::size_t>(r.ptr - buf));
    const auto e = sv.find('e');
    d.digits_.clear();
    int exp10 = 0;
    std::from_chars(sv.data() + e + (sv[e + 1] == '+' ? 2 : 1), sv.data() + sv.size(), exp10);
    for (char c : sv.substr(0, e)) {
      if (c != '.') d.digits_.push_back(c);
    }
    d.exponent_ = exp10 - static_cast<int>(d.digits_.size()) + 1 + shift;
    d.normalize();
    return d;
  }

  // value * 10^-scale, correctly rounded.
  double to_double(int scale = 0) const {
    const std::string s = digits_ + "e" + std::to_string(exponent_ - scale);
    return std::strtod(s.c_str(), nullptr);
  }

  bool is_zero() const { return digits_ == "0"; }

  std::string str() const {
    if (exponent_ >= 0) return is_zero() ? digits_ : digits_ + std::string(static_cast<std::size_t>(exponent_), '0');
    const auto frac = static_cast<std::size_t>(-exponent_);
    std::string padded = digits_.size() <= frac ? std::string(frac - digits_.size() + 1, '0') + digits_ : digits_;
    padded.insert(padded.size() - frac, ".");
    return padded;
  }

  bool operator==(const Decimal&) const = default;

 private:
  void normalize() {
    const auto nz = digits_.find_first_not_of('0');
    if (nz == std::string::npos) {
      digits_ = "0";
      exponent_ = 0;
      return;
    }
    digits_.erase(0, nz);
    while (digits_.size() > 1 && digits_.back() == '0') {
      digits_.pop_back();
      ++exponent_;
    }
  }

  std::string digits_ = "0";
  int exponent_ = 0;
};

// Shortest string that parses back to exactly `v`.
inline std::string format_double(double v) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

}  // namespace dexarb
