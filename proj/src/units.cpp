#include "sramwb/units.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <stdexcept>
#include <string>
#include <system_error>

namespace sramwb {
namespace {

struct Suffix {
  std::string_view text;
  int exponent;
};

constexpr std::array<Suffix, 10> kSuffixes{{{"f", -15},
                                            {"p", -12},
                                            {"n", -9},
                                            {"u", -6},
                                            {"m", -3},
                                            {"", 0},
                                            {"k", 3},
                                            {"meg", 6},
                                            {"g", 9},
                                            {"t", 12}}};

std::optional<int> suffix_exponent(std::string_view s) {
  std::string lower;
  for (char c : s) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  for (const auto& suffix : kSuffixes) {
    if (suffix.text == lower) return suffix.exponent;
  }
  return std::nullopt;
}

std::string_view suffix_for(int exponent) {
  for (const auto& suffix : kSuffixes) {
    if (suffix.exponent == exponent) return suffix.text;
  }
  return {};
}

// Strips leading zeros (and '+') from the exponent of a to_chars result.
std::string tidy_exponent(std::string s) {
  auto e = s.find('e');
  if (e == std::string::npos) return s;
  std::string mant = s.substr(0, e);
  std::string exp = s.substr(e + 1);
  bool negative = !exp.empty() && exp[0] == '-';
  if (!exp.empty() && (exp[0] == '-' || exp[0] == '+')) exp.erase(0, 1);
  while (exp.size() > 1 && exp[0] == '0') exp.erase(0, 1);
  return mant + "e" + (negative ? "-" : "") + exp;
}

}  // namespace

std::optional<double> try_parse_value(std::string_view text) {
  std::size_t i = 0;
  std::string mantissa;
  if (i < text.size() && (text[i] == '+' || text[i] == '-')) mantissa.push_back(text[i++]);
  std::size_t digits = 0;
  while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
    mantissa.push_back(text[i++]);
    ++digits;
  }
  if (i < text.size() && text[i] == '.') {
    mantissa.push_back(text[i++]);
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
      mantissa.push_back(text[i++]);
      ++digits;
    }
  }
  if (digits == 0) return std::nullopt;

  long exponent = 0;
  if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
    std::size_t j = i + 1;
    bool negative = false;
    if (j < text.size() && (text[j] == '+' || text[j] == '-')) negative = text[j++] == '-';
    if (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) {
      long e = 0;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) {
        e = e * 10 + (text[j++] - '0');
        if (e > 100000) return std::nullopt;
      }
      exponent = negative ? -e : e;
      i = j;
    }
  }

  auto scale = suffix_exponent(text.substr(i));
  if (!scale) return std::nullopt;
  exponent += *scale;

  std::string canonical = mantissa + "e" + std::to_string(exponent);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(canonical.data(), canonical.data() + canonical.size(), value);
  if (ec != std::errc() || ptr != canonical.data() + canonical.size()) return std::nullopt;
  return value;
}

double parse_value(std::string_view text) {
  auto v = try_parse_value(text);
  if (!v) throw std::invalid_argument("unparseable number '" + std::string(text) + "'");
  return *v;
}

std::string format_plain(double value) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  (void)ec;
  return tidy_exponent(std::string(buf.data(), ptr));
}

std::string format_value(double value, std::string_view zero_text) {
  if (value == 0.0) return std::string(zero_text);
  if (!std::isfinite(value)) return format_plain(value);

  std::array<char, 64> buf{};
  auto [ptr, ec] =
      std::to_chars(buf.data(), buf.data() + buf.size(), value, std::chars_format::scientific);
  (void)ec;
  std::string sci(buf.data(), ptr);

  std::string sign;
  if (sci[0] == '-') {
    sign = "-";
    sci.erase(0, 1);
  }
  auto e = sci.find('e');
  std::string digits;
  for (char c : sci.substr(0, e)) {
    if (c != '.') digits.push_back(c);
  }
  int exponent = std::stoi(sci.substr(e + 1));
  if (exponent < -15 || exponent > 14) return format_plain(value);

  int scale = exponent >= 0 ? (exponent / 3) * 3 : -((-exponent + 2) / 3) * 3;
  int shift = exponent - scale;  // 0, 1 or 2
  while (static_cast<int>(digits.size()) < shift + 1) digits.push_back('0');
  std::string mantissa = digits.substr(0, shift + 1);
  if (static_cast<int>(digits.size()) > shift + 1) mantissa += "." + digits.substr(shift + 1);
  return sign + mantissa + std::string(suffix_for(scale));
}

}  // namespace sramwb
