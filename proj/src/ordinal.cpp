#include "skewlim/ordinal.hpp"

#include <cctype>
#include <cstddef>

#include "skewlim/errors.hpp"

namespace skewlim {

std::strong_ordering ord_compare(small_ordinal a, small_ordinal b) { return a <=> b; }

small_ordinal ord_succ(small_ordinal a) { return {a.omega_coeff, a.finite_part + 1}; }

bool ord_is_limit(small_ordinal a) { return a.finite_part == 0 && a.omega_coeff > 0; }

small_ordinal ord_fund_seq(small_ordinal limit, std::int64_t n) {
  if (!ord_is_limit(limit)) throw not_a_limit("fundamental sequence of " + to_string(limit));
  if (n < 0) throw malformed_input("fundamental sequence index must be a natural");
  return {limit.omega_coeff - 1, n};
}

namespace {

std::int64_t parse_nat(std::string_view s, std::size_t& i) {
  if (i >= s.size() || !std::isdigit(static_cast<unsigned char>(s[i])))
    throw syntax_error(i, "expected a number in ordinal");
  std::int64_t v = 0;
  while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
    v = v * 10 + (s[i] - '0');
    if (v > (1LL << 40)) throw syntax_error(i, "ordinal component too large");
    ++i;
  }
  return v;
}

}  // namespace

small_ordinal ord_parse(std::string_view text) {
  std::size_t i = 0;
  while (i < text.size() && text[i] == ' ') ++i;
  small_ordinal out;
  if (i < text.size() && (text[i] == 'w' || text[i] == 'W')) {
    ++i;
    out.omega_coeff = 1;
    if (i < text.size() && text[i] == '*') {
      ++i;
      out.omega_coeff = parse_nat(text, i);
    }
    if (i < text.size() && text[i] == '+') {
      ++i;
      out.finite_part = parse_nat(text, i);
    }
  } else {
    out.finite_part = parse_nat(text, i);
  }
  while (i < text.size() && text[i] == ' ') ++i;
  if (i != text.size()) throw syntax_error(i, "trailing characters in ordinal");
  if (out.omega_coeff < 0 || out.finite_part < 0)
    throw malformed_input("ordinal components must be naturals");
  return out;
}

std::string to_string(small_ordinal a) {
  if (a.omega_coeff == 0) return std::to_string(a.finite_part);
  std::string s = a.omega_coeff == 1 ? "w" : "w*" + std::to_string(a.omega_coeff);
  if (a.finite_part != 0) s += "+" + std::to_string(a.finite_part);
  return s;
}

}  // namespace skewlim
