#pragma once

#include <charconv>
#include <complex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "circsum/errors.hpp"

namespace circsum {

namespace detail {

inline std::optional<double> parse_real(std::string_view s) {
  if (s.empty()) return std::nullopt;
  if (s.front() == '+') s.remove_prefix(1);
  if (s.empty() || s.front() == '+' || s.front() == ' ') return std::nullopt;
  double v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

}  // namespace detail

/// Parses "a", "bi", "a+bi", "a-bi", "i", "-i" with decimal a, b. No whitespace.
inline std::complex<double> parse_complex(std::string_view s) {
  auto fail = [&]() -> std::complex<double> {
    throw DomainError("malformed complex literal '" + std::string(s) + "' (expected a+bi)");
  };
  if (s.empty()) return fail();
  for (char c : s)
    if (c == ' ' || c == '\t' || c == '\n') return fail();
  if (s.back() != 'i') {
    auto re = detail::parse_real(s);
    return re ? std::complex<double>(*re, 0.0) : fail();
  }
  const std::string_view body = s.substr(0, s.size() - 1);
  // Split at the last sign that is not the start and not an exponent sign.
  std::size_t split = std::string_view::npos;
  for (std::size_t k = body.size(); k-- > 1;) {
    if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
      split = k;
      break;
    }
  }
  const std::string_view re_text = split == std::string_view::npos ? std::string_view() : body.substr(0, split);
  const std::string_view im_text = split == std::string_view::npos ? body : body.substr(split);
  double re = 0;
  if (!re_text.empty()) {
    auto v = detail::parse_real(re_text);
    if (!v) return fail();
    re = *v;
  }
  double im = 0;
  if (im_text.empty() || im_text == "+") im = 1;
  else if (im_text == "-") im = -1;
  else {
    auto v = detail::parse_real(im_text);
    if (!v) return fail();
    im = *v;
  }
  return {re, im};
}

/// Comma-separated list of complex literals; the empty string is the empty list.
inline std::vector<std::complex<double>> parse_complex_list(std::string_view s) {
  std::vector<std::complex<double>> out;
  if (s.empty()) return out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = s.find(',', start);
    out.push_back(parse_complex(s.substr(start, comma == std::string_view::npos ? s.npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace circsum
