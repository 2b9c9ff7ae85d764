#include "parlogue/common/text.hpp"

#include <array>
#include <charconv>
#include <stdexcept>

namespace parlogue {

std::string format_double(double value) {
  if (value == 0.0) return "0";  // folds -0 into 0
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc{}) throw std::runtime_error("format_double: to_chars failed");
  return std::string(buf.data(), end);
}

std::string_view trim(std::string_view text) {
  constexpr std::string_view kSpace = " \t\r\n\f\v";
  const auto first = text.find_first_not_of(kSpace);
  if (first == std::string_view::npos) return {};
  const auto last = text.find_last_not_of(kSpace);
  return text.substr(first, last - first + 1);
}

std::string xml_escape(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string xml_unescape(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '&') {
      auto rest = text.substr(i);
      if (rest.starts_with("&amp;")) { out.push_back('&'); i += 4; continue; }
      if (rest.starts_with("&lt;")) { out.push_back('<'); i += 3; continue; }
      if (rest.starts_with("&gt;")) { out.push_back('>'); i += 3; continue; }
    }
    out.push_back(text[i]);
  }
  return out;
}

}  // namespace parlogue
