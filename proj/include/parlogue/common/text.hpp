#pragma once

#include <string>
#include <string_view>

namespace parlogue {

/// Shortest decimal form that round-trips to the same double.
std::string format_double(double value);

std::string_view trim(std::string_view text);

/// Escapes &, < and > so the text can sit inside an XML-style element.
std::string xml_escape(std::string_view text);
std::string xml_unescape(std::string_view text);

}  // namespace parlogue
