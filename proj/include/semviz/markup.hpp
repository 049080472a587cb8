#pragma once

#include <string>
#include <string_view>

namespace semviz::markup {

// Escapes &, <, >, " and ' for use in text and attribute values.
std::string escape(std::string_view text);

// Percent-encodes everything outside RFC 3986 unreserved characters.
std::string url_encode(std::string_view text);

// Decodes %XX sequences and '+' as space. Malformed escapes pass through.
std::string url_decode(std::string_view text);

// Minimal XML 1.0 well-formedness check: one root element, balanced and
// properly nested tags, quoted unique attributes, predefined or numeric
// entity references only, plus comments, PIs, CDATA and a DOCTYPE. On
// failure `error` (when given) receives a short reason.
bool well_formed_xml(std::string_view document, std::string* error = nullptr);

}  // namespace semviz::markup
