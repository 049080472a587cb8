#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>

#include "semviz/element_ref.hpp"

namespace semviz {

enum class TemplateKind { kInput, kOutput };
enum class CodeType { kHtml, kCss, kScript };
enum class MarkupFormat { kHtml, kXhtml };
enum class FontResize { kReflow, kFixed, kScale };

struct Size {
  int width = 0;
  int height = 0;
  friend bool operator==(const Size&, const Size&) = default;
};

// Designer-supplied characterization of a template.
struct TemplateFeatures {
  TemplateKind kind = TemplateKind::kOutput;
  std::set<CodeType> code_types{CodeType::kHtml};
  std::string primary_color;
  std::string secondary_color;
  std::string aesthetic;
  MarkupFormat markup = MarkupFormat::kHtml;
  Size preferred_size;
  Size min_size;
  Size max_size;
  FontResize font_resize = FontResize::kReflow;

  friend bool operator==(const TemplateFeatures&, const TemplateFeatures&) = default;
};

struct Template {
  std::string provider;  // designer identity, e.g. "user3"
  std::string design;    // e.g. "test"
  ElementRef target;
  std::string body;
  TemplateFeatures features;

  // "provider.design"
  std::string id() const { return provider + "." + design; }

  friend bool operator==(const Template& a, const Template& b) {
    return a.provider == b.provider && a.design == b.design && a.target == b.target &&
           a.body == b.body && a.features == b.features;
  }
};

// Nested template lookup used by the macro expander.
class TemplateSource {
 public:
  virtual ~TemplateSource() = default;
  virtual const Template* find(std::string_view provider, std::string_view design) const = 0;
};

std::string_view to_string(TemplateKind kind);
std::string_view to_string(CodeType type);
std::string_view to_string(MarkupFormat format);
std::string_view to_string(FontResize behavior);

// Case-sensitive parsers for the tokens above ("input", "html", "XHTML",
// "reflow", ...). Throw InvalidArgument.
TemplateKind parse_template_kind(std::string_view text);
CodeType parse_code_type(std::string_view text);
MarkupFormat parse_markup_format(std::string_view text);
FontResize parse_font_resize(std::string_view text);

}  // namespace semviz
