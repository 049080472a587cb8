#include "semviz/template.hpp"

#include "semviz/errors.hpp"

namespace semviz {

std::string_view to_string(TemplateKind kind) {
  return kind == TemplateKind::kInput ? "input" : "output";
}

std::string_view to_string(CodeType type) {
  switch (type) {
    case CodeType::kHtml: return "html";
    case CodeType::kCss: return "css";
    case CodeType::kScript: return "script";
  }
  return {};
}

std::string_view to_string(MarkupFormat format) {
  return format == MarkupFormat::kXhtml ? "XHTML" : "HTML";
}

std::string_view to_string(FontResize behavior) {
  switch (behavior) {
    case FontResize::kReflow: return "reflow";
    case FontResize::kFixed: return "fixed";
    case FontResize::kScale: return "scale";
  }
  return {};
}

TemplateKind parse_template_kind(std::string_view text) {
  if (text == "input") return TemplateKind::kInput;
  if (text == "output") return TemplateKind::kOutput;
  throw InvalidArgument("template kind must be input or output, got '" + std::string(text) + "'");
}

CodeType parse_code_type(std::string_view text) {
  if (text == "html") return CodeType::kHtml;
  if (text == "css") return CodeType::kCss;
  if (text == "script") return CodeType::kScript;
  throw InvalidArgument("code type must be html, css or script, got '" + std::string(text) + "'");
}

MarkupFormat parse_markup_format(std::string_view text) {
  if (text == "HTML") return MarkupFormat::kHtml;
  if (text == "XHTML") return MarkupFormat::kXhtml;
  throw InvalidArgument("markup format must be HTML or XHTML, got '" + std::string(text) + "'");
}

FontResize parse_font_resize(std::string_view text) {
  if (text == "reflow") return FontResize::kReflow;
  if (text == "fixed") return FontResize::kFixed;
  if (text == "scale") return FontResize::kScale;
  throw InvalidArgument("font behavior must be reflow, fixed or scale, got '" +
                        std::string(text) + "'");
}

}  // namespace semviz
