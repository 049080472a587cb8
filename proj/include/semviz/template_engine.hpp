#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "semviz/element_ref.hpp"
#include "semviz/rdf.hpp"
#include "semviz/template.hpp"

namespace semviz::tmpl {

// Nested ConditionalViz expansions deeper than this fail.
inline constexpr int kMaxDepth = 8;

// Macro nodes keep their exact source text so that a parsed body can be
// written back byte-for-byte.
struct RawText {
  std::string text;
};
struct GetProperty {
  ElementRef property;
  std::string source;
  std::size_t offset = 0;
};
struct BaseUrl {
  std::string source;
  std::size_t offset = 0;
};
struct ConditionalViz {
  ElementRef property;
  std::string designer;
  std::string design;
  std::string source;
  std::size_t offset = 0;
};
struct GetLink {
  ElementRef relation;
  std::string source;
  std::size_t offset = 0;
};

using Node = std::variant<RawText, GetProperty, BaseUrl, ConditionalViz, GetLink>;

struct TemplateAst {
  std::vector<Node> nodes;
};

// Macros look like [{OmemoGetP propName='foaf.name'}]. A `[{` that is not
// followed by an Omemo name is ordinary text, so script array literals
// survive. Throws ParseError (with the byte offset) on unknown macro names,
// missing or unknown arguments, duplicate arguments and unterminated macros.
TemplateAst parse_template(std::string_view body);

// Concatenation of raw text and macro source text.
std::string to_source(const TemplateAst& ast);

struct RenderContext {
  const rdf::Graph& graph;
  rdf::Term focus;
  std::string base_url;
  std::optional<std::string> source_url;
  int depth = 0;
  const TemplateSource* templates = nullptr;
  const rdf::PrefixRegistry& prefixes;
  // Consulted for relation ranges when a link target has no rdf:type.
  const rdf::Graph* ontology = nullptr;
  // Input forms: GetP becomes a named text field instead of a value.
  bool input_mode = false;
  std::vector<std::string>* warnings = nullptr;
};

// Expands every node against ctx.focus. Throws DepthExceeded past kMaxDepth,
// NotFound for a missing nested template or unknown prefix, ParseError when
// a nested body is malformed.
std::string expand(const TemplateAst& ast, const RenderContext& ctx);

// Subjects the element stands for in `graph`: rdf:type instances for a
// class, subjects bearing the property for a property. Unknown kinds are
// treated as properties only when the graph uses the IRI as a predicate and
// never as a type.
std::vector<rdf::Term> instances(const rdf::Graph& graph, const rdf::Term& element_iri,
                                 ElementKind kind);

// Markup shown when an element has no instances.
std::string empty_notice(const ElementRef& element);

// Expands `tpl` once per instance (restricted to `only` when given), in term
// order. Zero instances yield the empty notice.
std::string render_element(const ElementRef& element, const Template& tpl,
                           const RenderContext& ctx,
                           const std::optional<rdf::Term>& only = std::nullopt);

// Generic property/value table per instance.
std::string default_visualization(const rdf::Graph& graph, const ElementRef& element,
                                  const rdf::PrefixRegistry& prefixes,
                                  const std::optional<rdf::Term>& only = std::nullopt);

struct FormOptions {
  std::string action_url;
  MarkupFormat format = MarkupFormat::kHtml;
  // Echoed back as the provider field when a designer template is used.
  std::optional<std::string> provider;
};

// Field name for a property in input forms: "prop:prefix.local".
std::string field_name(const ElementRef& property);

// Form for creating an instance of a class. Without a designer template the
// fields are the class's properties (declared domain on the class or a
// superclass). Throws InvalidArgument when the element is a property.
std::string render_input_form(const ElementRef& element, const Template* designer,
                              const FormOptions& options, const RenderContext& ctx);

// One fresh blank node typed as the element's class, plus one plain literal
// triple per nonempty "prop:prefix.local" field. Throws InvalidArgument for
// other keys.
rdf::Graph form_to_graph(const std::map<std::string, std::string>& fields,
                         const ElementRef& element, const rdf::PrefixRegistry& prefixes);

}  // namespace semviz::tmpl
