#include <set>

#include "semviz/describe.hpp"
#include "semviz/errors.hpp"
#include "semviz/markup.hpp"
#include "semviz/template_engine.hpp"

namespace semviz::tmpl {

using rdf::Term;
namespace vocab = rdf::vocab;

namespace {

std::string value_text(const Term& t) { return markup::escape(rdf::display(t)); }

// Element a link should render: the first rdf:type of the value that maps to a
// registered prefix, else the relation's declared range.
std::optional<ElementRef> link_target(const Term& value, const Term& relation,
                                      const RenderContext& ctx) {
  const Term type = Term::iri(vocab::rdf("type"));
  for (const auto& t : ctx.graph.values_of(value, type)) {
    if (auto ref = element_ref_for(t, ctx.prefixes)) return ref;
  }
  if (ctx.ontology != nullptr) {
    for (const auto& r : ctx.ontology->values_of(relation, Term::iri(vocab::rdfs("range")))) {
      if (auto ref = element_ref_for(r, ctx.prefixes)) return ref;
    }
  }
  return std::nullopt;
}

class Expander {
 public:
  explicit Expander(const RenderContext& ctx) : ctx_(ctx) {}

  std::string operator()(const RawText& n) const { return n.text; }

  std::string operator()(const BaseUrl&) const { return ctx_.base_url; }

  std::string operator()(const GetProperty& n) const {
    if (ctx_.input_mode) {
      return "<input type=\"text\" name=\"" + markup::escape(field_name(n.property)) +
             "\" value=\"\" />";
    }
    Term prop = resolve(n.property, ctx_.prefixes, ctx_.warnings);
    std::string out;
    for (const auto& v : ctx_.graph.values_of(ctx_.focus, prop)) {
      if (!out.empty()) out += ", ";
      out += value_text(v);
    }
    return out;
  }

  std::string operator()(const ConditionalViz& n) const {
    Term prop = resolve(n.property, ctx_.prefixes, ctx_.warnings);
    auto values = ctx_.graph.values_of(ctx_.focus, prop);
    if (values.empty()) return {};
    const Template* nested =
        ctx_.templates != nullptr ? ctx_.templates->find(n.designer, n.design) : nullptr;
    if (nested == nullptr) {
      throw NotFound("template " + n.designer + "." + n.design + " not found");
    }
    TemplateAst ast = parse_template(nested->body);
    std::string out;
    for (const auto& v : values) {
      RenderContext child = ctx_;
      child.focus = v;
      child.depth = ctx_.depth + 1;
      out += expand(ast, child);
    }
    return out;
  }

  std::string operator()(const GetLink& n) const {
    if (ctx_.input_mode) return {};
    Term relation = resolve(n.relation, ctx_.prefixes, ctx_.warnings);
    std::string out;
    for (const auto& v : ctx_.graph.values_of(ctx_.focus, relation)) {
      if (!out.empty()) out += ", ";
      auto target = v.is_literal() ? std::nullopt : link_target(v, relation, ctx_);
      if (!target) {
        out += value_text(v);
        continue;
      }
      std::string href = ctx_.base_url + "?action=renderOutput&object=" +
                         markup::url_encode(target->to_string());
      if (ctx_.source_url) href += "&source=" + markup::url_encode(*ctx_.source_url);
      href += "&focus=" + markup::url_encode(rdf::display(v));
      out += "<a href=\"" + markup::escape(href) + "\">" + value_text(v) + "</a>";
    }
    return out;
  }

 private:
  const RenderContext& ctx_;
};

}  // namespace

std::string expand(const TemplateAst& ast, const RenderContext& ctx) {
  if (ctx.depth > kMaxDepth) {
    throw DepthExceeded("template nesting exceeded the maximum depth of " +
                        std::to_string(kMaxDepth) + " (reached depth " +
                        std::to_string(ctx.depth) + " at " + rdf::display(ctx.focus) + ")");
  }
  Expander expander(ctx);
  std::string out;
  for (const auto& node : ast.nodes) out += std::visit(expander, node);
  return out;
}

std::vector<Term> instances(const rdf::Graph& graph, const Term& element_iri, ElementKind kind) {
  switch (kind) {
    case ElementKind::kClass:
      return graph.instances_of(element_iri);
    case ElementKind::kProperty:
      return graph.subjects_with(element_iri);
    case ElementKind::kUnknown:
      break;
  }
  auto typed = graph.instances_of(element_iri);
  if (!typed.empty()) return typed;
  return graph.subjects_with(element_iri);
}

std::string empty_notice(const ElementRef& element) {
  return "<p class=\"semviz-empty\">No data for " + markup::escape(element.to_string()) +
         ".</p>\n";
}

namespace {

std::vector<Term> restrict(std::vector<Term> all, const std::optional<Term>& only) {
  if (!only) return all;
  for (const auto& t : all) {
    if (t == *only) return {t};
  }
  return {};
}

}  // namespace

std::string render_element(const ElementRef& element, const Template& tpl,
                           const RenderContext& ctx, const std::optional<Term>& only) {
  Term iri = resolve(element, ctx.prefixes, ctx.warnings);
  auto subjects = restrict(instances(ctx.graph, iri, element.kind), only);
  if (subjects.empty()) return empty_notice(element);
  TemplateAst ast = parse_template(tpl.body);
  std::string out;
  for (const auto& s : subjects) {
    RenderContext child = ctx;
    child.focus = s;
    out += expand(ast, child);
  }
  return out;
}

std::string default_visualization(const rdf::Graph& graph, const ElementRef& element,
                                  const rdf::PrefixRegistry& prefixes,
                                  const std::optional<Term>& only) {
  Term iri = resolve(element, prefixes);
  auto subjects = restrict(instances(graph, iri, element.kind), only);
  if (subjects.empty()) return empty_notice(element);
  std::string out;
  for (const auto& s : subjects) {
    out += "<table class=\"semviz-default\">\n<caption>" + value_text(s) + "</caption>\n";
    for (const auto& t : graph.describe(s)) {
      out += "<tr><th>" + markup::escape(compact(t.predicate, prefixes)) + "</th><td";
      if (!t.object.language().empty()) out += " lang=\"" + markup::escape(t.object.language()) + "\"";
      out += ">" + value_text(t.object) + "</td></tr>\n";
    }
    out += "</table>\n";
  }
  return out;
}

std::string field_name(const ElementRef& property) { return "prop:" + property.unversioned(); }

std::string render_input_form(const ElementRef& element, const Template* designer,
                              const FormOptions& options, const RenderContext& ctx) {
  Term iri = resolve(element, ctx.prefixes, ctx.warnings);
  ElementKind kind = element.kind;
  if (kind == ElementKind::kUnknown && ctx.ontology != nullptr) kind = classify(iri, *ctx.ontology);
  if (kind == ElementKind::kProperty) {
    throw InvalidArgument("input forms need a class; " + element.to_string() + " is a property");
  }

  std::string out = "<form class=\"semviz-input\" method=\"post\" action=\"" +
                    markup::escape(options.action_url) + "\">\n";
  auto hidden = [&](std::string_view name, std::string_view value) {
    out += "<input type=\"hidden\" name=\"" + std::string(name) + "\" value=\"" +
           markup::escape(value) + "\" />\n";
  };
  hidden("action", "renderInput");
  hidden("object", element.to_string());
  hidden("outputFormat", to_string(options.format));
  if (designer != nullptr && options.provider) hidden("provider", *options.provider);

  if (designer != nullptr) {
    RenderContext input_ctx = ctx;
    input_ctx.input_mode = true;
    out += expand(parse_template(designer->body), input_ctx);
    if (!out.ends_with("\n")) out += "\n";
  } else if (ctx.ontology != nullptr && ctx.ontology->mentions(iri)) {
    auto description = describe::describe_element(*ctx.ontology, element, ctx.prefixes);
    for (const auto& p : description.properties) {
      auto ref = element_ref_for(p.iri, ctx.prefixes);
      if (!ref) continue;
      std::string name = field_name(*ref);
      out += "<p><label>" + markup::escape(ref->to_string()) + " <input type=\"text\" name=\"" +
             markup::escape(name) + "\" value=\"\" /></label></p>\n";
    }
  }
  out += "<p><input type=\"submit\" value=\"Submit\" /></p>\n</form>\n";
  return out;
}

rdf::Graph form_to_graph(const std::map<std::string, std::string>& fields,
                         const ElementRef& element, const rdf::PrefixRegistry& prefixes) {
  rdf::Graph g;
  const Term subject = Term::blank("x");
  g.insert(subject, Term::iri(vocab::rdf("type")), resolve(element, prefixes));
  for (const auto& [key, value] : fields) {
    if (!key.starts_with("prop:")) {
      throw InvalidArgument("form field '" + key + "' is not of the form prop:prefix.local");
    }
    ElementRef property = parse_element_ref(std::string_view(key).substr(5));
    Term predicate = resolve(property, prefixes);
    if (value.empty()) continue;
    g.insert(subject, predicate, Term::literal(value));
  }
  return g;
}

}  // namespace semviz::tmpl
