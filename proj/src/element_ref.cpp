#include "semviz/element_ref.hpp"

#include "semviz/errors.hpp"

namespace semviz {

using rdf::Term;
namespace vocab = rdf::vocab;

std::string ElementRef::to_string() const {
  std::string out = prefix + "." + local;
  if (version) out += "." + *version;
  return out;
}

ElementRef parse_element_ref(std::string_view text) {
  std::vector<std::string> segments;
  std::size_t start = 0;
  for (;;) {
    auto dot = text.find('.', start);
    segments.emplace_back(text.substr(start, dot == std::string_view::npos ? dot : dot - start));
    if (dot == std::string_view::npos) break;
    start = dot + 1;
  }
  if (segments.size() < 2) {
    throw InvalidArgument("element '" + std::string(text) + "' needs a prefix: prefix.name[.version]");
  }
  if (segments.size() > 3) {
    throw InvalidArgument("element '" + std::string(text) + "' has too many segments");
  }
  for (const auto& s : segments) {
    if (s.empty()) throw InvalidArgument("element '" + std::string(text) + "' has an empty segment");
    for (char c : s) {
      if (static_cast<unsigned char>(c) <= 0x20 || c == '<' || c == '>' || c == '"') {
        throw InvalidArgument("element '" + std::string(text) + "' contains an invalid character");
      }
    }
  }
  ElementRef ref;
  ref.prefix = segments[0];
  ref.local = segments[1];
  if (segments.size() == 3) ref.version = segments[2];
  return ref;
}

Term resolve(const ElementRef& ref, const rdf::PrefixRegistry& registry,
             std::vector<std::string>* warnings) {
  auto base = registry.name_space(ref.prefix);
  if (ref.version) {
    if (auto versioned = registry.versioned(ref.prefix, *ref.version)) {
      return Term::iri(*versioned + ref.local);
    }
    if (!base) throw NotFound("unknown prefix '" + ref.prefix + "'");
    if (warnings != nullptr) {
      warnings->push_back("unknown version '" + *ref.version + "' for prefix '" + ref.prefix +
                          "', using the unversioned namespace");
    }
  }
  if (!base) throw NotFound("unknown prefix '" + ref.prefix + "'");
  return Term::iri(*base + ref.local);
}

ElementKind classify(const Term& iri, const rdf::Graph& ontology) {
  const Term type = Term::iri(vocab::rdf("type"));
  for (const auto& t : ontology.values_of(iri, type)) {
    if (!t.is_iri()) continue;
    const auto& v = t.value();
    if (v == vocab::owl("Class") || v == vocab::rdfs("Class")) return ElementKind::kClass;
    if (v == vocab::rdf("Property") || v == vocab::owl("ObjectProperty") ||
        v == vocab::owl("DatatypeProperty") || v == vocab::owl("AnnotationProperty") ||
        v == vocab::owl("FunctionalProperty")) {
      return ElementKind::kProperty;
    }
  }
  if (!ontology.values_of(iri, Term::iri(vocab::rdfs("domain"))).empty() ||
      !ontology.values_of(iri, Term::iri(vocab::rdfs("range"))).empty() ||
      !ontology.values_of(iri, Term::iri(vocab::rdfs("subPropertyOf"))).empty()) {
    return ElementKind::kProperty;
  }
  const Term sub = Term::iri(vocab::rdfs("subClassOf"));
  if (!ontology.values_of(iri, sub).empty() || !ontology.subjects_of(sub, iri).empty() ||
      !ontology.subjects_of(Term::iri(vocab::rdfs("domain")), iri).empty()) {
    return ElementKind::kClass;
  }
  return ElementKind::kUnknown;
}

std::optional<ElementRef> element_ref_for(const Term& iri, const rdf::PrefixRegistry& registry) {
  if (!iri.is_iri()) return std::nullopt;
  auto split = registry.split(iri.value());
  if (!split || split->second.find('.') != std::string::npos) return std::nullopt;
  for (char c : split->second) {
    if (static_cast<unsigned char>(c) <= 0x20 || c == '<' || c == '>' || c == '"') {
      return std::nullopt;
    }
  }
  ElementRef ref;
  ref.prefix = split->first;
  ref.local = split->second;
  return ref;
}

std::string compact(const Term& iri, const rdf::PrefixRegistry& registry) {
  if (auto ref = element_ref_for(iri, registry)) return ref->to_string();
  return rdf::display(iri);
}

}  // namespace semviz
