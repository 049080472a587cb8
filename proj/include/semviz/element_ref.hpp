#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "semviz/rdf.hpp"

namespace semviz {

enum class ElementKind { kUnknown, kClass, kProperty };

// Dotted ontology-element coordinate: `prefix.local` or
// `prefix.local.version`, e.g. foaf.Person or foaf.Person.20050603.
struct ElementRef {
  std::string prefix;
  std::string local;
  std::optional<std::string> version;
  ElementKind kind = ElementKind::kUnknown;

  // Dotted textual form.
  std::string to_string() const;
  // `prefix.local` without the version.
  std::string unversioned() const { return prefix + "." + local; }

  // Kind is derived data and does not take part in identity.
  friend bool operator==(const ElementRef& a, const ElementRef& b) {
    return a.prefix == b.prefix && a.local == b.local && a.version == b.version;
  }
};

// Throws InvalidArgument on fewer than 2 or more than 3 segments or on an
// empty segment.
ElementRef parse_element_ref(std::string_view text);

// namespace(prefix, version) + local. A version missing from the registry
// falls back to the unversioned namespace and appends a message to
// `warnings` when given. Throws NotFound for an unknown prefix.
rdf::Term resolve(const ElementRef& ref, const rdf::PrefixRegistry& registry,
                  std::vector<std::string>* warnings = nullptr);

// Class vs property from rdf:type, subclass and domain/range axioms in
// `ontology`; kUnknown when the ontology says nothing either way.
ElementKind classify(const rdf::Term& iri, const rdf::Graph& ontology);

// Reverse mapping through the registry's unversioned namespaces.
std::optional<ElementRef> element_ref_for(const rdf::Term& iri,
                                          const rdf::PrefixRegistry& registry);

// `prefix.local` when the IRI maps into a registered namespace, otherwise the
// IRI itself.
std::string compact(const rdf::Term& iri, const rdf::PrefixRegistry& registry);

}  // namespace semviz
