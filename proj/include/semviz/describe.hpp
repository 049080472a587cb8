#pragma once

#include <string>
#include <vector>

#include "semviz/element_ref.hpp"
#include "semviz/rdf.hpp"

namespace semviz::describe {

struct PropertyInfo {
  rdf::Term iri;
  std::vector<rdf::Term> ranges;
  // Object property: declared owl:ObjectProperty or ranging over a class.
  // These are the relations a GetLink macro can follow.
  bool relation = false;
};

// Structural summary of one ontology element for template authors.
struct ElementDescription {
  ElementRef ref;
  rdf::Term iri;
  ElementKind kind = ElementKind::kUnknown;
  // Classes only.
  std::vector<rdf::Term> superclasses;    // transitive, term order
  std::vector<PropertyInfo> properties;   // domain is the class or a superclass
  std::vector<PropertyInfo> global_properties;  // properties with no domain
  // Properties only.
  std::vector<rdf::Term> domains;
  std::vector<rdf::Term> ranges;
  bool relation = false;
};

// Recognizes rdfs:subClassOf, rdfs:domain, rdfs:range and rdf:type
// declarations. Throws NotFound when the element does not occur in the
// ontology, NotFound/InvalidArgument from resolution.
ElementDescription describe_element(const rdf::Graph& ontology, const ElementRef& element,
                                    const rdf::PrefixRegistry& prefixes);

// Header line, then one line per property (class) or per domain/range
// (property). Deterministic.
std::string render_description(const ElementDescription& description,
                               const rdf::PrefixRegistry& prefixes);

}  // namespace semviz::describe
