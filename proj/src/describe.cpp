#include "semviz/describe.hpp"

#include <deque>
#include <set>

#include "semviz/errors.hpp"

namespace semviz::describe {

using rdf::Term;
namespace vocab = rdf::vocab;

namespace {

std::vector<Term> superclasses_of(const rdf::Graph& ontology, const Term& cls) {
  const Term sub = Term::iri(vocab::rdfs("subClassOf"));
  std::set<Term> seen;
  std::deque<Term> queue{cls};
  while (!queue.empty()) {
    Term current = queue.front();
    queue.pop_front();
    for (const auto& parent : ontology.values_of(current, sub)) {
      if (parent.is_iri() && parent != cls && seen.insert(parent).second) {
        queue.push_back(parent);
      }
    }
  }
  return {seen.begin(), seen.end()};
}

PropertyInfo property_info(const rdf::Graph& ontology, const Term& property) {
  PropertyInfo info{property, ontology.values_of(property, Term::iri(vocab::rdfs("range"))), false};
  const auto types = ontology.values_of(property, Term::iri(vocab::rdf("type")));
  for (const auto& t : types) {
    if (t.is_iri() && t.value() == vocab::owl("ObjectProperty")) info.relation = true;
  }
  for (const auto& r : info.ranges) {
    if (r.is_iri() && classify(r, ontology) == ElementKind::kClass) info.relation = true;
  }
  return info;
}

std::set<Term> all_properties(const rdf::Graph& ontology) {
  std::set<Term> out;
  for (const auto& t : ontology) {
    if (t.subject.is_iri() && classify(t.subject, ontology) == ElementKind::kProperty) {
      out.insert(t.subject);
    }
  }
  return out;
}

}  // namespace

ElementDescription describe_element(const rdf::Graph& ontology, const ElementRef& element,
                                    const rdf::PrefixRegistry& prefixes) {
  ElementDescription d;
  d.ref = element;
  d.iri = resolve(element, prefixes);
  if (!ontology.mentions(d.iri)) {
    throw NotFound("element " + element.to_string() + " does not occur in the ontology");
  }
  d.kind = classify(d.iri, ontology);
  d.ref.kind = d.kind;

  const Term domain = Term::iri(vocab::rdfs("domain"));
  if (d.kind == ElementKind::kProperty) {
    d.domains = ontology.values_of(d.iri, domain);
    d.ranges = ontology.values_of(d.iri, Term::iri(vocab::rdfs("range")));
    d.relation = property_info(ontology, d.iri).relation;
    return d;
  }
  if (d.kind != ElementKind::kClass) return d;

  d.superclasses = superclasses_of(ontology, d.iri);
  std::set<Term> owners(d.superclasses.begin(), d.superclasses.end());
  owners.insert(d.iri);
  std::set<Term> applicable;
  for (const auto& owner : owners) {
    for (const auto& p : ontology.subjects_of(domain, owner)) applicable.insert(p);
  }
  for (const auto& p : applicable) d.properties.push_back(property_info(ontology, p));
  for (const auto& p : all_properties(ontology)) {
    if (ontology.values_of(p, domain).empty()) {
      d.global_properties.push_back(property_info(ontology, p));
    }
  }
  return d;
}

std::string render_description(const ElementDescription& d, const rdf::PrefixRegistry& prefixes) {
  auto name = [&](const Term& t) { return compact(t, prefixes); };
  auto join = [&](const std::vector<Term>& terms) {
    std::string out;
    for (const auto& t : terms) {
      if (!out.empty()) out += ", ";
      out += name(t);
    }
    return out;
  };
  auto property_line = [&](const char* label, const PropertyInfo& p) {
    std::string line = std::string("  ") + label + name(p.iri);
    if (!p.ranges.empty()) line += (p.relation ? " -> " : " : ") + join(p.ranges);
    return line + "\n";
  };

  std::string out;
  switch (d.kind) {
    case ElementKind::kClass: out += "class "; break;
    case ElementKind::kProperty: out += "property "; break;
    case ElementKind::kUnknown: out += "element "; break;
  }
  out += d.ref.to_string() + " <" + d.iri.value() + ">";
  if (!d.superclasses.empty()) out += " subClassOf " + join(d.superclasses);
  out += "\n";

  if (d.kind == ElementKind::kProperty) {
    for (const auto& t : d.domains) out += "  domain " + name(t) + "\n";
    for (const auto& t : d.ranges) out += "  range " + name(t) + "\n";
    return out;
  }
  for (const auto& p : d.properties) {
    out += property_line(p.relation ? "relation " : "property ", p);
  }
  for (const auto& p : d.global_properties) out += property_line("global ", p);
  return out;
}

}  // namespace semviz::describe
