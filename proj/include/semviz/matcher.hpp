#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "semviz/rdf.hpp"
#include "semviz/template.hpp"

namespace semviz::matcher {

// Engine vocabulary for profile facets. Profile graphs in other
// vocabularies reach these through owl:equivalentProperty links.
inline constexpr std::string_view kProfileVocab = "http://purl.org/semviz/profile#";
// Vocabulary of the auxiliary ontologies (protocol mapping, style tree,
// impairment rules).
inline constexpr std::string_view kAuxVocab = "http://purl.org/semviz/aux#";

inline std::string profile_term(std::string_view local) {
  return std::string(kProfileVocab) + std::string(local);
}
inline std::string aux_term(std::string_view local) {
  return std::string(kAuxVocab) + std::string(local);
}

enum class LinkKind { kSameAs, kEquivalentClass, kEquivalentProperty };

struct Link {
  rdf::Term a;
  rdf::Term b;
  LinkKind kind = LinkKind::kSameAs;
};

struct AlignmentSet {
  std::vector<Link> links;

  void add(rdf::Term a, rdf::Term b, LinkKind kind) {
    links.push_back(Link{std::move(a), std::move(b), kind});
  }
  // owl:sameAs, owl:equivalentClass and owl:equivalentProperty triples.
  static AlignmentSet from_graph(const rdf::Graph& graph);
};

// Equivalence classes induced by alignment links. Terms that never occur in
// a link are their own singleton class.
class Closure {
 public:
  bool same(const rdf::Term& a, const rdf::Term& b) const;
  // Smallest member of the term's class.
  const rdf::Term& canonical(const rdf::Term& term) const;
  // Members of the term's class in term order (just the term if unlinked).
  std::vector<rdf::Term> members(const rdf::Term& term) const;
  // Classes over every linked term, each sorted, ordered by first member.
  std::vector<std::vector<rdf::Term>> classes() const;

 private:
  friend Closure equivalence_closure(const AlignmentSet& links);
  std::map<rdf::Term, rdf::Term> representative_;
  std::map<rdf::Term, std::vector<rdf::Term>> members_;
};

// Union-find closure. Throws InvalidArgument when a term is used in links of
// different kinds (an individual linked like a class, say).
Closure equivalence_closure(const AlignmentSet& links);

// Style taxonomy: a forest of style terms joined by aux:broaderStyle.
class Taxonomy {
 public:
  void add_node(const rdf::Term& node);
  void add_label(const rdf::Term& node, std::string_view label);
  // Throws InvalidArgument on a second parent or a cycle.
  void add_edge(const rdf::Term& child, const rdf::Term& parent);

  bool contains(const rdf::Term& node) const { return parent_.contains(node); }
  // A node equivalent to `term` under the closure, or for literals the node
  // whose label or local name matches the normalized text.
  std::optional<rdf::Term> locate(const rdf::Term& term, const Closure& closure) const;
  std::optional<rdf::Term> locate_label(std::string_view label) const;

  // Undirected edge count between two nodes; nullopt across trees.
  std::optional<int> distance(const rdf::Term& a, const rdf::Term& b) const;
  // Longest distance between any two connected nodes.
  int diameter() const;
  std::size_t size() const { return parent_.size(); }

 private:
  std::vector<rdf::Term> path_to_root(const rdf::Term& node) const;

  std::map<rdf::Term, std::optional<rdf::Term>> parent_;
  std::map<std::string, rdf::Term> labels_;
};

struct AuxOntologies {
  std::map<rdf::Term, MarkupFormat> protocol_to_markup;
  Taxonomy aesthetics;
  // Colors each impairment forbids directly, normalized.
  std::map<rdf::Term, std::set<std::string>> impairment_rules;
  std::map<rdf::Term, rdf::Term> impairment_parent;

  // Reads aux:markupFormat, aux:broaderStyle / aux:Style, rdfs:label,
  // aux:broaderImpairment / aux:Impairment and aux:forbidsColor. Throws
  // InvalidArgument for unknown markup formats, unknown color names, or a
  // cyclic or non-tree hierarchy.
  static AuxOntologies from_graph(const rdf::Graph& graph);

  std::optional<rdf::Term> locate_protocol(const rdf::Term& term, const Closure& closure) const;
  std::optional<rdf::Term> locate_impairment(const rdf::Term& term, const Closure& closure) const;
  // Direct rules plus those of every broader impairment.
  std::set<std::string> forbidden_colors(const rdf::Term& impairment) const;
};

// Lowercase with surrounding spaces trimmed.
std::string normalize_color(std::string_view name);
// CSS named colors.
bool is_known_color(std::string_view normalized);

struct UserProfile {
  rdf::Term subject;
  std::optional<rdf::Term> protocol;
  std::optional<rdf::Term> aesthetic;
  std::set<rdf::Term> impairments;

  friend bool operator==(const UserProfile&, const UserProfile&) = default;
};

// Facets are read through the closure: predicates equivalent to
// profile:protocol, profile:device (whose protocol is used),
// profile:aesthetic and profile:impairment. Values are replaced by the
// equivalent auxiliary-ontology term when there is one, else by their
// canonical term. Throws NotFound when the subject has no triples.
UserProfile extract_profile(const rdf::Graph& graph, const rdf::Term& subject,
                            const Closure& closure, const AuxOntologies& aux);

// First subject (term order) carrying a recognized facet, skipping subjects
// that are some other subject's device.
std::optional<rdf::Term> find_profile_subject(const rdf::Graph& graph, const Closure& closure);

struct ScoreWeights {
  double aesthetic = 1.0;
  double primary_color = 2.0;
  double secondary_color = 1.0;
};

struct MatchScore {
  bool hard_pass = true;
  int aesthetic_distance = 0;
  int color_hits_primary = 0;
  int color_hits_secondary = 0;
  double color_penalty = 0.0;
  double total = 0.0;
  std::vector<std::string> trace;
};

MatchScore score(const UserProfile& profile, const Template& tpl, const AuxOntologies& aux,
                 const Closure& closure, const ScoreWeights& weights = {});

struct ScoredTemplate {
  Template tpl;
  MatchScore score;
};

struct Selection {
  // Hard-pass candidates first, then by total, then by identifier.
  std::vector<ScoredTemplate> ranking;
  // Empty when no candidate passes the hard filter.
  std::optional<Template> best;
};

Selection select_best(const UserProfile& profile, const std::vector<Template>& candidates,
                      const AuxOntologies& aux, const Closure& closure,
                      const ScoreWeights& weights = {});

}  // namespace semviz::matcher
