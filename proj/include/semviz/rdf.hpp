#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace semviz::rdf {

namespace vocab {
inline constexpr std::string_view kRdf =
    "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
inline constexpr std::string_view kRdfs = "http://www.w3.org/2000/01/rdf-schema#";
inline constexpr std::string_view kOwl = "http://www.w3.org/2002/07/owl#";
inline constexpr std::string_view kXsd = "http://www.w3.org/2001/XMLSchema#";

inline std::string rdf(std::string_view local) { return std::string(kRdf) + std::string(local); }
inline std::string rdfs(std::string_view local) { return std::string(kRdfs) + std::string(local); }
inline std::string owl(std::string_view local) { return std::string(kOwl) + std::string(local); }
inline std::string xsd(std::string_view local) { return std::string(kXsd) + std::string(local); }
}  // namespace vocab

// Declaration order fixes the cross-kind ordering: iri < blank < literal.
enum class TermKind { kIri = 0, kBlank = 1, kLiteral = 2 };

// An RDF term. Literals carry an optional language tag or datatype; an
// empty datatype means a plain (xsd:string) literal.
class Term {
 public:
  Term() = default;

  static Term iri(std::string value);
  static Term blank(std::string label);
  static Term literal(std::string lexical, std::string language = {},
                      std::string datatype = {});

  TermKind kind() const noexcept { return kind_; }
  const std::string& value() const noexcept { return value_; }
  const std::string& language() const noexcept { return language_; }
  const std::string& datatype() const noexcept { return datatype_; }

  bool is_iri() const noexcept { return kind_ == TermKind::kIri; }
  bool is_blank() const noexcept { return kind_ == TermKind::kBlank; }
  bool is_literal() const noexcept { return kind_ == TermKind::kLiteral; }

  // N-Triples form: <iri>, _:label, "lexical"@lang / "lexical"^^<dt>.
  std::string to_ntriples() const;

  // Total order: kind, then codepoint order on value, then language, then
  // datatype. UTF-8 byte order coincides with codepoint order.
  friend auto operator<=>(const Term&, const Term&) = default;
  friend bool operator==(const Term&, const Term&) = default;

 private:
  TermKind kind_ = TermKind::kIri;
  std::string value_;
  std::string language_;
  std::string datatype_;
};

// True when `text` starts with a URI scheme followed by ':'.
bool is_absolute_iri(std::string_view text);

struct Triple {
  Term subject;
  Term predicate;
  Term object;

  friend auto operator<=>(const Triple&, const Triple&) = default;
  friend bool operator==(const Triple&, const Triple&) = default;
};

// Validates the subject/predicate position constraints.
Triple make_triple(Term subject, Term predicate, Term object);

// A set of triples with an optional ontology namespace. Triples are kept in
// subject-predicate-object order plus a predicate-object-subject index.
class Graph {
 public:
  Graph() = default;

  void insert(const Triple& triple);
  void insert(Term subject, Term predicate, Term object);
  void merge(const Graph& other);

  bool contains(const Triple& triple) const { return spo_.count(triple) != 0; }
  std::size_t size() const noexcept { return spo_.size(); }
  bool empty() const noexcept { return spo_.empty(); }

  auto begin() const { return spo_.begin(); }
  auto end() const { return spo_.end(); }

  const std::optional<std::string>& name_space() const { return namespace_; }
  void set_namespace(std::string iri);

  // Objects of (subject, predicate, *) in term order.
  std::vector<Term> values_of(const Term& subject, const Term& predicate) const;
  // Subjects s with (s, rdf:type, cls), in term order, each once.
  std::vector<Term> instances_of(const Term& cls) const;
  // Subjects bearing `predicate` at least once, in term order.
  std::vector<Term> subjects_with(const Term& predicate) const;
  // Subjects s with (s, predicate, object), in term order.
  std::vector<Term> subjects_of(const Term& predicate, const Term& object) const;
  // Every triple whose subject is `subject`, in (predicate, object) order.
  std::vector<Triple> describe(const Term& subject) const;
  bool has_subject(const Term& subject) const;
  // True when the term occurs anywhere in the graph.
  bool mentions(const Term& term) const;

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.spo_ == b.spo_ && a.namespace_ == b.namespace_;
  }

 private:
  struct PosLess {
    bool operator()(const Triple& a, const Triple& b) const {
      if (auto c = a.predicate <=> b.predicate; c != 0) return c < 0;
      if (auto c = a.object <=> b.object; c != 0) return c < 0;
      return a.subject < b.subject;
    }
  };

  std::set<Triple> spo_;
  std::set<Triple, PosLess> pos_;
  std::optional<std::string> namespace_;
};

enum class Format { kTurtle, kNTriples };

// Accepts "turtle"/"ttl" and "ntriples"/"nt"; throws InvalidArgument.
Format parse_format(std::string_view token);

// Blank node labels are renamed to b0, b1, ... in order of first
// appearance, so labels are unique within one load. Relative IRIs resolve
// against `base`; without a base they are a syntax error.
Graph parse_graph(std::string_view text, Format format, std::string_view base = {});

// Short prefix to namespace mapping with optional per-version namespaces.
class PrefixRegistry {
 public:
  // Throws InvalidArgument for an empty or dotted prefix or a relative
  // namespace.
  void add(std::string prefix, std::string name_space);
  void add_version(const std::string& prefix, std::string version,
                   std::string name_space);

  std::optional<std::string> name_space(std::string_view prefix) const;
  std::optional<std::string> versioned(std::string_view prefix,
                                       std::string_view version) const;

  // Longest unversioned namespace that prefixes `iri`, as (prefix, local).
  std::optional<std::pair<std::string, std::string>> split(std::string_view iri) const;

  const std::map<std::string, std::string, std::less<>>& prefixes() const {
    return prefixes_;
  }

 private:
  std::map<std::string, std::string, std::less<>> prefixes_;
  std::map<std::string, std::map<std::string, std::string, std::less<>>, std::less<>>
      versions_;
};

// Serializes in term order. Turtle output groups by subject and abbreviates
// IRIs with `prefixes` where the local part is a plain name.
std::string serialize_graph(const Graph& graph, Format format,
                            const PrefixRegistry* prefixes = nullptr);

// Plain text of a term for display: lexical form for literals, the IRI for
// IRIs, _:label for blank nodes.
std::string display(const Term& term);

}  // namespace semviz::rdf
