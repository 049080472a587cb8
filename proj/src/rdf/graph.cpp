#include <algorithm>
#include <cctype>

#include "semviz/errors.hpp"
#include "semviz/rdf.hpp"

namespace semviz::rdf {

namespace {

bool valid_blank_label(std::string_view label) {
  if (label.empty()) return false;
  return std::all_of(label.begin(), label.end(), [](unsigned char c) {
    return std::isalnum(c) || c == '_' || c == '-';
  });
}

std::string escape_string(std::string_view text) {
  std::string out;
  out.reserve(text.size() + 2);
  for (char c : text) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      case '\b': out += "\\b"; break;
      case '\f': out += "\\f"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20 || c == 0x7f) {
          static const char* hex = "0123456789ABCDEF";
          out += "\\u00";
          out += hex[(static_cast<unsigned char>(c) >> 4) & 0xf];
          out += hex[static_cast<unsigned char>(c) & 0xf];
        } else {
          out += c;
        }
    }
  }
  return out;
}

std::string escape_iri(std::string_view iri) {
  std::string out;
  for (char c : iri) {
    auto u = static_cast<unsigned char>(c);
    if (u <= 0x20 || c == '<' || c == '>' || c == '"' || c == '{' || c == '}' ||
        c == '|' || c == '^' || c == '`' || c == '\\') {
      static const char* hex = "0123456789ABCDEF";
      out += "\\u00";
      out += hex[(u >> 4) & 0xf];
      out += hex[u & 0xf];
    } else {
      out += c;
    }
  }
  return out;
}

}  // namespace

bool is_absolute_iri(std::string_view text) {
  if (text.empty() || !std::isalpha(static_cast<unsigned char>(text[0]))) return false;
  for (std::size_t i = 1; i < text.size(); ++i) {
    auto c = static_cast<unsigned char>(text[i]);
    if (c == ':') return true;
    if (!std::isalnum(c) && c != '+' && c != '-' && c != '.') return false;
  }
  return false;
}

Term Term::iri(std::string value) {
  if (!is_absolute_iri(value)) {
    throw InvalidArgument("not an absolute IRI: '" + value + "'");
  }
  Term t;
  t.kind_ = TermKind::kIri;
  t.value_ = std::move(value);
  return t;
}

Term Term::blank(std::string label) {
  if (!valid_blank_label(label)) {
    throw InvalidArgument("invalid blank node label: '" + label + "'");
  }
  Term t;
  t.kind_ = TermKind::kBlank;
  t.value_ = std::move(label);
  return t;
}

Term Term::literal(std::string lexical, std::string language, std::string datatype) {
  if (!language.empty() && !datatype.empty()) {
    throw InvalidArgument("literal cannot have both a language and a datatype");
  }
  if (datatype == vocab::xsd("string")) datatype.clear();
  if (!datatype.empty() && !is_absolute_iri(datatype)) {
    throw InvalidArgument("literal datatype is not an absolute IRI: '" + datatype + "'");
  }
  std::transform(language.begin(), language.end(), language.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  Term t;
  t.kind_ = TermKind::kLiteral;
  t.value_ = std::move(lexical);
  t.language_ = std::move(language);
  t.datatype_ = std::move(datatype);
  return t;
}

std::string Term::to_ntriples() const {
  switch (kind_) {
    case TermKind::kIri:
      return "<" + escape_iri(value_) + ">";
    case TermKind::kBlank:
      return "_:" + value_;
    case TermKind::kLiteral: {
      std::string out = "\"" + escape_string(value_) + "\"";
      if (!language_.empty()) out += "@" + language_;
      if (!datatype_.empty()) out += "^^<" + escape_iri(datatype_) + ">";
      return out;
    }
  }
  return {};
}

std::string display(const Term& term) {
  if (term.is_blank()) return "_:" + term.value();
  return term.value();
}

Triple make_triple(Term subject, Term predicate, Term object) {
  if (subject.is_literal()) throw InvalidArgument("literal in subject position");
  if (!predicate.is_iri()) throw InvalidArgument("predicate must be an IRI");
  return Triple{std::move(subject), std::move(predicate), std::move(object)};
}

void Graph::insert(const Triple& triple) {
  if (triple.subject.is_literal()) throw InvalidArgument("literal in subject position");
  if (!triple.predicate.is_iri()) throw InvalidArgument("predicate must be an IRI");
  if (spo_.insert(triple).second) pos_.insert(triple);
}

void Graph::insert(Term subject, Term predicate, Term object) {
  insert(Triple{std::move(subject), std::move(predicate), std::move(object)});
}

void Graph::merge(const Graph& other) {
  for (const auto& t : other) insert(t);
}

void Graph::set_namespace(std::string iri) {
  if (!is_absolute_iri(iri)) throw InvalidArgument("graph namespace is not an IRI: " + iri);
  namespace_ = std::move(iri);
}

std::vector<Term> Graph::values_of(const Term& subject, const Term& predicate) const {
  std::vector<Term> out;
  for (auto it = spo_.lower_bound(Triple{subject, predicate, Term{}});
       it != spo_.end() && it->subject == subject && it->predicate == predicate; ++it) {
    out.push_back(it->object);
  }
  return out;
}

std::vector<Term> Graph::subjects_of(const Term& predicate, const Term& object) const {
  std::vector<Term> out;
  for (auto it = pos_.lower_bound(Triple{Term{}, predicate, object});
       it != pos_.end() && it->predicate == predicate && it->object == object; ++it) {
    out.push_back(it->subject);
  }
  return out;
}

std::vector<Term> Graph::instances_of(const Term& cls) const {
  return subjects_of(Term::iri(vocab::rdf("type")), cls);
}

std::vector<Term> Graph::subjects_with(const Term& predicate) const {
  std::set<Term> subjects;
  for (auto it = pos_.lower_bound(Triple{Term{}, predicate, Term{}});
       it != pos_.end() && it->predicate == predicate; ++it) {
    subjects.insert(it->subject);
  }
  return {subjects.begin(), subjects.end()};
}

std::vector<Triple> Graph::describe(const Term& subject) const {
  std::vector<Triple> out;
  for (auto it = spo_.lower_bound(Triple{subject, Term{}, Term{}});
       it != spo_.end() && it->subject == subject; ++it) {
    out.push_back(*it);
  }
  return out;
}

bool Graph::has_subject(const Term& subject) const {
  auto it = spo_.lower_bound(Triple{subject, Term{}, Term{}});
  return it != spo_.end() && it->subject == subject;
}

bool Graph::mentions(const Term& term) const {
  if (has_subject(term)) return true;
  return std::any_of(spo_.begin(), spo_.end(), [&](const Triple& t) {
    return t.predicate == term || t.object == term;
  });
}

Format parse_format(std::string_view token) {
  std::string lower(token);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "turtle" || lower == "ttl") return Format::kTurtle;
  if (lower == "ntriples" || lower == "n-triples" || lower == "nt") return Format::kNTriples;
  throw InvalidArgument("unsupported RDF format: '" + std::string(token) + "'");
}

void PrefixRegistry::add(std::string prefix, std::string name_space) {
  if (prefix.empty() || prefix.find('.') != std::string::npos) {
    throw InvalidArgument("prefix must be nonempty and dot-free: '" + prefix + "'");
  }
  if (!is_absolute_iri(name_space)) {
    throw InvalidArgument("namespace for prefix '" + prefix + "' is not an IRI");
  }
  prefixes_[std::move(prefix)] = std::move(name_space);
}

void PrefixRegistry::add_version(const std::string& prefix, std::string version,
                                 std::string name_space) {
  if (prefix.empty() || prefix.find('.') != std::string::npos) {
    throw InvalidArgument("prefix must be nonempty and dot-free: '" + prefix + "'");
  }
  if (version.empty() || version.find('.') != std::string::npos) {
    throw InvalidArgument("version must be nonempty and dot-free: '" + version + "'");
  }
  if (!is_absolute_iri(name_space)) {
    throw InvalidArgument("namespace for " + prefix + "." + version + " is not an IRI");
  }
  versions_[prefix][std::move(version)] = std::move(name_space);
}

std::optional<std::string> PrefixRegistry::name_space(std::string_view prefix) const {
  auto it = prefixes_.find(prefix);
  if (it == prefixes_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::string> PrefixRegistry::versioned(std::string_view prefix,
                                                     std::string_view version) const {
  auto p = versions_.find(prefix);
  if (p == versions_.end()) return std::nullopt;
  auto v = p->second.find(version);
  if (v == p->second.end()) return std::nullopt;
  return v->second;
}

std::optional<std::pair<std::string, std::string>> PrefixRegistry::split(
    std::string_view iri) const {
  const std::pair<const std::string, std::string>* best = nullptr;
  for (const auto& entry : prefixes_) {
    const auto& ns = entry.second;
    if (iri.size() > ns.size() && iri.substr(0, ns.size()) == ns &&
        (best == nullptr || ns.size() > best->second.size())) {
      best = &entry;
    }
  }
  if (best == nullptr) return std::nullopt;
  return std::make_pair(best->first, std::string(iri.substr(best->second.size())));
}

}  // namespace semviz::rdf
