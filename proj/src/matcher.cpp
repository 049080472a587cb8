#include "semviz/matcher.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <functional>
#include <sstream>

#include "semviz/errors.hpp"

namespace semviz::matcher {

using rdf::Term;
namespace vocab = rdf::vocab;

namespace {

std::string_view link_name(LinkKind kind) {
  switch (kind) {
    case LinkKind::kSameAs: return "owl:sameAs";
    case LinkKind::kEquivalentClass: return "owl:equivalentClass";
    case LinkKind::kEquivalentProperty: return "owl:equivalentProperty";
  }
  return {};
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string local_name(const std::string& iri) {
  auto cut = iri.find_last_of("#/:");
  return cut == std::string::npos ? iri : iri.substr(cut + 1);
}

std::string show(const Term& t) {
  if (t.is_iri()) return local_name(t.value());
  return rdf::display(t);
}

std::string format_number(double v) {
  std::ostringstream ss;
  ss << v;
  return ss.str();
}

}  // namespace

AlignmentSet AlignmentSet::from_graph(const rdf::Graph& graph) {
  AlignmentSet out;
  const std::string same = vocab::owl("sameAs");
  const std::string cls = vocab::owl("equivalentClass");
  const std::string prop = vocab::owl("equivalentProperty");
  for (const auto& t : graph) {
    const auto& p = t.predicate.value();
    if (t.object.is_literal()) continue;
    if (p == same) out.add(t.subject, t.object, LinkKind::kSameAs);
    if (p == cls) out.add(t.subject, t.object, LinkKind::kEquivalentClass);
    if (p == prop) out.add(t.subject, t.object, LinkKind::kEquivalentProperty);
  }
  return out;
}

Closure equivalence_closure(const AlignmentSet& set) {
  std::map<Term, LinkKind> role;
  std::map<Term, Term> parent;
  std::function<Term(const Term&)> find = [&](const Term& t) -> Term {
    Term& p = parent.at(t);
    if (p == t) return t;
    Term root = find(p);
    parent.at(t) = root;
    return root;
  };
  for (const auto& link : set.links) {
    for (const Term* t : {&link.a, &link.b}) {
      auto [it, inserted] = role.emplace(*t, link.kind);
      if (!inserted && it->second != link.kind) {
        throw InvalidArgument("term " + rdf::display(*t) + " is linked with both " +
                              std::string(link_name(it->second)) + " and " +
                              std::string(link_name(link.kind)));
      }
      parent.emplace(*t, *t);
    }
    Term ra = find(link.a);
    Term rb = find(link.b);
    if (ra != rb) {
      // Smaller root wins so representatives are the class minimum.
      if (rb < ra) std::swap(ra, rb);
      parent.at(rb) = ra;
    }
  }
  Closure closure;
  for (const auto& [t, p] : parent) {
    Term root = find(t);
    closure.members_[root].push_back(t);
  }
  for (auto& [root, members] : closure.members_) {
    std::sort(members.begin(), members.end());
    for (const auto& m : members) closure.representative_.emplace(m, members.front());
  }
  // Re-key by the class minimum.
  std::map<Term, std::vector<Term>> by_min;
  for (auto& [root, members] : closure.members_) by_min.emplace(members.front(), std::move(members));
  closure.members_ = std::move(by_min);
  return closure;
}

bool Closure::same(const Term& a, const Term& b) const {
  return canonical(a) == canonical(b);
}

const Term& Closure::canonical(const Term& term) const {
  auto it = representative_.find(term);
  return it == representative_.end() ? term : it->second;
}

std::vector<Term> Closure::members(const Term& term) const {
  auto it = members_.find(canonical(term));
  if (it == members_.end()) return {term};
  return it->second;
}

std::vector<std::vector<Term>> Closure::classes() const {
  std::vector<std::vector<Term>> out;
  for (const auto& [min, members] : members_) out.push_back(members);
  return out;
}

void Taxonomy::add_node(const Term& node) { parent_.emplace(node, std::nullopt); }

void Taxonomy::add_label(const Term& node, std::string_view label) {
  add_node(node);
  labels_.emplace(lower(label), node);
}

void Taxonomy::add_edge(const Term& child, const Term& parent) {
  add_node(child);
  add_node(parent);
  auto& slot = parent_.at(child);
  if (slot && *slot != parent) {
    throw InvalidArgument("style " + rdf::display(child) + " has more than one broader style");
  }
  for (Term cur = parent;;) {
    if (cur == child) throw InvalidArgument("style taxonomy has a cycle through " + rdf::display(child));
    const auto& up = parent_.at(cur);
    if (!up) break;
    cur = *up;
  }
  slot = parent;
}

std::optional<Term> Taxonomy::locate(const Term& term, const Closure& closure) const {
  if (term.is_literal()) return locate_label(term.value());
  for (const auto& member : closure.members(term)) {
    if (parent_.contains(member)) return member;
  }
  return std::nullopt;
}

std::optional<Term> Taxonomy::locate_label(std::string_view label) const {
  const std::string key = lower(label);
  if (auto it = labels_.find(key); it != labels_.end()) return it->second;
  for (const auto& [node, parent] : parent_) {
    if (node.is_iri() && lower(local_name(node.value())) == key) return node;
  }
  return std::nullopt;
}

std::vector<Term> Taxonomy::path_to_root(const Term& node) const {
  std::vector<Term> path{node};
  for (auto up = parent_.at(node); up; up = parent_.at(*up)) path.push_back(*up);
  return path;
}

std::optional<int> Taxonomy::distance(const Term& a, const Term& b) const {
  if (!contains(a) || !contains(b)) return std::nullopt;
  auto pa = path_to_root(a);
  auto pb = path_to_root(b);
  for (std::size_t i = 0; i < pa.size(); ++i) {
    auto it = std::find(pb.begin(), pb.end(), pa[i]);
    if (it != pb.end()) return static_cast<int>(i + (it - pb.begin()));
  }
  return std::nullopt;
}

int Taxonomy::diameter() const {
  int best = 0;
  for (const auto& [a, pa] : parent_) {
    for (const auto& [b, pb] : parent_) {
      if (auto d = distance(a, b)) best = std::max(best, *d);
    }
  }
  return best;
}

std::string normalize_color(std::string_view name) {
  auto b = name.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  auto e = name.find_last_not_of(" \t");
  return lower(name.substr(b, e - b + 1));
}

bool is_known_color(std::string_view c) {
  static const std::set<std::string, std::less<>> kColors{
      "aliceblue", "antiquewhite", "aqua", "aquamarine", "azure", "beige", "bisque", "black",
      "blanchedalmond", "blue", "blueviolet", "brown", "burlywood", "cadetblue", "chartreuse",
      "chocolate", "coral", "cornflowerblue", "cornsilk", "crimson", "cyan", "darkblue",
      "darkcyan", "darkgoldenrod", "darkgray", "darkgreen", "darkgrey", "darkkhaki",
      "darkmagenta", "darkolivegreen", "darkorange", "darkorchid", "darkred", "darksalmon",
      "darkseagreen", "darkslateblue", "darkslategray", "darkslategrey", "darkturquoise",
      "darkviolet", "deeppink", "deepskyblue", "dimgray", "dimgrey", "dodgerblue", "firebrick",
      "floralwhite", "forestgreen", "fuchsia", "gainsboro", "ghostwhite", "gold", "goldenrod",
      "gray", "green", "greenyellow", "grey", "honeydew", "hotpink", "indianred", "indigo",
      "ivory", "khaki", "lavender", "lavenderblush", "lawngreen", "lemonchiffon", "lightblue",
      "lightcoral", "lightcyan", "lightgoldenrodyellow", "lightgray", "lightgreen", "lightgrey",
      "lightpink", "lightsalmon", "lightseagreen", "lightskyblue", "lightslategray",
      "lightslategrey", "lightsteelblue", "lightyellow", "lime", "limegreen", "linen", "magenta",
      "maroon", "mediumaquamarine", "mediumblue", "mediumorchid", "mediumpurple",
      "mediumseagreen", "mediumslateblue", "mediumspringgreen", "mediumturquoise",
      "mediumvioletred", "midnightblue", "mintcream", "mistyrose", "moccasin", "navajowhite",
      "navy", "oldlace", "olive", "olivedrab", "orange", "orangered", "orchid", "palegoldenrod",
      "palegreen", "paleturquoise", "palevioletred", "papayawhip", "peachpuff", "peru", "pink",
      "plum", "powderblue", "purple", "rebeccapurple", "red", "rosybrown", "royalblue",
      "saddlebrown", "salmon", "sandybrown", "seagreen", "seashell", "sienna", "silver",
      "skyblue", "slateblue", "slategray", "slategrey", "snow", "springgreen", "steelblue", "tan",
      "teal", "thistle", "tomato", "turquoise", "violet", "wheat", "white", "whitesmoke",
      "yellow", "yellowgreen"};
  return kColors.contains(c);
}

AuxOntologies AuxOntologies::from_graph(const rdf::Graph& graph) {
  AuxOntologies aux;
  const std::string markup = aux_term("markupFormat");
  const std::string broader_style = aux_term("broaderStyle");
  const std::string broader_impairment = aux_term("broaderImpairment");
  const std::string forbids = aux_term("forbidsColor");
  const std::string type = vocab::rdf("type");
  const std::string label = vocab::rdfs("label");

  for (const auto& t : graph) {
    const auto& p = t.predicate.value();
    if (p == markup) {
      if (!t.object.is_literal()) throw InvalidArgument("aux:markupFormat needs a literal");
      aux.protocol_to_markup[t.subject] = parse_markup_format(t.object.value());
    } else if (p == broader_style) {
      aux.aesthetics.add_edge(t.subject, t.object);
    } else if (p == type && t.object.is_iri() && t.object.value() == aux_term("Style")) {
      aux.aesthetics.add_node(t.subject);
    } else if (p == broader_impairment) {
      auto [it, inserted] = aux.impairment_parent.emplace(t.subject, t.object);
      if (!inserted && it->second != t.object) {
        throw InvalidArgument("impairment " + rdf::display(t.subject) + " has more than one broader impairment");
      }
      aux.impairment_rules[t.subject];
      aux.impairment_rules[t.object];
    } else if (p == type && t.object.is_iri() && t.object.value() == aux_term("Impairment")) {
      aux.impairment_rules[t.subject];
    } else if (p == forbids) {
      std::string color = normalize_color(t.object.is_literal() ? t.object.value() : show(t.object));
      if (!is_known_color(color)) {
        throw InvalidArgument("impairment rule names unknown color '" + color + "'");
      }
      aux.impairment_rules[t.subject].insert(color);
    }
  }
  // Labels apply to style nodes only.
  for (const auto& t : graph) {
    if (t.predicate.value() == label && t.object.is_literal() && aux.aesthetics.contains(t.subject)) {
      aux.aesthetics.add_label(t.subject, t.object.value());
    }
  }
  for (const auto& [start, parent] : aux.impairment_parent) {
    std::set<Term> seen{start};
    for (std::optional<Term> cur = parent; cur;) {
      if (!seen.insert(*cur).second) {
        throw InvalidArgument("impairment hierarchy has a cycle through " + rdf::display(start));
      }
      auto it = aux.impairment_parent.find(*cur);
      cur = it == aux.impairment_parent.end() ? std::nullopt : std::optional<Term>(it->second);
    }
  }
  return aux;
}

std::optional<Term> AuxOntologies::locate_protocol(const Term& term, const Closure& closure) const {
  for (const auto& m : closure.members(term)) {
    if (protocol_to_markup.contains(m)) return m;
  }
  return std::nullopt;
}

std::optional<Term> AuxOntologies::locate_impairment(const Term& term, const Closure& closure) const {
  for (const auto& m : closure.members(term)) {
    if (impairment_rules.contains(m)) return m;
  }
  return std::nullopt;
}

std::set<std::string> AuxOntologies::forbidden_colors(const Term& impairment) const {
  std::set<std::string> out;
  std::set<Term> seen;
  for (std::optional<Term> cur = impairment; cur && seen.insert(*cur).second;) {
    if (auto it = impairment_rules.find(*cur); it != impairment_rules.end()) {
      out.insert(it->second.begin(), it->second.end());
    }
    auto up = impairment_parent.find(*cur);
    cur = up == impairment_parent.end() ? std::nullopt : std::optional<Term>(up->second);
  }
  return out;
}

namespace {

bool is_facet(const Term& predicate, std::string_view facet, const Closure& closure) {
  return closure.same(predicate, Term::iri(profile_term(facet)));
}

}  // namespace

UserProfile extract_profile(const rdf::Graph& graph, const Term& subject, const Closure& closure,
                            const AuxOntologies& aux) {
  if (!graph.has_subject(subject)) {
    throw NotFound("profile subject " + rdf::display(subject) + " not found");
  }
  UserProfile profile;
  profile.subject = subject;

  auto canonical_protocol = [&](const Term& v) {
    auto hit = aux.locate_protocol(v, closure);
    return hit ? *hit : closure.canonical(v);
  };
  auto set_protocol = [&](const Term& v) {
    Term c = canonical_protocol(v);
    if (!profile.protocol || c < *profile.protocol) profile.protocol = c;
  };

  for (const auto& t : graph.describe(subject)) {
    if (is_facet(t.predicate, "protocol", closure)) {
      set_protocol(t.object);
    } else if (is_facet(t.predicate, "device", closure)) {
      for (const auto& d : graph.describe(t.object)) {
        if (is_facet(d.predicate, "protocol", closure)) set_protocol(d.object);
      }
    } else if (is_facet(t.predicate, "aesthetic", closure)) {
      auto hit = aux.aesthetics.locate(t.object, closure);
      Term c = hit ? *hit : (t.object.is_literal() ? t.object : closure.canonical(t.object));
      if (!profile.aesthetic || c < *profile.aesthetic) profile.aesthetic = c;
    } else if (is_facet(t.predicate, "impairment", closure)) {
      auto hit = aux.locate_impairment(t.object, closure);
      profile.impairments.insert(hit ? *hit : closure.canonical(t.object));
    }
  }
  return profile;
}

std::optional<Term> find_profile_subject(const rdf::Graph& graph, const Closure& closure) {
  std::vector<Term> subjects;
  std::set<Term> devices;
  for (const auto& t : graph) {
    for (auto facet : {"protocol", "device", "aesthetic", "impairment"}) {
      if (!is_facet(t.predicate, facet, closure)) continue;
      if (subjects.empty() || subjects.back() != t.subject) subjects.push_back(t.subject);
      if (std::string_view(facet) == "device") devices.insert(t.object);
    }
  }
  // A device described in the same graph is not the user.
  for (const auto& s : subjects) {
    if (!devices.contains(s)) return s;
  }
  if (!subjects.empty()) return subjects.front();
  return std::nullopt;
}

MatchScore score(const UserProfile& profile, const Template& tpl, const AuxOntologies& aux,
                 const Closure& closure, const ScoreWeights& weights) {
  MatchScore s;
  const auto& f = tpl.features;
  const std::string coded(to_string(f.markup));

  if (!profile.protocol) {
    s.trace.push_back("protocol: none stated, no markup constraint");
  } else if (auto proto = aux.locate_protocol(*profile.protocol, closure)) {
    MarkupFormat required = aux.protocol_to_markup.at(*proto);
    s.hard_pass = f.markup == required;
    s.trace.push_back("protocol " + show(*proto) + " requires " + std::string(to_string(required)) +
                      "; template coded in " + coded + (s.hard_pass ? ": pass" : ": excluded"));
  } else {
    s.trace.push_back("protocol " + show(*profile.protocol) +
                      " has no markup mapping, no markup constraint");
  }

  if (!profile.aesthetic || f.aesthetic.empty()) {
    s.trace.push_back("aesthetic: facet absent, distance 0");
  } else {
    auto wanted = aux.aesthetics.locate(*profile.aesthetic, closure);
    auto offered = aux.aesthetics.locate_label(f.aesthetic);
    std::optional<int> d;
    if (wanted && offered) d = aux.aesthetics.distance(*wanted, *offered);
    if (d) {
      s.aesthetic_distance = *d;
      s.trace.push_back("aesthetic " + show(*wanted) + " vs " + show(*offered) + ": distance " +
                        std::to_string(*d));
    } else {
      s.aesthetic_distance = aux.aesthetics.diameter();
      s.trace.push_back("aesthetic " + show(*profile.aesthetic) + " vs " + f.aesthetic +
                        ": not comparable in the style taxonomy, using diameter " +
                        std::to_string(s.aesthetic_distance));
    }
  }

  const std::string primary = normalize_color(f.primary_color);
  const std::string secondary = normalize_color(f.secondary_color);
  for (const auto& impairment : profile.impairments) {
    auto forbidden = aux.forbidden_colors(impairment);
    if (forbidden.empty()) continue;
    if (!primary.empty() && forbidden.contains(primary)) {
      ++s.color_hits_primary;
      s.trace.push_back("color conflict: primary color " + primary + " is forbidden by " +
                        show(impairment) + " (+" + format_number(weights.primary_color) +
                        "), kept as a soft penalty");
    }
    if (!secondary.empty() && forbidden.contains(secondary)) {
      ++s.color_hits_secondary;
      s.trace.push_back("color conflict: secondary color " + secondary + " is forbidden by " +
                        show(impairment) + " (+" + format_number(weights.secondary_color) +
                        "), kept as a soft penalty");
    }
  }
  if (profile.impairments.empty()) s.trace.push_back("colors: no impairments stated");

  s.color_penalty = weights.primary_color * s.color_hits_primary +
                    weights.secondary_color * s.color_hits_secondary;
  s.total = weights.aesthetic * s.aesthetic_distance + s.color_penalty;
  s.trace.push_back("total " + format_number(s.total) + (s.hard_pass ? "" : " (excluded)"));
  return s;
}

Selection select_best(const UserProfile& profile, const std::vector<Template>& candidates,
                      const AuxOntologies& aux, const Closure& closure,
                      const ScoreWeights& weights) {
  Selection out;
  for (const auto& c : candidates) {
    out.ranking.push_back(ScoredTemplate{c, score(profile, c, aux, closure, weights)});
  }
  std::sort(out.ranking.begin(), out.ranking.end(), [](const auto& a, const auto& b) {
    if (a.score.hard_pass != b.score.hard_pass) return a.score.hard_pass;
    if (a.score.total != b.score.total) return a.score.total < b.score.total;
    return a.tpl.id() < b.tpl.id();
  });
  if (!out.ranking.empty() && out.ranking.front().score.hard_pass) {
    out.best = out.ranking.front().tpl;
  }
  return out;
}

}  // namespace semviz::matcher
