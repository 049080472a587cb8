#include <gmock/gmock.h>
#include <gtest/gtest.h>

#include "semviz/errors.hpp"
#include "semviz/matcher.hpp"
#include "scoring_oracle.hpp"
#include "test_support.hpp"

namespace semviz::matcher {
namespace {

using rdf::Term;
using testing::z;

Term a(const std::string& local) { return Term::iri("http://purl.org/semviz/a#" + local); }
Term n(int i) { return Term::iri("http://example.org/n" + std::to_string(i)); }

rdf::Graph aux_graph() {
  auto g = testing::fixture_graph("aux/z1.ttl");
  g.merge(testing::fixture_graph("aux/z3.ttl"));
  g.merge(testing::fixture_graph("aux/z5.ttl"));
  return g;
}

struct Fixture {
  rdf::Graph aux_triples = aux_graph();
  AuxOntologies aux = AuxOntologies::from_graph(aux_triples);
  Closure closure = equivalence_closure(AlignmentSet::from_graph(testing::fixture_graph("alignment.ttl")));
  rdf::Graph profile_graph = testing::fixture_graph("profile/user34.ttl");
  std::vector<Template> candidates = registry::TemplateRegistry(testing::fixtures() / "registry")
                                         .snapshot()
                                         ->list_for(parse_element_ref("foaf.Person"), TemplateKind::kOutput);
};

Template with_features(const std::string& id, MarkupFormat markup, const std::string& aesthetic,
                       const std::string& primary, const std::string& secondary) {
  Template t;
  t.provider = id.substr(0, id.find('.'));
  t.design = id.substr(id.find('.') + 1);
  t.target = parse_element_ref("foaf.Person");
  t.features.markup = markup;
  t.features.aesthetic = aesthetic;
  t.features.primary_color = primary;
  t.features.secondary_color = secondary;
  return t;
}

TEST(Closure, Examples) {
  AlignmentSet links;
  links.add(n(3), n(1), LinkKind::kSameAs);
  links.add(n(1), n(2), LinkKind::kSameAs);
  links.add(n(5), n(6), LinkKind::kSameAs);
  auto c = equivalence_closure(links);
  EXPECT_TRUE(c.same(n(3), n(2)));
  EXPECT_FALSE(c.same(n(3), n(5)));
  EXPECT_EQ(c.canonical(n(3)), n(1));
  EXPECT_EQ(c.canonical(n(9)), n(9));
  EXPECT_THAT(c.members(n(2)), ::testing::ElementsAre(n(1), n(2), n(3)));
  EXPECT_THAT(c.members(n(9)), ::testing::ElementsAre(n(9)));
  EXPECT_EQ(c.classes().size(), 2u);
}

TEST(Closure, MixedKindsRejected) {
  AlignmentSet links;
  links.add(n(1), n(2), LinkKind::kSameAs);
  links.add(n(2), n(3), LinkKind::kEquivalentClass);
  EXPECT_THROW(equivalence_closure(links), InvalidArgument);
}

TEST(Closure, FromGraphReadsAllThreeLinkKinds) {
  auto links = AlignmentSet::from_graph(testing::fixture_graph("alignment.ttl"));
  EXPECT_EQ(links.links.size(), 7u);
  auto c = equivalence_closure(links);
  EXPECT_TRUE(c.same(a("speaks"), Term::iri(profile_term("protocol"))));
  EXPECT_TRUE(c.same(a("Simple"), z(3, "simple")));
}

TEST(Closure, MatchesNaiveOracleOnRandomSets) {
  std::mt19937 rng(42);
  for (int round = 0; round < 200; ++round) {
    std::size_t size = 2 + rng() % 30;
    std::size_t count = rng() % (size * 2);
    std::vector<std::pair<int, int>> pairs;
    AlignmentSet links;
    for (std::size_t i = 0; i < count; ++i) {
      int x = static_cast<int>(rng() % size);
      int y = static_cast<int>(rng() % size);
      pairs.emplace_back(x, y);
      links.add(n(x), n(y), LinkKind::kSameAs);
    }
    auto oracle = testing::naive_closure(size, pairs);
    auto c = equivalence_closure(links);
    for (std::size_t x = 0; x < size; ++x) {
      ASSERT_TRUE(c.same(n(x), n(x)));
      for (std::size_t y = 0; y < size; ++y) {
        ASSERT_EQ(c.same(n(x), n(y)), oracle[x][y]) << "round " << round << " " << x << "," << y;
        ASSERT_EQ(c.same(n(x), n(y)), c.same(n(y), n(x)));
        ASSERT_EQ(c.same(n(x), n(y)), c.canonical(n(x)) == c.canonical(n(y)));
      }
    }
  }
}

TEST(Taxonomy, DistanceAndDiameter) {
  Fixture f;
  const auto& t = f.aux.aesthetics;
  EXPECT_EQ(t.size(), 6u);
  EXPECT_EQ(t.distance(z(3, "simple"), z(3, "minimal")), 1);
  EXPECT_EQ(t.distance(z(3, "minimal"), z(3, "simple")), 1);
  EXPECT_EQ(t.distance(z(3, "simple"), z(3, "simple")), 0);
  EXPECT_EQ(t.distance(z(3, "simple"), z(3, "baroque")), 4);
  EXPECT_EQ(t.distance(z(3, "minimal"), z(3, "baroque")), 5);
  EXPECT_EQ(t.diameter(), 5);
  testing::ScoringOracle oracle(f.aux_triples);
  for (auto x : {"Style", "simple", "minimal", "ornate", "decorative", "baroque"}) {
    for (auto y : {"Style", "simple", "minimal", "ornate", "decorative", "baroque"}) {
      EXPECT_EQ(t.distance(z(3, x), z(3, y)), oracle.distance(z(3, x), z(3, y))) << x << " " << y;
    }
  }
  EXPECT_EQ(t.diameter(), oracle.diameter());
}

TEST(Taxonomy, SeparateTreesAreNotComparable) {
  Taxonomy t;
  t.add_edge(n(1), n(0));
  t.add_edge(n(3), n(2));
  EXPECT_EQ(t.distance(n(1), n(3)), std::nullopt);
  EXPECT_EQ(t.diameter(), 1);
}

TEST(Taxonomy, RejectsSecondParentAndCycle) {
  Taxonomy t;
  t.add_edge(n(1), n(0));
  EXPECT_THROW(t.add_edge(n(1), n(2)), InvalidArgument);
  t.add_edge(n(2), n(1));
  EXPECT_THROW(t.add_edge(n(0), n(2)), InvalidArgument);
}

TEST(Taxonomy, LocateByLabelAndLocalName) {
  Fixture f;
  EXPECT_EQ(f.aux.aesthetics.locate_label("Minimal"), z(3, "minimal"));
  EXPECT_EQ(f.aux.aesthetics.locate(Term::literal("baroque"), f.closure), z(3, "baroque"));
  EXPECT_EQ(f.aux.aesthetics.locate(a("Simple"), f.closure), z(3, "simple"));
  EXPECT_EQ(f.aux.aesthetics.locate_label("rococo"), std::nullopt);
}

TEST(Aux, Errors) {
  auto parse = [](const std::string& ttl) {
    return AuxOntologies::from_graph(rdf::parse_graph(ttl, rdf::Format::kTurtle));
  };
  const std::string pre = "@prefix aux: <http://purl.org/semviz/aux#> . @prefix e: <http://example.org/> .\n";
  EXPECT_THROW(parse(pre + "e:i aux:forbidsColor \"reddish\" ."), InvalidArgument);
  EXPECT_THROW(parse(pre + "e:p aux:markupFormat \"WML\" ."), InvalidArgument);
  EXPECT_THROW(parse(pre + "e:a aux:broaderStyle e:b . e:b aux:broaderStyle e:a ."), InvalidArgument);
  EXPECT_THROW(parse(pre + "e:a aux:broaderImpairment e:b . e:b aux:broaderImpairment e:a ."),
               InvalidArgument);
  EXPECT_THROW(parse(pre + "e:a aux:broaderImpairment e:b , e:c ."), InvalidArgument);
  EXPECT_NO_THROW(parse(pre + "e:i aux:forbidsColor \" Red \" ."));
}

TEST(Aux, ForbiddenColorsInherit) {
  Fixture f;
  EXPECT_EQ(f.aux.forbidden_colors(z(5, "RedGreenColorBlindness")), (std::set<std::string>{"green", "red"}));
  EXPECT_TRUE(f.aux.forbidden_colors(z(5, "LowVision")).empty());
  auto g = aux_graph();
  g.insert(z(5, "ColorBlindness"), Term::iri(aux_term("forbidsColor")), Term::literal("orange"));
  auto more = AuxOntologies::from_graph(g);
  EXPECT_EQ(more.forbidden_colors(z(5, "RedGreenColorBlindness")),
            (std::set<std::string>{"green", "orange", "red"}));
}

TEST(Colors, Normalize) {
  EXPECT_EQ(normalize_color("  Red "), "red");
  EXPECT_TRUE(is_known_color("rebeccapurple"));
  EXPECT_TRUE(is_known_color("gold"));
  EXPECT_FALSE(is_known_color("reddish"));
}

TEST(Profile, User34) {
  Fixture f;
  EXPECT_EQ(find_profile_subject(f.profile_graph, f.closure), a("user34"));
  auto p = extract_profile(f.profile_graph, a("user34"), f.closure, f.aux);
  EXPECT_EQ(p.protocol, z(1, "WAP2.0"));
  EXPECT_EQ(p.aesthetic, z(3, "simple"));
  EXPECT_THAT(p.impairments, ::testing::ElementsAre(z(5, "RedGreenColorBlindness")));
}

TEST(Profile, SynonymsMatchPreCanonicalizedGraph) {
  Fixture f;
  rdf::Graph direct;
  direct.insert(a("user34"), Term::iri(profile_term("protocol")), z(1, "WAP2.0"));
  direct.insert(a("user34"), Term::iri(profile_term("aesthetic")), z(3, "simple"));
  direct.insert(a("user34"), Term::iri(profile_term("impairment")), z(5, "RedGreenColorBlindness"));
  EXPECT_EQ(extract_profile(direct, a("user34"), f.closure, f.aux),
            extract_profile(f.profile_graph, a("user34"), f.closure, f.aux));
}

TEST(Profile, EmptyAndMissing) {
  Fixture f;
  rdf::Graph g;
  g.insert(a("u"), Term::iri("http://example.org/likes"), Term::literal("tea"));
  auto p = extract_profile(g, a("u"), f.closure, f.aux);
  EXPECT_FALSE(p.protocol);
  EXPECT_FALSE(p.aesthetic);
  EXPECT_TRUE(p.impairments.empty());
  EXPECT_EQ(find_profile_subject(g, f.closure), std::nullopt);
  EXPECT_THROW(extract_profile(g, a("nobody"), f.closure, f.aux), NotFound);
}

TEST(Score, Design67) {
  Fixture f;
  auto p = extract_profile(f.profile_graph, a("user34"), f.closure, f.aux);
  auto s = score(p, with_features("user9.design67", MarkupFormat::kXhtml, "minimal", "red", "yellow"), f.aux,
                 f.closure);
  EXPECT_TRUE(s.hard_pass);
  EXPECT_EQ(s.aesthetic_distance, 1);
  EXPECT_EQ(s.color_hits_primary, 1);
  EXPECT_EQ(s.color_hits_secondary, 0);
  EXPECT_DOUBLE_EQ(s.color_penalty, 2.0);
  EXPECT_DOUBLE_EQ(s.total, 3.0);
  EXPECT_THAT(s.trace, ::testing::Contains(::testing::HasSubstr(
                           "color conflict: primary color red is forbidden by RedGreenColorBlindness (+2), kept as a soft penalty")));
}

TEST(Score, WrongMarkupFailsHardFilter) {
  Fixture f;
  auto p = extract_profile(f.profile_graph, a("user34"), f.closure, f.aux);
  auto s = score(p, with_features("user5.plain", MarkupFormat::kHtml, "simple", "black", "white"), f.aux, f.closure);
  EXPECT_FALSE(s.hard_pass);
  EXPECT_DOUBLE_EQ(s.total, 0.0);
  EXPECT_THAT(s.trace.back(), ::testing::HasSubstr("excluded"));
}

TEST(Score, EmptyProfileScoresZero) {
  Fixture f;
  UserProfile p;
  p.subject = a("u");
  for (const auto& c : f.candidates) {
    auto s = score(p, c, f.aux, f.closure);
    EXPECT_TRUE(s.hard_pass);
    EXPECT_DOUBLE_EQ(s.total, 0.0);
  }
}

TEST(Score, UnknownAestheticUsesDiameter) {
  Fixture f;
  UserProfile p;
  p.aesthetic = z(3, "simple");
  auto s = score(p, with_features("u.d", MarkupFormat::kHtml, "rococo", "", ""), f.aux, f.closure);
  EXPECT_EQ(s.aesthetic_distance, 5);
  EXPECT_THAT(s.trace, ::testing::Contains(::testing::HasSubstr("not comparable")));
}

TEST(SelectBest, User34PicksDesign67) {
  Fixture f;
  auto p = extract_profile(f.profile_graph, a("user34"), f.closure, f.aux);
  auto sel = select_best(p, f.candidates, f.aux, f.closure);
  ASSERT_TRUE(sel.best);
  EXPECT_EQ(sel.best->id(), "user9.design67");
  ASSERT_EQ(sel.ranking.size(), 3u);
  EXPECT_EQ(sel.ranking[1].tpl.id(), "user7.ornate");
  EXPECT_DOUBLE_EQ(sel.ranking[1].score.total, 4.0);
  EXPECT_FALSE(sel.ranking[2].score.hard_pass);

  // Brute force: every candidate scored independently from the raw triples.
  testing::ScoringOracle oracle(f.aux_triples);
  std::optional<std::string> expected;
  double best = 0;
  for (const auto& c : f.candidates) {
    auto o = oracle.score(z(1, "WAP2.0"), z(3, "simple"), {z(5, "RedGreenColorBlindness")}, c.features);
    if (o.pass && (!expected || o.total < best || (o.total == best && c.id() < *expected))) {
      expected = c.id();
      best = o.total;
    }
  }
  EXPECT_EQ(sel.best->id(), expected);
}

TEST(SelectBest, NothingPassesMeansNoBest) {
  Fixture f;
  UserProfile p;
  p.protocol = z(1, "HTTP11");
  std::vector<Template> only{with_features("u.x", MarkupFormat::kXhtml, "", "", "")};
  auto sel = select_best(p, only, f.aux, f.closure);
  EXPECT_FALSE(sel.best);
  EXPECT_EQ(sel.ranking.size(), 1u);
  EXPECT_FALSE(select_best(p, {}, f.aux, f.closure).best);
}

TEST(SelectBest, TieBreaksOnIdentifier) {
  Fixture f;
  UserProfile p;
  std::vector<Template> ts{with_features("b.x", MarkupFormat::kHtml, "", "", ""),
                           with_features("a.z", MarkupFormat::kHtml, "", "", ""),
                           with_features("a.y", MarkupFormat::kHtml, "", "", "")};
  auto sel = select_best(p, ts, f.aux, f.closure);
  EXPECT_EQ(sel.ranking[0].tpl.id(), "a.y");
  EXPECT_EQ(sel.ranking[1].tpl.id(), "a.z");
  EXPECT_EQ(sel.ranking[2].tpl.id(), "b.x");
}

std::vector<Template> random_candidates(std::mt19937& rng, int count) {
  static const std::vector<std::string> styles{"simple", "minimal", "ornate", "decorative", "baroque", "rococo", ""};
  static const std::vector<std::string> colors{"red", "green", "blue", "yellow", "gold", ""};
  std::vector<Template> out;
  for (int i = 0; i < count; ++i) {
    out.push_back(with_features("p" + std::to_string(rng() % 4) + ".d" + std::to_string(i),
                                rng() % 2 ? MarkupFormat::kHtml : MarkupFormat::kXhtml,
                                styles[rng() % styles.size()], colors[rng() % colors.size()],
                                colors[rng() % colors.size()]));
  }
  return out;
}

UserProfile random_profile(std::mt19937& rng) {
  static const std::vector<std::string> styles{"simple", "minimal", "ornate", "decorative", "baroque", "Style"};
  UserProfile p;
  p.subject = a("u");
  if (rng() % 3) p.protocol = rng() % 2 ? z(1, "WAP2.0") : z(1, "HTTP11");
  if (rng() % 3) p.aesthetic = z(3, styles[rng() % styles.size()]);
  if (rng() % 2) p.impairments.insert(z(5, "RedGreenColorBlindness"));
  if (rng() % 3 == 0) p.impairments.insert(z(5, "LowVision"));
  return p;
}

TEST(SelectBest, RandomAgainstOracle) {
  Fixture f;
  testing::ScoringOracle oracle(f.aux_triples);
  std::mt19937 rng(8);
  for (int round = 0; round < 100; ++round) {
    auto p = random_profile(rng);
    auto cs = random_candidates(rng, 1 + static_cast<int>(rng() % 8));
    std::vector<Term> imps(p.impairments.begin(), p.impairments.end());
    for (const auto& c : cs) {
      auto s = score(p, c, f.aux, f.closure);
      auto o = oracle.score(p.protocol, p.aesthetic, imps, c.features);
      ASSERT_EQ(s.hard_pass, o.pass) << c.id();
      ASSERT_DOUBLE_EQ(s.total, o.total) << c.id();
    }
  }
}

TEST(SelectBest, Properties) {
  Fixture f;
  std::mt19937 rng(99);
  for (int round = 0; round < 100; ++round) {
    auto p = random_profile(rng);
    auto cs = random_candidates(rng, 2 + static_cast<int>(rng() % 8));
    auto sel = select_best(p, cs, f.aux, f.closure);

    // Hard filter soundness: the winner passes and nothing excluded outranks a pass.
    if (sel.best) {
      auto s = score(p, *sel.best, f.aux, f.closure);
      EXPECT_TRUE(s.hard_pass);
    }
    bool seen_fail = false;
    for (const auto& r : sel.ranking) {
      if (!r.score.hard_pass) seen_fail = true;
      else EXPECT_FALSE(seen_fail);
    }

    // Scaling every weight by the same factor keeps the ranking.
    auto scaled = select_best(p, cs, f.aux, f.closure, ScoreWeights{3.0, 6.0, 3.0});
    for (std::size_t i = 0; i < cs.size(); ++i) {
      EXPECT_EQ(scaled.ranking[i].tpl.id(), sel.ranking[i].tpl.id());
    }

    // Candidate order does not matter.
    auto shuffled = cs;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    auto again = select_best(p, shuffled, f.aux, f.closure);
    for (std::size_t i = 0; i < cs.size(); ++i) {
      EXPECT_EQ(again.ranking[i].tpl.id(), sel.ranking[i].tpl.id());
    }
  }
}

TEST(SelectBest, RedundantSameAsChangesNothing) {
  Fixture f;
  auto alignment = testing::fixture_graph("alignment.ttl");
  const Term same = Term::iri("http://www.w3.org/2002/07/owl#sameAs");
  alignment.insert(z(3, "simple"), same, a("Simple"));
  alignment.insert(a("Simple"), same, a("Simple"));
  alignment.insert(a("WAP2"), same, z(1, "WAP2.0"));
  auto closure = equivalence_closure(AlignmentSet::from_graph(alignment));
  auto before = select_best(extract_profile(f.profile_graph, a("user34"), f.closure, f.aux), f.candidates,
                            f.aux, f.closure);
  auto after =
      select_best(extract_profile(f.profile_graph, a("user34"), closure, f.aux), f.candidates, f.aux, closure);
  ASSERT_EQ(before.ranking.size(), after.ranking.size());
  for (std::size_t i = 0; i < before.ranking.size(); ++i) {
    EXPECT_EQ(before.ranking[i].tpl.id(), after.ranking[i].tpl.id());
    EXPECT_EQ(before.ranking[i].score.total, after.ranking[i].score.total);
  }
}

}  // namespace
}  // namespace semviz::matcher
