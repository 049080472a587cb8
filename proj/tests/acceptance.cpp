// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <httplib.h>

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <regex>
#include <thread>

#include "golden.hpp"
#include "scoring_oracle.hpp"
#include "semviz/channel.hpp"
#include "semviz/errors.hpp"
#include "semviz/markup.hpp"
#include "semviz/template_engine.hpp"
#include "test_support.hpp"

using namespace semviz;
using rdf::Term;
using testing::TempDir;

namespace {

// Pinned limits.
constexpr double kProtocolBudgetSeconds = 5.0;
constexpr int kMinProtocolCases = 20;
constexpr std::size_t kMinGoldenCases = 10;
constexpr int kEquivalenceGraphs = 5;
constexpr int kClosureSets = 200;
constexpr int kClosureMaxTerms = 100;
constexpr int kInputRoundTrips = 20;
constexpr int kPersistedTemplates = 25;
constexpr int kFuzzInputs = 10000;

struct Outcome {
  bool pass;
  std::string detail;
};

// Serves fixture and generated graphs to the engine over real HTTP.
class Origin {
 public:
  Origin() {
    server_.Get(R"(/(.+))", [this](const httplib::Request& req, httplib::Response& res) {
      std::lock_guard lock(mu_);
      auto it = files_.find(req.matches[1]);
      if (it == files_.end()) {
        res.status = 404;
        return;
      }
      res.set_content(it->second, "text/turtle");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~Origin() {
    server_.stop();
    thread_.join();
  }
  std::string put(const std::string& name, std::string body) {
    std::lock_guard lock(mu_);
    files_[name] = std::move(body);
    return "http://127.0.0.1:" + std::to_string(port_) + "/" + name;
  }

 private:
  httplib::Server server_;
  std::mutex mu_;
  std::map<std::string, std::string> files_;
  int port_ = 0;
  std::thread thread_;
};

class Channel {
 public:
  explicit Channel(const Engine& engine) : server_(engine) {
    port_ = server_.bind("127.0.0.1", 0);
    thread_ = std::thread([this] { server_.listen(); });
    server_.wait_until_ready();
  }
  ~Channel() {
    server_.stop();
    thread_.join();
  }
  httplib::Client client() const { return httplib::Client("127.0.0.1", port_); }

 private:
  channel::HttpServer server_;
  int port_ = 0;
  std::thread thread_;
};

std::string people() { return testing::read_file(testing::fixtures() / "data/people.ttl"); }

Template input_card() {
  Template t;
  t.provider = "user9";
  t.design = "form";
  t.target = parse_element_ref("foaf.Person");
  t.features.kind = TemplateKind::kInput;
  t.body = "<label>Name [{OmemoGetP propName='foaf.name'}]</label>\n";
  return t;
}

Outcome protocol_conformance() {
  TempDir dir;
  Engine engine = testing::fixture_engine(dir.path());
  engine.templates->register_template(input_card());
  Origin origin;
  const std::string source = origin.put("people.ttl", people());
  const std::string profile = origin.put("user34.ttl", testing::read_file(testing::fixtures() / "profile/user34.ttl"));
  Channel channel(engine);
  auto client = channel.client();

  struct Case {
    std::string label;
    bool post;
    httplib::Params params;
    bool valid;
    std::string format = "HTML";
  };
  std::vector<Case> cases;

  // Every combination of action, method, provider, format and profile.
  for (std::string action : {"renderOutput", "renderInput"}) {
    for (bool post : {false, true}) {
      for (bool provider : {false, true}) {
        for (std::string format : {"HTML", "XHTML"}) {
          for (bool with_profile : {false, true}) {
            httplib::Params p{{"action", action}, {"object", "foaf.Person"}, {"outputFormat", format}};
            if (action == "renderOutput") {
              if (post) p.emplace("data", people());
              else p.emplace("source", source);
            }
            if (provider) p.emplace("provider", action == "renderOutput" ? "user9.design67" : "user9.form");
            if (with_profile) p.emplace("userProfile", profile);
            std::string label = action + (post ? " POST" : " GET") + (provider ? " provider" : "") + " " + format +
                                (with_profile ? " profile" : "");
            cases.push_back({label, post, p, !(post && with_profile), format});
          }
        }
      }
    }
  }
  cases.push_back({"renderInput POST submission", true,
                   {{"action", "renderInput"}, {"object", "foaf.Person"}, {"prop:foaf.name", "Ana"}}, true});

  // Mandatory-parameter violations.
  const httplib::Params ok{{"action", "renderOutput"}, {"object", "foaf.Person"}, {"source", source}};
  auto without = [&](const std::string& key) {
    auto p = ok;
    p.erase(key);
    return p;
  };
  auto with = [&](httplib::Params p, const std::string& key, const std::string& value) {
    p.erase(key);
    p.emplace(key, value);
    return p;
  };
  cases.push_back({"missing action", false, without("action"), false});
  cases.push_back({"unknown action", false, with(ok, "action", "renderSideways"), false});
  cases.push_back({"missing object", false, without("object"), false});
  cases.push_back({"malformed object", false, with(ok, "object", "Person"), false});
  cases.push_back({"GET renderOutput without source", false, without("source"), false});
  cases.push_back({"POST with source", true, with(ok, "data", people()), false});
  cases.push_back({"POST renderOutput without data", true, without("source"), false});
  cases.push_back({"provider without dot", false, with(ok, "provider", "user9"), false});
  cases.push_back({"provider with two dots", false, with(ok, "provider", "a.b.c"), false});
  cases.push_back({"unknown outputFormat", false, with(ok, "outputFormat", "WML"), false});
  cases.push_back({"non-http source", false, with(ok, "source", "file:///etc/passwd"), false});
  cases.push_back({"unknown provider", false, with(ok, "provider", "user9.nothing"), false});
  auto dup = ok;
  dup.emplace("object", "foaf.Agent");
  cases.push_back({"duplicate object", false, dup, false});

  auto start = std::chrono::steady_clock::now();
  int failures = 0;
  std::string first_failure;
  for (const auto& c : cases) {
    auto res = c.post ? client.Post("/render", c.params) : client.Get("/render", c.params, httplib::Headers{});
    bool good = false;
    std::string got = res ? std::to_string(res->status) + " " + res->get_header_value("Content-Type") : "no response";
    if (res) {
      const std::string want_type(channel::content_type_for(parse_markup_format(c.format)));
      if (c.valid) {
        good = res->status == 200 && res->get_header_value("Content-Type") == want_type;
        if (good && c.format == "XHTML") good = markup::well_formed_xml(res->body);
      } else {
        good = res->status >= 400 && res->status < 500;
      }
    }
    if (!good) {
      ++failures;
      if (first_failure.empty()) first_failure = c.label + " -> " + got;
    }
  }
  double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  char detail[200];
  std::snprintf(detail, sizeof detail, "%zu cases, %d wrong, %.2f s", cases.size(), failures, seconds);
  std::string text = detail;
  if (!first_failure.empty()) text += "; first: " + first_failure;
  return {failures == 0 && static_cast<int>(cases.size()) >= kMinProtocolCases && seconds < kProtocolBudgetSeconds,
          text};
}

Outcome golden_suite() {
  auto cases = testing::golden_cases();
  int passed = 0;
  std::string first;
  for (const auto& dir : cases) {
    auto o = testing::run_golden_case(dir);
    if (o.pass) ++passed;
    else if (first.empty()) first = o.name + ": " + o.detail;
  }
  std::string detail = std::to_string(passed) + "/" + std::to_string(cases.size()) + " byte-exact";
  if (!first.empty()) detail += "; first: " + first;
  return {cases.size() >= kMinGoldenCases && passed == static_cast<int>(cases.size()), detail};
}

Outcome reproduction() {
  TempDir dir;
  Engine engine = testing::fixture_engine(dir.path());
  auto profile_graph = testing::fixture_graph("profile/user34.ttl");
  auto subject = matcher::find_profile_subject(profile_graph, engine.closure);
  if (!subject) return {false, "no profile subject found"};
  auto profile = matcher::extract_profile(profile_graph, *subject, engine.closure, engine.aux);
  auto candidates = engine.templates->snapshot()->list_for(parse_element_ref("foaf.Person"), TemplateKind::kOutput);
  auto selection = matcher::select_best(profile, candidates, engine.aux, engine.closure);
  if (!selection.best) return {false, "no template selected"};

  // Oracle over the raw auxiliary triples with the profile stated directly.
  rdf::Graph aux;
  for (auto f : {"aux/z1.ttl", "aux/z3.ttl", "aux/z5.ttl"}) aux.merge(testing::fixture_graph(f));
  testing::ScoringOracle oracle(aux);
  std::optional<std::string> oracle_best;
  double oracle_total = 0;
  bool scores_agree = true;
  for (const auto& c : candidates) {
    auto o = oracle.score(testing::z(1, "WAP2.0"), testing::z(3, "simple"),
                          {testing::z(5, "RedGreenColorBlindness")}, c.features);
    auto s = matcher::score(profile, c, engine.aux, engine.closure);
    if (o.pass != s.hard_pass || o.total != s.total) scores_agree = false;
    if (o.pass && (!oracle_best || o.total < oracle_total || (o.total == oracle_total && c.id() < *oracle_best))) {
      oracle_best = c.id();
      oracle_total = o.total;
    }
  }
  bool red = false;
  for (const auto& r : selection.ranking) {
    if (r.tpl.id() != selection.best->id()) continue;
    for (const auto& line : r.score.trace) {
      if (line.find("color conflict: primary color red") != std::string::npos) red = true;
    }
  }
  std::string detail = "selected " + selection.best->id() + ", oracle " + oracle_best.value_or("none") +
                       (red ? ", red conflict traced" : ", red conflict missing from trace") +
                       (scores_agree ? "" : ", per-candidate scores disagree with oracle");
  return {selection.best->id() == "user9.design67" && oracle_best == "user9.design67" && red && scores_agree,
          detail};
}

// A small people graph with random names, nicknames and acquaintances.
rdf::Graph random_people(std::mt19937& rng) {
  static const std::vector<std::string> names{"Ana", "Bo", "Chloé", "D'Arcy", "Eve & Co", "<Fay>", "Gus \"G\""};
  const Term type = Term::iri(rdf::vocab::rdf("type"));
  rdf::Graph g;
  int count = 1 + static_cast<int>(rng() % 5);
  for (int i = 0; i < count; ++i) {
    Term person = rng() % 4 == 0 ? Term::blank("p" + std::to_string(i)) : testing::ex("p" + std::to_string(i));
    g.insert(person, type, testing::foaf("Person"));
    g.insert(person, testing::foaf("name"), Term::literal(names[rng() % names.size()]));
    if (rng() % 2) g.insert(person, testing::foaf("nick"), Term::literal(names[rng() % names.size()], "en"));
    if (i > 0 && rng() % 2) g.insert(person, testing::foaf("knows"), testing::ex("p0"));
  }
  return g;
}

Outcome get_post_equivalence() {
  TempDir dir;
  Engine engine = testing::fixture_engine(dir.path());
  Origin origin;
  Channel channel(engine);
  auto client = channel.client();
  std::mt19937 rng(2024);
  int compared = 0;
  std::string first;
  for (int i = 0; i < kEquivalenceGraphs; ++i) {
    std::string text = rdf::serialize_graph(random_people(rng), rdf::Format::kTurtle);
    std::string url = origin.put("g" + std::to_string(i) + ".ttl", text);
    for (std::string provider : {"", "user9.design67"}) {
      httplib::Params common{{"action", "renderOutput"}, {"object", "foaf.Person"}};
      if (!provider.empty()) common.emplace("provider", provider);
      auto g = common;
      g.emplace("source", url);
      auto p = common;
      p.emplace("data", text);
      auto a = client.Get("/render", g, httplib::Headers{});
      auto b = client.Post("/render", p);
      ++compared;
      if (!a || !b || a->status != 200 || b->status != 200 || a->body != b->body) {
        if (first.empty()) first = "graph " + std::to_string(i) + (provider.empty() ? " default" : " " + provider);
      }
    }
  }
  return {first.empty(), std::to_string(compared) + " renderings compared" + (first.empty() ? "" : "; differs: " + first)};
}

Outcome closure_properties() {
  std::mt19937 rng(77);
  auto term = [](int i) { return testing::ex("t" + std::to_string(i)); };
  int wrong = 0;
  for (int round = 0; round < kClosureSets; ++round) {
    const int size = 1 + static_cast<int>(rng() % kClosureMaxTerms);
    const int count = static_cast<int>(rng() % (size + size / 2 + 1));
    const auto kind = static_cast<matcher::LinkKind>(rng() % 3);
    matcher::AlignmentSet links;
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < count; ++i) {
      int x = static_cast<int>(rng() % size);
      int y = static_cast<int>(rng() % size);
      pairs.emplace_back(x, y);
      links.add(term(x), term(y), kind);
    }
    auto oracle = testing::naive_closure(size, pairs);
    auto closure = matcher::equivalence_closure(links);
    bool ok = true;
    for (int x = 0; x < size && ok; ++x) {
      if (!closure.same(term(x), term(x))) ok = false;
      for (int y = 0; y < size && ok; ++y) {
        bool s = closure.same(term(x), term(y));
        if (s != oracle[x][y] || s != closure.same(term(y), term(x))) ok = false;
        if (s != (closure.canonical(term(x)) == closure.canonical(term(y)))) ok = false;
      }
    }
    for (int k = 0; k < 2000 && ok; ++k) {
      int x = static_cast<int>(rng() % size), y = static_cast<int>(rng() % size), z = static_cast<int>(rng() % size);
      if (closure.same(term(x), term(y)) && closure.same(term(y), term(z)) && !closure.same(term(x), term(z))) {
        ok = false;
      }
    }
    if (!ok) ++wrong;
  }
  return {wrong == 0, std::to_string(kClosureSets) + " sets up to " + std::to_string(kClosureMaxTerms) +
                          " terms, " + std::to_string(wrong) + " disagree with the fixpoint oracle or break an axiom"};
}

Outcome input_round_trip() {
  TempDir dir;
  Engine engine = testing::fixture_engine(dir.path());
  static const std::vector<std::string> values{"Ana", "a & b", "<b>bold</b>", "quote \" here", "it's", "ünï",
                                               "tab\tin", "42", "mailto:x@example.org"};
  std::mt19937 rng(31);
  auto form = channel::serve_render(engine, channel::Method::kGet, {{"action", "renderInput"}, {"object", "foaf.Person"}});
  std::vector<std::string> names;
  std::regex field(R"re(name="(prop:[^"]+)")re");
  for (std::sregex_iterator it(form.body.begin(), form.body.end(), field), end; it != end; ++it) {
    names.push_back((*it)[1]);
  }
  if (form.status != 200 || names.empty()) return {false, "form has no prop fields"};

  int lost = 0;
  for (int round = 0; round < kInputRoundTrips; ++round) {
    channel::Params submission{{"action", "renderInput"}, {"object", "foaf.Person"}};
    std::map<std::string, std::string> fields;
    for (const auto& n : names) {
      if (rng() % 3 == 0 && !fields.empty()) continue;
      fields[n] = values[rng() % values.size()] + " " + std::to_string(round);
      submission.emplace_back(n, fields[n]);
    }
    auto stored = channel::serve_render(engine, channel::Method::kPost, submission);
    rdf::Graph graph = tmpl::form_to_graph(fields, parse_element_ref("foaf.Person"), engine.prefixes);
    auto shown = channel::serve_render(engine, channel::Method::kPost,
                                       {{"action", "renderOutput"},
                                        {"object", "foaf.Person"},
                                        {"data", rdf::serialize_graph(graph, rdf::Format::kTurtle)}});
    for (const auto& [n, value] : fields) {
      const std::string want = markup::escape(value);
      if (stored.status != 200 || shown.status != 200 || shown.body.find(want) == std::string::npos ||
          stored.body.find(want) == std::string::npos) {
        ++lost;
      }
    }
  }
  auto submissions = engine.templates->submissions();
  bool all_stored = static_cast<int>(submissions.size()) == kInputRoundTrips;
  return {lost == 0 && all_stored, std::to_string(kInputRoundTrips) + " submissions over " +
                                       std::to_string(names.size()) + " fields, " + std::to_string(lost) +
                                       " literals lost, " + std::to_string(submissions.size()) + " stored"};
}

Outcome persistence() {
  TempDir dir;
  std::mt19937 rng(25);
  std::vector<Template> registered;
  rdf::Graph before;
  {
    registry::TemplateRegistry reg(dir.path() / "store");
    for (int i = 0; i < kPersistedTemplates; ++i) {
      registered.push_back(testing::random_template(rng, i));
      reg.register_template(registered.back());
    }
    before = reg.snapshot()->metadata_graph();
  }
  registry::TemplateRegistry again(dir.path() / "store");
  int differing = 0;
  for (const auto& t : registered) {
    const Template* back = again.snapshot()->find(t.provider, t.design);
    if (back == nullptr || back->body != t.body || !(*back == t)) ++differing;
  }
  bool iso = testing::isomorphic(before, again.snapshot()->metadata_graph());
  return {differing == 0 && iso && again.snapshot()->size() == registered.size(),
          std::to_string(kPersistedTemplates) + " templates, " + std::to_string(differing) + " differ after restart, " +
              (iso ? "metadata isomorphic" : "metadata differs")};
}

Outcome parser_fuzz() {
  static const std::vector<std::string> pieces{
      "[{", "}]", "Omemo", "GetP", "BaseURL", "GetLink", "ConditionalVizFor", " propName='foaf.name'",
      " relationName='foaf.knows'", " designerID='u'", " designID='d'", "'", "=", " ", "[", "]", "{", "}",
      "foaf.", "<p>", "\n", "\xC3\xA9", "\xFF"};
  std::mt19937 rng(1234);
  int accepted = 0;
  int broken = 0;
  for (int i = 0; i < kFuzzInputs; ++i) {
    std::string input;
    const int len = static_cast<int>(rng() % 64);
    const bool structured = i % 2 == 0;
    for (int k = 0; k < len; ++k) {
      if (structured) input += pieces[rng() % pieces.size()];
      else input += static_cast<char>(rng() % 256);
    }
    try {
      auto ast = tmpl::parse_template(input);
      ++accepted;
      std::string again = tmpl::to_source(ast);
      if (again != input || tmpl::to_source(tmpl::parse_template(again)) != input) ++broken;
    } catch (const ParseError&) {
    } catch (const std::exception&) {
      ++broken;
    }
  }
  return {broken == 0, std::to_string(kFuzzInputs) + " inputs, " + std::to_string(accepted) + " accepted, " +
                           std::to_string(broken) + " failed to round-trip or threw unexpectedly"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"protocol conformance", protocol_conformance},
      {"macro golden suite", golden_suite},
      {"user34 reproduction", reproduction},
      {"GET/POST equivalence", get_post_equivalence},
      {"closure properties", closure_properties},
      {"input round-trip", input_round_trip},
      {"persistence", persistence},
      {"parser totality", parser_fuzz},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::cout << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.detail << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
