#include "semviz/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <ostream>
#include <sstream>

#include "semviz/channel.hpp"
#include "semviz/describe.hpp"
#include "semviz/engine.hpp"
#include "semviz/errors.hpp"
#include "semviz/matcher.hpp"
#include "semviz/template_registry.hpp"

namespace semviz::cli {

namespace {

constexpr int kOk = 0;
constexpr int kOther = 1;
constexpr int kUsage = 2;
constexpr int kNotFound = 3;
constexpr int kNetwork = 4;
constexpr int kParse = 5;

int exit_code(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::kInvalid: return kUsage;
    case ErrorKind::kNotFound: return kNotFound;
    case ErrorKind::kNetwork: return kNetwork;
    case ErrorKind::kParse: return kParse;
    default: return kOther;
  }
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw NotFound("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool is_url(const std::string& s) { return s.starts_with("http://") || s.starts_with("https://"); }

rdf::Graph load_data(const std::string& where) {
  if (is_url(where)) return parse_sniffed(channel::fetch_source(where));
  return load_graph_file(where);
}

struct Options {
  std::string config;
  std::string provider, design, source, object, format = "HTML", focus;
  std::string body, features;
  bool overwrite = false;
  std::string profile, subject;
};

Engine make_engine(const Options& o) {
  if (o.config.empty()) return Engine{};
  return Engine::from_config(load_config(o.config));
}

int cmd_serve(const Options& o, std::ostream& out) {
  if (o.config.empty()) throw InvalidArgument("serve needs --config");
  Config config = load_config(o.config);
  Engine engine = Engine::from_config(config);
  channel::HttpServer server(engine);
  int port = server.bind(config.host, config.port);
  out << "listening on http://" << config.host << ":" << port << "/render" << std::endl;
  server.listen();
  return kOk;
}

int cmd_render(const Options& o, std::ostream& out) {
  if (o.provider.empty() != o.design.empty()) {
    throw InvalidArgument("--provider and --design go together");
  }
  Engine engine = make_engine(o);
  channel::Params params{{"action", "renderOutput"}, {"object", o.object}, {"outputFormat", o.format}};
  if (!o.focus.empty()) params.emplace_back("focus", o.focus);
  if (!o.provider.empty()) params.emplace_back("provider", o.provider + "." + o.design);
  // Validated like a POST carrying the data, then rendered from the file.
  params.emplace_back("data", "");
  auto req = channel::parse_request(channel::Method::kPost, params);
  if (is_url(o.source)) req.source = o.source;
  rdf::Graph data = load_data(o.source);
  auto response = channel::render_output(engine, data, req);
  out << response.body;
  return kOk;
}

int cmd_register(const Options& o, std::ostream& out) {
  Engine engine = make_engine(o);
  if (!engine.templates->storage_dir()) {
    throw InvalidArgument("register needs a config with storageDir");
  }
  Template tpl = registry::parse_features(read_text(o.features));
  tpl.body = read_text(o.body);
  engine.templates->register_template(tpl, o.overwrite);
  out << "registered " << tpl.id() << "\n";
  return kOk;
}

int cmd_list(const Options& o, std::ostream& out) {
  Engine engine = make_engine(o);
  auto snapshot = engine.templates->snapshot();
  std::vector<Template> templates;
  if (o.object.empty()) {
    templates = snapshot->all();
  } else {
    auto ref = parse_element_ref(o.object);
    for (auto kind : {TemplateKind::kInput, TemplateKind::kOutput}) {
      auto some = snapshot->list_for(ref, kind);
      templates.insert(templates.end(), some.begin(), some.end());
    }
  }
  for (const auto& t : templates) {
    out << t.id() << "\t" << t.target.to_string() << "\t" << to_string(t.features.kind) << "\t"
        << to_string(t.features.markup) << "\n";
  }
  return kOk;
}

int cmd_describe(const Options& o, std::ostream& out) {
  Engine engine = make_engine(o);
  auto d = describe::describe_element(engine.ontology, parse_element_ref(o.object), engine.prefixes);
  out << describe::render_description(d, engine.prefixes);
  return kOk;
}

std::string show(const std::optional<rdf::Term>& t) { return t ? rdf::display(*t) : "(absent)"; }

int cmd_match(const Options& o, std::ostream& out) {
  Engine engine = make_engine(o);
  rdf::Graph graph = load_data(o.profile);
  std::optional<rdf::Term> subject;
  if (!o.subject.empty()) {
    subject = o.subject.starts_with("_:") ? rdf::Term::blank(o.subject.substr(2))
                                          : rdf::Term::iri(o.subject);
  } else {
    subject = matcher::find_profile_subject(graph, engine.closure);
  }
  matcher::UserProfile profile;
  if (subject) profile = matcher::extract_profile(graph, *subject, engine.closure, engine.aux);

  out << "profile " << show(subject) << "\n";
  out << "  protocol " << show(profile.protocol) << "\n";
  out << "  aesthetic " << show(profile.aesthetic) << "\n";
  for (const auto& i : profile.impairments) out << "  impairment " << rdf::display(i) << "\n";

  auto snapshot = engine.templates->snapshot();
  std::vector<Template> candidates;
  if (o.object.empty()) {
    for (const auto& t : snapshot->all()) {
      if (t.features.kind == TemplateKind::kOutput) candidates.push_back(t);
    }
  } else {
    candidates = snapshot->list_for(parse_element_ref(o.object), TemplateKind::kOutput);
  }
  auto selection = matcher::select_best(profile, candidates, engine.aux, engine.closure);
  int rank = 0;
  for (const auto& [tpl, s] : selection.ranking) {
    out << ++rank << ". " << tpl.id() << " total " << s.total
        << (s.hard_pass ? "" : " excluded") << "\n";
    for (const auto& line : s.trace) out << "   " << line << "\n";
  }
  out << "best: " << (selection.best ? selection.best->id() : "none, default visualization")
      << "\n";
  return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"semviz: render RDF data through designer templates"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--config", o.config, "engine config file");
  // Accepted before or after the subcommand.
  app.fallthrough();

  auto* serve = app.add_subcommand("serve", "run the HTTP channel");

  auto* render = app.add_subcommand("render", "render a data source offline");
  render->add_option("--provider", o.provider, "template provider id");
  render->add_option("--design", o.design, "template design id");
  render->add_option("--source", o.source, "data file or URL")->required();
  render->add_option("--object", o.object, "element, e.g. foaf.Person")->required();
  render->add_option("--format", o.format, "HTML or XHTML");
  render->add_option("--focus", o.focus, "render one individual only");

  auto* reg = app.add_subcommand("register", "add a template to the store");
  reg->add_option("--body", o.body, "template body file")->required();
  reg->add_option("--features", o.features, "features file")->required();
  reg->add_flag("--overwrite", o.overwrite, "replace an existing template");

  auto* list = app.add_subcommand("list", "list registered templates");
  list->add_option("--object", o.object, "only templates for this element");

  auto* desc = app.add_subcommand("describe", "describe an ontology element");
  desc->add_option("--object", o.object, "element, e.g. foaf.Person")->required();

  auto* match = app.add_subcommand("match", "rank templates for a user profile");
  match->add_option("--profile", o.profile, "profile graph file or URL")->required();
  match->add_option("--object", o.object, "element the templates target");
  match->add_option("--subject", o.subject, "profile subject (default: first with a facet)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*serve) return cmd_serve(o, out);
    if (*render) return cmd_render(o, out);
    if (*reg) return cmd_register(o, out);
    if (*list) return cmd_list(o, out);
    if (*desc) return cmd_describe(o, out);
    if (*match) return cmd_match(o, out);
  } catch (const Error& e) {
    err << "semviz: " << e.what() << "\n";
    return exit_code(e);
  } catch (const std::exception& e) {
    err << "semviz: " << e.what() << "\n";
    return kOther;
  }
  return kUsage;
}

}  // namespace semviz::cli
