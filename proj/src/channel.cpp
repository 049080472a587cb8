#include "semviz/channel.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "semviz/describe.hpp"
#include "semviz/errors.hpp"
#include "semviz/markup.hpp"
#include "semviz/matcher.hpp"
#include "semviz/template_engine.hpp"

namespace semviz::channel {

using rdf::Term;

namespace {

// XHTML output that does not parse as XML.
class MalformedOutput : public Error {
 public:
  explicit MalformedOutput(const std::string& message) : Error(ErrorKind::kInvalid, message) {}
};

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() &&
         std::equal(a.begin(), a.end(), b.begin(), [](unsigned char x, unsigned char y) {
           return std::tolower(x) == std::tolower(y);
         });
}

bool is_http_url(std::string_view url) {
  auto colon = url.find("://");
  if (colon == std::string_view::npos) return false;
  auto scheme = url.substr(0, colon);
  return (iequals(scheme, "http") || iequals(scheme, "https")) && url.size() > colon + 3;
}

std::string media_type(std::string_view content_type) {
  std::string out(content_type.substr(0, content_type.find(';')));
  out.erase(std::remove_if(out.begin(), out.end(), [](unsigned char c) { return std::isspace(c); }),
            out.end());
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::optional<rdf::Format> rdf_format_for(std::string_view content_type) {
  auto type = media_type(content_type);
  if (type == "text/turtle" || type == "application/x-turtle") return rdf::Format::kTurtle;
  if (type == "application/n-triples" || type == "text/plain") return rdf::Format::kNTriples;
  return std::nullopt;
}

MarkupFormat parse_output_format(std::string_view text) {
  if (iequals(text, "HTML")) return MarkupFormat::kHtml;
  if (iequals(text, "XHTML")) return MarkupFormat::kXhtml;
  throw InvalidArgument("outputFormat must be HTML or XHTML, not '" + std::string(text) + "'");
}

Term parse_focus(const std::string& text) {
  if (text.starts_with("_:")) return Term::blank(text.substr(2));
  if (!rdf::is_absolute_iri(text)) {
    throw InvalidArgument("focus must be an absolute IRI or a blank node label, not '" + text + "'");
  }
  return Term::iri(text);
}

std::string_view reason(int status) {
  switch (status) {
    case 200: return "OK";
    case 400: return "Bad Request";
    case 404: return "Not Found";
    case 406: return "Not Acceptable";
    case 409: return "Conflict";
    case 502: return "Bad Gateway";
    case 508: return "Loop Detected";
    default: return "Internal Server Error";
  }
}

std::string page(MarkupFormat format, std::string_view title, std::string_view content) {
  std::string out;
  if (format == MarkupFormat::kXhtml) {
    out =
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        "<!DOCTYPE html PUBLIC \"-//W3C//DTD XHTML 1.1//EN\" "
        "\"http://www.w3.org/TR/xhtml11/DTD/xhtml11.dtd\">\n"
        "<html xmlns=\"http://www.w3.org/1999/xhtml\">\n<head>\n";
  } else {
    out = "<!DOCTYPE html>\n<html>\n<head>\n<meta charset=\"utf-8\" />\n";
  }
  out += "<title>" + markup::escape(title) + "</title>\n</head>\n<body>\n";
  out += content;
  out += "</body>\n</html>\n";
  return out;
}

Response error_response(int status, MarkupFormat format, std::string_view message) {
  std::string title = std::to_string(status) + " " + std::string(reason(status));
  std::string content = "<h1>" + markup::escape(title) + "</h1>\n<p class=\"semviz-error\">" +
                        markup::escape(message) + "</p>\n";
  return Response{status, std::string(content_type_for(format)), page(format, title, content), {}};
}

void add_warnings(Response& response, const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) {
    std::string text = w;
    std::replace(text.begin(), text.end(), '"', '\'');
    response.headers.emplace_back("Warning", "299 semviz \"" + text + "\"");
  }
}

Response finish(const RenderRequest& req, const std::string& content,
                std::vector<std::string> warnings) {
  Response response;
  response.content_type = std::string(content_type_for(req.format));
  response.body = page(req.format, req.object.to_string(), content);
  if (req.format == MarkupFormat::kXhtml) {
    std::string why;
    if (!markup::well_formed_xml(response.body, &why)) {
      throw MalformedOutput("rendered markup is not well-formed XHTML: " + why);
    }
  }
  for (const auto& name : req.ignored) warnings.push_back("ignored parameter " + name);
  add_warnings(response, warnings);
  return response;
}

std::string fetch(const Engine& engine, const std::string& url) {
  return engine.fetch ? engine.fetch(url) : fetch_source(url);
}

// Remote data: any failure to obtain or read it is the upstream's fault.
rdf::Graph fetch_graph(const Engine& engine, const std::string& url) {
  try {
    return parse_sniffed(fetch(engine, url));
  } catch (const NetworkError&) {
    throw;
  } catch (const Error& e) {
    throw NetworkError("source " + url + " is unusable: " + e.what());
  }
}

bool targets(const Template& tpl, const ElementRef& object) {
  const auto& t = tpl.target;
  if (t.prefix != object.prefix || t.local != object.local) return false;
  return !t.version || !object.version || *t.version == *object.version;
}

const Template& requested_template(const registry::Snapshot& snapshot, const RenderRequest& req,
                                   TemplateKind kind) {
  const Template& tpl = snapshot.get(req.provider->first, req.provider->second);
  if (!targets(tpl, req.object)) {
    throw InvalidArgument("template " + tpl.id() + " targets " + tpl.target.to_string() +
                          ", not " + req.object.to_string());
  }
  if (tpl.features.kind != kind) {
    throw InvalidArgument("template " + tpl.id() + " is an " +
                          std::string(to_string(tpl.features.kind)) + " template");
  }
  return tpl;
}

// Best candidate for the profile at `url`, if any passes the hard filter.
std::optional<Template> matched_template(const Engine& engine, const registry::Snapshot& snapshot,
                                         const RenderRequest& req, TemplateKind kind,
                                         std::vector<std::string>& notes) {
  rdf::Graph profile_graph = fetch_graph(engine, *req.user_profile);
  auto subject = matcher::find_profile_subject(profile_graph, engine.closure);
  matcher::UserProfile profile;
  if (subject) {
    profile = matcher::extract_profile(profile_graph, *subject, engine.closure, engine.aux);
  } else {
    notes.push_back("profile states no facets");
  }
  auto candidates = snapshot.list_for(req.object, kind);
  if (candidates.empty()) return std::nullopt;
  auto selection = matcher::select_best(profile, candidates, engine.aux, engine.closure);
  if (!selection.best) notes.push_back("no template satisfies the profile's protocol");
  return selection.best;
}

ElementRef classified(const Engine& engine, ElementRef object, std::vector<std::string>& warnings) {
  Term iri = resolve(object, engine.prefixes, &warnings);
  if (object.kind == ElementKind::kUnknown && engine.ontology.mentions(iri)) {
    object.kind = classify(iri, engine.ontology);
  }
  return object;
}

Response render_input(const Engine& engine, const RenderRequest& req) {
  std::vector<std::string> warnings;
  ElementRef object = classified(engine, req.object, warnings);
  auto snapshot = engine.templates->snapshot();

  if (!req.fields.empty()) {
    rdf::Graph submitted = tmpl::form_to_graph(req.fields, object, engine.prefixes);
    std::size_t n = engine.templates->store_submission(submitted);
    Response response =
        finish(req, tmpl::default_visualization(submitted, object, engine.prefixes), warnings);
    response.headers.emplace_back("X-Semviz-Submission", std::to_string(n));
    return response;
  }

  std::optional<Template> designer;
  if (req.provider) {
    designer = requested_template(*snapshot, req, TemplateKind::kInput);
  } else if (req.user_profile) {
    designer = matched_template(engine, *snapshot, req, TemplateKind::kInput, warnings);
  }
  tmpl::FormOptions options{engine.base_url, req.format, std::nullopt};
  if (designer) options.provider = designer->id();

  rdf::Graph empty;
  tmpl::RenderContext ctx{.graph = empty,
                          .focus = Term::blank("form"),
                          .base_url = engine.base_url,
                          .source_url = std::nullopt,
                          .depth = 0,
                          .templates = snapshot.get(),
                          .prefixes = engine.prefixes,
                          .ontology = &engine.ontology,
                          .input_mode = true,
                          .warnings = &warnings};
  std::string form = tmpl::render_input_form(object, designer ? &*designer : nullptr, options, ctx);
  Response response = finish(req, form, warnings);
  response.headers.emplace_back("X-Semviz-Template", designer ? designer->id() : "default");
  return response;
}

}  // namespace

std::string_view content_type_for(MarkupFormat format) {
  return format == MarkupFormat::kXhtml ? "application/xhtml+xml; charset=utf-8"
                                        : "text/html; charset=utf-8";
}

RenderRequest parse_request(Method method, const Params& params,
                            const std::optional<std::string>& body,
                            std::string_view content_type) {
  static const std::set<std::string, std::less<>> kKnown{
      "action", "object", "source", "provider", "outputFormat", "userProfile", "focus", "data"};
  RenderRequest req;
  req.method = method;
  std::map<std::string, std::string, std::less<>> seen;
  for (const auto& [key, value] : params) {
    if (key.starts_with("prop:")) {
      if (!req.fields.emplace(key, value).second) {
        throw InvalidArgument("form field " + key + " given twice");
      }
    } else if (kKnown.contains(key)) {
      if (!seen.emplace(key, value).second) throw InvalidArgument("parameter " + key + " given twice");
    } else {
      req.ignored.push_back(key);
    }
  }
  auto get = [&](std::string_view key) -> const std::string* {
    auto it = seen.find(key);
    return it == seen.end() ? nullptr : &it->second;
  };
  const bool post = method == Method::kPost;

  const std::string* action = get("action");
  if (action == nullptr) throw InvalidArgument("missing parameter action");
  if (*action == "renderOutput") {
    req.action = Action::kRenderOutput;
  } else if (*action == "renderInput") {
    req.action = Action::kRenderInput;
  } else {
    throw InvalidArgument("unknown action '" + *action + "'");
  }

  const std::string* object = get("object");
  if (object == nullptr) throw InvalidArgument("missing parameter object");
  req.object = parse_element_ref(*object);

  if (const auto* format = get("outputFormat")) req.format = parse_output_format(*format);

  if (const auto* provider = get("provider")) {
    auto dot = provider->find('.');
    if (dot == std::string::npos || dot == 0 || dot + 1 == provider->size() ||
        provider->find('.', dot + 1) != std::string::npos) {
      throw InvalidArgument("provider must be providerID.designID, not '" + *provider + "'");
    }
    req.provider.emplace(provider->substr(0, dot), provider->substr(dot + 1));
  }

  if (const auto* source = get("source")) {
    if (post) throw InvalidArgument("source is GET only; POST carries the data itself");
    if (!is_http_url(*source)) throw InvalidArgument("source must be an http(s) URL");
    req.source = *source;
  }

  if (const auto* profile = get("userProfile")) {
    if (post) throw InvalidArgument("userProfile is GET only");
    if (!is_http_url(*profile)) throw InvalidArgument("userProfile must be an http(s) URL");
    req.user_profile = *profile;
  }

  if (const auto* focus = get("focus")) req.focus = parse_focus(*focus);

  if (const auto* data = get("data")) {
    if (!post) throw InvalidArgument("data is POST only");
    req.body = *data;
  } else if (post && body) {
    if (auto format = rdf_format_for(content_type)) {
      req.body = *body;
      req.body_format = format;
    }
  }

  if (!req.fields.empty() && !(post && req.action == Action::kRenderInput)) {
    throw InvalidArgument("prop: fields are only accepted by a POST renderInput");
  }
  if (req.action == Action::kRenderOutput) {
    if (!post && !req.source) throw InvalidArgument("renderOutput over GET needs a source");
    if (post && !req.body) throw InvalidArgument("renderOutput over POST needs the data in the body");
  }
  return req;
}

Response render_output(const Engine& engine, const rdf::Graph& data, const RenderRequest& req) {
  std::vector<std::string> warnings;
  ElementRef object = classified(engine, req.object, warnings);
  auto snapshot = engine.templates->snapshot();

  std::optional<Template> chosen;
  if (req.provider) {
    chosen = requested_template(*snapshot, req, TemplateKind::kOutput);
  } else if (req.user_profile) {
    chosen = matched_template(engine, *snapshot, req, TemplateKind::kOutput, warnings);
  }

  std::string content;
  if (chosen) {
    tmpl::RenderContext ctx{.graph = data,
                            .focus = Term(),
                            .base_url = engine.base_url,
                            .source_url = req.source,
                            .depth = 0,
                            .templates = snapshot.get(),
                            .prefixes = engine.prefixes,
                            .ontology = &engine.ontology,
                            .input_mode = false,
                            .warnings = &warnings};
    content = tmpl::render_element(object, *chosen, ctx, req.focus);
  } else {
    content = tmpl::default_visualization(data, object, engine.prefixes, req.focus);
  }
  Response response = finish(req, content, warnings);
  response.headers.emplace_back("X-Semviz-Template", chosen ? chosen->id() : "default");
  return response;
}

Response handle(const Engine& engine, const RenderRequest& req) {
  if (req.action == Action::kRenderInput) return render_input(engine, req);
  rdf::Graph data;
  if (req.method == Method::kGet) {
    data = fetch_graph(engine, *req.source);
  } else {
    data = parse_sniffed(*req.body, req.body_format);
  }
  return render_output(engine, data, req);
}

int status_for(const std::exception& error) {
  if (dynamic_cast<const MalformedOutput*>(&error) != nullptr) return 406;
  const auto* e = dynamic_cast<const Error*>(&error);
  if (e == nullptr) return 500;
  switch (e->kind()) {
    case ErrorKind::kInvalid:
    case ErrorKind::kParse: return 400;
    case ErrorKind::kNotFound: return 404;
    case ErrorKind::kNetwork: return 502;
    case ErrorKind::kDepthExceeded: return 508;
    case ErrorKind::kConflict: return 409;
  }
  return 500;
}

Response serve_render(const Engine& engine, Method method, const Params& params,
                      const std::optional<std::string>& body, std::string_view content_type) {
  MarkupFormat format = MarkupFormat::kHtml;
  for (const auto& [key, value] : params) {
    if (key == "outputFormat" && iequals(value, "XHTML")) format = MarkupFormat::kXhtml;
  }
  try {
    return handle(engine, parse_request(method, params, body, content_type));
  } catch (const std::exception& e) {
    return error_response(status_for(e), format, e.what());
  }
}

Response serve_metadata(const Engine& engine) {
  rdf::PrefixRegistry prefixes = engine.prefixes;
  prefixes.add("v", std::string(registry::kVocab));
  prefixes.add("rdf", std::string(rdf::vocab::kRdf));
  auto graph = engine.templates->snapshot()->metadata_graph();
  return Response{200, "text/turtle; charset=utf-8",
                  rdf::serialize_graph(graph, rdf::Format::kTurtle, &prefixes), {}};
}

Response serve_describe(const Engine& engine, const Params& params) {
  const std::string* object = nullptr;
  for (const auto& [key, value] : params) {
    if (key != "object") continue;
    if (object != nullptr) return Response{400, "text/plain; charset=utf-8", "parameter object given twice\n", {}};
    object = &value;
  }
  try {
    if (object == nullptr) throw InvalidArgument("missing parameter object");
    auto description = describe::describe_element(engine.ontology, parse_element_ref(*object),
                                                  engine.prefixes);
    return Response{200, "text/plain; charset=utf-8",
                    describe::render_description(description, engine.prefixes), {}};
  } catch (const std::exception& e) {
    return Response{status_for(e), "text/plain; charset=utf-8", std::string(e.what()) + "\n", {}};
  }
}

}  // namespace semviz::channel
