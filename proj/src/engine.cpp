#include "semviz/engine.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "semviz/errors.hpp"

namespace semviz {

namespace fs = std::filesystem;

namespace {

std::string_view trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string read_file(const fs::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw NotFound("cannot read " + file.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

Config parse_config(std::string_view text, const fs::path& base_dir) {
  Config config;
  auto path_of = [&](std::string_view v) {
    fs::path p{std::string(v)};
    return p.is_absolute() ? p : base_dir / p;
  };
  std::size_t line_no = 0;
  std::size_t offset = 0;
  while (offset <= text.size()) {
    auto nl = text.find('\n', offset);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = trim(text.substr(offset, nl - offset));
    const std::size_t line_start = offset;
    offset = nl + 1;
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ParseError("expected key = value", line_no, 1, line_start);
    }
    std::string key(trim(line.substr(0, eq)));
    std::string value(trim(line.substr(eq + 1)));
    auto fail = [&](const std::string& msg) -> void {
      throw ParseError(msg, line_no, 1, line_start);
    };
    if (key == "host") {
      config.host = value;
    } else if (key == "port") {
      int port = 0;
      auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), port);
      if (ec != std::errc() || ptr != value.data() + value.size() || port < 0 || port > 65535) {
        fail("bad port '" + value + "'");
      }
      config.port = port;
    } else if (key == "baseURL") {
      config.base_url = value;
    } else if (key == "storageDir") {
      config.storage_dir = path_of(value);
    } else if (key == "ontology") {
      config.ontologies.push_back(path_of(value));
    } else if (key == "aux") {
      config.aux.push_back(path_of(value));
    } else if (key == "alignment") {
      config.alignments.push_back(path_of(value));
    } else if (key.starts_with("prefix.")) {
      std::string rest = key.substr(7);
      auto dot = rest.find('.');
      if (rest.empty() || dot == 0) fail("empty prefix in '" + key + "'");
      if (dot == std::string::npos) {
        config.prefixes.emplace_back(rest, value);
      } else {
        config.versions.emplace_back(rest.substr(0, dot), rest.substr(dot + 1), value);
      }
    } else {
      fail("unknown key '" + key + "'");
    }
  }
  return config;
}

Config load_config(const fs::path& file) {
  std::string text = read_file(file);
  try {
    return parse_config(text, file.parent_path());
  } catch (const Error& e) {
    throw Error(e.kind(), file.string() + ":" + e.what());
  }
}

rdf::Graph load_graph_file(const fs::path& file) {
  std::string text = read_file(file);
  auto format = file.extension() == ".nt" ? rdf::Format::kNTriples : rdf::Format::kTurtle;
  try {
    return rdf::parse_graph(text, format);
  } catch (const Error& e) {
    throw Error(e.kind(), file.string() + ":" + e.what());
  }
}

rdf::Graph parse_sniffed(std::string_view text, std::optional<rdf::Format> hint) {
  if (hint) return rdf::parse_graph(text, *hint);
  try {
    return rdf::parse_graph(text, rdf::Format::kTurtle);
  } catch (const ParseError&) {
    try {
      return rdf::parse_graph(text, rdf::Format::kNTriples);
    } catch (const ParseError&) {
    }
    throw;
  }
}

Engine Engine::from_config(const Config& config) {
  Engine engine;
  for (const auto& [prefix, ns] : config.prefixes) engine.prefixes.add(prefix, ns);
  for (const auto& [prefix, version, ns] : config.versions) {
    engine.prefixes.add_version(prefix, version, ns);
  }
  for (const auto& file : config.ontologies) engine.ontology.merge(load_graph_file(file));

  rdf::Graph aux;
  for (const auto& file : config.aux) {
    rdf::Graph g = load_graph_file(file);
    try {
      // Validate each file on its own so errors can name it.
      matcher::AuxOntologies::from_graph(g);
    } catch (const Error& e) {
      throw Error(e.kind(), file.string() + ": " + e.what());
    }
    aux.merge(g);
  }
  engine.aux = matcher::AuxOntologies::from_graph(aux);

  matcher::AlignmentSet links;
  for (const auto& file : config.alignments) {
    auto more = matcher::AlignmentSet::from_graph(load_graph_file(file));
    links.links.insert(links.links.end(), more.links.begin(), more.links.end());
  }
  engine.closure = matcher::equivalence_closure(links);

  if (config.storage_dir) {
    engine.templates = std::make_shared<registry::TemplateRegistry>(*config.storage_dir);
  }
  engine.base_url = config.base_url.empty()
                        ? "http://" + config.host + ":" + std::to_string(config.port) + "/render"
                        : config.base_url;
  return engine;
}

}  // namespace semviz
