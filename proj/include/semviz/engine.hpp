#pragma once

#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "semviz/matcher.hpp"
#include "semviz/rdf.hpp"
#include "semviz/template_registry.hpp"

namespace semviz {

// Flat `key = value` configuration. Repeated `ontology`, `aux` and
// `alignment` keys accumulate; paths are relative to the config file.
struct Config {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string base_url;  // empty: http://host:port/render
  std::optional<std::filesystem::path> storage_dir;
  std::vector<std::pair<std::string, std::string>> prefixes;
  // (prefix, version, namespace)
  std::vector<std::tuple<std::string, std::string, std::string>> versions;
  std::vector<std::filesystem::path> ontologies;
  std::vector<std::filesystem::path> aux;
  std::vector<std::filesystem::path> alignments;
};

// Throws ParseError with the offending line.
Config parse_config(std::string_view text, const std::filesystem::path& base_dir);
Config load_config(const std::filesystem::path& file);

// `.nt` files are N-Triples, everything else Turtle. Errors name the file.
rdf::Graph load_graph_file(const std::filesystem::path& file);

// Turtle first, then N-Triples; rethrows the Turtle error when both fail.
rdf::Graph parse_sniffed(std::string_view text, std::optional<rdf::Format> hint = std::nullopt);

using FetchFn = std::function<std::string(const std::string& url)>;

struct Engine {
  rdf::PrefixRegistry prefixes;
  rdf::Graph ontology;
  matcher::AuxOntologies aux;
  matcher::Closure closure;
  std::shared_ptr<registry::TemplateRegistry> templates =
      std::make_shared<registry::TemplateRegistry>();
  std::string base_url = "http://127.0.0.1:8080/render";
  FetchFn fetch;  // unset: channel::fetch_source

  static Engine from_config(const Config& config);
};

}  // namespace semviz
