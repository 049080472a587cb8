#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "semviz/rdf.hpp"
#include "semviz/template.hpp"

namespace semviz::registry {

// Namespace of the published template metadata vocabulary.
inline constexpr std::string_view kVocab = "http://purl.org/semviz/template#";
inline std::string v(std::string_view local) { return std::string(kVocab) + std::string(local); }

// Features files are flat `key = value` text. Besides the features they
// carry `provider`, `design` and `target`, so a single file plus a body is
// enough to register a template.
std::string format_features(const Template& tpl);

// Parses a features file into a template without a body. Throws ParseError
// (with the line) on malformed lines and InvalidArgument on bad values.
Template parse_features(std::string_view text);

// Checks identifier syntax, size ordering, color/aesthetic tokens, the
// input/html coupling, and that the body parses. Throws.
void validate(const Template& tpl);

// Immutable view of the registry at one point in time.
class Snapshot : public TemplateSource {
 public:
  const Template* find(std::string_view provider, std::string_view design) const override;

  // Throws NotFound. Case-sensitive.
  const Template& get(std::string_view provider, std::string_view design) const;

  // Templates whose target matches `element`, ordered by full identifier. A
  // versionless query matches every version of the target.
  std::vector<Template> list_for(const ElementRef& element, TemplateKind kind) const;
  std::vector<Template> all() const;

  // One subject per template with a triple per feature.
  rdf::Graph metadata_graph() const;

  std::size_t size() const { return templates_.size(); }

 private:
  friend class TemplateRegistry;
  std::map<std::string, Template, std::less<>> templates_;  // keyed by id()
};

// Template store with copy-on-write snapshots. Writes (registrations and
// form submissions) are serialized by one writer lock; readers take a
// snapshot and never block on writers for longer than the pointer swap.
//
// On disk: <dir>/<provider>/<design>.body and <design>.features, and
// <dir>/.submissions/<n>.nt for form submissions.
class TemplateRegistry {
 public:
  // In-memory registry.
  TemplateRegistry();
  // Loads every template under `storage_dir`, creating the directory when
  // missing. Throws ParseError naming the offending file.
  explicit TemplateRegistry(std::filesystem::path storage_dir);

  // Throws Conflict on a duplicate id unless `overwrite`.
  void register_template(const Template& tpl, bool overwrite = false);

  std::shared_ptr<const Snapshot> snapshot() const;

  const Template& get(std::string_view provider, std::string_view design) const {
    return snapshot()->get(provider, design);
  }

  // Persists a submitted instance graph and returns its sequence number.
  std::size_t store_submission(const rdf::Graph& graph);
  std::vector<rdf::Graph> submissions() const;

  const std::optional<std::filesystem::path>& storage_dir() const { return dir_; }

 private:
  void load();
  void persist(const Template& tpl) const;

  std::optional<std::filesystem::path> dir_;
  mutable std::mutex write_mutex_;
  mutable std::mutex snapshot_mutex_;
  std::shared_ptr<const Snapshot> current_;
  std::vector<rdf::Graph> memory_submissions_;
  std::size_t next_submission_ = 1;
};

}  // namespace semviz::registry
