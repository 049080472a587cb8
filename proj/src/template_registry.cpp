#include "semviz/template_registry.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "semviz/errors.hpp"
#include "semviz/template_engine.hpp"

namespace semviz::registry {

namespace fs = std::filesystem;
using rdf::Term;

namespace {

constexpr std::string_view kSubmissionsDir = ".submissions";

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

bool is_identifier(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return std::isalnum(c) || c == '_' || c == '-';
  });
}

bool is_token(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return std::isalnum(c) || c == '_' || c == '-';
  });
}

std::string format_size(const Size& s) {
  return std::to_string(s.width) + "x" + std::to_string(s.height);
}

Size parse_size(std::string_view text) {
  auto x = text.find('x');
  auto number = [&](std::string_view part) {
    int value = -1;
    auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), value);
    if (ec != std::errc() || ptr != part.data() + part.size() || value < 0) {
      throw InvalidArgument("size must be WIDTHxHEIGHT, got '" + std::string(text) + "'");
    }
    return value;
  };
  if (x == std::string_view::npos) {
    throw InvalidArgument("size must be WIDTHxHEIGHT, got '" + std::string(text) + "'");
  }
  return Size{number(text.substr(0, x)), number(text.substr(x + 1))};
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw NotFound("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file_atomic(const fs::path& path, std::string_view content) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InvalidArgument("cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw InvalidArgument("cannot write " + tmp.string());
  }
  fs::rename(tmp, path);
}

bool targets_match(const ElementRef& query, const ElementRef& target) {
  if (query.prefix != target.prefix || query.local != target.local) return false;
  if (!query.version || !target.version) return true;
  return *query.version == *target.version;
}

}  // namespace

std::string format_features(const Template& tpl) {
  const auto& f = tpl.features;
  std::string codes;
  for (auto c : f.code_types) {
    if (!codes.empty()) codes += ", ";
    codes += to_string(c);
  }
  std::string out;
  out += "provider = " + tpl.provider + "\n";
  out += "design = " + tpl.design + "\n";
  out += "target = " + tpl.target.to_string() + "\n";
  out += "kind = " + std::string(to_string(f.kind)) + "\n";
  out += "codeTypes = " + codes + "\n";
  out += "primaryColor = " + f.primary_color + "\n";
  out += "secondaryColor = " + f.secondary_color + "\n";
  out += "aesthetic = " + f.aesthetic + "\n";
  out += "markupFormat = " + std::string(to_string(f.markup)) + "\n";
  out += "preferredSize = " + format_size(f.preferred_size) + "\n";
  out += "minSize = " + format_size(f.min_size) + "\n";
  out += "maxSize = " + format_size(f.max_size) + "\n";
  out += "fontResize = " + std::string(to_string(f.font_resize)) + "\n";
  return out;
}

Template parse_features(std::string_view text) {
  Template tpl;
  auto& f = tpl.features;
  bool have_provider = false, have_design = false, have_target = false;
  std::size_t line_no = 0;
  std::size_t offset = 0;
  std::istringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    ++line_no;
    std::size_t line_offset = offset;
    offset += raw.size() + 1;
    std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError("expected 'key = value'", line_no, 1, line_offset);
    std::string key = trim(std::string_view(line).substr(0, eq));
    std::string value = trim(std::string_view(line).substr(eq + 1));
    try {
      if (key == "provider") {
        tpl.provider = value;
        have_provider = true;
      } else if (key == "design") {
        tpl.design = value;
        have_design = true;
      } else if (key == "target") {
        tpl.target = parse_element_ref(value);
        have_target = true;
      } else if (key == "kind") {
        f.kind = parse_template_kind(value);
      } else if (key == "codeTypes") {
        f.code_types.clear();
        std::string_view rest = value;
        while (!rest.empty()) {
          auto comma = rest.find(',');
          std::string item = trim(rest.substr(0, comma));
          if (!item.empty()) f.code_types.insert(parse_code_type(item));
          if (comma == std::string_view::npos) break;
          rest = rest.substr(comma + 1);
        }
      } else if (key == "primaryColor") {
        f.primary_color = value;
      } else if (key == "secondaryColor") {
        f.secondary_color = value;
      } else if (key == "aesthetic") {
        f.aesthetic = value;
      } else if (key == "markupFormat") {
        f.markup = parse_markup_format(value);
      } else if (key == "preferredSize") {
        f.preferred_size = parse_size(value);
      } else if (key == "minSize") {
        f.min_size = parse_size(value);
      } else if (key == "maxSize") {
        f.max_size = parse_size(value);
      } else if (key == "fontResize") {
        f.font_resize = parse_font_resize(value);
      } else {
        throw ParseError("unknown key '" + key + "'", line_no, 1, line_offset);
      }
    } catch (const InvalidArgument& e) {
      throw ParseError(e.what(), line_no, eq + 1, line_offset);
    }
  }
  if (!have_provider) throw ParseError("missing key 'provider'", line_no, 1, offset);
  if (!have_design) throw ParseError("missing key 'design'", line_no, 1, offset);
  if (!have_target) throw ParseError("missing key 'target'", line_no, 1, offset);
  return tpl;
}

void validate(const Template& tpl) {
  if (!is_identifier(tpl.provider)) {
    throw InvalidArgument("provider id must be letters, digits, '_' or '-': '" + tpl.provider + "'");
  }
  if (!is_identifier(tpl.design)) {
    throw InvalidArgument("design id must be letters, digits, '_' or '-': '" + tpl.design + "'");
  }
  const auto& f = tpl.features;
  for (const auto* token : {&f.primary_color, &f.secondary_color, &f.aesthetic}) {
    if (!is_token(*token)) throw InvalidArgument("feature value is not a plain token: '" + *token + "'");
  }
  auto le = [](const Size& a, const Size& b) { return a.width <= b.width && a.height <= b.height; };
  if (!le(f.min_size, f.preferred_size) || !le(f.preferred_size, f.max_size)) {
    throw InvalidArgument("sizes must satisfy min <= preferred <= max componentwise");
  }
  if (f.kind == TemplateKind::kInput && !f.code_types.contains(CodeType::kHtml)) {
    throw InvalidArgument("input templates must provide html form controls");
  }
  tmpl::parse_template(tpl.body);
}

const Template* Snapshot::find(std::string_view provider, std::string_view design) const {
  auto it = templates_.find(std::string(provider) + "." + std::string(design));
  return it == templates_.end() ? nullptr : &it->second;
}

const Template& Snapshot::get(std::string_view provider, std::string_view design) const {
  if (const Template* t = find(provider, design)) return *t;
  throw NotFound("template " + std::string(provider) + "." + std::string(design) + " not found");
}

std::vector<Template> Snapshot::list_for(const ElementRef& element, TemplateKind kind) const {
  std::vector<Template> out;
  for (const auto& [id, t] : templates_) {
    if (t.features.kind == kind && targets_match(element, t.target)) out.push_back(t);
  }
  return out;
}

std::vector<Template> Snapshot::all() const {
  std::vector<Template> out;
  for (const auto& [id, t] : templates_) out.push_back(t);
  return out;
}

rdf::Graph Snapshot::metadata_graph() const {
  rdf::Graph g;
  g.set_namespace(std::string(kVocab));
  const Term type = Term::iri(rdf::vocab::rdf("type"));
  const std::string integer = rdf::vocab::xsd("integer");
  for (const auto& [id, t] : templates_) {
    const Term s = Term::iri(v(id));
    const auto& f = t.features;
    auto text = [&](std::string_view p, const std::string& value) {
      if (!value.empty()) g.insert(s, Term::iri(v(p)), Term::literal(value));
    };
    auto number = [&](std::string_view p, int value) {
      g.insert(s, Term::iri(v(p)), Term::literal(std::to_string(value), {}, integer));
    };
    g.insert(s, type, Term::iri(v("Template")));
    text("provider", t.provider);
    text("design", t.design);
    text("targets", t.target.to_string());
    text("kind", std::string(to_string(f.kind)));
    for (auto c : f.code_types) text("codeType", std::string(to_string(c)));
    text("codedIn", std::string(to_string(f.markup)));
    text("aesthetic", f.aesthetic);
    text("primaryColor", f.primary_color);
    text("secondaryColor", f.secondary_color);
    number("preferredWidth", f.preferred_size.width);
    number("preferredHeight", f.preferred_size.height);
    number("minWidth", f.min_size.width);
    number("minHeight", f.min_size.height);
    number("maxWidth", f.max_size.width);
    number("maxHeight", f.max_size.height);
    text("fontResize", std::string(to_string(f.font_resize)));
  }
  return g;
}

TemplateRegistry::TemplateRegistry() : current_(std::make_shared<Snapshot>()) {}

TemplateRegistry::TemplateRegistry(fs::path storage_dir)
    : dir_(std::move(storage_dir)), current_(std::make_shared<Snapshot>()) {
  fs::create_directories(*dir_);
  load();
}

void TemplateRegistry::load() {
  auto snap = std::make_shared<Snapshot>();
  std::vector<fs::path> providers;
  for (const auto& entry : fs::directory_iterator(*dir_)) {
    if (entry.is_directory() && entry.path().filename() != kSubmissionsDir) {
      providers.push_back(entry.path());
    }
  }
  for (const auto& provider_dir : providers) {
    for (const auto& entry : fs::directory_iterator(provider_dir)) {
      if (entry.path().extension() != ".features") continue;
      const fs::path features_path = entry.path();
      Template tpl;
      try {
        tpl = parse_features(read_file(features_path));
      } catch (const ParseError& e) {
        throw ParseError(features_path.string() + ": " + e.what(), e.line(), e.column(), e.offset());
      }
      fs::path body_path = features_path;
      body_path.replace_extension(".body");
      tpl.body = read_file(body_path);
      if (tpl.provider != provider_dir.filename().string() ||
          tpl.design != features_path.stem().string()) {
        throw ParseError(features_path.string() + ": provider/design do not match the file location",
                         1, 1, 0);
      }
      try {
        validate(tpl);
      } catch (const ParseError& e) {
        throw ParseError(body_path.string() + ": " + e.what(), e.line(), e.column(), e.offset());
      } catch (const InvalidArgument& e) {
        throw ParseError(features_path.string() + ": " + e.what(), 1, 1, 0);
      }
      snap->templates_.emplace(tpl.id(), std::move(tpl));
    }
  }
  std::size_t highest = 0;
  if (fs::is_directory(*dir_ / kSubmissionsDir)) {
    for (const auto& entry : fs::directory_iterator(*dir_ / kSubmissionsDir)) {
      std::size_t n = 0;
      auto stem = entry.path().stem().string();
      auto [ptr, ec] = std::from_chars(stem.data(), stem.data() + stem.size(), n);
      if (ec == std::errc()) highest = std::max(highest, n);
    }
  }
  next_submission_ = highest + 1;
  current_ = std::move(snap);
}

void TemplateRegistry::persist(const Template& tpl) const {
  fs::path provider_dir = *dir_ / tpl.provider;
  fs::create_directories(provider_dir);
  write_file_atomic(provider_dir / (tpl.design + ".body"), tpl.body);
  write_file_atomic(provider_dir / (tpl.design + ".features"), format_features(tpl));
}

void TemplateRegistry::register_template(const Template& tpl, bool overwrite) {
  validate(tpl);
  std::lock_guard write(write_mutex_);
  auto base = snapshot();
  if (!overwrite && base->find(tpl.provider, tpl.design) != nullptr) {
    throw Conflict("template " + tpl.id() + " is already registered");
  }
  if (dir_) persist(tpl);
  auto next = std::make_shared<Snapshot>(*base);
  next->templates_.insert_or_assign(tpl.id(), tpl);
  std::lock_guard swap(snapshot_mutex_);
  current_ = std::move(next);
}

std::shared_ptr<const Snapshot> TemplateRegistry::snapshot() const {
  std::lock_guard lock(snapshot_mutex_);
  return current_;
}

std::size_t TemplateRegistry::store_submission(const rdf::Graph& graph) {
  std::lock_guard write(write_mutex_);
  std::size_t n = next_submission_++;
  if (dir_) {
    fs::create_directories(*dir_ / kSubmissionsDir);
    char name[32];
    std::snprintf(name, sizeof name, "%06zu.nt", n);
    write_file_atomic(*dir_ / kSubmissionsDir / name,
                      rdf::serialize_graph(graph, rdf::Format::kNTriples));
  } else {
    memory_submissions_.push_back(graph);
  }
  return n;
}

std::vector<rdf::Graph> TemplateRegistry::submissions() const {
  std::lock_guard write(write_mutex_);
  if (!dir_) return memory_submissions_;
  std::vector<fs::path> files;
  if (fs::is_directory(*dir_ / kSubmissionsDir)) {
    for (const auto& entry : fs::directory_iterator(*dir_ / kSubmissionsDir)) {
      if (entry.path().extension() == ".nt") files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  std::vector<rdf::Graph> out;
  for (const auto& f : files) out.push_back(rdf::parse_graph(read_file(f), rdf::Format::kNTriples));
  return out;
}

}  // namespace semviz::registry
