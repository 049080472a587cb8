#include <cctype>
#include <map>
#include <set>

#include "semviz/errors.hpp"
#include "semviz/template_engine.hpp"

namespace semviz::tmpl {

namespace {

constexpr std::string_view kOpen = "[{";
constexpr std::string_view kClose = "}]";
constexpr std::string_view kMacroPrefix = "Omemo";

struct MacroSpec {
  std::string_view name;
  std::vector<std::string_view> arguments;
};

const std::vector<MacroSpec>& macro_specs() {
  static const std::vector<MacroSpec> specs{
      {"OmemoGetP", {"propName"}},
      {"OmemoBaseURL", {}},
      {"OmemoConditionalVizFor", {"propName", "designerID", "designID"}},
      {"OmemoGetLink", {"relationName"}},
  };
  return specs;
}

bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_';
}

class MacroReader {
 public:
  MacroReader(std::string_view body, std::size_t start) : body_(body), start_(start) {}

  // Parses the macro starting at start_ ("[{"), returns the node and sets
  // end() past the closing "}]".
  Node read() {
    pos_ = start_ + kOpen.size();
    skip_space();
    std::size_t name_at = pos_;
    std::string name = identifier();
    const MacroSpec* spec = nullptr;
    for (const auto& s : macro_specs()) {
      if (s.name == name) spec = &s;
    }
    if (spec == nullptr) fail(name_at, "unknown macro '" + name + "'");

    std::map<std::string, std::string> args;
    for (;;) {
      std::size_t before = pos_;
      skip_space();
      if (pos_ >= body_.size()) fail(start_, "unterminated macro '" + name + "'");
      if (body_.substr(pos_, kClose.size()) == kClose) {
        pos_ += kClose.size();
        break;
      }
      if (before == pos_) fail(pos_, "expected whitespace before argument");
      std::size_t key_at = pos_;
      std::string key = identifier();
      if (key.empty()) fail(pos_, "expected argument name or '}]'");
      skip_space();
      if (pos_ >= body_.size() || body_[pos_] != '=') fail(pos_, "expected '=' after " + key);
      ++pos_;
      skip_space();
      if (pos_ >= body_.size() || (body_[pos_] != '\'' && body_[pos_] != '"')) {
        fail(pos_, "expected quoted value for " + key);
      }
      char quote = body_[pos_++];
      auto end = body_.find(quote, pos_);
      if (end == std::string_view::npos) fail(start_, "unterminated macro '" + name + "'");
      std::string value(body_.substr(pos_, end - pos_));
      pos_ = end + 1;
      bool known = false;
      for (auto a : spec->arguments) known = known || a == key;
      if (!known) fail(key_at, "macro " + name + " takes no argument '" + key + "'");
      if (!args.emplace(key, std::move(value)).second) {
        fail(key_at, "duplicate argument '" + key + "'");
      }
    }
    for (auto a : spec->arguments) {
      if (!args.contains(std::string(a))) {
        fail(start_, "macro " + name + " is missing argument " + std::string(a));
      }
    }

    std::string source(body_.substr(start_, pos_ - start_));
    auto element = [&](const std::string& key) {
      try {
        return parse_element_ref(args.at(key));
      } catch (const InvalidArgument& e) {
        fail(start_, e.what());
      }
    };
    auto nonempty = [&](const std::string& key) {
      const auto& v = args.at(key);
      if (v.empty()) fail(start_, "argument " + key + " is empty");
      return v;
    };

    if (name == "OmemoGetP") return GetProperty{element("propName"), source, start_};
    if (name == "OmemoBaseURL") return BaseUrl{source, start_};
    if (name == "OmemoConditionalVizFor") {
      return ConditionalViz{element("propName"), nonempty("designerID"), nonempty("designID"),
                            source, start_};
    }
    return GetLink{element("relationName"), source, start_};
  }

  std::size_t end() const { return pos_; }

  [[noreturn]] void fail(std::size_t offset, const std::string& message) const {
    std::size_t line = 1;
    std::size_t column = 1;
    for (std::size_t i = 0; i < offset && i < body_.size(); ++i) {
      if (body_[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw ParseError(message, line, column, offset);
  }

 private:
  void skip_space() {
    while (pos_ < body_.size() && std::isspace(static_cast<unsigned char>(body_[pos_]))) ++pos_;
  }

  std::string identifier() {
    std::size_t start = pos_;
    while (pos_ < body_.size() && is_ident_char(body_[pos_])) ++pos_;
    return std::string(body_.substr(start, pos_ - start));
  }

  std::string_view body_;
  std::size_t start_;
  std::size_t pos_ = 0;
};

// A "[{" opens a macro only when the next token starts with the macro prefix.
bool opens_macro(std::string_view body, std::size_t at) {
  std::size_t p = at + kOpen.size();
  while (p < body.size() && std::isspace(static_cast<unsigned char>(body[p]))) ++p;
  return body.substr(p, kMacroPrefix.size()) == kMacroPrefix;
}

}  // namespace

TemplateAst parse_template(std::string_view body) {
  TemplateAst ast;
  std::size_t raw_start = 0;
  std::size_t search = 0;
  for (;;) {
    auto at = body.find(kOpen, search);
    if (at == std::string_view::npos) break;
    if (!opens_macro(body, at)) {
      search = at + 1;
      continue;
    }
    if (at > raw_start) ast.nodes.emplace_back(RawText{std::string(body.substr(raw_start, at - raw_start))});
    MacroReader reader(body, at);
    ast.nodes.push_back(reader.read());
    raw_start = search = reader.end();
  }
  if (raw_start < body.size()) ast.nodes.emplace_back(RawText{std::string(body.substr(raw_start))});
  return ast;
}

std::string to_source(const TemplateAst& ast) {
  std::string out;
  for (const auto& node : ast.nodes) {
    std::visit(
        [&](const auto& n) {
          if constexpr (std::is_same_v<std::decay_t<decltype(n)>, RawText>) {
            out += n.text;
          } else {
            out += n.source;
          }
        },
        node);
  }
  return out;
}

}  // namespace semviz::tmpl
