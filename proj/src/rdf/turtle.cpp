// Turtle and N-Triples reader/writer. N-Triples is parsed by the same
// recursive-descent reader with the Turtle-only productions switched off.

#include <algorithm>
#include <cctype>
#include <map>

#include "semviz/errors.hpp"
#include "semviz/rdf.hpp"

namespace semviz::rdf {

namespace {

void append_utf8(std::string& out, std::uint32_t cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

bool is_hex(char c) { return std::isxdigit(static_cast<unsigned char>(c)) != 0; }

// PN_CHARS_BASE approximated as ASCII letters plus any non-ASCII byte.
bool is_name_start(char c) {
  auto u = static_cast<unsigned char>(c);
  return std::isalpha(u) || u >= 0x80;
}

bool is_name_char(char c) {
  auto u = static_cast<unsigned char>(c);
  return std::isalnum(u) || u >= 0x80 || c == '_' || c == '-';
}

std::string remove_dot_segments(std::string path) {
  std::vector<std::string> out;
  std::size_t i = 0;
  const bool absolute = !path.empty() && path[0] == '/';
  const bool trailing = path.ends_with("/.") || path.ends_with("/..") || path.ends_with("/");
  while (i <= path.size()) {
    auto j = path.find('/', i);
    if (j == std::string::npos) j = path.size();
    std::string seg = path.substr(i, j - i);
    if (seg == "..") {
      if (!out.empty()) out.pop_back();
    } else if (seg != "." && !seg.empty()) {
      out.push_back(seg);
    }
    i = j + 1;
  }
  std::string result = absolute ? "/" : "";
  for (std::size_t k = 0; k < out.size(); ++k) {
    if (k > 0) result += "/";
    result += out[k];
  }
  if (trailing && !out.empty()) result += "/";
  return result;
}

std::string resolve_iri(std::string_view base, std::string_view ref) {
  if (is_absolute_iri(ref)) return std::string(ref);
  std::string b(base);
  auto strip_fragment = [](std::string s) {
    auto h = s.find('#');
    return h == std::string::npos ? s : s.substr(0, h);
  };
  b = strip_fragment(b);
  auto scheme_end = b.find(':');
  std::string scheme = b.substr(0, scheme_end + 1);
  std::string rest = b.substr(scheme_end + 1);
  std::string authority;
  if (rest.starts_with("//")) {
    auto slash = rest.find('/', 2);
    authority = rest.substr(0, slash == std::string::npos ? rest.size() : slash);
    rest = slash == std::string::npos ? "" : rest.substr(slash);
  }
  if (ref.empty()) return b;
  if (ref[0] == '#') return b + std::string(ref);
  auto q = rest.find('?');
  std::string path = q == std::string::npos ? rest : rest.substr(0, q);
  if (ref[0] == '?') return scheme + authority + path + std::string(ref);
  if (ref.starts_with("//")) return scheme + std::string(ref);
  if (ref[0] == '/') return scheme + authority + remove_dot_segments(std::string(ref));
  std::string dir;
  if (auto slash = path.rfind('/'); slash != std::string::npos) {
    dir = path.substr(0, slash + 1);
  } else if (!authority.empty()) {
    dir = "/";
  }
  std::string ref_path(ref);
  std::string suffix;
  if (auto qp = ref_path.find_first_of("?#"); qp != std::string::npos) {
    suffix = ref_path.substr(qp);
    ref_path = ref_path.substr(0, qp);
  }
  return scheme + authority + remove_dot_segments(dir + ref_path) + suffix;
}

class Reader {
 public:
  Reader(std::string_view text, Format format, std::string_view base)
      : in_(text), turtle_(format == Format::kTurtle), base_(base) {}

  Graph run() {
    skip_ws();
    while (!at_end()) {
      if (turtle_ && try_directive()) {
        skip_ws();
        continue;
      }
      statement();
      skip_ws();
    }
    return std::move(graph_);
  }

 private:
  [[noreturn]] void fail(const std::string& message) const { fail_at(pos_, message); }

  [[noreturn]] void fail_at(std::size_t offset, const std::string& message) const {
    std::size_t line = 1;
    std::size_t column = 1;
    for (std::size_t i = 0; i < offset && i < in_.size(); ++i) {
      if (in_[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw ParseError(message, line, column, offset);
  }

  bool at_end() const { return pos_ >= in_.size(); }
  char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < in_.size() ? in_[pos_ + ahead] : '\0';
  }

  void skip_ws() {
    while (!at_end()) {
      char c = peek();
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        ++pos_;
      } else if (c == '#') {
        while (!at_end() && peek() != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  void expect(char c) {
    skip_ws();
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  bool match_keyword_ci(std::string_view word) {
    if (in_.size() - pos_ < word.size()) return false;
    for (std::size_t i = 0; i < word.size(); ++i) {
      if (std::tolower(static_cast<unsigned char>(in_[pos_ + i])) !=
          std::tolower(static_cast<unsigned char>(word[i]))) {
        return false;
      }
    }
    char after = pos_ + word.size() < in_.size() ? in_[pos_ + word.size()] : ' ';
    if (is_name_char(after) || after == ':' || after == '.') return false;
    pos_ += word.size();
    return true;
  }

  bool try_directive() {
    bool sparql_style = false;
    bool is_prefix = false;
    if (peek() == '@') {
      ++pos_;
      if (match_keyword_ci("prefix")) {
        is_prefix = true;
      } else if (match_keyword_ci("base")) {
        is_prefix = false;
      } else {
        fail("unknown directive");
      }
    } else if (match_keyword_ci("PREFIX")) {
      sparql_style = is_prefix = true;
    } else if (match_keyword_ci("BASE")) {
      sparql_style = true;
    } else {
      return false;
    }
    skip_ws();
    if (is_prefix) {
      std::string prefix;
      if (peek() != ':') {
        if (!is_name_start(peek())) fail("expected prefix name");
        while (is_name_char(peek()) || peek() == '.') prefix += in_[pos_++];
        if (prefix.back() == '.') fail("prefix name ends with '.'");
      }
      if (peek() != ':') fail("expected ':' after prefix name");
      ++pos_;
      skip_ws();
      prefixes_[prefix] = read_iriref();
    } else {
      base_ = read_iriref();
    }
    if (!sparql_style) expect('.');
    return true;
  }

  void statement() {
    if (turtle_ && peek() == '[') {
      Term subject = blank_property_list();
      skip_ws();
      if (peek() != '.') predicate_object_list(subject);
    } else {
      Term subject = read_subject();
      predicate_object_list(subject);
    }
    expect('.');
  }

  Term read_subject() {
    skip_ws();
    char c = peek();
    if (c == '<') return Term::iri(read_iriref());
    if (c == '_' && peek(1) == ':') return read_blank_label();
    if (turtle_ && c == '(') return collection();
    if (turtle_ && (is_name_start(c) || c == ':')) return Term::iri(read_pname());
    fail("expected subject");
  }

  Term read_verb() {
    skip_ws();
    char c = peek();
    if (c == '<') return Term::iri(read_iriref());
    if (turtle_ && c == 'a') {
      char next = peek(1);
      if (!is_name_char(next) && next != ':' && next != '.') {
        ++pos_;
        return Term::iri(vocab::rdf("type"));
      }
    }
    if (turtle_ && (is_name_start(c) || c == ':')) return Term::iri(read_pname());
    fail("expected predicate");
  }

  void predicate_object_list(const Term& subject) {
    for (;;) {
      Term predicate = read_verb();
      object_list(subject, predicate);
      skip_ws();
      if (!turtle_ || peek() != ';') return;
      while (peek() == ';') {
        ++pos_;
        skip_ws();
      }
      char c = peek();
      if (c == '.' || c == ']' || c == '\0') return;
    }
  }

  void object_list(const Term& subject, const Term& predicate) {
    for (;;) {
      Term object = read_object();
      graph_.insert(Triple{subject, predicate, std::move(object)});
      skip_ws();
      if (!turtle_ || peek() != ',') return;
      ++pos_;
    }
  }

  Term read_object() {
    skip_ws();
    char c = peek();
    if (c == '<') return Term::iri(read_iriref());
    if (c == '_' && peek(1) == ':') return read_blank_label();
    if (c == '"' || (turtle_ && c == '\'')) return read_literal();
    if (!turtle_) fail("expected object");
    if (c == '[') return blank_property_list();
    if (c == '(') return collection();
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '+' || c == '-' ||
        (c == '.' && std::isdigit(static_cast<unsigned char>(peek(1))))) {
      return read_number();
    }
    if (match_keyword_ci("true")) {
      return Term::literal("true", {}, vocab::xsd("boolean"));
    }
    if (match_keyword_ci("false")) {
      return Term::literal("false", {}, vocab::xsd("boolean"));
    }
    if (is_name_start(c) || c == ':') return Term::iri(read_pname());
    fail("expected object");
  }

  Term fresh_blank() { return Term::blank("b" + std::to_string(next_blank_++)); }

  Term blank_property_list() {
    ++pos_;  // '['
    Term node = fresh_blank();
    skip_ws();
    if (peek() == ']') {
      ++pos_;
      return node;
    }
    predicate_object_list(node);
    expect(']');
    return node;
  }

  Term collection() {
    ++pos_;  // '('
    std::vector<Term> items;
    for (;;) {
      skip_ws();
      if (at_end()) fail("unterminated collection");
      if (peek() == ')') {
        ++pos_;
        break;
      }
      items.push_back(read_object());
    }
    Term nil = Term::iri(vocab::rdf("nil"));
    if (items.empty()) return nil;
    Term first = Term::iri(vocab::rdf("first"));
    Term rest = Term::iri(vocab::rdf("rest"));
    Term head = fresh_blank();
    Term node = head;
    for (std::size_t i = 0; i < items.size(); ++i) {
      graph_.insert(Triple{node, first, items[i]});
      Term next = i + 1 < items.size() ? fresh_blank() : nil;
      graph_.insert(Triple{node, rest, next});
      node = next;
    }
    return head;
  }

  Term read_blank_label() {
    std::size_t start = pos_;
    pos_ += 2;
    std::string label;
    char c = peek();
    if (!(is_name_char(c) && c != '-')) fail_at(start, "invalid blank node label");
    while (is_name_char(peek()) || peek() == '.') label += in_[pos_++];
    while (!label.empty() && label.back() == '.') {
      label.pop_back();
      --pos_;
    }
    auto it = blanks_.find(label);
    if (it != blanks_.end()) return it->second;
    Term node = fresh_blank();
    blanks_.emplace(label, node);
    return node;
  }

  std::uint32_t read_hex(std::size_t digits) {
    std::uint32_t cp = 0;
    for (std::size_t i = 0; i < digits; ++i) {
      char c = peek();
      if (!is_hex(c)) fail("invalid unicode escape");
      cp = cp * 16 + static_cast<std::uint32_t>(std::isdigit(static_cast<unsigned char>(c))
                                                    ? c - '0'
                                                    : std::tolower(c) - 'a' + 10);
      ++pos_;
    }
    if (cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) fail("invalid code point");
    return cp;
  }

  std::string read_iriref() {
    skip_ws();
    std::size_t start = pos_;
    if (peek() != '<') fail("expected IRI");
    ++pos_;
    std::string iri;
    for (;;) {
      if (at_end()) fail_at(start, "unterminated IRI");
      char c = in_[pos_];
      auto u = static_cast<unsigned char>(c);
      if (c == '>') {
        ++pos_;
        break;
      }
      if (c == '\\') {
        ++pos_;
        char e = peek();
        ++pos_;
        if (e == 'u') {
          append_utf8(iri, read_hex(4));
        } else if (e == 'U') {
          append_utf8(iri, read_hex(8));
        } else {
          fail("invalid escape in IRI");
        }
        continue;
      }
      if (u <= 0x20 || c == '<' || c == '"' || c == '{' || c == '}' || c == '|' ||
          c == '^' || c == '`') {
        fail("invalid character in IRI");
      }
      iri += c;
      ++pos_;
    }
    if (is_absolute_iri(iri)) return iri;
    if (!turtle_) fail_at(start, "relative IRI in N-Triples");
    if (base_.empty()) fail_at(start, "relative IRI <" + iri + "> without a base");
    return resolve_iri(base_, iri);
  }

  std::string read_pname() {
    std::size_t start = pos_;
    std::string prefix;
    while (is_name_char(peek()) || peek() == '.') prefix += in_[pos_++];
    while (!prefix.empty() && prefix.back() == '.') {
      prefix.pop_back();
      --pos_;
    }
    if (peek() != ':') fail_at(start, "expected prefixed name");
    ++pos_;
    auto it = prefixes_.find(prefix);
    if (it == prefixes_.end()) fail_at(start, "undeclared prefix '" + prefix + "'");
    std::string local;
    std::size_t dots = 0;  // trailing dots consumed so far
    for (;;) {
      char c = peek();
      if (is_name_char(c) || c == ':') {
        local += c;
        ++pos_;
        dots = 0;
      } else if (c == '.') {
        local += c;
        ++pos_;
        ++dots;
      } else if (c == '%' && is_hex(peek(1)) && is_hex(peek(2))) {
        local.append(in_.substr(pos_, 3));
        pos_ += 3;
        dots = 0;
      } else if (c == '\\' && std::string_view("_~.-!$&'()*+,;=/?#@%").find(peek(1)) !=
                                  std::string_view::npos &&
                 peek(1) != '\0') {
        local += peek(1);
        pos_ += 2;
        dots = 0;
      } else {
        break;
      }
    }
    local.resize(local.size() - dots);
    pos_ -= dots;
    return it->second + local;
  }

  Term read_number() {
    std::size_t start = pos_;
    std::string text;
    if (peek() == '+' || peek() == '-') text += in_[pos_++];
    bool digits = false;
    while (std::isdigit(static_cast<unsigned char>(peek()))) {
      text += in_[pos_++];
      digits = true;
    }
    std::string datatype = vocab::xsd("integer");
    if (peek() == '.' && std::isdigit(static_cast<unsigned char>(peek(1)))) {
      text += in_[pos_++];
      while (std::isdigit(static_cast<unsigned char>(peek()))) text += in_[pos_++];
      datatype = vocab::xsd("decimal");
      digits = true;
    }
    if (!digits) fail_at(start, "malformed number");
    if (peek() == 'e' || peek() == 'E') {
      text += in_[pos_++];
      if (peek() == '+' || peek() == '-') text += in_[pos_++];
      if (!std::isdigit(static_cast<unsigned char>(peek()))) fail("malformed exponent");
      while (std::isdigit(static_cast<unsigned char>(peek()))) text += in_[pos_++];
      datatype = vocab::xsd("double");
    }
    return Term::literal(text, {}, datatype);
  }

  Term read_literal() {
    std::size_t start = pos_;
    char quote = peek();
    bool long_form = turtle_ && peek(1) == quote && peek(2) == quote;
    pos_ += long_form ? 3 : 1;
    std::string value;
    for (;;) {
      if (at_end()) fail_at(start, "unterminated string");
      char c = in_[pos_];
      if (c == quote) {
        if (!long_form) {
          ++pos_;
          break;
        }
        if (peek(1) == quote && peek(2) == quote) {
          // Up to two extra quotes before the closing delimiter belong to the value.
          while (peek(3) == quote) {
            value += quote;
            ++pos_;
          }
          pos_ += 3;
          break;
        }
        value += c;
        ++pos_;
        continue;
      }
      if (c == '\\') {
        ++pos_;
        char e = peek();
        ++pos_;
        switch (e) {
          case 't': value += '\t'; break;
          case 'b': value += '\b'; break;
          case 'n': value += '\n'; break;
          case 'r': value += '\r'; break;
          case 'f': value += '\f'; break;
          case '"': value += '"'; break;
          case '\'': value += '\''; break;
          case '\\': value += '\\'; break;
          case 'u': append_utf8(value, read_hex(4)); break;
          case 'U': append_utf8(value, read_hex(8)); break;
          default: fail("invalid string escape");
        }
        continue;
      }
      if (!long_form && (c == '\n' || c == '\r')) fail("newline in string");
      value += c;
      ++pos_;
    }
    if (peek() == '@') {
      ++pos_;
      std::string lang;
      while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '-') {
        lang += in_[pos_++];
      }
      if (lang.empty() || !std::isalpha(static_cast<unsigned char>(lang[0]))) {
        fail("malformed language tag");
      }
      return Term::literal(std::move(value), std::move(lang));
    }
    if (peek() == '^' && peek(1) == '^') {
      pos_ += 2;
      std::string datatype;
      if (peek() == '<') {
        datatype = read_iriref();
      } else if (turtle_) {
        datatype = read_pname();
      } else {
        fail("expected datatype IRI");
      }
      return Term::literal(std::move(value), {}, std::move(datatype));
    }
    return Term::literal(std::move(value));
  }

  std::string_view in_;
  std::size_t pos_ = 0;
  bool turtle_;
  std::string base_;
  std::map<std::string, std::string> prefixes_;
  std::map<std::string, Term> blanks_;
  std::size_t next_blank_ = 0;
  Graph graph_;
};

bool plain_local_name(std::string_view local) {
  if (local.empty() || !(std::isalpha(static_cast<unsigned char>(local[0])) || local[0] == '_')) {
    return false;
  }
  return std::all_of(local.begin(), local.end(), [](unsigned char c) {
    return std::isalnum(c) || c == '_' || c == '-';
  });
}

}  // namespace

Graph parse_graph(std::string_view text, Format format, std::string_view base) {
  if (!base.empty() && !is_absolute_iri(base)) {
    throw InvalidArgument("base is not an absolute IRI: '" + std::string(base) + "'");
  }
  return Reader(text, format, base).run();
}

std::string serialize_graph(const Graph& graph, Format format, const PrefixRegistry* prefixes) {
  std::string out;
  if (format == Format::kNTriples) {
    for (const auto& t : graph) {
      out += t.subject.to_ntriples();
      out += ' ';
      out += t.predicate.to_ntriples();
      out += ' ';
      out += t.object.to_ntriples();
      out += " .\n";
    }
    return out;
  }

  std::map<std::string, std::string> used;
  auto term_text = [&](const Term& term) -> std::string {
    if (term.is_iri() && prefixes != nullptr) {
      if (auto split = prefixes->split(term.value()); split && plain_local_name(split->second)) {
        used[split->first] = *prefixes->name_space(split->first);
        return split->first + ":" + split->second;
      }
    }
    return term.to_ntriples();
  };

  std::string body;
  const Triple* previous = nullptr;
  for (const auto& t : graph) {
    if (previous == nullptr) {
      body += term_text(t.subject) + " " + term_text(t.predicate) + " ";
    } else if (previous->subject != t.subject) {
      body += " .\n\n" + term_text(t.subject) + " " + term_text(t.predicate) + " ";
    } else if (previous->predicate != t.predicate) {
      body += " ;\n    " + term_text(t.predicate) + " ";
    } else {
      body += ", ";
    }
    body += term_text(t.object);
    previous = &t;
  }
  if (previous != nullptr) body += " .\n";

  for (const auto& [prefix, ns] : used) {
    out += "@prefix " + prefix + ": <" + ns + "> .\n";
  }
  if (!used.empty() && !body.empty()) out += "\n";
  out += body;
  return out;
}

}  // namespace semviz::rdf
