#include "semviz/markup.hpp"

#include <cctype>
#include <set>
#include <vector>

namespace semviz::markup {

std::string escape(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&#39;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string url_encode(std::string_view text) {
  static const char* hex = "0123456789ABCDEF";
  std::string out;
  for (char c : text) {
    auto u = static_cast<unsigned char>(c);
    if (std::isalnum(u) || c == '-' || c == '_' || c == '.' || c == '~') {
      out += c;
    } else {
      out += '%';
      out += hex[u >> 4];
      out += hex[u & 0xf];
    }
  }
  return out;
}

std::string url_decode(std::string_view text) {
  std::string out;
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (c == '+') {
      out += ' ';
    } else if (c == '%' && i + 2 < text.size() &&
               std::isxdigit(static_cast<unsigned char>(text[i + 1])) &&
               std::isxdigit(static_cast<unsigned char>(text[i + 2]))) {
      out += static_cast<char>(std::stoi(std::string(text.substr(i + 1, 2)), nullptr, 16));
      i += 2;
    } else {
      out += c;
    }
  }
  return out;
}

namespace {

class XmlChecker {
 public:
  explicit XmlChecker(std::string_view doc) : in_(doc) {}

  bool run(std::string* error) {
    bool ok = document();
    if (!ok && error != nullptr) *error = error_ + " at offset " + std::to_string(pos_);
    return ok;
  }

 private:
  bool fail(std::string message) {
    error_ = std::move(message);
    return false;
  }

  bool starts(std::string_view s) const { return in_.substr(pos_, s.size()) == s; }

  void skip_space() {
    while (pos_ < in_.size() && (in_[pos_] == ' ' || in_[pos_] == '\t' || in_[pos_] == '\r' ||
                                 in_[pos_] == '\n')) {
      ++pos_;
    }
  }

  static bool name_start(char c) {
    auto u = static_cast<unsigned char>(c);
    return std::isalpha(u) || c == '_' || c == ':' || u >= 0x80;
  }
  static bool name_char(char c) {
    auto u = static_cast<unsigned char>(c);
    return name_start(c) || std::isdigit(u) || c == '-' || c == '.';
  }

  bool name(std::string& out) {
    if (pos_ >= in_.size() || !name_start(in_[pos_])) return fail("expected a name");
    std::size_t start = pos_;
    while (pos_ < in_.size() && name_char(in_[pos_])) ++pos_;
    out.assign(in_.substr(start, pos_ - start));
    return true;
  }

  bool skip_until(std::string_view terminator, const char* what) {
    auto end = in_.find(terminator, pos_);
    if (end == std::string_view::npos) return fail(std::string("unterminated ") + what);
    pos_ = end + terminator.size();
    return true;
  }

  bool reference() {
    ++pos_;  // '&'
    auto end = in_.find(';', pos_);
    if (end == std::string_view::npos) return fail("unterminated entity reference");
    std::string_view ref = in_.substr(pos_, end - pos_);
    if (ref == "amp" || ref == "lt" || ref == "gt" || ref == "quot" || ref == "apos") {
      pos_ = end + 1;
      return true;
    }
    if (ref.size() >= 2 && ref[0] == '#') {
      bool hex = ref[1] == 'x';
      std::string_view digits = ref.substr(hex ? 2 : 1);
      if (digits.empty()) return fail("empty character reference");
      for (char c : digits) {
        if (hex ? !std::isxdigit(static_cast<unsigned char>(c))
                : !std::isdigit(static_cast<unsigned char>(c))) {
          return fail("malformed character reference");
        }
      }
      pos_ = end + 1;
      return true;
    }
    return fail("undeclared entity '" + std::string(ref) + "'");
  }

  bool misc() {
    for (;;) {
      skip_space();
      if (starts("<!--")) {
        if (!skip_until("-->", "comment")) return false;
      } else if (starts("<?")) {
        if (!skip_until("?>", "processing instruction")) return false;
      } else {
        return true;
      }
    }
  }

  bool doctype() {
    pos_ += 9;
    int depth = 0;
    char quote = 0;
    while (pos_ < in_.size()) {
      char c = in_[pos_++];
      if (quote != 0) {
        if (c == quote) quote = 0;
      } else if (c == '"' || c == '\'') {
        quote = c;
      } else if (c == '[') {
        ++depth;
      } else if (c == ']') {
        --depth;
      } else if (c == '>' && depth == 0) {
        return true;
      }
    }
    return fail("unterminated DOCTYPE");
  }

  bool start_tag(std::vector<std::string>& stack) {
    ++pos_;  // '<'
    std::string tag;
    if (!name(tag)) return false;
    std::set<std::string> seen;
    for (;;) {
      std::size_t before = pos_;
      skip_space();
      if (pos_ >= in_.size()) return fail("unterminated start tag");
      if (starts("/>")) {
        pos_ += 2;
        return true;
      }
      if (in_[pos_] == '>') {
        ++pos_;
        stack.push_back(tag);
        return true;
      }
      if (before == pos_) return fail("expected whitespace before attribute");
      std::string attr;
      if (!name(attr)) return false;
      if (!seen.insert(attr).second) return fail("duplicate attribute '" + attr + "'");
      skip_space();
      if (pos_ >= in_.size() || in_[pos_] != '=') return fail("attribute without value");
      ++pos_;
      skip_space();
      if (pos_ >= in_.size() || (in_[pos_] != '"' && in_[pos_] != '\'')) {
        return fail("unquoted attribute value");
      }
      char quote = in_[pos_++];
      for (;;) {
        if (pos_ >= in_.size()) return fail("unterminated attribute value");
        char c = in_[pos_];
        if (c == quote) {
          ++pos_;
          break;
        }
        if (c == '<') return fail("'<' in attribute value");
        if (c == '&') {
          if (!reference()) return false;
        } else {
          ++pos_;
        }
      }
    }
  }

  bool element() {
    std::vector<std::string> stack;
    if (!start_tag(stack)) return false;
    while (!stack.empty()) {
      if (pos_ >= in_.size()) return fail("unclosed element <" + stack.back() + ">");
      char c = in_[pos_];
      if (c == '<') {
        if (starts("</")) {
          pos_ += 2;
          std::string tag;
          if (!name(tag)) return false;
          skip_space();
          if (pos_ >= in_.size() || in_[pos_] != '>') return fail("malformed end tag");
          ++pos_;
          if (tag != stack.back()) {
            return fail("mismatched end tag </" + tag + ">, expected </" + stack.back() + ">");
          }
          stack.pop_back();
        } else if (starts("<!--")) {
          if (!skip_until("-->", "comment")) return false;
        } else if (starts("<![CDATA[")) {
          if (!skip_until("]]>", "CDATA section")) return false;
        } else if (starts("<?")) {
          if (!skip_until("?>", "processing instruction")) return false;
        } else {
          if (!start_tag(stack)) return false;
        }
      } else if (c == '&') {
        if (!reference()) return false;
      } else {
        if (starts("]]>")) return fail("']]>' in content");
        ++pos_;
      }
    }
    return true;
  }

  bool document() {
    if (starts("\xEF\xBB\xBF")) pos_ += 3;
    if (!misc()) return false;
    if (starts("<!DOCTYPE")) {
      if (!doctype()) return false;
      if (!misc()) return false;
    }
    if (pos_ >= in_.size() || in_[pos_] != '<') return fail("missing root element");
    if (!element()) return false;
    if (!misc()) return false;
    if (pos_ != in_.size()) return fail("content after the root element");
    return true;
  }

  std::string_view in_;
  std::size_t pos_ = 0;
  std::string error_;
};

}  // namespace

bool well_formed_xml(std::string_view document, std::string* error) {
  return XmlChecker(document).run(error);
}

}  // namespace semviz::markup
