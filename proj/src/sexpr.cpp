#include "otmr/sexpr.hpp"

#include <cctype>

#include "otmr/error.hpp"

namespace otmr {

SExpr SExpr::make_atom(std::string a, size_t off) {
  SExpr s;
  s.is_atom = true;
  s.atom = std::move(a);
  s.offset = off;
  return s;
}

SExpr SExpr::make_list(std::vector<SExpr> xs, size_t off) {
  SExpr s;
  s.is_atom = false;
  s.items = std::move(xs);
  s.offset = off;
  return s;
}

bool SExpr::head_is(std::string_view h) const {
  return is_list() && !items.empty() && items[0].is_atom && items[0].atom == h;
}

std::string SExpr::to_string() const {
  if (is_atom) return atom;
  std::string out = "(";
  for (size_t i = 0; i < items.size(); ++i) {
    if (i) out += ' ';
    out += items[i].to_string();
  }
  out += ')';
  return out;
}

namespace {

class Reader {
 public:
  explicit Reader(std::string_view t) : text_(t) {}

  void skip_ws() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == ';') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  bool at_end() {
    skip_ws();
    return pos_ >= text_.size();
  }

  SExpr read() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    size_t start = pos_;
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      std::vector<SExpr> xs;
      while (true) {
        skip_ws();
        if (pos_ >= text_.size()) fail("unclosed '('", start);
        if (text_[pos_] == ')') {
          ++pos_;
          break;
        }
        xs.push_back(read());
      }
      return SExpr::make_list(std::move(xs), start);
    }
    if (c == ')') fail("unexpected ')'");
    if (c == '{') {
      int depth = 0;
      std::string a;
      while (pos_ < text_.size()) {
        char d = text_[pos_++];
        if (std::isspace(static_cast<unsigned char>(d))) continue;
        a += d;
        if (d == '{') ++depth;
        if (d == '}' && --depth == 0) return SExpr::make_atom(std::move(a), start);
      }
      fail("unclosed '{'", start);
    }
    if (c == '"') {
      ++pos_;
      std::string a;
      while (pos_ < text_.size() && text_[pos_] != '"') a += text_[pos_++];
      if (pos_ >= text_.size()) fail("unclosed string", start);
      ++pos_;
      return SExpr::make_atom(std::move(a), start);
    }
    std::string a;
    while (pos_ < text_.size()) {
      char d = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(d)) || d == '(' || d == ')' ||
          d == ';')
        break;
      a += d;
      ++pos_;
    }
    return SExpr::make_atom(std::move(a), start);
  }

  [[noreturn]] void fail(const std::string& msg, size_t at = std::string::npos) {
    if (at == std::string::npos) at = pos_;
    throw Error("parse-error", msg + " at offset " + std::to_string(at));
  }

 private:
  std::string_view text_;
  size_t pos_ = 0;
};

}  // namespace

SExpr parse_sexpr(std::string_view text) {
  Reader r(text);
  SExpr s = r.read();
  if (!r.at_end()) r.fail("trailing input");
  return s;
}

std::vector<SExpr> parse_sexpr_all(std::string_view text) {
  Reader r(text);
  std::vector<SExpr> out;
  while (!r.at_end()) out.push_back(r.read());
  return out;
}

}  // namespace otmr
