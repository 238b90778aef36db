#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace otmr {

// Minimal s-expression tree shared by every textual format in the library.
// A brace group such as `{{},{{}}}` is read as a single atom so that set
// literals can appear inside formulas and terms.
struct SExpr {
  bool is_atom = true;
  std::string atom;
  std::vector<SExpr> items;
  size_t offset = 0;  // byte offset in the source, for diagnostics

  static SExpr make_atom(std::string a, size_t off = 0);
  static SExpr make_list(std::vector<SExpr> xs, size_t off = 0);

  bool is_list() const { return !is_atom; }
  bool head_is(std::string_view h) const;
  std::string to_string() const;
};

// Throws Error("parse-error") with the offending offset on failure.
SExpr parse_sexpr(std::string_view text);
std::vector<SExpr> parse_sexpr_all(std::string_view text);

}  // namespace otmr
