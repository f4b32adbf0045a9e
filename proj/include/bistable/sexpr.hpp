#pragma once

// Minimal S-expression reader shared by the term grammars.

#include <cctype>
#include <memory>
#include <string>
#include <vector>

#include "bistable/error.hpp"

namespace bistable {

struct Sexpr {
  bool is_atom = false;
  std::string atom;
  std::vector<Sexpr> items;
};

namespace detail {

inline void skip_ws(const std::string& s, std::size_t& i) {
  while (i < s.size() && (std::isspace(static_cast<unsigned char>(s[i])) != 0)) ++i;
}

inline Sexpr parse_sexpr_at(const std::string& s, std::size_t& i) {
  skip_ws(s, i);
  if (i >= s.size()) fail("parse-error", "unexpected end of input");
  if (s[i] == '(') {
    ++i;
    Sexpr e;
    while (true) {
      skip_ws(s, i);
      if (i >= s.size()) fail("parse-error", "unbalanced '('");
      if (s[i] == ')') { ++i; break; }
      e.items.push_back(parse_sexpr_at(s, i));
    }
    return e;
  }
  if (s[i] == ')') fail("parse-error", "unexpected ')'");
  Sexpr e;
  e.is_atom = true;
  while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i])) && s[i] != '(' &&
         s[i] != ')')
    e.atom += s[i++];
  return e;
}

}  // namespace detail

inline Sexpr parse_sexpr(const std::string& s) {
  std::size_t i = 0;
  Sexpr e = detail::parse_sexpr_at(s, i);
  detail::skip_ws(s, i);
  if (i != s.size()) fail("parse-error", "trailing input after expression");
  return e;
}

}  // namespace bistable
