#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "paracr/expr.hpp"

namespace paracr {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : std::runtime_error(what + " at offset " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

struct ParseOptions {
  // Opaque functions that may be written without arguments. A bare `G`
  // becomes G(x,y,z,p) and `G_pp` becomes its second p-derivative.
  std::map<std::string, std::vector<std::string>> opaque;
};

// Grammar:
//   expr    := term (('+'|'-') term)*
//   term    := unary (('*'|'/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' int | '^' '(' '-'? int ')')?
//   primary := number | '(' expr ')' | ident | ident '\''* '(' args ')'
//            | 'D[' ident (',' int)* ']' '(' args ')'
// Numbers are non-negative integers; rationals are written a/b.
Expr parse(std::string_view text, const ParseOptions& options = {});

// The jet-space declarations used for G and H: G(x,y,z,p), H(x,y,z,p,r).
const ParseOptions& jet_parse_options();

}  // namespace paracr
