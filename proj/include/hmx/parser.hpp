#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "hmx/ast.hpp"

namespace hmx {

struct CompileError : std::runtime_error {
  CompileError(std::string k, int line, int col, const std::string& msg)
      : std::runtime_error(k + " at " + std::to_string(line) + ":" +
                           std::to_string(col) + ": " + msg),
        kind(std::move(k)),
        line(line),
        col(col) {}
  std::string kind;  // SyntaxError, DuplicateName, UnresolvedType, ...
  int line, col;
};

// Parses a source text containing exactly one subject definition.
SubjectUnit parse_subject(const std::string& source);

// Parses a source text containing one or more subject definitions.
Corpus parse_corpus(const std::string& source);

// Token-level access, shared with the .tests replay reader.
enum class Tok {
  End, Ident, Int, Long, Double, Char, String, Punct
};

struct Token {
  Tok kind = Tok::End;
  std::string text;   // identifier text or punctuation
  Value literal;      // for literal tokens
  int line = 0, col = 0;
};

std::vector<Token> lex(const std::string& source);

}  // namespace hmx
