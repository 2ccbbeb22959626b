#pragma once

// Textual syntax for languages:
//   0  eps  <Name>  a.b  a|b  a#b  a&b  a*  (a)
// Precedence, tightest first: `*`, `.`, `#`, `&`, `|`. Binary operators
// associate to the right.

#include <string>
#include <string_view>

#include "actorcap/lang.hpp"
#include "actorcap/source.hpp"

namespace actorcap {

enum class SymbolPolicy {
  Declared,  // unknown names are a ParseError
  Intern,    // unknown names are added to the alphabet
};

LangExpr parse_lang(std::string_view text, Alphabet& alphabet,
                    SymbolPolicy policy = SymbolPolicy::Declared);

std::string to_string(const LangExpr& l, const Alphabet& alphabet);

/// Words render as concatenated names when every name is one character,
/// and as `.`-separated names otherwise. The empty word renders as `eps`.
std::string word_to_string(const Word& w, const Alphabet& alphabet);

}  // namespace actorcap
