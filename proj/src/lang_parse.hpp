#pragma once

#include <functional>
#include <optional>
#include <string_view>

#include "actorcap/lang.hpp"
#include "lexer.hpp"

namespace actorcap::detail {

using SymbolResolver = std::function<MsgType(const Token& name)>;

/// Parses a language expression from the current position. Stops at the
/// first token that cannot continue the expression.
LangExpr parse_lang_expr(TokenStream& ts, const SymbolResolver& resolve);

}  // namespace actorcap::detail
