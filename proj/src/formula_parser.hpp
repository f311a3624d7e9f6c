#pragma once

#include "canrt/formula.hpp"
#include "lexer.hpp"

namespace canrt::detail {

// formula := conj ('|' conj)*  ;  conj := unary ('&' unary)*  ;  unary := '~' unary | 'true' | atom | '(' formula ')'
BeliefFormula parse_formula(TokenStream& in);

}  // namespace canrt::detail
