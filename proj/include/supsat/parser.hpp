#pragma once

#include <string>
#include <string_view>

#include "supsat/scheme.hpp"

namespace supsat {

// Parses the %BEGING / %BEGINT / %BEGINI grammar-file format. The first rule's
// nonterminal is the start symbol. Variable and nonterminal sorts are inferred;
// a parameter may be annotated as `(x : o -> o)` in the rule header.
// Throws InputError (or SortError) carrying line and column.
Scheme parse_scheme(std::string_view text);

Scheme load_scheme_file(const std::string& path);

}  // namespace supsat
