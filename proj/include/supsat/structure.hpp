#pragma once

#include "supsat/sort.hpp"
#include "supsat/term.hpp"

namespace supsat {

class Scheme;

inline unsigned sort_order(const Sort& s) { return s.order(); }

// Maximum order over subterms that are not constant-headed applications `a M1 ... Mk`
// (k >= 0); 0 when every subterm is of that form. Nonterminals count with their sort.
unsigned term_complexity(const Term& t);

// order(t) <= order(x) for every free variable x of t.
bool is_superficially_safe(const Term& t);

// Superficially safe, and for every application subterm K L1 ... Lk with K not an
// application, each of K, L1, ..., Lk is superficially safe.
bool is_safe(const Term& t);
bool scheme_is_safe(const Scheme& g);

// a1 -> ... -> ak -> o is homogeneous iff ord(a1) >= ... >= ord(ak) and every ai is.
bool is_homogeneous_sort(const Sort& s);
// Every subterm has a homogeneous sort.
bool is_homogeneous(const Term& t);
// Every subterm of every rule right-hand side has a homogeneous sort.
bool scheme_is_homogeneous(const Scheme& g);

}  // namespace supsat
