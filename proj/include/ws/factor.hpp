#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "ws/algebra.hpp"

namespace ws {

/// Irreducibility over a finite coefficient field. Degree must be >= 1.
bool poly_is_irreducible(const Poly& f);

struct Factorization {
    Element unit;
    std::vector<std::pair<Poly, int>> factors; // monic irreducible, canonical order
};

/// Full factorization over a finite coefficient field: squarefree
/// decomposition, distinct-degree, then equal-degree splitting with a
/// deterministic seed. Output order is canonical (degree, then lexicographic
/// coefficients), so results are reproducible.
Factorization poly_factor(const Poly& f);

struct SquarefreeDecomposition {
    Element unit;
    std::vector<std::pair<Poly, int>> parts; // monic, pairwise coprime
    bool exact; // false when a vanishing-derivative part over a non-perfect
                // base could not be certified squarefree
};

/// Squarefree-coprime decomposition over any coefficient field of the tower.
SquarefreeDecomposition squarefree_decomposition(const Poly& f);

/// Distinct roots of f in its coefficient field. Exact for finite fields and
/// for rational fields directly over a finite base (divisor enumeration);
/// nullopt for deeper coefficient fields.
std::optional<std::vector<Element>> poly_roots(const Poly& f);

/// Square test. Always decides over finite fields and depth-1 rational
/// fields; over deeper towers returns nullopt when the partial machinery
/// cannot settle it.
std::optional<bool> is_square(const Element& a);

} // namespace ws
