#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ws/algebra.hpp"
#include "ws/factor.hpp"
#include "ws/qform.hpp"

namespace ws {

/**
 * A discrete valuation on a rational function field, trivial on its base:
 * v_pi for a monic irreducible polynomial pi in the top variable, or the
 * degree valuation at infinity. The uniformizer convention is fixed: pi
 * itself for finite places, 1/x for infinity.
 */
class Place {
public:
    enum class Kind { finite, infinity };

    /// Finite place; irreducibility is certified where the machinery can
    /// (always over finite bases; degree <= 3 over depth-1 bases; quadratics
    /// wherever the square test decides). Uncertifiable input is refused.
    static Place finite_place(FieldRef parent, const Poly& pi);
    static Place infinity(FieldRef parent);
    /// x^2 + c with -c certified a non-square (square_product if it is one).
    static Place quadratic(FieldRef parent, const Element& c);

    Kind kind() const { return kind_; }
    bool is_infinity() const { return kind_ == Kind::infinity; }
    const FieldRef& parent() const { return parent_; }
    const Poly& pi() const;
    int degree() const; // deg pi for finite places, 1 for infinity

    /// Serialized form: fin(x2^2+x1) or inf(x2).
    std::string str() const;

    /// Canonical order: finite by degree then coefficients, infinity last.
    static int compare(const Place& a, const Place& b);
    bool operator==(const Place& o) const;

private:
    Place() = default;
    Kind kind_ = Kind::finite;
    FieldRef parent_;
    Poly pi_;
};

/// v(a); multiplicative, v_pi counts pi-multiplicity, v_inf = deg den - deg num.
long valuation(const Place& v, const Element& a);

/// a * pi^{-v(a)} (finite) or a * x^{v(a)} (infinity): a unit at v.
Element unit_part(const Place& v, const Element& a);

/**
 * Handle on the residue field kappa_v. Recognizable cases carry a FieldDesc:
 * the base field itself (degree-1 places and infinity) or a finite field
 * (places over a finite base, flattened when the base is an extension).
 * Places of degree >= 2 over a function-field base are opaque: quotient-ring
 * arithmetic is available through residue_rep, but no isotropy decisions.
 */
struct ResidueField {
    enum class Kind { base, finite_ext, opaque };
    Kind kind = Kind::base;
    FieldRef field; // null when opaque
    // flattening data when the place's base is itself an extension field
    std::optional<Element> base_gen_image; // image of the base generator
    std::optional<Element> tbar_image;     // image of t mod pi

    bool recognizable() const { return kind != Kind::opaque; }
    std::string describe() const;
};

ResidueField residue_field(const Place& v);

/// Residue of a v-unit in a recognizable residue field.
Element residue(const Place& v, const Element& a, const ResidueField& rf);
Element residue(const Place& v, const Element& a);

/// Quotient-ring representative num * den^{-1} mod pi (any finite place).
Poly residue_rep(const Place& v, const Element& a);

struct Support {
    std::vector<Place> places; // canonical order, infinity always included last
    bool exact = true;         // false when conservative cofactors remain
    std::vector<Poly> unresolved; // squarefree cofactors that could not be split
};

/// All finite places where some entry of the form has nonzero valuation,
/// plus infinity. Exact over finite bases; over function-field bases linear
/// factors are extracted exactly and certified quadratics recognized, higher
/// cofactors are reported as unresolved with exact = false.
Support support_places(const QForm& q);

/// Support of a single nonzero element (finite places only, plus exact flag).
Support element_support(const Element& a);

} // namespace ws
