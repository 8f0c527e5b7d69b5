#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ws/error.hpp"

namespace ws {

/// Word-sized integer used for prime-field residues. All supported
/// characteristics are small odd primes, so products fit comfortably.
using ffint = std::int64_t;

class Field;
class Element;
class Poly;

using FieldRef = std::shared_ptr<const Field>;

/**
 * A field in the tower: either a finite field F_{p^d} described by an odd
 * prime p and a monic irreducible modulus over F_p, or a rational function
 * field base(var). Descriptors are immutable and shared.
 *
 * Each descriptor carries a certified index (finite fields take 1, every
 * rational layer adds 1); the engine's u-invariant bound is 2^index.
 */
class Field : public std::enable_shared_from_this<Field> {
public:
    enum class Kind { finite, rational };

    /// F_{p^d} with explicit modulus (degree-1 modulus for prime fields).
    /// Rejects p = 2, non-primes and reducible moduli.
    static FieldRef finite(ffint p, const std::vector<ffint>& modulus);

    /// Prime field F_p, modulus z.
    static FieldRef prime(ffint p);

    /// F_{p^d} with the canonical (enumeration-least) irreducible modulus.
    static FieldRef finite_canonical(ffint p, int degree);

    /// base(var). Variable names must be distinct along the tower.
    static FieldRef rational(FieldRef base, const std::string& var);

    Kind kind() const noexcept { return kind_; }
    bool is_finite() const noexcept { return kind_ == Kind::finite; }
    bool is_rational() const noexcept { return kind_ == Kind::rational; }

    /// Characteristic of the bottom prime field.
    ffint characteristic() const noexcept { return p_; }

    // Finite-field accessors.
    const std::vector<ffint>& modulus() const;
    int ext_degree() const;
    std::uint64_t cardinality() const; // p^d, word-sized by construction

    // Rational-field accessors.
    const FieldRef& base() const;
    const std::string& var() const;

    /// Number of rational layers above the bottom finite field.
    int depth() const noexcept { return depth_; }
    /// Certified index: 1 for finite fields, base + 1 per rational layer.
    int a_index() const noexcept { return depth_ + 1; }
    /// The finite field at the bottom of the tower.
    FieldRef bottom() const;
    /// Variable names bottom-up; empty for finite fields.
    std::vector<std::string> vars() const;
    /// Whether `v` names a layer of this tower.
    bool has_var(const std::string& v) const;
    /// The sub-tower whose top variable is `v`.
    FieldRef layer_of(const std::string& v) const;

    bool same(const Field& other) const;
    bool same(const FieldRef& other) const { return other && same(*other); }

    /// Canonical text, e.g. "GF(3^2)(x1)(x2)".
    std::string name() const;

    Element zero() const;
    Element one() const;
    /// Embeds a small integer through the tower.
    Element from_int(long long n) const;

private:
    Field() = default;

    Kind kind_ = Kind::finite;
    ffint p_ = 0;
    std::vector<ffint> modulus_; // finite only; monic, irreducible over F_p
    FieldRef base_;              // rational only
    std::string var_;            // rational only
    int depth_ = 0;
};

/**
 * An exact field element. Finite-field elements are coefficient vectors over
 * F_p of length d; rational elements are normalized fractions num/den of
 * polynomials over the base field (den monic, gcd(num, den) = 1, zero = 0/1).
 * Values are immutable; copies share the rational payload.
 */
class Element {
public:
    Element() = default; // detached placeholder, unusable until assigned

    static Element ff_make(FieldRef f, std::vector<ffint> coeffs);
    /// Normalized fraction; this is the rf_normalize entry point.
    static Element fraction(FieldRef f, const Poly& num, const Poly& den);

    bool attached() const noexcept { return field_ != nullptr; }
    const FieldRef& field() const { return field_; }

    bool is_zero() const;
    bool is_one() const;

    Element operator+(const Element& o) const;
    Element operator-(const Element& o) const;
    Element operator*(const Element& o) const;
    Element operator/(const Element& o) const;
    Element operator-() const;
    Element inverse() const;
    /// a^e with e possibly negative (a != 0 in that case).
    Element pow(long long e) const;

    bool operator==(const Element& o) const;
    bool operator!=(const Element& o) const { return !(*this == o); }

    /// Total canonical order (used for deterministic sorts), -1/0/1.
    static int compare(const Element& a, const Element& b);

    // Finite payload.
    const std::vector<ffint>& ff_coeffs() const;
    /// The residue for prime-field elements (d = 1).
    ffint ff_value() const;

    // Rational payload.
    const Poly& num() const;
    const Poly& den() const;

private:
    friend class Field;
    FieldRef field_;
    std::vector<ffint> ff_; // finite case
    struct RatRep;
    std::shared_ptr<const RatRep> rat_; // rational case

    void check_same_field(const Element& o) const;
};

/**
 * Dense univariate polynomial over some coefficient field of the tower.
 * Coefficients run from the constant term up; no trailing zeros. The zero
 * polynomial has degree -1.
 */
class Poly {
public:
    Poly() = default;
    explicit Poly(FieldRef k) : k_(std::move(k)) {}
    Poly(FieldRef k, std::vector<Element> coeffs);

    static Poly constant(const Element& c);
    static Poly from_int(const FieldRef& k, long long n);
    /// The monomial t.
    static Poly variable(const FieldRef& k);
    /// c * t^e
    static Poly monomial(const Element& c, int e);

    const FieldRef& coeff_field() const { return k_; }
    int degree() const noexcept { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const noexcept { return c_.empty(); }
    bool is_one() const;
    bool is_constant() const noexcept { return c_.size() <= 1; }

    /// Coefficient of t^i (zero outside the stored range).
    Element coeff(int i) const;
    const Element& leading() const;
    const std::vector<Element>& coeffs() const noexcept { return c_; }

    Poly operator+(const Poly& o) const;
    Poly operator-(const Poly& o) const;
    Poly operator*(const Poly& o) const;
    Poly operator-() const;
    Poly operator*(const Element& s) const;

    /// Euclidean division, returns {quotient, remainder}.
    std::pair<Poly, Poly> divmod(const Poly& d) const;
    Poly operator/(const Poly& d) const { return divmod(d).first; }
    Poly operator%(const Poly& d) const { return divmod(d).second; }
    bool divides(const Poly& f) const;

    Poly monic() const;
    Poly monic(Element& unit_out) const;
    Poly derivative() const;
    Element eval(const Element& x) const;
    /// Coefficient-reversed polynomial t^deg * f(1/t).
    Poly reversed() const;
    /// this^e mod m (e >= 0).
    Poly pow_mod(std::uint64_t e, const Poly& m) const;

    static Poly gcd(const Poly& a, const Poly& b); // monic unless both zero
    static Poly lcm(const Poly& a, const Poly& b);
    /// Inverse of a modulo m (gcd(a, m) = 1).
    static Poly mod_inverse(const Poly& a, const Poly& m);

    bool operator==(const Poly& o) const;
    bool operator!=(const Poly& o) const { return !(*this == o); }

    /// Canonical order: by degree, then coefficients from the top down.
    static int compare(const Poly& a, const Poly& b);

private:
    FieldRef k_;
    std::vector<Element> c_;

    void prune();
    void check_field(const Poly& o) const;
};

struct Element::RatRep {
    Poly num;
    Poly den;
};

// --- ff_create / helpers mirroring the module operations ------------------

/// Validating constructor for finite fields (alias of Field::finite).
FieldRef ff_create(ffint p, const std::vector<ffint>& modulus);

/// Euler-criterion square test in a finite field; a must be nonzero.
bool ff_is_square(const Element& a);

/// Deterministic enumeration of all elements of a finite field, canonical order.
std::vector<Element> ff_enumerate(const FieldRef& f);

/// The canonically-least nonsquare of a finite field.
Element ff_nonsquare(const FieldRef& f);

/// Embeds an element of a (possibly deep) subfield of `target`'s tower into
/// `target` by wrapping it as a constant through the rational layers.
Element embed(const Element& a, const FieldRef& target);

/// Reinterprets `a` under the canonical isomorphism that moves `var` to the
/// top of its tower (identity if already on top). Supported for towers of
/// depth <= 3; deeper towers report unsupported_depth.
Element bring_to_top(const Element& a, const std::string& var);

/// Tower with `var` moved to the top, other layers keeping relative order.
FieldRef reorder_field(const FieldRef& f, const std::string& var);

/// Depth-2 canonical swap F(x1)(x2) -> F(x2)(x1).
Element swap_variables(const Element& a);

} // namespace ws
