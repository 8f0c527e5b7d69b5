#include "ws/place.hpp"

#include <algorithm>

#include "ws/parse.hpp"

namespace ws {

namespace {

void require_rational(const FieldRef& f, const char* who) {
    if (!f || !f->is_rational()) fail(errc::unsupported_base, std::string(who) + " needs a rational function field");
}

// irreducibility certification over the parent's base field; nullopt = unknown
std::optional<bool> certify_irreducible(const Poly& pi) {
    const FieldRef& b = pi.coeff_field();
    if (pi.degree() < 1) return false;
    if (b->is_finite()) return poly_is_irreducible(pi);
    if (pi.degree() == 1) return true;
    auto roots = poly_roots(pi);
    if (roots && !roots->empty()) return false;
    if (pi.degree() == 2) {
        // disc = b^2 - 4c for monic t^2 + bt + c
        Element bb = pi.coeff(1), cc = pi.coeff(0);
        Element d = bb * bb - b->from_int(4) * cc;
        if (d.is_zero()) return false;
        auto sq = is_square(d);
        if (sq.has_value()) return !*sq;
        return std::nullopt;
    }
    if (pi.degree() == 3 && roots) return roots->empty();
    return std::nullopt;
}

} // namespace

Place Place::finite_place(FieldRef parent, const Poly& pi) {
    require_rational(parent, "a finite place");
    if (!pi.coeff_field()->same(*parent->base()))
        fail(errc::field_mismatch, "place polynomial over the wrong base field");
    if (pi.degree() < 1) fail(errc::constant_polynomial, "place polynomial must be nonconstant");
    if (!pi.leading().is_one()) fail(errc::reducible_modulus, "place polynomial must be monic");
    auto cert = certify_irreducible(pi);
    if (!cert.has_value())
        fail(errc::unsupported_base, "cannot certify irreducibility of the place polynomial");
    if (!*cert) fail(errc::reducible_modulus, "place polynomial is reducible");
    Place v;
    v.kind_ = Kind::finite;
    v.parent_ = std::move(parent);
    v.pi_ = pi;
    return v;
}

Place Place::infinity(FieldRef parent) {
    require_rational(parent, "the infinite place");
    Place v;
    v.kind_ = Kind::infinity;
    v.parent_ = std::move(parent);
    return v;
}

Place Place::quadratic(FieldRef parent, const Element& c) {
    require_rational(parent, "a quadratic place");
    if (!c.attached() || !c.field()->same(*parent->base()))
        fail(errc::field_mismatch, "constant term over the wrong base field");
    if (c.is_zero()) fail(errc::zero_input, "x^2 is not irreducible");
    auto sq = is_square(-c);
    if (!sq.has_value()) fail(errc::unsupported_base, "cannot decide whether -c is a square");
    if (*sq) fail(errc::square_product, "-c is a square, so x^2 + c is reducible");
    const FieldRef& b = parent->base();
    Poly pi(b, {c, b->zero(), b->one()});
    Place v;
    v.kind_ = Kind::finite;
    v.parent_ = std::move(parent);
    v.pi_ = pi;
    return v;
}

const Poly& Place::pi() const {
    if (kind_ != Kind::finite) fail(errc::internal_error, "pi() on the infinite place");
    return pi_;
}

int Place::degree() const { return kind_ == Kind::finite ? pi_.degree() : 1; }

std::string Place::str() const {
    if (kind_ == Kind::infinity) return "inf(" + parent_->var() + ")";
    return "fin(" + to_string(pi_, parent_->var()) + ")";
}

int Place::compare(const Place& a, const Place& b) {
    if (a.kind_ != b.kind_) return a.kind_ == Kind::infinity ? 1 : -1;
    if (a.kind_ == Kind::infinity) return 0;
    return Poly::compare(a.pi_, b.pi_);
}

bool Place::operator==(const Place& o) const {
    return parent_->same(*o.parent_) && compare(*this, o) == 0;
}

long valuation(const Place& v, const Element& a) {
    if (!a.attached() || !a.field()->same(*v.parent()))
        fail(errc::field_mismatch, "element does not live in the place's field");
    if (a.is_zero()) fail(errc::zero_input, "valuation of zero");
    if (v.is_infinity()) return a.den().degree() - a.num().degree();
    long e = 0;
    Poly n = a.num();
    while (true) {
        auto [q, r] = n.divmod(v.pi());
        if (!r.is_zero()) break;
        n = std::move(q);
        ++e;
    }
    if (e > 0) return e;
    Poly d = a.den();
    while (true) {
        auto [q, r] = d.divmod(v.pi());
        if (!r.is_zero()) break;
        d = std::move(q);
        --e;
    }
    return e;
}

Element unit_part(const Place& v, const Element& a) {
    long e = valuation(v, a);
    if (e == 0) return a;
    const FieldRef& f = v.parent();
    Element t = Element::fraction(f, Poly::variable(f->base()), Poly::constant(f->base()->one()));
    if (v.is_infinity()) return a * t.pow(e);
    Element pi_elem = Element::fraction(f, v.pi(), Poly::constant(f->base()->one()));
    return a * pi_elem.pow(-e);
}

std::string ResidueField::describe() const {
    switch (kind) {
        case Kind::base: return field->name();
        case Kind::finite_ext: return field->name();
        case Kind::opaque: return "quotient(handle)";
    }
    return "?";
}

ResidueField residue_field(const Place& v) {
    const FieldRef& b = v.parent()->base();
    ResidueField rf;
    if (v.is_infinity() || v.degree() == 1) {
        rf.kind = ResidueField::Kind::base;
        rf.field = b;
        return rf;
    }
    if (b->is_finite()) {
        rf.kind = ResidueField::Kind::finite_ext;
        if (b->ext_degree() == 1) {
            // kappa = F_p[t]/(pi); reuse pi as the modulus
            std::vector<ffint> m;
            for (int i = 0; i <= v.pi().degree(); ++i) m.push_back(v.pi().coeff(i).ff_value());
            rf.field = Field::finite(b->characteristic(), m);
            return rf;
        }
        // base is an extension field: flatten to F_p^(d*e) with explicit
        // embedding data (deterministic modulus and root choices)
        int d = b->ext_degree();
        int e = v.pi().degree();
        FieldRef big = Field::finite_canonical(b->characteristic(), d * e);
        FieldRef fp = Field::prime(b->characteristic());
        // root of the base modulus in big
        std::vector<Element> mod_coeffs;
        for (ffint c : b->modulus()) mod_coeffs.push_back(big->from_int(c));
        Poly base_mod(big, std::move(mod_coeffs));
        auto zeta_roots = poly_roots(base_mod);
        if (!zeta_roots || zeta_roots->empty())
            fail(errc::internal_error, "base modulus has no root in the flattened field");
        Element zeta = zeta_roots->front();
        auto lift = [&](const Element& c) {
            Element acc = big->zero();
            const auto& cs = c.ff_coeffs();
            for (size_t i = cs.size(); i-- > 0;)
                acc = acc * zeta + big->from_int(cs[i]);
            return acc;
        };
        // root of pi (coefficients pushed through zeta) in big
        std::vector<Element> pc;
        for (int i = 0; i <= e; ++i) pc.push_back(lift(v.pi().coeff(i)));
        auto rho_roots = poly_roots(Poly(big, std::move(pc)));
        if (!rho_roots || rho_roots->empty())
            fail(errc::internal_error, "place polynomial has no root in the flattened field");
        rf.field = big;
        rf.base_gen_image = zeta;
        rf.tbar_image = rho_roots->front();
        return rf;
    }
    rf.kind = ResidueField::Kind::opaque;
    return rf;
}

Poly residue_rep(const Place& v, const Element& a) {
    if (v.is_infinity()) fail(errc::internal_error, "residue_rep needs a finite place");
    if (valuation(v, a) != 0) fail(errc::non_unit, "residue of a non-unit");
    Poly n = a.num() % v.pi();
    Poly d = a.den() % v.pi();
    return n * Poly::mod_inverse(d, v.pi()) % v.pi();
}

Element residue(const Place& v, const Element& a, const ResidueField& rf) {
    if (!a.attached() || !a.field()->same(*v.parent()))
        fail(errc::field_mismatch, "element does not live in the place's field");
    if (valuation(v, a) != 0) fail(errc::non_unit, "residue of a non-unit");
    if (!rf.recognizable())
        fail(errc::unsupported_residue_field, "opaque residue field; use residue_rep");
    const FieldRef& b = v.parent()->base();
    if (v.is_infinity()) {
        // equal degrees: ratio of leading coefficients
        return a.num().leading() / a.den().leading();
    }
    if (v.degree() == 1) {
        Element c = -v.pi().coeff(0);
        return a.num().eval(c) / a.den().eval(c);
    }
    Poly rep = residue_rep(v, a);
    if (b->ext_degree() == 1) {
        std::vector<ffint> cs;
        for (int i = 0; i <= rep.degree(); ++i) cs.push_back(rep.coeff(i).ff_value());
        return Element::ff_make(rf.field, std::move(cs));
    }
    // flattened extension: sum phi(rep_i) * rho^i
    const Element& zeta = *rf.base_gen_image;
    const Element& rho = *rf.tbar_image;
    const FieldRef& big = rf.field;
    auto lift = [&](const Element& c) {
        Element acc = big->zero();
        const auto& cc = c.ff_coeffs();
        for (size_t i = cc.size(); i-- > 0;) acc = acc * zeta + big->from_int(cc[i]);
        return acc;
    };
    Element acc = big->zero();
    for (int i = rep.degree(); i >= 0; --i) acc = acc * rho + lift(rep.coeff(i));
    return acc;
}

Element residue(const Place& v, const Element& a) { return residue(v, a, residue_field(v)); }

// ---------------------------------------------------------------------------
// Support enumeration
// ---------------------------------------------------------------------------

namespace {

void add_place(std::vector<Place>& out, Place v) {
    for (const auto& w : out)
        if (w == v) return;
    out.push_back(std::move(v));
}

// collects finite places dividing the monic polynomial f over the base
void collect_places(const FieldRef& parent, const Poly& f, Support& sup) {
    const FieldRef& b = parent->base();
    if (f.degree() < 1) return;
    if (b->is_finite()) {
        for (const auto& [pi, mult] : poly_factor(f).factors)
            add_place(sup.places, Place::finite_place(parent, pi));
        return;
    }
    SquarefreeDecomposition sq = squarefree_decomposition(f);
    if (!sq.exact) sup.exact = false;
    for (const auto& [part0, mult] : sq.parts) {
        Poly part = part0;
        // linear factor t (constant term zero)
        while (part.degree() > 0 && part.coeff(0).is_zero()) {
            add_place(sup.places, Place::finite_place(parent, Poly::variable(b)));
            std::vector<Element> cs;
            for (int i = 1; i <= part.degree(); ++i) cs.push_back(part.coeff(i));
            part = Poly(b, std::move(cs));
        }
        if (part.degree() < 1) continue;
        auto roots = poly_roots(part);
        if (roots) {
            for (const auto& rho : *roots) {
                Poly lin(b, {-rho, b->one()});
                add_place(sup.places, Place::finite_place(parent, lin));
                while (lin.divides(part)) part = part / lin;
            }
        }
        if (part.degree() < 1) continue;
        auto cert = certify_irreducible(part);
        if (cert.has_value() && *cert) {
            add_place(sup.places, Place::finite_place(parent, part));
        } else {
            sup.exact = false;
            sup.unresolved.push_back(part);
        }
    }
}

} // namespace

Support element_support(const Element& a) {
    if (!a.attached() || !a.field()->is_rational())
        fail(errc::unsupported_base, "support needs a rational function field element");
    if (a.is_zero()) fail(errc::zero_input, "support of zero");
    Support sup;
    collect_places(a.field(), a.num().monic(), sup);
    collect_places(a.field(), a.den(), sup); // already monic
    std::sort(sup.places.begin(), sup.places.end(),
              [](const Place& x, const Place& y) { return Place::compare(x, y) < 0; });
    return sup;
}

Support support_places(const QForm& q) {
    if (!q.field()->is_rational())
        fail(errc::unsupported_base, "support needs a form over a rational function field");
    Support sup;
    for (const auto& e : q.entries()) {
        Support es = element_support(e);
        for (auto& v : es.places) add_place(sup.places, std::move(v));
        if (!es.exact) sup.exact = false;
        for (auto& u : es.unresolved) sup.unresolved.push_back(std::move(u));
    }
    std::sort(sup.places.begin(), sup.places.end(),
              [](const Place& x, const Place& y) { return Place::compare(x, y) < 0; });
    sup.places.push_back(Place::infinity(q.field()));
    return sup;
}

} // namespace ws
