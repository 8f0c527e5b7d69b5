#include "ws/algebra.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace ws {

const char* errc_name(errc c) {
    switch (c) {
        case errc::not_prime: return "NotPrime";
        case errc::even_characteristic: return "EvenCharacteristic";
        case errc::reducible_modulus: return "ReducibleModulus";
        case errc::zero_input: return "ZeroInput";
        case errc::constant_polynomial: return "ConstantPolynomial";
        case errc::zero_polynomial: return "ZeroPolynomial";
        case errc::division_by_zero: return "DivisionByZero";
        case errc::unsupported_depth: return "UnsupportedDepth";
        case errc::field_mismatch: return "FieldMismatch";
        case errc::non_unit: return "NonUnit";
        case errc::unsupported_base: return "UnsupportedBase";
        case errc::zero_entry: return "ZeroEntry";
        case errc::empty_form: return "EmptyForm";
        case errc::zero_scalar: return "ZeroScalar";
        case errc::no_unit_entry: return "NoUnitEntry";
        case errc::dimension_one: return "DimensionOne";
        case errc::unsupported_residue_field: return "UnsupportedResidueField";
        case errc::unsupported_reorder: return "UnsupportedReorder";
        case errc::isotropic_input: return "IsotropicInput";
        case errc::missing_mandatory_entries: return "MissingMandatoryEntries";
        case errc::dimension_out_of_range: return "DimensionOutOfRange";
        case errc::square_alpha: return "SquareAlpha";
        case errc::non_square_constant_term: return "NonSquareConstantTerm";
        case errc::unverified_anisotropy_hypothesis: return "UnverifiedAnisotropyHypothesis";
        case errc::mandatory_subform_missing: return "MandatorySubformMissing";
        case errc::dimension_too_small: return "DimensionTooSmall";
        case errc::square_product: return "SquareProduct";
        case errc::chain_absent: return "ChainAbsent";
        case errc::syntax_error: return "SyntaxError";
        case errc::unknown_variable: return "UnknownVariable";
        case errc::bad_order: return "BadOrder";
        case errc::internal_error: return "InternalError";
    }
    return "UnknownError";
}

// ---------------------------------------------------------------------------
// Raw arithmetic on F_p polynomials (coefficient vectors, low to high).
// Used for finite-field element arithmetic and modulus validation.
// ---------------------------------------------------------------------------

namespace {

ffint mod_p(ffint a, ffint p) {
    a %= p;
    return a < 0 ? a + p : a;
}

ffint inv_mod_p(ffint a, ffint p) {
    // extended Euclid on integers
    ffint t = 0, nt = 1, r = p, nr = mod_p(a, p);
    while (nr != 0) {
        ffint q = r / nr;
        std::swap(t -= q * nt, nt);
        std::swap(r -= q * nr, nr);
    }
    return mod_p(t, p);
}

using raw = std::vector<ffint>;

void raw_prune(raw& v) {
    while (!v.empty() && v.back() == 0) v.pop_back();
}

raw raw_add(const raw& a, const raw& b, ffint p) {
    raw r(std::max(a.size(), b.size()), 0);
    for (size_t i = 0; i < r.size(); ++i) {
        ffint s = (i < a.size() ? a[i] : 0) + (i < b.size() ? b[i] : 0);
        r[i] = mod_p(s, p);
    }
    raw_prune(r);
    return r;
}

raw raw_sub(const raw& a, const raw& b, ffint p) {
    raw r(std::max(a.size(), b.size()), 0);
    for (size_t i = 0; i < r.size(); ++i) {
        ffint s = (i < a.size() ? a[i] : 0) - (i < b.size() ? b[i] : 0);
        r[i] = mod_p(s, p);
    }
    raw_prune(r);
    return r;
}

raw raw_mul(const raw& a, const raw& b, ffint p) {
    if (a.empty() || b.empty()) return {};
    raw r(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) r[i + j] = mod_p(r[i + j] + a[i] * b[j], p);
    raw_prune(r);
    return r;
}

// remainder of a by monic-or-not b (b != 0); inputs may carry trailing zeros
raw raw_rem(raw a, raw b, ffint p) {
    raw_prune(a);
    raw_prune(b);
    if (b.empty()) fail(errc::division_by_zero, "raw polynomial division by zero");
    ffint lead_inv = inv_mod_p(b.back(), p);
    while (a.size() >= b.size() && !a.empty()) {
        ffint c = mod_p(a.back() * lead_inv, p);
        size_t shift = a.size() - b.size();
        for (size_t i = 0; i < b.size(); ++i) a[shift + i] = mod_p(a[shift + i] - c * b[i], p);
        raw_prune(a);
    }
    return a;
}

raw raw_gcd(raw a, raw b, ffint p) {
    raw_prune(a);
    raw_prune(b);
    while (!b.empty()) {
        raw r = raw_rem(a, b, p);
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.empty()) {
        ffint li = inv_mod_p(a.back(), p);
        for (auto& c : a) c = mod_p(c * li, p);
    }
    return a;
}

raw raw_mulmod(const raw& a, const raw& b, const raw& m, ffint p) {
    return raw_rem(raw_mul(a, b, p), m, p);
}

raw raw_powmod(raw base, std::uint64_t e, const raw& m, ffint p) {
    raw result{1};
    base = raw_rem(std::move(base), m, p);
    while (e) {
        if (e & 1) result = raw_mulmod(result, base, m, p);
        base = raw_mulmod(base, base, m, p);
        e >>= 1;
    }
    return result;
}

// inverse of a modulo m, gcd(a, m) = 1
raw raw_invmod(const raw& a, const raw& m, ffint p) {
    raw t{}, nt{1}, r = m, nr = raw_rem(a, m, p);
    while (!nr.empty()) {
        // q = r / nr
        raw q;
        {
            raw rem = r;
            ffint li = inv_mod_p(nr.back(), p);
            q.assign(rem.size() > nr.size() - 1 ? rem.size() - nr.size() + 1 : 0, 0);
            while (rem.size() >= nr.size() && !rem.empty()) {
                ffint c = mod_p(rem.back() * li, p);
                size_t shift = rem.size() - nr.size();
                q[shift] = c;
                for (size_t i = 0; i < nr.size(); ++i)
                    rem[shift + i] = mod_p(rem[shift + i] - c * nr[i], p);
                raw_prune(rem);
            }
        }
        raw t2 = raw_sub(t, raw_mul(q, nt, p), p);
        t = std::move(nt);
        nt = std::move(t2);
        raw r2 = raw_rem(r, nr, p);
        r = std::move(nr);
        nr = std::move(r2);
    }
    // r is the gcd; must be a nonzero constant
    if (r.size() != 1) fail(errc::division_by_zero, "element not invertible");
    ffint ri = inv_mod_p(r[0], p);
    raw out(t.size());
    for (size_t i = 0; i < t.size(); ++i) out[i] = mod_p(t[i] * ri, p);
    raw_prune(out);
    return out;
}

bool is_prime_word(ffint n) {
    if (n < 2) return false;
    for (ffint d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

// x^(p^k) mod f via k successive p-th powers
raw raw_frobenius_power(const raw& x, int k, const raw& f, ffint p) {
    raw r = x;
    for (int i = 0; i < k; ++i) r = raw_powmod(r, static_cast<std::uint64_t>(p), f, p);
    return r;
}

bool raw_is_irreducible(const raw& f, ffint p) {
    int n = static_cast<int>(f.size()) - 1;
    if (n < 1) return false;
    if (n == 1) return true;
    raw x{0, 1};
    // x^(p^n) == x mod f
    raw xpn = raw_frobenius_power(x, n, f, p);
    if (raw_sub(xpn, x, p) != raw{}) return false;
    for (int d = 2; d <= n; ++d) {
        if (n % d != 0 || !is_prime_word(d)) continue;
        raw xp = raw_frobenius_power(x, n / d, f, p);
        raw g = raw_gcd(raw_sub(xp, x, p), f, p);
        if (g.size() != 1) return false;
    }
    return true;
}

} // namespace

// ---------------------------------------------------------------------------
// Field
// ---------------------------------------------------------------------------

FieldRef Field::finite(ffint p, const std::vector<ffint>& modulus) {
    if (p == 2) fail(errc::even_characteristic, "characteristic 2 is not supported");
    if (!is_prime_word(p)) fail(errc::not_prime, std::to_string(p) + " is not prime");
    raw m(modulus.size());
    for (size_t i = 0; i < modulus.size(); ++i) m[i] = mod_p(modulus[i], p);
    raw_prune(m);
    if (m.size() < 2) fail(errc::reducible_modulus, "modulus must have degree >= 1");
    if (m.back() != 1) fail(errc::reducible_modulus, "modulus must be monic");
    if (!raw_is_irreducible(m, p)) fail(errc::reducible_modulus, "modulus is reducible");
    int d = static_cast<int>(m.size()) - 1;
    // keep cardinality word-sized
    std::uint64_t q = 1;
    for (int i = 0; i < d; ++i) {
        if (q > (std::uint64_t(1) << 62) / static_cast<std::uint64_t>(p))
            fail(errc::internal_error, "field cardinality exceeds word size");
        q *= static_cast<std::uint64_t>(p);
    }
    auto f = std::shared_ptr<Field>(new Field());
    f->kind_ = Kind::finite;
    f->p_ = p;
    f->modulus_ = std::move(m);
    f->depth_ = 0;
    return f;
}

FieldRef Field::prime(ffint p) { return finite(p, {0, 1}); }

FieldRef Field::finite_canonical(ffint p, int degree) {
    if (degree < 1) fail(errc::reducible_modulus, "extension degree must be >= 1");
    if (degree == 1) return prime(p);
    if (p == 2) fail(errc::even_characteristic, "characteristic 2 is not supported");
    if (!is_prime_word(p)) fail(errc::not_prime, std::to_string(p) + " is not prime");
    // enumerate monic polynomials of the given degree in counter order
    raw m(degree + 1, 0);
    m[degree] = 1;
    while (true) {
        if (raw_is_irreducible(m, p)) return finite(p, m);
        int i = 0;
        while (i < degree && m[i] == p - 1) m[i++] = 0;
        if (i == degree) fail(errc::internal_error, "no irreducible polynomial found");
        ++m[i];
    }
}

FieldRef Field::rational(FieldRef base, const std::string& var) {
    if (!base) fail(errc::internal_error, "null base field");
    if (var.empty()) fail(errc::syntax_error, "empty variable name");
    if (base->has_var(var)) fail(errc::syntax_error, "duplicate variable '" + var + "' in tower");
    auto f = std::shared_ptr<Field>(new Field());
    f->kind_ = Kind::rational;
    f->p_ = base->characteristic();
    f->base_ = std::move(base);
    f->var_ = var;
    f->depth_ = f->base_->depth_ + 1;
    return f;
}

const std::vector<ffint>& Field::modulus() const {
    if (!is_finite()) fail(errc::internal_error, "modulus() on a rational field");
    return modulus_;
}

int Field::ext_degree() const { return static_cast<int>(modulus().size()) - 1; }

std::uint64_t Field::cardinality() const {
    int d = ext_degree();
    std::uint64_t q = 1;
    for (int i = 0; i < d; ++i) q *= static_cast<std::uint64_t>(p_);
    return q;
}

const FieldRef& Field::base() const {
    if (!is_rational()) fail(errc::internal_error, "base() on a finite field");
    return base_;
}

const std::string& Field::var() const {
    if (!is_rational()) fail(errc::internal_error, "var() on a finite field");
    return var_;
}

FieldRef Field::bottom() const {
    const Field* f = this;
    while (f->is_rational()) f = f->base_.get();
    return f->shared_from_this();
}

std::vector<std::string> Field::vars() const {
    std::vector<std::string> vs;
    const Field* f = this;
    while (f->is_rational()) {
        vs.push_back(f->var_);
        f = f->base_.get();
    }
    std::reverse(vs.begin(), vs.end());
    return vs;
}

bool Field::has_var(const std::string& v) const {
    const Field* f = this;
    while (f->is_rational()) {
        if (f->var_ == v) return true;
        f = f->base_.get();
    }
    return false;
}

FieldRef Field::layer_of(const std::string& v) const {
    const Field* f = this;
    while (f->is_rational()) {
        if (f->var_ == v) return f->shared_from_this();
        f = f->base_.get();
    }
    fail(errc::unknown_variable, "no layer with variable '" + v + "'");
}

bool Field::same(const Field& o) const {
    if (this == &o) return true;
    if (kind_ != o.kind_ || p_ != o.p_) return false;
    if (is_finite()) return modulus_ == o.modulus_;
    return var_ == o.var_ && base_->same(*o.base_);
}

std::string Field::name() const {
    if (is_finite()) {
        std::ostringstream os;
        if (ext_degree() == 1)
            os << "GF(" << p_ << ")";
        else
            os << "GF(" << p_ << "^" << ext_degree() << ")";
        return os.str();
    }
    return base_->name() + "(" + var_ + ")";
}

Element Field::zero() const { return from_int(0); }
Element Field::one() const { return from_int(1); }

Element Field::from_int(long long n) const {
    auto self = shared_from_this();
    if (is_finite()) {
        std::vector<ffint> c(static_cast<size_t>(ext_degree()), 0);
        c[0] = mod_p(static_cast<ffint>(n % p_), p_);
        return Element::ff_make(self, std::move(c));
    }
    Element b = base_->from_int(n);
    return Element::fraction(self, Poly::constant(b), Poly::constant(base_->one()));
}

// ---------------------------------------------------------------------------
// Element
// ---------------------------------------------------------------------------

void Element::check_same_field(const Element& o) const {
    if (!field_ || !o.field_ || !field_->same(*o.field_))
        fail(errc::field_mismatch, "operands live in different fields");
}

Element Element::ff_make(FieldRef f, std::vector<ffint> coeffs) {
    if (!f || !f->is_finite()) fail(errc::internal_error, "ff_make needs a finite field");
    ffint p = f->characteristic();
    for (auto& c : coeffs) c = mod_p(c, p);
    raw_prune(coeffs);
    if (static_cast<int>(coeffs.size()) > f->ext_degree()) coeffs = raw_rem(coeffs, f->modulus(), p);
    coeffs.resize(static_cast<size_t>(f->ext_degree()), 0);
    Element e;
    e.field_ = std::move(f);
    e.ff_ = std::move(coeffs);
    return e;
}

Element Element::fraction(FieldRef f, const Poly& num, const Poly& den) {
    if (!f || !f->is_rational()) fail(errc::internal_error, "fraction needs a rational field");
    if (den.is_zero()) fail(errc::division_by_zero, "zero denominator");
    if (!num.coeff_field()->same(*f->base()) || !den.coeff_field()->same(*f->base()))
        fail(errc::field_mismatch, "numerator/denominator over the wrong base field");
    Poly n = num, d = den;
    if (n.is_zero()) {
        d = Poly::constant(f->base()->one());
    } else if (d.is_one()) {
        // already reduced
    } else if (n.is_constant() || d.is_constant()) {
        // a constant side makes the gcd trivial; only normalize the unit
        Element unit;
        d = d.monic(unit);
        n = n * unit.inverse();
    } else {
        Poly g = Poly::gcd(n, d);
        if (g.degree() > 0) {
            n = n / g;
            d = d / g;
        }
        Element unit;
        d = d.monic(unit);
        n = n * unit.inverse();
    }
    Element e;
    e.field_ = std::move(f);
    e.rat_ = std::make_shared<const RatRep>(RatRep{std::move(n), std::move(d)});
    return e;
}

bool Element::is_zero() const {
    if (!field_) fail(errc::internal_error, "detached element");
    return field_->is_finite() ? std::all_of(ff_.begin(), ff_.end(), [](ffint c) { return c == 0; })
                               : rat_->num.is_zero();
}

bool Element::is_one() const {
    if (!field_) fail(errc::internal_error, "detached element");
    if (field_->is_finite()) {
        if (ff_.empty() || ff_[0] != 1) return false;
        return std::all_of(ff_.begin() + 1, ff_.end(), [](ffint c) { return c == 0; });
    }
    return rat_->num.is_one() && rat_->den.is_one();
}

Element Element::operator+(const Element& o) const {
    check_same_field(o);
    if (field_->is_finite()) return ff_make(field_, raw_add(ff_, o.ff_, field_->characteristic()));
    if (rat_->den.is_one() && o.rat_->den.is_one())
        return fraction(field_, rat_->num + o.rat_->num, rat_->den);
    return fraction(field_, rat_->num * o.rat_->den + o.rat_->num * rat_->den,
                    rat_->den * o.rat_->den);
}

Element Element::operator-(const Element& o) const { return *this + (-o); }

Element Element::operator-() const {
    if (!field_) fail(errc::internal_error, "detached element");
    if (field_->is_finite()) {
        std::vector<ffint> c(ff_.size());
        for (size_t i = 0; i < ff_.size(); ++i) c[i] = mod_p(-ff_[i], field_->characteristic());
        return ff_make(field_, std::move(c));
    }
    return fraction(field_, -rat_->num, rat_->den);
}

Element Element::operator*(const Element& o) const {
    check_same_field(o);
    if (field_->is_finite())
        return ff_make(field_,
                       raw_mulmod(ff_, o.ff_, field_->modulus(), field_->characteristic()));
    if (rat_->den.is_one() && o.rat_->den.is_one())
        return fraction(field_, rat_->num * o.rat_->num, rat_->den);
    return fraction(field_, rat_->num * o.rat_->num, rat_->den * o.rat_->den);
}

Element Element::operator/(const Element& o) const { return *this * o.inverse(); }

Element Element::inverse() const {
    if (is_zero()) fail(errc::division_by_zero, "inverse of zero");
    if (field_->is_finite())
        return ff_make(field_, raw_invmod(ff_, field_->modulus(), field_->characteristic()));
    return fraction(field_, rat_->den, rat_->num);
}

Element Element::pow(long long e) const {
    if (!field_) fail(errc::internal_error, "detached element");
    if (e < 0) return inverse().pow(-e);
    Element r = field_->one();
    Element b = *this;
    auto u = static_cast<unsigned long long>(e);
    while (u) {
        if (u & 1) r = r * b;
        b = b * b;
        u >>= 1;
    }
    return r;
}

bool Element::operator==(const Element& o) const {
    if (!field_ || !o.field_) return field_ == o.field_;
    if (!field_->same(*o.field_)) return false;
    if (field_->is_finite()) return ff_ == o.ff_;
    return rat_->num == o.rat_->num && rat_->den == o.rat_->den;
}

int Element::compare(const Element& a, const Element& b) {
    a.check_same_field(b);
    if (a.field_->is_finite()) {
        for (size_t i = a.ff_.size(); i-- > 0;) {
            if (a.ff_[i] != b.ff_[i]) return a.ff_[i] < b.ff_[i] ? -1 : 1;
        }
        return 0;
    }
    if (int c = Poly::compare(a.rat_->num, b.rat_->num)) return c;
    return Poly::compare(a.rat_->den, b.rat_->den);
}

const std::vector<ffint>& Element::ff_coeffs() const {
    if (!field_ || !field_->is_finite()) fail(errc::internal_error, "not a finite-field element");
    return ff_;
}

ffint Element::ff_value() const {
    const auto& c = ff_coeffs();
    if (field_->ext_degree() != 1) fail(errc::internal_error, "ff_value() needs a prime field");
    return c.empty() ? 0 : c[0];
}

const Poly& Element::num() const {
    if (!field_ || !field_->is_rational()) fail(errc::internal_error, "not a rational element");
    return rat_->num;
}

const Poly& Element::den() const {
    if (!field_ || !field_->is_rational()) fail(errc::internal_error, "not a rational element");
    return rat_->den;
}

// ---------------------------------------------------------------------------
// Poly
// ---------------------------------------------------------------------------

Poly::Poly(FieldRef k, std::vector<Element> coeffs) : k_(std::move(k)), c_(std::move(coeffs)) {
    for (const auto& c : c_)
        if (!c.attached() || !c.field()->same(*k_))
            fail(errc::field_mismatch, "coefficient in the wrong field");
    prune();
}

void Poly::prune() {
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
}

void Poly::check_field(const Poly& o) const {
    if (!k_ || !o.k_ || !k_->same(*o.k_))
        fail(errc::field_mismatch, "polynomials over different fields");
}

Poly Poly::constant(const Element& c) {
    Poly r(c.field());
    if (!c.is_zero()) r.c_.push_back(c);
    return r;
}

Poly Poly::from_int(const FieldRef& k, long long n) { return constant(k->from_int(n)); }

Poly Poly::variable(const FieldRef& k) {
    Poly r(k);
    r.c_ = {k->zero(), k->one()};
    return r;
}

Poly Poly::monomial(const Element& c, int e) {
    Poly r(c.field());
    if (c.is_zero()) return r;
    r.c_.assign(static_cast<size_t>(e) + 1, c.field()->zero());
    r.c_.back() = c;
    return r;
}

bool Poly::is_one() const { return c_.size() == 1 && c_[0].is_one(); }

Element Poly::coeff(int i) const {
    if (i < 0 || i >= static_cast<int>(c_.size())) return k_->zero();
    return c_[static_cast<size_t>(i)];
}

const Element& Poly::leading() const {
    if (is_zero()) fail(errc::internal_error, "leading coefficient of zero polynomial");
    return c_.back();
}

Poly Poly::operator+(const Poly& o) const {
    check_field(o);
    Poly r(k_);
    size_t n = std::max(c_.size(), o.c_.size());
    r.c_.reserve(n);
    for (size_t i = 0; i < n; ++i) {
        Element s = i < c_.size() ? c_[i] : k_->zero();
        if (i < o.c_.size()) s = s + o.c_[i];
        r.c_.push_back(std::move(s));
    }
    r.prune();
    return r;
}

Poly Poly::operator-() const {
    Poly r(k_);
    r.c_.reserve(c_.size());
    for (const auto& c : c_) r.c_.push_back(-c);
    return r;
}

Poly Poly::operator-(const Poly& o) const { return *this + (-o); }

Poly Poly::operator*(const Poly& o) const {
    check_field(o);
    if (is_zero() || o.is_zero()) return Poly(k_);
    Poly r(k_);
    r.c_.assign(c_.size() + o.c_.size() - 1, k_->zero());
    for (size_t i = 0; i < c_.size(); ++i) {
        if (c_[i].is_zero()) continue;
        for (size_t j = 0; j < o.c_.size(); ++j) {
            if (o.c_[j].is_zero()) continue;
            r.c_[i + j] = r.c_[i + j] + c_[i] * o.c_[j];
        }
    }
    r.prune();
    return r;
}

Poly Poly::operator*(const Element& s) const {
    Poly r(k_);
    if (s.is_zero()) return r;
    r.c_.reserve(c_.size());
    for (const auto& c : c_) r.c_.push_back(c * s);
    r.prune();
    return r;
}

std::pair<Poly, Poly> Poly::divmod(const Poly& d) const {
    check_field(d);
    if (d.is_zero()) fail(errc::division_by_zero, "polynomial division by zero");
    Poly q(k_), r = *this;
    if (r.degree() < d.degree()) return {q, r};
    q.c_.assign(static_cast<size_t>(r.degree() - d.degree()) + 1, k_->zero());
    Element li = d.leading().inverse();
    while (!r.is_zero() && r.degree() >= d.degree()) {
        int shift = r.degree() - d.degree();
        Element c = r.leading() * li;
        q.c_[static_cast<size_t>(shift)] = c;
        for (int i = 0; i <= d.degree(); ++i) {
            size_t k = static_cast<size_t>(shift + i);
            r.c_[k] = r.c_[k] - c * d.c_[static_cast<size_t>(i)];
        }
        r.prune();
    }
    q.prune();
    return {q, r};
}

bool Poly::divides(const Poly& f) const { return f.divmod(*this).second.is_zero(); }

Poly Poly::monic() const {
    Element u;
    return monic(u);
}

Poly Poly::monic(Element& unit_out) const {
    if (is_zero()) {
        unit_out = k_->one();
        return *this;
    }
    unit_out = leading();
    return *this * unit_out.inverse();
}

Poly Poly::derivative() const {
    Poly r(k_);
    for (int i = 1; i <= degree(); ++i)
        r.c_.push_back(c_[static_cast<size_t>(i)] * k_->from_int(i));
    r.prune();
    return r;
}

Element Poly::eval(const Element& x) const {
    Element r = k_->zero();
    for (size_t i = c_.size(); i-- > 0;) r = r * x + c_[i];
    return r;
}

Poly Poly::reversed() const {
    Poly r(k_);
    r.c_.assign(c_.rbegin(), c_.rend());
    r.prune();
    return r;
}

Poly Poly::pow_mod(std::uint64_t e, const Poly& m) const {
    Poly result = Poly::constant(k_->one());
    Poly base = *this % m;
    while (e) {
        if (e & 1) result = result * base % m;
        base = base * base % m;
        e >>= 1;
    }
    return result;
}

Poly Poly::gcd(const Poly& a, const Poly& b) {
    Poly x = a, y = b;
    while (!y.is_zero()) {
        Poly r = x % y;
        x = std::move(y);
        y = std::move(r);
    }
    return x.is_zero() ? x : x.monic();
}

Poly Poly::lcm(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return Poly(a.k_);
    Poly g = gcd(a, b);
    return (a * b / g).monic();
}

Poly Poly::mod_inverse(const Poly& a, const Poly& m) {
    Poly t(m.k_), nt = Poly::constant(m.k_->one());
    Poly r = m, nr = a % m;
    while (!nr.is_zero()) {
        auto [q, rem] = r.divmod(nr);
        Poly t2 = t - q * nt;
        t = std::move(nt);
        nt = std::move(t2);
        r = std::move(nr);
        nr = std::move(rem);
    }
    if (r.degree() != 0) fail(errc::division_by_zero, "not invertible modulo the given polynomial");
    return t * r.leading().inverse();
}

bool Poly::operator==(const Poly& o) const {
    if (degree() != o.degree()) return false;
    for (size_t i = 0; i < c_.size(); ++i)
        if (!(c_[i] == o.c_[i])) return false;
    return true;
}

int Poly::compare(const Poly& a, const Poly& b) {
    if (a.degree() != b.degree()) return a.degree() < b.degree() ? -1 : 1;
    for (size_t i = a.c_.size(); i-- > 0;)
        if (int c = Element::compare(a.c_[i], b.c_[i])) return c;
    return 0;
}

// ---------------------------------------------------------------------------
// Free helpers
// ---------------------------------------------------------------------------

FieldRef ff_create(ffint p, const std::vector<ffint>& modulus) { return Field::finite(p, modulus); }

bool ff_is_square(const Element& a) {
    const FieldRef& f = a.field();
    if (!f || !f->is_finite()) fail(errc::internal_error, "ff_is_square needs a finite field");
    if (a.is_zero()) fail(errc::zero_input, "square test on zero");
    std::uint64_t q = f->cardinality();
    return a.pow(static_cast<long long>((q - 1) / 2)).is_one();
}

std::vector<Element> ff_enumerate(const FieldRef& f) {
    if (!f || !f->is_finite()) fail(errc::internal_error, "ff_enumerate needs a finite field");
    std::uint64_t q = f->cardinality();
    ffint p = f->characteristic();
    int d = f->ext_degree();
    std::vector<Element> out;
    out.reserve(q);
    for (std::uint64_t n = 0; n < q; ++n) {
        std::vector<ffint> c(static_cast<size_t>(d));
        std::uint64_t m = n;
        for (int i = 0; i < d; ++i) {
            c[static_cast<size_t>(i)] = static_cast<ffint>(m % static_cast<std::uint64_t>(p));
            m /= static_cast<std::uint64_t>(p);
        }
        out.push_back(Element::ff_make(f, std::move(c)));
    }
    return out;
}

Element ff_nonsquare(const FieldRef& f) {
    for (const auto& a : ff_enumerate(f))
        if (!a.is_zero() && !ff_is_square(a)) return a;
    fail(errc::internal_error, "no nonsquare found");
}

Element embed(const Element& a, const FieldRef& target) {
    if (!a.attached() || !target) fail(errc::internal_error, "embed on detached element");
    if (a.field()->same(*target)) return a;
    if (!target->is_rational()) fail(errc::field_mismatch, "element does not embed into target");
    Element inner = embed(a, target->base());
    return Element::fraction(target, Poly::constant(inner), Poly::constant(target->base()->one()));
}

namespace {

// Applies a base-field map to every numerator/denominator coefficient of a
// rational element, producing an element of new_base(var).
Element map_base(const Element& a, const FieldRef& new_base,
                 const std::function<Element(const Element&)>& fn) {
    const FieldRef& f = a.field();
    FieldRef target = Field::rational(new_base, f->var());
    auto map_poly = [&](const Poly& p) {
        std::vector<Element> cs;
        cs.reserve(static_cast<size_t>(p.degree() + 1));
        for (int i = 0; i <= p.degree(); ++i) cs.push_back(fn(p.coeff(i)));
        return Poly(new_base, std::move(cs));
    };
    return Element::fraction(target, map_poly(a.num()), map_poly(a.den()));
}

// F..(u)(w) -> F..(w)(u) for the two topmost layers.
Element swap_adjacent_top(const Element& a) {
    const FieldRef& f = a.field();
    if (!f->is_rational() || !f->base()->is_rational())
        fail(errc::unsupported_depth, "adjacent swap needs two rational layers");
    const FieldRef& bu = f->base();     // B(u)
    const FieldRef& b = bu->base();     // B
    const std::string w = f->var();
    const std::string u = bu->var();
    FieldRef bw = Field::rational(b, w);
    FieldRef bwu = Field::rational(bw, u);

    // clear denominators: common D in B[u] across both num and den coefficients
    Poly d_common(b);
    d_common = Poly::constant(b->one());
    auto fold_dens = [&](const Poly& p) {
        for (int i = 0; i <= p.degree(); ++i) {
            Element c = p.coeff(i);
            if (!c.is_zero()) d_common = Poly::lcm(d_common, c.den());
        }
    };
    fold_dens(a.num());
    fold_dens(a.den());

    // matrix[w-power][u-power] of B-elements for D-scaled polynomials
    auto to_matrix = [&](const Poly& p) {
        std::vector<std::vector<Element>> m;
        for (int i = 0; i <= p.degree(); ++i) {
            Element c = p.coeff(i);
            std::vector<Element> row;
            if (!c.is_zero()) {
                Poly scaled = c.num() * (d_common / c.den());
                for (int j = 0; j <= scaled.degree(); ++j) row.push_back(scaled.coeff(j));
            }
            m.push_back(std::move(row));
        }
        return m;
    };
    // transpose into a polynomial in u over B(w)
    auto transpose = [&](const std::vector<std::vector<Element>>& m) {
        size_t ucount = 0;
        for (const auto& row : m) ucount = std::max(ucount, row.size());
        std::vector<Element> ucoeffs;
        for (size_t j = 0; j < ucount; ++j) {
            std::vector<Element> wcoeffs;
            for (const auto& row : m) wcoeffs.push_back(j < row.size() ? row[j] : b->zero());
            Poly pw(b, std::move(wcoeffs));
            ucoeffs.push_back(
                Element::fraction(bw, pw, Poly::constant(b->one())));
        }
        return Poly(bw, std::move(ucoeffs));
    };

    Poly num_u = transpose(to_matrix(a.num()));
    Poly den_u = transpose(to_matrix(a.den()));
    return Element::fraction(bwu, num_u, den_u);
}

} // namespace

FieldRef reorder_field(const FieldRef& f, const std::string& var) {
    if (!f || !f->is_rational()) fail(errc::unknown_variable, "not a rational field");
    if (!f->has_var(var)) fail(errc::unknown_variable, "no variable '" + var + "'");
    if (f->var() == var) return f;
    // rebuild: all layers except var, in order, then var on top
    std::vector<std::string> vs = f->vars();
    FieldRef g = f->bottom();
    for (const auto& v : vs)
        if (v != var) g = Field::rational(g, v);
    return Field::rational(g, var);
}

Element bring_to_top(const Element& a, const std::string& var) {
    const FieldRef& f = a.field();
    if (!f || !f->is_rational()) fail(errc::unknown_variable, "not a rational element");
    if (!f->has_var(var)) fail(errc::unknown_variable, "no variable '" + var + "'");
    if (f->depth() > 3) fail(errc::unsupported_depth, "towers deeper than 3 are not reordered");
    if (f->var() == var) return a;
    if (f->base()->var() == var) return swap_adjacent_top(a);
    // var sits deeper: move it to the top of the base tower, then swap
    Element lifted = map_base(a, reorder_field(f->base(), var),
                              [&](const Element& c) { return bring_to_top(c, var); });
    return swap_adjacent_top(lifted);
}

Element swap_variables(const Element& a) {
    const FieldRef& f = a.field();
    if (!f || f->depth() != 2 || !f->bottom()->is_finite())
        fail(errc::unsupported_depth, "swap_variables needs a depth-2 tower");
    return bring_to_top(a, f->base()->var());
}

} // namespace ws
