#include "ws/factor.hpp"

#include <algorithm>
#include <functional>
#include <random>

namespace ws {

namespace {

void require_finite_coeffs(const Poly& f) {
    if (!f.coeff_field() || !f.coeff_field()->is_finite())
        fail(errc::unsupported_base, "operation needs a finite coefficient field");
}

// x^(q^k) mod f, one q-power at a time so exponents stay word-sized
Poly frobenius_power(const Poly& x, int k, const Poly& f, std::uint64_t q) {
    Poly r = x % f;
    for (int i = 0; i < k; ++i) r = r.pow_mod(q, f);
    return r;
}

bool small_is_prime(int n) {
    if (n < 2) return false;
    for (int d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

// coefficient-wise p-th root of a polynomial in x^p over a finite field
Poly pth_root(const Poly& f) {
    const FieldRef& k = f.coeff_field();
    ffint p = k->characteristic();
    std::uint64_t q = k->cardinality();
    std::vector<Element> cs;
    for (int i = 0; i <= f.degree(); ++i) {
        Element c = f.coeff(i);
        if (i % p != 0) {
            if (!c.is_zero()) fail(errc::internal_error, "not a polynomial in x^p");
            continue;
        }
        cs.push_back(c.is_zero() ? c : c.pow(static_cast<long long>(q / static_cast<std::uint64_t>(p))));
    }
    return Poly(k, std::move(cs));
}

// monic f over a finite field -> pairwise-coprime squarefree parts
void sqfree_finite(const Poly& f, int outer_mult, std::vector<std::pair<Poly, int>>& out) {
    if (f.degree() < 1) return;
    ffint p = f.coeff_field()->characteristic();
    Poly fp = f.derivative();
    if (fp.is_zero()) {
        sqfree_finite(pth_root(f), outer_mult * static_cast<int>(p), out);
        return;
    }
    Poly c = Poly::gcd(f, fp);
    Poly y = f / c;
    int i = 1;
    while (y.degree() > 0) {
        Poly z = Poly::gcd(c, y);
        Poly part = y / z;
        if (part.degree() > 0) out.emplace_back(part, i * outer_mult);
        y = std::move(z);
        c = c / y;
        ++i;
    }
    if (c.degree() > 0) sqfree_finite(pth_root(c), outer_mult * static_cast<int>(p), out);
}

// equal-degree splitting (Cantor-Zassenhaus, odd q); g squarefree, all
// irreducible factors of degree d
void edf(const Poly& g, int d, std::mt19937_64& rng, std::vector<Poly>& out) {
    if (g.degree() == d) {
        out.push_back(g.monic());
        return;
    }
    const FieldRef& k = g.coeff_field();
    std::uint64_t q = k->cardinality();
    std::vector<Element> elems = ff_enumerate(k);
    while (true) {
        // random h of degree < deg g
        std::vector<Element> cs;
        cs.reserve(static_cast<size_t>(g.degree()));
        for (int i = 0; i < g.degree(); ++i)
            cs.push_back(elems[rng() % elems.size()]);
        Poly h(k, std::move(cs));
        if (h.degree() < 1) continue;
        // m = h^((q^d - 1) / 2) via norm then (q - 1)/2 power
        Poly norm = h % g;
        Poly cur = norm;
        for (int i = 1; i < d; ++i) {
            cur = cur.pow_mod(q, g);
            norm = norm * cur % g;
        }
        Poly m = norm.pow_mod((q - 1) / 2, g);
        Poly split = Poly::gcd(m - Poly::constant(k->one()), g);
        if (split.degree() > 0 && split.degree() < g.degree()) {
            edf(split, d, rng, out);
            edf(g / split, d, rng, out);
            return;
        }
    }
}

} // namespace

bool poly_is_irreducible(const Poly& f) {
    require_finite_coeffs(f);
    int n = f.degree();
    if (n < 1) fail(errc::constant_polynomial, "irreducibility needs degree >= 1");
    if (n == 1) return true;
    const FieldRef& k = f.coeff_field();
    std::uint64_t q = k->cardinality();
    Poly fm = f.monic();
    Poly x = Poly::variable(k);
    if (!(frobenius_power(x, n, fm, q) == x % fm)) return false;
    for (int d = 2; d <= n; ++d) {
        if (n % d != 0 || !small_is_prime(d)) continue;
        Poly g = Poly::gcd(frobenius_power(x, n / d, fm, q) - x, fm);
        if (g.degree() != 0) return false;
    }
    return true;
}

Factorization poly_factor(const Poly& f) {
    require_finite_coeffs(f);
    if (f.is_zero()) fail(errc::zero_polynomial, "cannot factor the zero polynomial");
    const FieldRef& k = f.coeff_field();
    std::uint64_t q = k->cardinality();
    Factorization result;
    Poly fm = f.monic(result.unit);
    if (fm.degree() < 1) return result;

    std::vector<std::pair<Poly, int>> sqparts;
    sqfree_finite(fm, 1, sqparts);

    std::mt19937_64 rng(0x57a9'f0a2'9b1cULL); // fixed seed: reproducible splits
    for (const auto& [part, mult] : sqparts) {
        // distinct-degree filtration
        Poly rest = part;
        Poly x = Poly::variable(k);
        Poly h = x % rest;
        for (int d = 1; rest.degree() >= 1 && d <= rest.degree(); ++d) {
            if (2 * d > rest.degree()) {
                // remainder is irreducible
                result.factors.emplace_back(rest.monic(), mult);
                rest = Poly::constant(k->one());
                break;
            }
            h = h.pow_mod(q, rest);
            Poly g = Poly::gcd(h - x, rest);
            if (g.degree() > 0) {
                std::vector<Poly> irr;
                edf(g, d, rng, irr);
                for (auto& fac : irr) result.factors.emplace_back(std::move(fac), mult);
                rest = rest / g;
                h = h % rest;
            }
        }
        if (rest.degree() >= 1) result.factors.emplace_back(rest.monic(), mult);
    }

    std::sort(result.factors.begin(), result.factors.end(),
              [](const auto& a, const auto& b) { return Poly::compare(a.first, b.first) < 0; });
    return result;
}

SquarefreeDecomposition squarefree_decomposition(const Poly& f) {
    if (f.is_zero()) fail(errc::zero_polynomial, "zero polynomial");
    const FieldRef& k = f.coeff_field();
    SquarefreeDecomposition result;
    Poly fm = f.monic(result.unit);
    result.exact = true;
    if (fm.degree() < 1) return result;

    if (k->is_finite()) {
        sqfree_finite(fm, 1, result.parts);
        return result;
    }
    // non-perfect coefficient field: peel gcd(f, f') layers; a vanishing
    // derivative leaves an uncertified chunk
    std::function<void(const Poly&, int)> peel = [&](const Poly& g, int mult) {
        if (g.degree() < 1) return;
        Poly gp = g.derivative();
        if (gp.is_zero()) {
            result.parts.emplace_back(g, mult);
            result.exact = false;
            return;
        }
        Poly c = Poly::gcd(g, gp);
        Poly y = g / c;
        int i = 1;
        while (y.degree() > 0) {
            Poly z = Poly::gcd(c, y);
            Poly part = y / z;
            if (part.degree() > 0) result.parts.emplace_back(part, i * mult);
            y = std::move(z);
            c = c / y;
            ++i;
        }
        if (c.degree() > 0) peel(c, mult); // p-th-power residue, uncertifiable in general
    };
    peel(fm, 1);
    return result;
}

namespace {

// distinct roots over a rational field directly above a finite ground field,
// via monic reduction and divisor enumeration of the constant term
std::optional<std::vector<Element>> roots_depth1(const Poly& f) {
    const FieldRef& b = f.coeff_field(); // k(x1), k finite
    const FieldRef& k = b->base();
    if (!k->is_finite()) return std::nullopt;

    std::vector<Element> roots;
    Poly g = f;
    // strip t-powers: root 0
    if (g.coeff(0).is_zero()) {
        roots.push_back(b->zero());
        while (g.coeff(0).is_zero() && g.degree() > 0) {
            std::vector<Element> cs;
            for (int i = 1; i <= g.degree(); ++i) cs.push_back(g.coeff(i));
            g = Poly(b, std::move(cs));
        }
    }
    if (g.degree() < 1) {
        std::sort(roots.begin(), roots.end(),
                  [](const Element& a, const Element& c) { return Element::compare(a, c) < 0; });
        return roots;
    }

    // clear denominators: coefficients N_i in k[x1]
    Poly d_common = Poly::constant(k->one());
    for (int i = 0; i <= g.degree(); ++i) {
        Element c = g.coeff(i);
        if (!c.is_zero()) d_common = Poly::lcm(d_common, c.den());
    }
    std::vector<Poly> ncoef;
    for (int i = 0; i <= g.degree(); ++i) {
        Element c = g.coeff(i);
        ncoef.push_back(c.is_zero() ? Poly(k) : c.num() * (d_common / c.den()));
    }
    int n = g.degree();
    const Poly& lead = ncoef[static_cast<size_t>(n)];

    // G(s) = lead^(n-1) * F(s / lead): monic with k[x1] coefficients
    // G_n = 1, G_i = N_i * lead^(n-1-i); roots of f are G-roots divided by lead
    std::vector<Poly> gc(static_cast<size_t>(n) + 1);
    gc[static_cast<size_t>(n)] = Poly::constant(k->one());
    for (int i = 0; i < n; ++i) {
        Poly c = ncoef[static_cast<size_t>(i)];
        for (int j = 0; j < n - 1 - i; ++j) c = c * lead;
        gc[static_cast<size_t>(i)] = c;
    }
    Poly g0 = gc[0];
    if (g0.is_zero()) return std::nullopt; // cannot happen after stripping

    // divisors of g0 in k[x1] up to units, times all units of k
    Factorization fac = poly_factor(g0);
    std::vector<Poly> divisors{Poly::constant(k->one())};
    for (const auto& [pi, e] : fac.factors) {
        std::vector<Poly> next;
        for (const auto& d : divisors) {
            Poly acc = d;
            for (int j = 0; j <= e; ++j) {
                next.push_back(acc);
                if (j < e) acc = acc * pi;
            }
        }
        divisors = std::move(next);
    }
    Element lead_elem = Element::fraction(b, lead, Poly::constant(k->one()));
    for (const auto& d : divisors) {
        for (const auto& u : ff_enumerate(k)) {
            if (u.is_zero()) continue;
            Poly cand = d * u;
            Element sigma = Element::fraction(b, cand, Poly::constant(k->one()));
            // evaluate G at sigma
            Element acc = b->zero();
            for (size_t i = gc.size(); i-- > 0;) {
                Element ci = Element::fraction(b, gc[i], Poly::constant(k->one()));
                acc = acc * sigma + ci;
            }
            if (acc.is_zero()) roots.push_back(sigma / lead_elem);
        }
    }
    std::sort(roots.begin(), roots.end(),
              [](const Element& a, const Element& c) { return Element::compare(a, c) < 0; });
    roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
    return roots;
}

} // namespace

std::optional<std::vector<Element>> poly_roots(const Poly& f) {
    if (f.is_zero()) fail(errc::zero_polynomial, "zero polynomial");
    const FieldRef& k = f.coeff_field();
    if (k->is_finite()) {
        std::vector<Element> roots;
        for (const auto& [pi, mult] : poly_factor(f).factors)
            if (pi.degree() == 1) roots.push_back(-pi.coeff(0));
        std::sort(roots.begin(), roots.end(),
                  [](const Element& a, const Element& b) { return Element::compare(a, b) < 0; });
        return roots;
    }
    if (k->is_rational() && k->base()->is_finite()) return roots_depth1(f);
    return std::nullopt;
}

std::optional<bool> is_square(const Element& a) {
    if (!a.attached()) fail(errc::internal_error, "detached element");
    if (a.is_zero()) fail(errc::zero_input, "square test on zero");
    const FieldRef& f = a.field();
    if (f->is_finite()) return ff_is_square(a);
    // a = num/den with den monic; a is a square iff num*den is
    Poly m = a.num() * a.den();
    Element unit;
    m = m.monic(unit);
    SquarefreeDecomposition sq = squarefree_decomposition(m);
    for (const auto& [part, e] : sq.parts) {
        if (e % 2 != 0) {
            if (!sq.exact) {
                // an uncertified part with odd multiplicity could still hide
                // an even split only if the part itself is a square
                if (part.derivative().is_zero()) return std::nullopt;
            }
            return false;
        }
    }
    if (!sq.exact) return std::nullopt;
    return is_square(unit);
}

} // namespace ws
