#pragma once

#include <cstdlib>
#include <random>
#include <string>

#include "ws/algebra.hpp"
#include "ws/qform.hpp"

namespace ws::testutil {

inline std::uint64_t seed_from_env(std::uint64_t fallback = 42) {
    if (const char* s = std::getenv("WITT_SPRINGER_SEED")) {
        try {
            return std::stoull(s);
        } catch (...) {
        }
    }
    return fallback;
}

inline Element rand_ff(const FieldRef& k, std::mt19937_64& rng, bool nonzero = false) {
    std::vector<Element> all = ff_enumerate(k);
    size_t lo = nonzero ? 1 : 0;
    return all[lo + rng() % (all.size() - lo)];
}

inline Poly rand_poly(const FieldRef& k, std::mt19937_64& rng, int maxdeg, bool nonzero) {
    while (true) {
        int d = static_cast<int>(rng() % static_cast<unsigned>(maxdeg + 1));
        std::vector<Element> cs;
        for (int i = 0; i <= d; ++i) cs.push_back(rand_ff(k, rng));
        Poly p(k, std::move(cs));
        if (!nonzero || !p.is_zero()) return p;
    }
}

inline Element rand_elem(const FieldRef& f, std::mt19937_64& rng, int maxdeg, bool nonzero,
                         bool with_dens);

// nonzero polynomial with coefficients drawn recursively
inline Poly rand_poly_over(const FieldRef& b, std::mt19937_64& rng, int maxdeg) {
    while (true) {
        int d = static_cast<int>(rng() % static_cast<unsigned>(maxdeg + 1));
        std::vector<Element> cs;
        for (int i = 0; i <= d; ++i) cs.push_back(rand_elem(b, rng, 1, false, false));
        Poly p(b, std::move(cs));
        if (!p.is_zero()) return p;
    }
}

// random element of a tower field; lower layers get smaller degrees, and
// denominators are drawn at the outermost layer only (deep nested fractions
// still arise through arithmetic, at a bearable cost)
inline Element rand_elem(const FieldRef& f, std::mt19937_64& rng, int maxdeg,
                         bool nonzero = false, bool with_dens = true) {
    if (f->is_finite()) return rand_ff(f, rng, nonzero);
    const FieldRef& b = f->base();
    int sub = std::max(1, maxdeg - 1);
    while (true) {
        int dn = static_cast<int>(rng() % static_cast<unsigned>(maxdeg + 1));
        std::vector<Element> nc;
        for (int i = 0; i <= dn; ++i) nc.push_back(rand_elem(b, rng, sub, false, false));
        Poly num(b, std::move(nc));
        Poly den = Poly::constant(b->one());
        if (with_dens && rng() % 4 == 0) den = rand_poly_over(b, rng, 1);
        Element e = Element::fraction(f, num, den);
        if (!nonzero || !e.is_zero()) return e;
    }
}

inline QForm rand_form(const FieldRef& f, std::mt19937_64& rng, int dim, int maxdeg,
                       bool with_dens = false) {
    std::vector<Element> es;
    for (int i = 0; i < dim; ++i) es.push_back(rand_elem(f, rng, maxdeg, true, with_dens));
    return QForm::make(f, std::move(es));
}

} // namespace ws::testutil
