#include "oracles.hpp"

#include <algorithm>

#include "ws/factor.hpp"

namespace ws::oracle {

namespace {

// --- raw F_p[t] arithmetic (independent of the library's Poly) -------------

using rp = std::vector<long long>;

long long md(long long a, long long p) {
    a %= p;
    return a < 0 ? a + p : a;
}

long long inv_md(long long a, long long p) {
    long long t = 0, nt = 1, r = p, nr = md(a, p);
    while (nr != 0) {
        long long q = r / nr;
        long long tmp = t - q * nt;
        t = nt;
        nt = tmp;
        tmp = r - q * nr;
        r = nr;
        nr = tmp;
    }
    return md(t, p);
}

void prune(rp& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

int deg(const rp& a) { return static_cast<int>(a.size()) - 1; }

rp add(const rp& a, const rp& b, long long p) {
    rp r(std::max(a.size(), b.size()), 0);
    for (size_t i = 0; i < r.size(); ++i)
        r[i] = md((i < a.size() ? a[i] : 0) + (i < b.size() ? b[i] : 0), p);
    prune(r);
    return r;
}

rp sub(const rp& a, const rp& b, long long p) {
    rp r(std::max(a.size(), b.size()), 0);
    for (size_t i = 0; i < r.size(); ++i)
        r[i] = md((i < a.size() ? a[i] : 0) - (i < b.size() ? b[i] : 0), p);
    prune(r);
    return r;
}

rp mul(const rp& a, const rp& b, long long p) {
    if (a.empty() || b.empty()) return {};
    rp r(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) r[i + j] = md(r[i + j] + a[i] * b[j], p);
    prune(r);
    return r;
}

rp scalar(const rp& a, long long c, long long p) {
    rp r = a;
    for (auto& x : r) x = md(x * c, p);
    prune(r);
    return r;
}

// remainder modulo b (b nonzero)
rp rem(rp a, const rp& b, long long p) {
    prune(a);
    long long li = inv_md(b.back(), p);
    while (deg(a) >= deg(b) && !a.empty()) {
        long long c = md(a.back() * li, p);
        size_t shift = a.size() - b.size();
        for (size_t i = 0; i < b.size(); ++i) a[shift + i] = md(a[shift + i] - c * b[i], p);
        prune(a);
    }
    return a;
}

// exact quotient a / b
rp divexact(rp a, const rp& b, long long p) {
    prune(a);
    rp q(a.size() >= b.size() ? a.size() - b.size() + 1 : 0, 0);
    long long li = inv_md(b.back(), p);
    while (deg(a) >= deg(b) && !a.empty()) {
        long long c = md(a.back() * li, p);
        size_t shift = a.size() - b.size();
        q[shift] = c;
        for (size_t i = 0; i < b.size(); ++i) a[shift + i] = md(a[shift + i] - c * b[i], p);
        prune(a);
    }
    return q;
}

// multiplicity of pi in a (a nonzero)
int val(const rp& a, const rp& pi, long long p) {
    int e = 0;
    rp cur = a;
    while (true) {
        rp r = rem(cur, pi, p);
        if (!r.empty()) return e;
        cur = divexact(cur, pi, p);
        ++e;
        if (cur.empty()) return e; // defensive; a nonzero means this ends
    }
}

// inverse of a modulo pi (gcd 1)
rp inv_mod(const rp& a, const rp& pi, long long p) {
    rp t{}, nt{1}, r = pi, nr = rem(a, pi, p);
    while (!nr.empty()) {
        rp q = divexact(sub(r, rem(r, nr, p), p), nr, p);
        rp t2 = sub(t, mul(q, nt, p), p);
        t = nt;
        nt = t2;
        rp r2 = rem(r, nr, p);
        r = nr;
        nr = r2;
    }
    // r = unit gcd
    return scalar(t, inv_md(r.at(0), p), p);
}

std::optional<long long> sqrt_md(long long a, long long p) {
    a = md(a, p);
    for (long long x = 0; x < p; ++x)
        if (md(x * x, p) == a) return x;
    return std::nullopt;
}

// exact polynomial square root, if any
std::optional<rp> rp_sqrt(const rp& m, long long p) {
    if (m.empty()) return rp{};
    if (deg(m) % 2 != 0) return std::nullopt;
    int s = deg(m) / 2;
    auto lc = sqrt_md(m.back(), p);
    if (!lc || *lc == 0) return std::nullopt;
    rp x(s + 1, 0);
    x[s] = *lc;
    long long half = inv_md(2 * x[s], p);
    for (int k = s - 1; k >= 0; --k) {
        long long acc = md(m[static_cast<size_t>(s + k)], p);
        for (int i = k + 1; i < s; ++i) {
            int j = s + k - i;
            if (j > k && j <= s) acc = md(acc - x[static_cast<size_t>(i)] * x[static_cast<size_t>(j)], p);
        }
        x[static_cast<size_t>(k)] = md(acc * half, p);
    }
    if (mul(x, x, p) == m) return x;
    return std::nullopt;
}

// --- extraction from library values ----------------------------------------

long long prime_of(const QForm& q) {
    const FieldRef& f = q.field();
    if (!f->is_rational() || f->depth() != 1 || f->bottom()->ext_degree() != 1)
        fail(errc::unsupported_base, "oracle needs a depth-1 tower over a prime field");
    return f->characteristic();
}

rp to_raw(const Poly& poly) {
    rp r;
    for (int i = 0; i <= poly.degree(); ++i) r.push_back(poly.coeff(i).ff_value());
    prune(r);
    return r;
}

rp reversed(const rp& a) {
    rp r(a.rbegin(), a.rend());
    prune(r);
    return r;
}

// integral square-class representatives of the entries; at infinity the
// substitution t -> 1/u turns the degree valuation into the place u
std::vector<rp> integral_entries(const QForm& q, const Place& v, rp& pi_out, long long p) {
    std::vector<rp> out;
    if (v.is_infinity()) {
        pi_out = {0, 1};
        for (const auto& a : q.entries()) {
            rp nu = reversed(to_raw(a.num()));
            rp de = reversed(to_raw(a.den()));
            rp b = mul(nu, de, p);
            int s = a.den().degree() - a.num().degree();
            int e = ((s % 2) + 2) % 2;
            for (int i = 0; i < e; ++i) b.insert(b.begin(), 0);
            out.push_back(std::move(b));
        }
        return out;
    }
    pi_out = to_raw(v.pi());
    for (const auto& a : q.entries()) out.push_back(mul(to_raw(a.num()), to_raw(a.den()), p));
    return out;
}

// --- digit search with a Newton cut -----------------------------------------

struct HenselCtx {
    long long p;
    rp pi;
    int d;              // deg pi
    int n;              // dimension
    int N;              // precision target
    std::vector<rp> b;  // entries, valuations in {0,1}
    std::vector<int> bval;
    std::vector<rp> pi_pow; // pi^0 .. pi^N
    std::uint64_t nodes = 0;
    std::uint64_t budget;

    rp eval_q(const std::vector<rp>& x) const {
        rp s{};
        for (int i = 0; i < n; ++i) s = add(s, mul(b[static_cast<size_t>(i)], mul(x[static_cast<size_t>(i)], x[static_cast<size_t>(i)], p), p), p);
        return rem(s, pi_pow[static_cast<size_t>(N)], p);
    }

    // digit value of index c as a polynomial of degree < d
    rp digit(std::uint64_t c) const {
        rp w;
        for (int i = 0; i < d; ++i) {
            w.push_back(static_cast<long long>(c % static_cast<std::uint64_t>(p)));
            c /= static_cast<std::uint64_t>(p);
        }
        prune(w);
        return w;
    }

    bool success(const std::vector<rp>& x) const {
        rp s = eval_q(x);
        if (s.empty()) return true; // zero mod pi^N
        int vs = val(s, pi, p);
        if (vs >= N) return true;
        int gmin = -1;
        for (int j = 0; j < n; ++j) {
            if (x[static_cast<size_t>(j)].empty()) continue;
            int g = bval[static_cast<size_t>(j)] + val(x[static_cast<size_t>(j)], pi, p);
            if (gmin < 0 || g < gmin) gmin = g;
        }
        return gmin >= 0 && vs >= 2 * gmin + 1;
    }

    bool dfs(std::vector<rp>& x, int pivot, int k) {
        if (++nodes > budget) fail(errc::internal_error, "hensel oracle budget exhausted");
        if (success(x)) return true;
        if (k >= N) return false;
        std::uint64_t digits = 1;
        for (int i = 0; i < d; ++i) digits *= static_cast<std::uint64_t>(p);
        if (k == 0) {
            // full quadratic enumeration of the starting digits
            std::vector<std::uint64_t> idx(static_cast<size_t>(n), 0);
            while (true) {
                std::vector<rp> y = x;
                for (int j = 0; j < n; ++j)
                    if (j != pivot) y[static_cast<size_t>(j)] = digit(idx[static_cast<size_t>(j)]);
                rp s = eval_q(y);
                if (s.empty() || val(s, pi, p) >= 1) {
                    if (dfs(y, pivot, 1)) return true;
                }
                int j = 0;
                while (j < n && (j == pivot || ++idx[static_cast<size_t>(j)] == digits)) {
                    if (j != pivot) idx[static_cast<size_t>(j)] = 0;
                    ++j;
                }
                if (j == n) break;
            }
            return false;
        }
        // linear extension: c + sum L_j w_j = 0 over the residue field
        rp s = eval_q(x);
        int vs = s.empty() ? N : val(s, pi, p);
        if (vs < k) return false; // dead branch
        rp c = s.empty() ? rp{} : rem(divexact(s, pi_pow[static_cast<size_t>(std::min(vs, k))], p), pi, p);
        if (vs > k) c = {};
        std::vector<rp> L(static_cast<size_t>(n));
        bool any_l = false;
        int lead = -1;
        for (int j = 0; j < n; ++j) {
            if (j == pivot) continue;
            rp g = mul(b[static_cast<size_t>(j)], x[static_cast<size_t>(j)], p);
            g = scalar(g, 2, p);
            L[static_cast<size_t>(j)] = rem(g, pi, p);
            if (!L[static_cast<size_t>(j)].empty() && lead < 0) lead = j;
            any_l = any_l || !L[static_cast<size_t>(j)].empty();
        }
        if (!any_l) {
            if (!c.empty()) return false;
            // free extension of every coordinate
            std::vector<std::uint64_t> idx(static_cast<size_t>(n), 0);
            while (true) {
                std::vector<rp> y = x;
                for (int j = 0; j < n; ++j)
                    if (j != pivot)
                        y[static_cast<size_t>(j)] =
                            add(y[static_cast<size_t>(j)],
                                mul(digit(idx[static_cast<size_t>(j)]), pi_pow[static_cast<size_t>(k)], p), p);
                if (dfs(y, pivot, k + 1)) return true;
                int j = 0;
                while (j < n && (j == pivot || ++idx[static_cast<size_t>(j)] == digits)) {
                    if (j != pivot) idx[static_cast<size_t>(j)] = 0;
                    ++j;
                }
                if (j == n) break;
            }
            return false;
        }
        rp linv = inv_mod(L[static_cast<size_t>(lead)], pi, p);
        // enumerate the free digits, solve for the lead digit
        std::vector<int> frees;
        for (int j = 0; j < n; ++j)
            if (j != pivot && j != lead) frees.push_back(j);
        std::vector<std::uint64_t> idx(frees.size(), 0);
        while (true) {
            rp acc = c;
            std::vector<rp> y = x;
            for (size_t fi = 0; fi < frees.size(); ++fi) {
                rp w = digit(idx[fi]);
                acc = add(acc, rem(mul(L[static_cast<size_t>(frees[fi])], w, p), pi, p), p);
                y[static_cast<size_t>(frees[fi])] =
                    add(y[static_cast<size_t>(frees[fi])], mul(w, pi_pow[static_cast<size_t>(k)], p), p);
            }
            acc = rem(acc, pi, p);
            rp wl = rem(mul(scalar(acc, p - 1, p), linv, p), pi, p);
            y[static_cast<size_t>(lead)] =
                add(y[static_cast<size_t>(lead)], mul(wl, pi_pow[static_cast<size_t>(k)], p), p);
            if (dfs(y, pivot, k + 1)) return true;
            size_t j = 0;
            while (j < frees.size() && ++idx[j] == digits) idx[j++] = 0;
            if (j == frees.size()) break;
        }
        return false;
    }
};

} // namespace

bool hensel_isotropic(const QForm& q, const Place& v, std::uint64_t node_budget) {
    HenselCtx ctx;
    ctx.p = prime_of(q);
    ctx.budget = node_budget;
    std::vector<rp> raws = integral_entries(q, v, ctx.pi, ctx.p);
    ctx.d = deg(ctx.pi);
    ctx.n = q.dim();
    // reduce valuations into {0,1}
    int maxval = 0;
    rp pi2 = mul(ctx.pi, ctx.pi, ctx.p);
    for (auto& b : raws) {
        int e = val(b, ctx.pi, ctx.p);
        while (e >= 2) {
            b = divexact(b, pi2, ctx.p);
            e -= 2;
        }
        maxval = std::max(maxval, e);
    }
    ctx.N = 2 * maxval + 3;
    ctx.b = std::move(raws);
    for (const auto& b : ctx.b) ctx.bval.push_back(val(b, ctx.pi, ctx.p));
    ctx.pi_pow.assign(1, rp{1});
    for (int i = 1; i <= ctx.N; ++i)
        ctx.pi_pow.push_back(mul(ctx.pi_pow.back(), ctx.pi, ctx.p));

    for (int pivot = 0; pivot < ctx.n; ++pivot) {
        std::vector<rp> x(static_cast<size_t>(ctx.n));
        x[static_cast<size_t>(pivot)] = rp{1};
        if (ctx.dfs(x, pivot, 0)) return true;
    }
    return false;
}

// ---------------------------------------------------------------------------
// Global bounded-degree search
// ---------------------------------------------------------------------------

GlobalSearch global_search(const QForm& q, int max_degree, std::uint64_t node_budget) {
    long long p = prime_of(q);
    const FieldRef& f = q.field();
    const FieldRef& k = f->bottom();
    int n = q.dim();
    std::vector<rp> b;
    std::vector<Poly> dens;
    for (const auto& a : q.entries()) {
        b.push_back(mul(to_raw(a.num()), to_raw(a.den()), p));
        dens.push_back(a.den());
    }
    GlobalSearch res;
    res.outcome = SearchOutcome::exhausted;
    res.height_reached = -1;
    if (n == 1) {
        res.height_reached = max_degree;
        return res;
    }

    auto to_elem = [&](const rp& raw) {
        std::vector<Element> cs;
        for (long long c : raw) cs.push_back(k->from_int(c));
        return Element::fraction(f, Poly(k, std::move(cs)), Poly::constant(k->one()));
    };
    auto emit_witness = [&](const std::vector<rp>& tail, const Element& head) {
        // witness for the integralized form; transform back: y_i = x_i * den_i
        std::vector<Element> w;
        w.push_back(head * Element::fraction(f, dens[0], Poly::constant(k->one())));
        for (int j = 1; j < n; ++j)
            w.push_back(to_elem(tail[static_cast<size_t>(j - 1)]) *
                        Element::fraction(f, dens[static_cast<size_t>(j)], Poly::constant(k->one())));
        // defensive check against the original form
        Element acc = f->zero();
        for (int j = 0; j < n; ++j) acc = acc + q.entry(j) * w[static_cast<size_t>(j)] * w[static_cast<size_t>(j)];
        if (!acc.is_zero()) fail(errc::internal_error, "oracle produced a non-root");
        bool nonzero = false;
        for (const auto& e : w) nonzero = nonzero || !e.is_zero();
        if (!nonzero) fail(errc::internal_error, "oracle produced the zero vector");
        return w;
    };

    std::uint64_t nodes = 0;
    for (int h = 0; h <= max_degree; ++h) {
        std::uint64_t per = 1;
        for (int i = 0; i <= h; ++i) per *= static_cast<std::uint64_t>(p);
        std::vector<std::uint64_t> idx(static_cast<size_t>(n - 1), 0);
        while (true) {
            if (++nodes > node_budget) {
                res.outcome = SearchOutcome::budget;
                res.height_reached = h - 1;
                return res;
            }
            std::vector<rp> tail(static_cast<size_t>(n - 1));
            bool top_degree = (h == 0);
            bool all_zero = true;
            for (int j = 0; j < n - 1; ++j) {
                std::uint64_t c = idx[static_cast<size_t>(j)];
                rp w;
                for (int i = 0; i <= h; ++i) {
                    w.push_back(static_cast<long long>(c % static_cast<std::uint64_t>(p)));
                    c /= static_cast<std::uint64_t>(p);
                }
                prune(w);
                if (deg(w) == h) top_degree = true;
                if (!w.empty()) all_zero = false;
                tail[static_cast<size_t>(j)] = std::move(w);
            }
            if ((top_degree || h == 0) && !all_zero) {
                rp c{};
                for (int j = 0; j < n - 1; ++j)
                    c = add(c, mul(b[static_cast<size_t>(j + 1)],
                                   mul(tail[static_cast<size_t>(j)], tail[static_cast<size_t>(j)], p), p), p);
                c = scalar(c, p - 1, p); // c = -sum
                if (c.empty()) {
                    res.outcome = SearchOutcome::found;
                    res.height_reached = h;
                    res.witness = emit_witness(tail, f->zero());
                    return res;
                }
                auto root = rp_sqrt(mul(c, b[0], p), p);
                if (root) {
                    Element head = to_elem(*root) / to_elem(b[0]);
                    res.outcome = SearchOutcome::found;
                    res.height_reached = h;
                    res.witness = emit_witness(tail, head);
                    return res;
                }
            }
            size_t j = 0;
            while (j < idx.size() && ++idx[j] == per) idx[j++] = 0;
            if (j == idx.size()) break;
        }
    }
    res.height_reached = max_degree;
    return res;
}

// ---------------------------------------------------------------------------
// Constructive hyperbolic splitting
// ---------------------------------------------------------------------------

namespace {

Element bilinear(const QForm& q, const std::vector<Element>& x, const std::vector<Element>& y) {
    Element acc = q.field()->zero();
    for (int i = 0; i < q.dim(); ++i)
        acc = acc + q.entry(i) * x[static_cast<size_t>(i)] * y[static_cast<size_t>(i)];
    return acc;
}

// congruent diagonalization of a symmetric Gram matrix; returns the nonzero
// diagonal entries
std::vector<Element> diagonalize_gram(std::vector<std::vector<Element>> g, const FieldRef& f) {
    size_t n = g.size();
    std::vector<Element> out;
    std::vector<bool> done(n, false);
    auto row_op = [&](size_t dst, size_t src, const Element& c) {
        // x_dst -> x_dst + c * x_src, applied symmetrically
        for (size_t j = 0; j < n; ++j) g[dst][j] = g[dst][j] + c * g[src][j];
        for (size_t j = 0; j < n; ++j) g[j][dst] = g[j][dst] + c * g[j][src];
    };
    for (size_t round = 0; round < n; ++round) {
        // pick a live index with nonzero diagonal, creating one if needed
        size_t piv = n;
        for (size_t i = 0; i < n && piv == n; ++i)
            if (!done[i] && !g[i][i].is_zero()) piv = i;
        if (piv == n) {
            size_t a = n, b = n;
            for (size_t i = 0; i < n && a == n; ++i)
                for (size_t j = i + 1; j < n && a == n; ++j)
                    if (!done[i] && !done[j] && !g[i][j].is_zero()) {
                        a = i;
                        b = j;
                    }
            if (a == n) break; // remaining block is zero
            row_op(a, b, f->one());
            piv = a;
        }
        Element d = g[piv][piv];
        for (size_t i = 0; i < n; ++i) {
            if (i == piv || done[i] || g[i][piv].is_zero()) continue;
            row_op(i, piv, -(g[i][piv] / d));
        }
        out.push_back(d);
        done[piv] = true;
        for (size_t j = 0; j < n; ++j) {
            g[piv][j] = f->zero();
            g[j][piv] = f->zero();
        }
    }
    return out;
}

} // namespace

int constructive_split(const QForm& q0, int finder_degree, std::uint64_t finder_budget) {
    QForm q = q0;
    const FieldRef& f = q0.field();
    while (true) {
        if (q.dim() == 0) return 0;
        if (q.dim() == 1) return 1;
        GlobalSearch gs = global_search(q, finder_degree, finder_budget);
        if (gs.outcome != SearchOutcome::found) return q.dim();
        const std::vector<Element>& v = gs.witness;
        // hyperbolic partner
        int j0 = -1;
        for (int j = 0; j < q.dim(); ++j)
            if (!v[static_cast<size_t>(j)].is_zero()) j0 = j;
        std::vector<Element> u(static_cast<size_t>(q.dim()), f->zero());
        u[static_cast<size_t>(j0)] = f->one();
        Element bvu = bilinear(q, v, u);
        for (auto& e : u) e = e / bvu;                        // B(v,u) = 1
        Element qu = bilinear(q, u, u);
        Element lambda = -(qu / f->from_int(2));
        for (int i = 0; i < q.dim(); ++i)
            u[static_cast<size_t>(i)] = u[static_cast<size_t>(i)] + lambda * v[static_cast<size_t>(i)];
        // project the standard basis onto the orthogonal complement
        size_t n = static_cast<size_t>(q.dim());
        std::vector<std::vector<Element>> w(n, std::vector<Element>(n, f->zero()));
        for (size_t i = 0; i < n; ++i) {
            std::vector<Element> e(n, f->zero());
            e[i] = f->one();
            Element cu = bilinear(q, e, u);
            Element cv = bilinear(q, e, v);
            for (size_t j = 0; j < n; ++j)
                w[i][j] = e[j] - cu * v[j] - cv * u[j];
        }
        std::vector<std::vector<Element>> gram(n, std::vector<Element>(n, f->zero()));
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j) gram[i][j] = bilinear(q, w[i], w[j]);
        std::vector<Element> diag = diagonalize_gram(std::move(gram), f);
        if (static_cast<int>(diag.size()) != q.dim() - 2)
            fail(errc::internal_error, "split complement has the wrong rank");
        if (diag.empty()) return 0;
        q = QForm::make(f, std::move(diag));
    }
}

// ---------------------------------------------------------------------------
// Finite-field exhaustive oracles
// ---------------------------------------------------------------------------

bool exhaustive_ff_isotropic(const QForm& q) {
    const FieldRef& f = q.field();
    std::vector<Element> elems = ff_enumerate(f);
    size_t m = elems.size();
    size_t n = static_cast<size_t>(q.dim());
    std::vector<size_t> idx(n, 0);
    while (true) {
        bool nonzero = false;
        Element acc = f->zero();
        for (size_t i = 0; i < n; ++i) {
            const Element& x = elems[idx[i]];
            if (!x.is_zero()) nonzero = true;
            acc = acc + q.entry(static_cast<int>(i)) * x * x;
        }
        if (nonzero && acc.is_zero()) return true;
        size_t j = 0;
        while (j < n && ++idx[j] == m) idx[j++] = 0;
        if (j == n) return false;
    }
}

bool exhaustive_ff_isometric_dim2(const QForm& a, const QForm& b) {
    const FieldRef& f = a.field();
    std::vector<Element> elems = ff_enumerate(f);
    for (const auto& m00 : elems)
        for (const auto& m01 : elems)
            for (const auto& m10 : elems)
                for (const auto& m11 : elems) {
                    if ((m00 * m11 - m01 * m10).is_zero()) continue;
                    // M^T diag(a) M == diag(b)
                    Element g00 = a.entry(0) * m00 * m00 + a.entry(1) * m10 * m10;
                    Element g11 = a.entry(0) * m01 * m01 + a.entry(1) * m11 * m11;
                    Element g01 = a.entry(0) * m00 * m01 + a.entry(1) * m10 * m11;
                    if (g01.is_zero() && g00 == b.entry(0) && g11 == b.entry(1)) return true;
                }
    return false;
}

} // namespace ws::oracle
