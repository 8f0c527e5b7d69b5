#include "ws/decide.hpp"

#include <algorithm>

#include "ws/factor.hpp"
#include "ws/parse.hpp"

namespace ws {

const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::isotropic: return "isotropic";
        case Verdict::anisotropic: return "anisotropic";
        case Verdict::undecided: return "undecided";
    }
    return "?";
}

const char* hyp_verdict_name(HypVerdict v) {
    switch (v) {
        case HypVerdict::hyperbolic: return "hyperbolic";
        case HypVerdict::not_hyperbolic: return "not-hyperbolic";
        case HypVerdict::undecided: return "undecided";
    }
    return "?";
}

const char* iso_verdict_name(IsoVerdict v) {
    switch (v) {
        case IsoVerdict::isometric: return "isometric";
        case IsoVerdict::not_isometric: return "not-isometric";
        case IsoVerdict::undecided: return "undecided";
    }
    return "?";
}

namespace {

json form_json(const QForm& q) {
    json a = json::array();
    for (const auto& e : q.entries()) a.push_back(to_string(e));
    return a;
}

json opt_form_json(const std::optional<QForm>& q) {
    return q ? form_json(*q) : json(nullptr);
}

} // namespace

long u_bound(const Field& f) {
    if (!f.bottom()->is_finite()) fail(errc::unsupported_base, "u_bound needs a finite bottom");
    return 1L << f.a_index();
}

Decision isotropic_ff(const QForm& q) {
    if (!q.field()->is_finite()) fail(errc::field_mismatch, "isotropic_ff needs a finite field");
    Decision d;
    d.trace["field"] = q.field()->name();
    d.trace["form"] = form_json(q);
    if (q.dim() == 1) {
        d.verdict = Verdict::anisotropic;
        d.trace["rule"] = "dim-1";
    } else if (q.dim() == 2) {
        Element c = -(q.entry(0) * q.entry(1));
        bool sq = ff_is_square(c);
        d.verdict = sq ? Verdict::isotropic : Verdict::anisotropic;
        d.trace["rule"] = "dim-2-square-test";
        d.trace["minus_a1a2"] = to_string(c);
        d.trace["is_square"] = sq;
    } else {
        d.verdict = Verdict::isotropic;
        d.trace["rule"] = "dim>=3-over-finite-field";
    }
    d.trace["verdict"] = verdict_name(d.verdict);
    return d;
}

SpringerSplit springer_split(const QForm& q, const Place& v) {
    if (!q.field()->same(*v.parent())) fail(errc::field_mismatch, "form not over the place's field");
    SpringerSplit s;
    s.rf = residue_field(v);
    if (!s.rf.recognizable())
        fail(errc::unsupported_residue_field, "opaque residue field at " + v.str());
    std::vector<Element> ev, od;
    s.trace["place"] = v.str();
    s.trace["uniformizer"] = v.is_infinity() ? "1/" + v.parent()->var()
                                             : to_string(v.pi(), v.parent()->var());
    s.trace["residue_field"] = s.rf.describe();
    s.trace["entries"] = json::array();
    for (const auto& a : q.entries()) {
        long e = valuation(v, a);
        Element u = unit_part(v, a);
        Element r = residue(v, u, s.rf);
        json rec;
        rec["entry"] = to_string(a);
        rec["valuation"] = e;
        rec["parity"] = (e % 2 == 0) ? "even" : "odd";
        rec["residue"] = to_string(r);
        s.trace["entries"].push_back(rec);
        ((e % 2 == 0) ? ev : od).push_back(std::move(r));
    }
    if (!ev.empty()) s.even = QForm::make(s.rf.field, std::move(ev));
    if (!od.empty()) s.odd = QForm::make(s.rf.field, std::move(od));
    s.trace["first_residue_form"] = opt_form_json(s.even);
    s.trace["second_residue_form"] = opt_form_json(s.odd);
    return s;
}

Decision isotropic_over(const QForm& q) {
    const FieldRef& f = q.field();
    if (f->is_finite()) return isotropic_ff(q);
    if (f->depth() == 1 && f->bottom()->is_finite()) return isotropic_global(q);
    Decision d;
    d.verdict = Verdict::undecided;
    d.trace["rule"] = "no-decision-procedure-for-field";
    d.trace["field"] = f->name();
    return d;
}

Decision isotropic_completion(const QForm& q, const Place& v) {
    Decision d;
    d.trace["place"] = v.str();
    try {
        SpringerSplit s = springer_split(q, v);
        d.trace["split"] = s.trace;
        d.trace["components"] = json::array();
        bool any_undecided = false;
        bool any_isotropic = false;
        for (const auto& [name, comp] :
             {std::pair{"first", &s.even}, std::pair{"second", &s.odd}}) {
            json rec;
            rec["component"] = name;
            if (!comp->has_value()) {
                rec["decision"] = "absent (vacuously anisotropic)";
            } else {
                Decision cd = isotropic_over(**comp);
                rec["decision"] = cd.trace;
                if (cd.isotropic()) any_isotropic = true;
                if (cd.undecided()) any_undecided = true;
            }
            d.trace["components"].push_back(rec);
        }
        if (any_isotropic)
            d.verdict = Verdict::isotropic;
        else if (any_undecided)
            d.verdict = Verdict::undecided;
        else
            d.verdict = Verdict::anisotropic;
    } catch (const Error& e) {
        if (e.code() != errc::unsupported_residue_field) throw;
        d.verdict = Verdict::undecided;
        d.trace["undecided"] = e.what();
    }
    d.trace["verdict"] = verdict_name(d.verdict);
    return d;
}

Decision isotropic_global(const QForm& q) {
    const FieldRef& f = q.field();
    if (!f->is_rational() || f->depth() != 1 || !f->bottom()->is_finite())
        fail(errc::unsupported_depth, "global decision needs a depth-1 tower over a finite field");
    Decision d;
    d.trace["field"] = f->name();
    d.trace["form"] = form_json(q);
    if (q.dim() == 1) {
        d.verdict = Verdict::anisotropic;
        d.trace["rule"] = "dim-1";
    } else if (q.dim() == 2) {
        Element c = -(q.entry(0) * q.entry(1));
        auto sq = is_square(c);
        if (!sq.has_value()) fail(errc::internal_error, "square test undecided over depth-1 field");
        d.verdict = *sq ? Verdict::isotropic : Verdict::anisotropic;
        d.trace["rule"] = "dim-2-square-test";
        d.trace["minus_a1a2"] = to_string(c);
        d.trace["is_square"] = *sq;
    } else if (q.dim() >= 5) {
        d.verdict = Verdict::isotropic;
        d.trace["rule"] = "dim-exceeds-u-bound";
        d.trace["u_bound"] = u_bound(*f);
    } else {
        d.trace["rule"] = "local-global-over-support";
        d.trace["places"] = json::array();
        Support sup = support_places(q);
        d.verdict = Verdict::isotropic;
        for (const auto& v : sup.places) {
            Decision cd = isotropic_completion(q, v);
            json rec;
            rec["place"] = v.str();
            rec["verdict"] = verdict_name(cd.verdict);
            rec["detail"] = cd.trace;
            d.trace["places"].push_back(rec);
            if (cd.anisotropic()) {
                d.verdict = Verdict::anisotropic;
                break;
            }
            if (cd.undecided()) fail(errc::internal_error, "completion undecided over F_q(t)");
        }
    }
    d.trace["verdict"] = verdict_name(d.verdict);
    return d;
}

std::optional<QForm> second_residue(const QForm& q, const Place& v) {
    return springer_split(q, v).odd;
}

// ---------------------------------------------------------------------------
// Anisotropy chains
// ---------------------------------------------------------------------------

namespace {

std::optional<json> chain_node(const QForm& q, const std::vector<std::string>& order,
                               size_t next) {
    const FieldRef& f = q.field();
    json node;
    node["field"] = f->name();
    node["form"] = form_json(q);
    if (f->is_finite()) {
        if (next < order.size()) fail(errc::bad_order, "completion order descends below the tower");
        Decision d = isotropic_ff(q);
        if (!d.anisotropic()) return std::nullopt;
        node["terminal"] = {{"kind", "finite-field"}, {"witness", d.trace}};
        return node;
    }
    if (next >= order.size()) {
        if (f->depth() != 1)
            fail(errc::bad_order, "completion order exhausted above a depth-1 field");
        Decision d = isotropic_global(q);
        if (!d.anisotropic()) return std::nullopt;
        node["terminal"] = {{"kind", "hasse-minkowski"}, {"witness", d.trace}};
        return node;
    }
    const std::string& var = order[next];
    if (!f->has_var(var)) fail(errc::unknown_variable, "order names unknown variable '" + var + "'");
    QForm moved = q;
    if (f->var() != var) {
        FieldRef g = reorder_field(f, var);
        std::vector<Element> es;
        es.reserve(q.entries().size());
        try {
            for (const auto& e : q.entries()) es.push_back(bring_to_top(e, var));
        } catch (const Error& err) {
            if (err.code() == errc::unsupported_depth)
                fail(errc::unsupported_reorder, "cannot bring '" + var + "' to the top: depth limit");
            throw;
        }
        moved = QForm::make(g, std::move(es));
        node["reordered_field"] = g->name();
        node["reordered_form"] = form_json(moved);
    }
    Place v = Place::finite_place(moved.field(), Poly::variable(moved.field()->base()));
    SpringerSplit s = springer_split(moved, v);
    node["var"] = var;
    node["place"] = v.str();
    node["split"] = s.trace;
    for (const auto& [name, comp] : {std::pair{"even", &s.even}, std::pair{"odd", &s.odd}}) {
        if (!comp->has_value()) {
            node[name] = nullptr; // absent: vacuously anisotropic
            continue;
        }
        auto child = chain_node(**comp, order, next + 1);
        if (!child) return std::nullopt;
        node[name] = *child;
    }
    return node;
}

} // namespace

std::optional<AnisotropyChain> anisotropy_chain(const QForm& q,
                                                const std::vector<std::string>& order) {
    auto node = chain_node(q, order, 0);
    if (!node) return std::nullopt;
    AnisotropyChain c;
    c.doc["order"] = order;
    c.doc["root"] = *node;
    return c;
}

bool replay_chain(const json& doc, const QForm& q, const std::vector<std::string>& order) {
    auto fresh = anisotropy_chain(q, order);
    return fresh && fresh->doc == doc;
}

// ---------------------------------------------------------------------------
// Witt classes
// ---------------------------------------------------------------------------

bool WittClass::is_zero() const {
    if (level->is_finite() || unramified == nullptr)
        return dim_mod2 == 0 && !disc_nontrivial && ramified.empty();
    return unramified->is_zero() && ramified.empty();
}

bool WittClass::equal(const WittClass& a, const WittClass& b) {
    if (!a.level->same(*b.level)) return false;
    if (a.level->is_finite()) return a.dim_mod2 == b.dim_mod2 && a.disc_nontrivial == b.disc_nontrivial;
    if (!WittClass::equal(*a.unramified, *b.unramified)) return false;
    if (a.ramified.size() != b.ramified.size()) return false;
    for (size_t i = 0; i < a.ramified.size(); ++i) {
        if (!(a.ramified[i].first == b.ramified[i].first)) return false;
        if (!WittClass::equal(*a.ramified[i].second, *b.ramified[i].second)) return false;
    }
    return true;
}

WittClass WittClass::add(const WittClass& a, const WittClass& b) {
    if (!a.level->same(*b.level)) fail(errc::field_mismatch, "adding classes over different fields");
    WittClass r;
    r.level = a.level;
    if (a.level->is_finite()) {
        r.dim_mod2 = (a.dim_mod2 + b.dim_mod2) % 2;
        // disc(q1 _|_ q2) = (-1)^(n1*n2) disc(q1) disc(q2)
        bool minus_one_nonsquare = !ff_is_square(a.level->from_int(-1));
        bool twist = (a.dim_mod2 & b.dim_mod2) && minus_one_nonsquare;
        r.disc_nontrivial = (a.disc_nontrivial != b.disc_nontrivial) != twist;
        return r;
    }
    r.unramified = std::make_shared<const WittClass>(WittClass::add(*a.unramified, *b.unramified));
    size_t i = 0, j = 0;
    while (i < a.ramified.size() || j < b.ramified.size()) {
        int cmp;
        if (i >= a.ramified.size())
            cmp = 1;
        else if (j >= b.ramified.size())
            cmp = -1;
        else
            cmp = Place::compare(a.ramified[i].first, b.ramified[j].first);
        if (cmp < 0) {
            r.ramified.push_back(a.ramified[i++]);
        } else if (cmp > 0) {
            r.ramified.push_back(b.ramified[j++]);
        } else {
            WittClass sum = WittClass::add(*a.ramified[i].second, *b.ramified[j].second);
            if (!sum.is_zero())
                r.ramified.emplace_back(a.ramified[i].first,
                                        std::make_shared<const WittClass>(std::move(sum)));
            ++i;
            ++j;
        }
    }
    return r;
}

json WittClass::to_json() const {
    json j;
    j["level"] = level->name();
    if (level->is_finite()) {
        j["kind"] = "finite";
        j["dim_mod2"] = dim_mod2;
        j["disc_nontrivial"] = disc_nontrivial;
        return j;
    }
    j["kind"] = "tower";
    j["unramified"] = unramified ? unramified->to_json() : json(nullptr);
    j["ramified"] = json::array();
    for (const auto& [v, c] : ramified)
        j["ramified"].push_back({{"place", v.str()}, {"class", c->to_json()}});
    return j;
}

namespace {

WittClass witt_finite_bits(const QForm& q) {
    WittClass w;
    w.level = q.field();
    w.dim_mod2 = q.dim() % 2;
    w.disc_nontrivial = !ff_is_square(disc(q));
    return w;
}

// n-th element in the canonical enumeration of polynomial elements of a
// depth-1 rational field (digits over the bottom finite field)
Element nth_poly_element(const FieldRef& b, std::uint64_t n) {
    const FieldRef& k = b->base();
    std::uint64_t q = k->cardinality();
    std::vector<Element> all = ff_enumerate(k);
    std::vector<Element> cs;
    while (n > 0) {
        cs.push_back(all[n % q]);
        n /= q;
    }
    if (cs.empty()) cs.push_back(k->zero());
    return Element::fraction(b, Poly(k, std::move(cs)), Poly::constant(k->one()));
}

// monic irreducibles over a finite field, canonical order, by degree
std::vector<Poly> monic_irreducibles(const FieldRef& k, int degree) {
    std::vector<Poly> out;
    std::vector<Element> all = ff_enumerate(k);
    std::uint64_t q = k->cardinality();
    std::uint64_t total = 1;
    for (int i = 0; i < degree; ++i) total *= q;
    for (std::uint64_t n = 0; n < total; ++n) {
        std::vector<Element> cs;
        std::uint64_t m = n;
        for (int i = 0; i < degree; ++i) {
            cs.push_back(all[m % q]);
            m /= q;
        }
        cs.push_back(k->one());
        Poly f(k, std::move(cs));
        if (poly_is_irreducible(f)) out.push_back(std::move(f));
    }
    return out;
}

WittResult witt_undecided(std::string reason) {
    WittResult r;
    r.undecided_reason = std::move(reason);
    r.trace["undecided"] = r.undecided_reason;
    return r;
}

} // namespace

WittResult witt_class(const QForm& q) {
    WittResult result;
    const FieldRef& f = q.field();
    result.trace["field"] = f->name();
    result.trace["form"] = form_json(q);
    if (f->is_finite()) {
        result.cls = witt_finite_bits(q);
        result.trace["class"] = result.cls->to_json();
        return result;
    }
    if (!f->bottom()->is_finite()) return witt_undecided("bottom field is not finite");
    const FieldRef& b = f->base();

    // second residues of the given form at its support places
    Support sup = support_places(q);
    if (!sup.exact) return witt_undecided("support has unresolved places");
    std::vector<std::pair<Place, WittClassRef>> ram;
    result.trace["ramified"] = json::array();
    for (const auto& v : sup.places) {
        if (v.is_infinity()) continue;
        ResidueField rf = residue_field(v);
        if (!rf.recognizable()) return witt_undecided("opaque residue field at " + v.str());
        std::optional<QForm> sr = second_residue(q, v);
        if (!sr) continue;
        WittResult rr = witt_class(*sr);
        if (!rr.cls) return witt_undecided(rr.undecided_reason + " (under " + v.str() + ")");
        json rec;
        rec["place"] = v.str();
        rec["second_residue"] = form_json(*sr);
        rec["class"] = rr.cls->to_json();
        result.trace["ramified"].push_back(rec);
        if (!rr.cls->is_zero())
            ram.emplace_back(v, std::make_shared<const WittClass>(std::move(*rr.cls)));
    }

    // peel ramified parts off a working copy, largest place degree first,
    // until every finite second residue is Witt-trivial
    std::vector<Element> work = q.entries();
    std::vector<Place> processed;
    while (true) {
        QForm wq = QForm::make(f, work);
        Support wsup = support_places(wq);
        if (!wsup.exact) return witt_undecided("peeling produced unresolved support");
        struct Cand {
            Place v;
            QForm sr;
        };
        std::vector<Cand> cands;
        for (const auto& v : wsup.places) {
            if (v.is_infinity()) continue;
            if (std::find(processed.begin(), processed.end(), v) != processed.end()) continue;
            ResidueField rf = residue_field(v);
            if (!rf.recognizable()) return witt_undecided("opaque residue field at " + v.str());
            std::optional<QForm> sr = second_residue(wq, v);
            if (!sr) continue;
            WittResult rr = witt_class(*sr);
            if (!rr.cls) return witt_undecided(rr.undecided_reason);
            if (rr.cls->is_zero()) continue;
            cands.push_back({v, std::move(*sr)});
        }
        if (cands.empty()) break;
        int dmax = 0;
        for (const auto& c : cands) dmax = std::max(dmax, c.v.degree());
        for (const auto& c : cands) {
            if (c.v.degree() != dmax) continue;
            // lift the second-residue entries back and subtract pi * lift
            ResidueField rf = residue_field(c.v);
            Element pi_elem = Element::fraction(f, c.v.pi(), Poly::constant(b->one()));
            for (const auto& s : c.sr.entries()) {
                Element lift;
                if (rf.kind == ResidueField::Kind::base) {
                    lift = embed(s, f);
                } else if (rf.kind == ResidueField::Kind::finite_ext && b->is_finite() &&
                           b->ext_degree() == 1) {
                    std::vector<Element> cs;
                    for (ffint cc : s.ff_coeffs()) cs.push_back(b->from_int(cc));
                    lift = Element::fraction(f, Poly(b, std::move(cs)), Poly::constant(b->one()));
                } else {
                    return witt_undecided("cannot lift residues at " + c.v.str());
                }
                work.push_back(-(pi_elem * lift));
            }
            processed.push_back(c.v);
        }
    }

    // unramified part: reduce the fully-peeled remainder at a good place
    QForm rem = QForm::make(f, work);
    WittClass cls;
    cls.level = f;
    cls.ramified = std::move(ram);
    auto all_units = [&](const Place& v) {
        for (const auto& e : rem.entries())
            if (valuation(v, e) != 0) return false;
        return true;
    };
    if (b->is_finite()) {
        std::optional<Place> good;
        for (int deg = 1; deg <= 9 && !good; deg += 2) {
            for (const auto& pi : monic_irreducibles(b, deg)) {
                Place v = Place::finite_place(f, pi);
                if (all_units(v)) {
                    good = v;
                    break;
                }
            }
        }
        if (!good) fail(errc::internal_error, "no good place of odd degree <= 9 found");
        ResidueField rf = residue_field(*good);
        std::vector<Element> res;
        for (const auto& e : rem.entries()) res.push_back(residue(*good, e, rf));
        QForm r0 = QForm::make(rf.field, std::move(res));
        WittClass baseb;
        baseb.level = b;
        baseb.dim_mod2 = rem.dim() % 2;
        baseb.disc_nontrivial = !ff_is_square(disc(r0));
        cls.unramified = std::make_shared<const WittClass>(std::move(baseb));
        result.trace["unramified_at"] = good->str();
    } else {
        if (b->depth() != 1)
            return witt_undecided("unramified-part extraction above depth 2 is unsupported");
        std::optional<Place> good;
        for (std::uint64_t n = 0; n < 4096 && !good; ++n) {
            Element c = nth_poly_element(b, n);
            Poly lin(b, {-c, b->one()});
            Place v = Place::finite_place(f, lin);
            if (all_units(v)) good = v;
        }
        if (!good) fail(errc::internal_error, "no good degree-1 place found");
        ResidueField rf = residue_field(*good);
        std::vector<Element> res;
        for (const auto& e : rem.entries()) res.push_back(residue(*good, e, rf));
        WittResult rr = witt_class(QForm::make(b, std::move(res)));
        if (!rr.cls) return witt_undecided(rr.undecided_reason + " (unramified part)");
        cls.unramified = std::make_shared<const WittClass>(std::move(*rr.cls));
        result.trace["unramified_at"] = good->str();
    }
    result.trace["class"] = cls.to_json();
    result.cls = std::move(cls);
    return result;
}

HypDecision hyperbolic(const QForm& q) {
    HypDecision d;
    d.trace["form"] = form_json(q);
    d.trace["field"] = q.field()->name();
    if (q.dim() % 2 != 0) {
        d.verdict = HypVerdict::not_hyperbolic;
        d.trace["rule"] = "odd-dimension";
    } else {
        WittResult w = witt_class(q);
        d.trace["witt"] = w.trace;
        if (!w.cls)
            d.verdict = HypVerdict::undecided;
        else
            d.verdict = w.cls->is_zero() ? HypVerdict::hyperbolic : HypVerdict::not_hyperbolic;
    }
    d.trace["verdict"] = hyp_verdict_name(d.verdict);
    return d;
}

IsoDecision isometric(const QForm& q1, const QForm& q2) {
    if (!q1.field()->same(*q2.field())) fail(errc::field_mismatch, "isometry across fields");
    IsoDecision d;
    d.trace["form1"] = form_json(q1);
    d.trace["form2"] = form_json(q2);
    if (q1.dim() != q2.dim()) {
        d.verdict = IsoVerdict::not_isometric;
        d.trace["rule"] = "dimension-mismatch";
    } else {
        HypDecision h = hyperbolic(orthogonal_sum(q1, negate(q2)));
        d.trace["difference_hyperbolic"] = h.trace;
        switch (h.verdict) {
            case HypVerdict::hyperbolic: d.verdict = IsoVerdict::isometric; break;
            case HypVerdict::not_hyperbolic: d.verdict = IsoVerdict::not_isometric; break;
            case HypVerdict::undecided: d.verdict = IsoVerdict::undecided; break;
        }
    }
    d.trace["verdict"] = iso_verdict_name(d.verdict);
    return d;
}

} // namespace ws
