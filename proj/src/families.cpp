#include "ws/families.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <random>

#include "ws/factor.hpp"
#include "ws/parse.hpp"

namespace ws {

namespace {

Element var_elem(const FieldRef& tower, const std::string& v) {
    FieldRef layer = tower->layer_of(v);
    Element gen = Element::fraction(layer, Poly::variable(layer->base()),
                                    Poly::constant(layer->base()->one()));
    return embed(gen, tower);
}

json form_json(const QForm& q) {
    json a = json::array();
    for (const auto& e : q.entries()) a.push_back(to_string(e));
    return a;
}

std::optional<std::pair<int, int>> find_hyperbolic_pair(const QForm& q) {
    for (int i = 0; i < q.dim(); ++i)
        for (int j = i + 1; j < q.dim(); ++j)
            if (q.entry(i) == -q.entry(j)) return std::pair{i, j};
    return std::nullopt;
}

// linearizes the recursive chain tree into the steps/terminal schema
void schema_walk(const json& node, const std::string& path, size_t depth, json& steps,
                 json& leaves) {
    if (node.contains("terminal")) {
        leaves.push_back({{"path", path},
                          {"field", node["field"]},
                          {"form", node["form"]},
                          {"kind", node["terminal"]["kind"]},
                          {"witness", node["terminal"]["witness"]}});
        return;
    }
    while (steps.size() <= depth)
        steps.push_back(json{{"var", node["var"]}, {"splits", json::array()}});
    json split;
    split["path"] = path;
    split["field"] = node.contains("reordered_field") ? node["reordered_field"] : node["field"];
    split["place"] = node["place"];
    split["uniformizer"] = node["split"]["uniformizer"];
    split["first_residue"] = node["split"]["first_residue_form"];
    split["second_residue"] = node["split"]["second_residue_form"];
    steps[depth]["splits"].push_back(split);
    for (const auto& [tag, key] : {std::pair{"e", "even"}, std::pair{"o", "odd"}}) {
        if (node[key].is_null())
            leaves.push_back({{"path", path + tag}, {"kind", "absent"}});
        else
            schema_walk(node[key], path + tag, depth + 1, steps, leaves);
    }
}

json chain_schema(const json& chain_doc) {
    json g;
    g["order"] = chain_doc["order"];
    g["steps"] = json::array();
    json leaves = json::array();
    schema_walk(chain_doc["root"], "r", 0, g["steps"], leaves);
    g["terminal"] = {{"leaves", leaves}};
    return g;
}

} // namespace

// ---------------------------------------------------------------------------
// Builders
// ---------------------------------------------------------------------------

PhiFamily build_phi(const QForm& q_ell) {
    const FieldRef& ell = q_ell.field();
    if (!ell->bottom()->is_finite()) fail(errc::unsupported_base, "bottom field must be finite");
    if (ell->has_var("x1") || ell->has_var("x2"))
        fail(errc::syntax_error, "coefficient field already uses x1/x2");
    Decision aniso = isotropic_over(q_ell);
    if (aniso.undecided()) fail(errc::unsupported_base, "cannot certify anisotropy of q");
    if (!aniso.anisotropic()) fail(errc::isotropic_input, "q must be anisotropic");
    if (!contains_entry(q_ell, ell->one())) fail(errc::no_unit_entry, "q must contain the entry 1");
    long n = q_ell.dim();
    if (n != (1L << ell->a_index()))
        fail(errc::dimension_out_of_range, "q must have the maximal anisotropic dimension 2^i");

    PhiFamily fam;
    fam.q = q_ell;
    FieldRef L1 = Field::rational(ell, "x1");
    fam.L2 = Field::rational(L1, "x2");
    Element x1 = var_elem(fam.L2, "x1");
    Element x2 = var_elem(fam.L2, "x2");
    QForm qL = embed_form(q_ell, fam.L2);
    QForm qpL = embed_form(pure_subform(q_ell), fam.L2);
    Element one = fam.L2->one();

    std::vector<Element> es;
    es.push_back(x2 + one);
    es.push_back(-(x2 + x1));
    QForm mid = tensor(QForm::make(fam.L2, {one, -x2}), qpL);
    es.insert(es.end(), mid.entries().begin(), mid.entries().end());
    QForm tail = scale(x1, tensor(pfister({x2}), qL));
    es.insert(es.end(), tail.entries().begin(), tail.entries().end());
    fam.phi = QForm::make(fam.L2, std::move(es));
    int offset = 2 + 2 * (static_cast<int>(n) - 1);
    fam.mandatory = {0, 1, offset, offset + static_cast<int>(n)};
    return fam;
}

std::vector<int> default_selection(const PhiFamily& fam, int m) {
    std::vector<int> sel = fam.mandatory;
    for (int i = 0; i < fam.phi.dim() && static_cast<int>(sel.size()) < m; ++i)
        if (std::find(sel.begin(), sel.end(), i) == sel.end()) sel.push_back(i);
    std::sort(sel.begin(), sel.end());
    return sel;
}

QForm build_thm22(const QForm& q_ell, const std::vector<int>& selection) {
    PhiFamily fam = build_phi(q_ell);
    int i = q_ell.field()->a_index();
    int m = static_cast<int>(selection.size());
    if (m == 3 || m <= (1 << (i + 1)) || m > (1 << (i + 2)))
        fail(errc::dimension_out_of_range,
             "selection size " + std::to_string(m) + " outside (2^" + std::to_string(i + 1) +
                 ", 2^" + std::to_string(i + 2) + "] or equal to 3");
    std::vector<int> sel = selection;
    std::sort(sel.begin(), sel.end());
    if (std::adjacent_find(sel.begin(), sel.end()) != sel.end())
        fail(errc::dimension_out_of_range, "selection has repeated positions");
    std::vector<Element> es;
    for (int ix : sel) {
        if (ix < 0 || ix >= fam.phi.dim())
            fail(errc::dimension_out_of_range, "selection index out of range");
        es.push_back(fam.phi.entry(ix));
    }
    QForm psi = QForm::make(fam.L2, std::move(es));
    for (int mi : fam.mandatory)
        if (!contains_entry(psi, fam.phi.entry(mi)))
            fail(errc::missing_mandatory_entries,
                 "selection misses mandatory entry " + to_string(fam.phi.entry(mi)));
    return psi;
}

QForm build_example1(ffint p, ffint alpha) {
    FieldRef fp = Field::prime(p);
    Element a = fp->from_int(alpha);
    if (a.is_zero()) fail(errc::zero_input, "alpha must be a unit");
    if (ff_is_square(a)) fail(errc::square_alpha, "alpha must be a nonsquare");
    FieldRef L2 = Field::rational(Field::rational(fp, "x1"), "x2");
    Element x1 = var_elem(L2, "x1");
    Element x2 = var_elem(L2, "x2");
    Element one = L2->one();
    return QForm::make(
        L2, {x2 + one, -(x2 + x1), -embed(a, L2), x1, x1 * x2});
}

Element build_f_r(const std::vector<Poly>& gs, const FieldRef& K_r) {
    size_t r = gs.size();
    if (r == 0) fail(errc::empty_form, "need at least one factor polynomial");
    std::vector<std::string> vars = K_r->vars();
    if (vars.size() != r) fail(errc::field_mismatch, "tower depth must match the factor count");
    const FieldRef& bottom = K_r->bottom();
    Element f = K_r->one();
    for (size_t i = 0; i < r; ++i) {
        const Poly& g = gs[i];
        if (!g.coeff_field()->same(*bottom))
            fail(errc::field_mismatch, "factor polynomials live over the bottom field");
        if (g.degree() < 1) fail(errc::constant_polynomial, "factors must have positive degree");
        Element g0 = g.coeff(0);
        if (g0.is_zero() || !ff_is_square(g0))
            fail(errc::non_square_constant_term, "g(0) must be a nonzero square");
        Element xi = var_elem(K_r, vars[i]);
        Element gi = K_r->zero();
        for (int j = g.degree(); j >= 0; --j) gi = gi * xi + embed(g.coeff(j), K_r);
        f = f * xi * gi;
    }
    return f;
}

TildeBuild build_tilde(const std::vector<Poly>& gs, const std::string& new_var) {
    size_t r = gs.size();
    if (r < 2) fail(errc::dimension_out_of_range, "the construction needs r >= 2");
    const FieldRef& bottom = gs[0].coeff_field();
    TildeBuild tb;
    FieldRef K = bottom;
    std::vector<std::string> vars;
    for (size_t i = 1; i <= r; ++i) {
        vars.push_back("x" + std::to_string(i));
        K = Field::rational(K, vars.back());
    }
    tb.K_r = K;
    std::string top = new_var.empty() ? "x" + std::to_string(r + 1) : new_var;
    tb.K_r1 = Field::rational(K, top);

    Element f_r = build_f_r(gs, tb.K_r);
    std::vector<Element> slots;
    for (const auto& v : vars) slots.push_back(var_elem(tb.K_r, v));
    tb.q_r = twisted_pfister(slots, f_r);

    // hypothesis: q_r anisotropic over K_r (top-down completion order)
    std::vector<std::string> down(vars.rbegin(), vars.rend());
    auto hyp = anisotropy_chain(tb.q_r, down);
    if (!hyp)
        fail(errc::unverified_anisotropy_hypothesis,
             "no anisotropy chain for the twisted Pfister form; the construction is refused");
    tb.hypothesis_chain = hyp->doc;

    // claim: q_r' _|_ <-x1...xr> anisotropic over K_r (x1-adic first)
    Element prod = tb.K_r->one();
    for (const auto& s : slots) prod = prod * s;
    tb.claim = orthogonal_sum(pure_subform(tb.q_r), QForm::make(tb.K_r, {-prod}));
    std::vector<std::string> claim_order{vars.front()};
    for (size_t i = vars.size(); i-- > 1;) claim_order.push_back(vars[i]);
    auto claim = anisotropy_chain(tb.claim, claim_order);
    if (!claim)
        fail(errc::unverified_anisotropy_hypothesis,
             "no anisotropy chain for the represented-value claim form");
    tb.claim_chain = claim->doc;

    Element x_top = var_elem(tb.K_r1, top);
    QForm qr_up = embed_form(tb.q_r, tb.K_r1);
    Element last = -(x_top * x_top + embed(prod, tb.K_r1));
    tb.q_tilde = orthogonal_sum(qr_up, QForm::make(tb.K_r1, {last}));
    return tb;
}

// ---------------------------------------------------------------------------
// Local isotropy reports
// ---------------------------------------------------------------------------

LocalIsotropyReport local_report_subform_cases(const QForm& psi) {
    const FieldRef& L2 = psi.field();
    if (L2->depth() != 2 || !L2->bottom()->is_finite())
        fail(errc::unsupported_base, "the case engine needs a depth-2 tower over a finite field");
    const FieldRef& L1 = L2->base();
    int i = L2->a_index() - 2; // index of the coefficient field ell
    Element x1 = var_elem(L2, L1->var());
    Element x2 = var_elem(L2, L2->var());
    Element one = L2->one();

    QForm mandatory = QForm::make(L2, {x2 + one, -(x2 + x1), x1, x1 * x2});
    if (!contains_subform(psi, mandatory))
        fail(errc::mandatory_subform_missing,
             "the subform <x2+1, -x2-x1, x1, x1*x2> must be contained in the input");
    int m = psi.dim();
    long bound = 1L << (i + 1);
    if (m <= bound)
        fail(errc::dimension_too_small,
             "dimension " + std::to_string(m) + " does not exceed 2^(i+1) = " + std::to_string(bound));

    LocalIsotropyReport rep;
    rep.doc["mode"] = "subform-cases";
    rep.doc["field"] = L2->name();
    rep.doc["form"] = form_json(psi);
    rep.doc["cases"] = json::array();
    bool all_ok = true;

    // coverage: the only finite places where entries ramify must be the named three
    Support sup = support_places(psi);
    if (!sup.exact) fail(errc::unsupported_base, "support of the form could not be resolved");
    const Poly x2p = Poly::variable(L1);
    std::vector<Place> named = {
        Place::finite_place(L2, x2p),
        Place::finite_place(L2, x2p + Poly::constant(L1->one())),
        Place::finite_place(L2, x2p + Poly::constant(var_elem(L1, L1->var()))),
    };
    for (const auto& v : sup.places) {
        if (v.is_infinity()) continue;
        bool is_named = false;
        for (const auto& w : named)
            if (v == w) is_named = true;
        if (!is_named)
            fail(errc::unsupported_base,
                 "entry ramifies at " + v.str() + ", outside the named case analysis");
    }

    // case: infinity
    {
        Place vinf = Place::infinity(L2);
        SpringerSplit s = springer_split(psi, vinf);
        json c;
        c["case"] = "infinity";
        c["place"] = vinf.str();
        c["uniformizer"] = "1/" + L2->var();
        bool ok = false;
        if (s.odd) {
            auto pair = find_hyperbolic_pair(*s.odd);
            c["second_residue"] = form_json(*s.odd);
            if (pair) {
                c["hyperbolic_pair"] = {to_string(s.odd->entry(pair->first)),
                                        to_string(s.odd->entry(pair->second))};
            }
            Decision d = isotropic_over(*s.odd);
            c["decision"] = d.trace;
            ok = d.isotropic() || pair.has_value();
        }
        c["isotropic"] = ok;
        all_ok = all_ok && ok;
        rep.doc["cases"].push_back(c);
    }

    // cases: the three named places with their isotropic subforms
    struct NamedCase {
        Place v;
        QForm sub;
    };
    std::vector<NamedCase> cases;
    cases.push_back({named[0], QForm::make(L2, {-(x2 + x1), x1})});
    cases.push_back({named[1], QForm::make(L2, {x1, x1 * x2})});
    cases.push_back({named[2], QForm::make(L2, {x2 + one, x1, x1 * x2})});
    for (const auto& nc : cases) {
        json c;
        c["case"] = "named-place";
        c["place"] = nc.v.str();
        c["subform"] = form_json(nc.sub);
        bool ok = contains_subform(psi, nc.sub);
        if (!ok) {
            c["error"] = "named subform not contained in the input";
        } else {
            ResidueField rf = residue_field(nc.v);
            std::vector<Element> res;
            for (const auto& e : nc.sub.entries()) res.push_back(residue(nc.v, e, rf));
            QForm rform = QForm::make(rf.field, std::move(res));
            c["residue_form"] = form_json(rform);
            Decision d = isotropic_over(rform);
            c["decision"] = d.trace;
            ok = d.isotropic();
        }
        c["isotropic"] = ok;
        all_ok = all_ok && ok;
        rep.doc["cases"].push_back(c);
    }

    // case: generic u-bound
    {
        json c;
        c["case"] = "generic-u-bound";
        json names = json::array();
        for (const auto& v : named) names.push_back(v.str());
        c["named_places"] = names;
        c["coverage"] = "every entry is a unit at every other finite place of the top layer";
        c["dim"] = m;
        c["u_bound"] = bound;
        c["axiom"] = "AXIOM(A-index): u(kappa) <= " + std::to_string(bound) + " < " +
                     std::to_string(m) + " for every finite extension kappa of " + L1->name();
        c["isotropic"] = true;
        rep.doc["cases"].push_back(c);
    }

    rep.all_isotropic = all_ok;
    rep.doc["verdict"] = all_ok ? "all-isotropic" : "failed";
    return rep;
}

LocalIsotropyReport local_report_twisted_cases(const QForm& q_tilde, const TwistedCaseParams& params) {
    const FieldRef& F = q_tilde.field();
    if (!F->is_rational()) fail(errc::unsupported_base, "the form must live over ell(x)");
    const FieldRef& ell = F->base();
    size_t nslots = params.slots.size();
    if (nslots < 2) fail(errc::dimension_too_small, "the construction needs at least two slots");
    for (const auto& s : params.slots)
        if (!s.attached() || !s.field()->same(*ell))
            fail(errc::field_mismatch, "slots must live over the coefficient field");
    Element c = ell->one();
    for (const auto& s : params.slots) c = c * s;
    auto sq = is_square(-c);
    if (!sq.has_value())
        fail(errc::unsupported_base, "cannot decide whether -a_1...a_i is a square");
    if (*sq) fail(errc::square_product, "-a_1...a_i is a square, the quadratic place degenerates");

    // structural check: q_tilde == <<slots; d>> over ell _|_ <-x^2 - c>
    Element x = var_elem(F, F->var());
    std::vector<Element> slots_up;
    for (const auto& s : params.slots) slots_up.push_back(embed(s, F));
    QForm expected = orthogonal_sum(
        twisted_pfister(slots_up, embed(params.d, F)),
        QForm::make(F, {-(x * x + embed(c, F))}));
    if (!(q_tilde == expected))
        fail(errc::mandatory_subform_missing, "form does not match the twisted family shape");

    LocalIsotropyReport rep;
    rep.doc["mode"] = "twisted-cases";
    rep.doc["field"] = F->name();
    rep.doc["form"] = form_json(q_tilde);
    rep.doc["cases"] = json::array();
    bool all_ok = true;
    int dim = q_tilde.dim();

    // case: infinity
    {
        Place vinf = Place::infinity(F);
        SpringerSplit s = springer_split(q_tilde, vinf);
        json cj;
        cj["case"] = "infinity";
        cj["place"] = vinf.str();
        cj["uniformizer"] = "1/" + F->var();
        bool ok = false;
        if (s.even) {
            cj["first_residue"] = form_json(*s.even);
            auto pair = find_hyperbolic_pair(*s.even);
            if (pair) {
                cj["hyperbolic_pair"] = {to_string(s.even->entry(pair->first)),
                                         to_string(s.even->entry(pair->second))};
                ok = true;
            }
            Decision d = isotropic_over(*s.even);
            if (!d.undecided()) {
                cj["decision"] = d.trace;
                ok = ok || d.isotropic();
            }
        }
        cj["isotropic"] = ok;
        all_ok = all_ok && ok;
        rep.doc["cases"].push_back(cj);
    }

    // case: the quadratic place x^2 + a_1...a_i
    {
        Place vq = Place::quadratic(F, c);
        json cj;
        cj["case"] = "named-place";
        cj["place"] = vq.str();
        Element rest = ell->one();
        for (size_t k = 1; k < nslots; ++k) rest = rest * params.slots[k];
        QForm sub = QForm::make(F, {embed(params.slots[0], F), embed(rest, F)});
        cj["subform"] = form_json(sub);
        bool ok = contains_subform(q_tilde, sub);
        if (!ok) {
            cj["error"] = "subform <a_1, a_2...a_i> not present";
        } else {
            // -a_1 * (a_2...a_i) must equal xbar^2 in ell[x]/(x^2 + c)
            Element prod_neg = embed(-(params.slots[0] * rest), F);
            Poly lhs = residue_rep(vq, prod_neg);
            Poly xbar_sq = (Poly::variable(ell) * Poly::variable(ell)) % vq.pi();
            ok = (lhs == xbar_sq);
            cj["identity"] = "-a_1 * (a_2...a_i) == xbar^2 in the residue ring";
            cj["lhs"] = to_string(lhs, "xbar");
            cj["rhs"] = to_string(xbar_sq, "xbar");
            cj["witness"] = "xbar";
            ResidueField rf = residue_field(vq);
            if (rf.recognizable()) {
                std::vector<Element> res;
                for (const auto& e : sub.entries()) res.push_back(residue(vq, e, rf));
                Decision d = isotropic_over(QForm::make(rf.field, std::move(res)));
                cj["decision"] = d.trace;
                ok = ok && d.isotropic();
            }
        }
        cj["isotropic"] = ok;
        all_ok = all_ok && ok;
        rep.doc["cases"].push_back(cj);
    }

    // case: generic u-bound (valid only when the index of ell matches the
    // slot count, which fails under a finite-base substitution)
    {
        json cj;
        cj["case"] = "generic-u-bound";
        long bound = 1L << ell->a_index();
        cj["dim"] = dim;
        cj["u_bound"] = bound;
        cj["coverage"] = "every entry is a unit at every other finite place of the top layer";
        bool valid = dim > bound;
        cj["axiom"] = "AXIOM(A-index): u(kappa) <= " + std::to_string(bound) +
                      (valid ? " < " : " >= ") + std::to_string(dim) +
                      " for every finite extension kappa of " + ell->name();
        if (!valid)
            cj["unverified_substitution"] =
                "the index of " + ell->name() +
                " exceeds the slot count; the bound holds only over the original base hypothesis";
        cj["isotropic"] = valid;
        all_ok = all_ok && valid;
        rep.doc["cases"].push_back(cj);

        // coverage check: support must be {quadratic place, infinity}
        Support sup = support_places(q_tilde);
        if (!sup.exact) fail(errc::unsupported_base, "support of the form could not be resolved");
        Place vq = Place::quadratic(F, c);
        for (const auto& v : sup.places) {
            if (v.is_infinity()) continue;
            if (!(v == vq))
                fail(errc::unsupported_base, "entry ramifies at unexpected place " + v.str());
        }
    }

    // case: valuations restricted from the coefficient field (hypothesis)
    {
        json cj;
        cj["case"] = "restriction-to-base";
        cj["hypothesis"] =
            "the twisted Pfister form is isotropic at every completion of " + ell->name() +
            "; recorded as an assumption, not computed";
        cj["verified"] = false;
        rep.doc["cases"].push_back(cj);
    }

    rep.all_isotropic = all_ok;
    rep.doc["verdict"] = all_ok ? "all-isotropic-given-hypothesis" : "partially-verified";
    return rep;
}

std::pair<json, bool> filter_report(const json& report_doc,
                                    const std::vector<std::string>& keep_places) {
    json out = report_doc;
    bool valid = true;
    json cases = json::array();
    for (const auto& c : report_doc["cases"]) {
        std::string kind = c["case"];
        if (kind == "named-place" || kind == "infinity") {
            std::string pl = c["place"];
            if (std::find(keep_places.begin(), keep_places.end(), pl) == keep_places.end()) {
                valid = false; // named places carry the ramification; they cannot be dropped
                continue;
            }
            cases.push_back(c);
        } else if (kind == "generic-u-bound") {
            json g = c;
            g["restricted_to"] = keep_places;
            cases.push_back(g);
        } else {
            cases.push_back(c);
        }
    }
    out["cases"] = cases;
    out["filtered"] = true;
    return {out, valid};
}

// ---------------------------------------------------------------------------
// Certificates
// ---------------------------------------------------------------------------

namespace {

json certificate_shell(const QForm& form, const std::string& kind) {
    json doc;
    doc["schema"] = "witt-springer/1";
    doc["kind"] = kind;
    doc["field"] = form.field()->name();
    doc["form"] = form_json(form);
    return doc;
}

} // namespace

ViolationCertificate verify_violation_subform(const QForm& psi,
                                              const std::vector<std::string>& order) {
    auto chain = anisotropy_chain(psi, order);
    if (!chain)
        fail(errc::chain_absent,
             "global anisotropy is not certifiable; the certificate is refused");
    LocalIsotropyReport rep = local_report_subform_cases(psi);
    if (!rep.all_isotropic)
        fail(errc::internal_error, "local case analysis failed on a supported input");
    json doc = certificate_shell(psi, "subform-family");
    doc["order"] = order;
    doc["valuations"] = {
        {"kind", "top-layer"},
        {"description", "all places of " + psi.field()->name() + " trivial on " +
                            psi.field()->base()->name()}};
    doc["global"] = chain_schema(chain->doc);
    doc["local"] = rep.doc;
    doc["substitutions"] = json::array();
    return ViolationCertificate{doc};
}

ViolationCertificate verify_violation_tilde(const TildeBuild& tb) {
    size_t r = tb.K_r->vars().size();
    std::vector<std::string> direct_order;
    direct_order.push_back(tb.K_r1->var());
    std::vector<std::string> vars = tb.K_r->vars();
    for (size_t i = vars.size(); i-- > 0;) direct_order.push_back(vars[i]);
    auto direct = anisotropy_chain(tb.q_tilde, direct_order);
    if (!direct) fail(errc::chain_absent, "no direct chain for the extended form");

    TwistedCaseParams params;
    for (const auto& v : vars) params.slots.push_back(var_elem(tb.K_r, v));
    // recover the twist from the last entry: entry = (prod slots) * d
    Element prod = tb.K_r->one();
    for (const auto& s : params.slots) prod = prod * s;
    params.d = tb.q_r.entry(tb.q_r.dim() - 1) / prod;
    LocalIsotropyReport rep = local_report_twisted_cases(tb.q_tilde, params);

    json doc = certificate_shell(tb.q_tilde, "tilde-family");
    doc["order"] = direct_order;
    doc["valuations"] = {{"kind", "all-places"},
                         {"description", "all discrete valuations on " + tb.K_r1->name() +
                                             " trivial on the bottom field"}};
    doc["global"] = chain_schema(direct->doc);
    doc["global"]["proof"] = {
        {"hypothesis_form", form_json(tb.q_r)},
        {"hypothesis_chain", chain_schema(tb.hypothesis_chain)},
        {"equivalence",
         "the extension is anisotropic iff the pure part does not represent the variable "
         "product; certified through the claim form"},
        {"claim_form", form_json(tb.claim)},
        {"claim_chain", chain_schema(tb.claim_chain)}};
    doc["local"] = rep.doc;
    doc["substitutions"] = json::array();
    doc["substitutions"].push_back(
        {{"assumed", "finite bottom field " + tb.K_r->bottom()->name() +
                         " stands in for a base of index 0"},
         {"effect", "the generic u-bound case and the base-restriction case of the local "
                    "report are hypotheses, not computations"}});
    doc["substitutions"].push_back(
        {{"assumed", "local isotropy of the twisted Pfister form at completions of " +
                         tb.K_r->name()},
         {"effect", "recorded in the restriction-to-base case; not derivable at desk scale"}});
    // build parameters are attached by the caller so the certificate replays
    doc["parameters"] = {{"r", r}, {"bottom", tb.K_r->bottom()->name()}};
    return ViolationCertificate{doc};
}

bool verify_certificate(const json& doc) {
    if (!doc.contains("schema") || doc["schema"] != "witt-springer/1") return false;
    std::string kind = doc.value("kind", "");
    if (kind == "subform-family") {
        FieldRef f = parse_field(doc["field"].get<std::string>());
        std::vector<Element> es;
        for (const auto& s : doc["form"]) es.push_back(parse_element(s.get<std::string>(), f));
        QForm psi = QForm::make(f, std::move(es));
        std::vector<std::string> order;
        for (const auto& s : doc["order"]) order.push_back(s.get<std::string>());
        try {
            ViolationCertificate fresh = verify_violation_subform(psi, order);
            return fresh.doc == doc;
        } catch (const Error&) {
            return false;
        }
    }
    if (kind == "tilde-family") {
        if (!doc.contains("parameters") || !doc["parameters"].contains("g")) return false;
        try {
            ffint p = doc["parameters"]["p"].get<ffint>();
            FieldRef bottom = Field::prime(p);
            std::vector<Poly> gs;
            for (const auto& gj : doc["parameters"]["g"]) {
                std::vector<Element> cs;
                for (const auto& cj : gj) cs.push_back(bottom->from_int(cj.get<long long>()));
                gs.emplace_back(bottom, std::move(cs));
            }
            TildeBuild tb = build_tilde(gs);
            ViolationCertificate fresh = verify_violation_tilde(tb);
            fresh.doc["parameters"] = doc["parameters"];
            return fresh.doc == doc;
        } catch (const Error&) {
            return false;
        }
    }
    return false;
}

// ---------------------------------------------------------------------------
// Self-test
// ---------------------------------------------------------------------------

namespace {

struct Stopwatch {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
            .count();
    }
};

void write_certificate(const json& doc, const std::string& outdir, const std::string& name,
                       json& report) {
    if (outdir.empty()) return;
    std::string path = outdir + "/" + name + ".json";
    std::ofstream os(path);
    os << doc.dump(2) << "\n";
    report["certificates"].push_back(path);
}

} // namespace

json selftest(const SelftestOptions& opts) {
    json report;
    report["schema"] = "witt-springer-selftest/1";
    report["seed"] = opts.seed;
    report["generated_unix_ms"] =
        std::chrono::duration_cast<std::chrono::milliseconds>(
            std::chrono::system_clock::now().time_since_epoch())
            .count();
    report["entries"] = json::array();
    report["certificates"] = json::array();
    bool all_pass = true;

    auto add = [&](const std::string& name, const std::string& status, json detail,
                   double ms) {
        report["entries"].push_back(
            {{"name", name}, {"status", status}, {"detail", std::move(detail)}, {"ms", ms}});
        if (status == "fail" || status == "error") all_pass = false;
    };
    auto run = [&](const std::string& name, auto&& fn) {
        Stopwatch sw;
        try {
            json detail;
            bool ok = fn(detail);
            add(name, ok ? "pass" : "fail", std::move(detail), sw.ms());
        } catch (const Error& e) {
            add(name, "error", json{{"error", e.what()}}, sw.ms());
        }
    };

    std::mt19937_64 rng(opts.seed);

    // the printed five-dimensional family, one certificate per prime
    for (ffint p : opts.primes) {
        run("example1-p" + std::to_string(p), [&](json& detail) {
            FieldRef fp = Field::prime(p); // p = 2 or composite is refused here
            Element alpha = ff_nonsquare(fp);
            QForm psi = build_example1(p, alpha.ff_value());
            ViolationCertificate cert =
                verify_violation_subform(psi, {"x1", "x2"});
            bool ok = verify_certificate(cert.doc);
            detail["alpha"] = to_string(alpha);
            detail["form"] = form_json(psi);
            detail["replay"] = ok;
            write_certificate(cert.doc, opts.outdir, "example1_p" + std::to_string(p), report);
            return ok;
        });
    }

    run("example1-square-alpha-rejected", [&](json& detail) {
        try {
            build_example1(3, 1);
        } catch (const Error& e) {
            detail["rejected_with"] = e.what();
            return e.code() == errc::square_alpha;
        }
        return false;
    });

    // the dimension family over GF(3), q = <1,1>
    {
        FieldRef f3 = Field::prime(3);
        QForm q = QForm::make(f3, {f3->one(), f3->one()});
        for (int m : {5, 6, 7, 8}) {
            run("thm22-f3-m" + std::to_string(m), [&](json& detail) {
                PhiFamily fam = build_phi(q);
                QForm psi = build_thm22(q, default_selection(fam, m));
                ViolationCertificate cert = verify_violation_subform(psi, {"x1", "x2"});
                bool ok = verify_certificate(cert.doc);
                detail["form"] = form_json(psi);
                detail["replay"] = ok;
                write_certificate(cert.doc, opts.outdir, "thm22_f3_m" + std::to_string(m),
                                  report);
                return ok;
            });
        }
        run("thm22-m3-rejected", [&](json& detail) {
            PhiFamily fam = build_phi(q);
            try {
                build_thm22(q, {fam.mandatory[0], fam.mandatory[1], fam.mandatory[2]});
            } catch (const Error& e) {
                detail["rejected_with"] = e.what();
                return e.code() == errc::dimension_out_of_range;
            }
            return false;
        });
    }

    // anisotropic tensor products <<x1,x2>> (x) q for random anisotropic binary q
    for (ffint p : {ffint(3), ffint(5)}) {
        run("tensor-chains-p" + std::to_string(p), [&](json& detail) {
            FieldRef fp = Field::prime(p);
            FieldRef L2 = Field::rational(Field::rational(fp, "x1"), "x2");
            Element x1 = var_elem(L2, "x1");
            Element x2 = var_elem(L2, "x2");
            auto elems = ff_enumerate(fp);
            int found = 0, tried = 0;
            while (found < 10 && tried < 1000) {
                ++tried;
                Element a = elems[rng() % (elems.size() - 1) + 1];
                Element b = elems[rng() % (elems.size() - 1) + 1];
                if (ff_is_square(-(a * b))) continue; // isotropic binary form
                QForm q = QForm::make(L2, {embed(a, L2), embed(b, L2)});
                QForm big = tensor(pfister({x1, x2}), q);
                if (!anisotropy_chain(big, {"x1", "x2"})) return false;
                ++found;
            }
            detail["chains_found"] = found;
            return found == 10;
        });
    }

    // twisted Pfister forms with twist -1, r <= 3
    for (ffint p : {ffint(3), ffint(5)}) {
        for (int r = 1; r <= 3; ++r) {
            run("twisted-minus1-p" + std::to_string(p) + "-r" + std::to_string(r),
                [&](json& detail) {
                    FieldRef k = Field::prime(p);
                    FieldRef K = k;
                    std::vector<std::string> vars;
                    for (int j = 1; j <= r; ++j) {
                        vars.push_back("x" + std::to_string(j));
                        K = Field::rational(K, vars.back());
                    }
                    std::vector<Element> slots;
                    for (const auto& v : vars) slots.push_back(var_elem(K, v));
                    QForm tw = twisted_pfister(slots, -K->one());
                    std::vector<std::string> down(vars.rbegin(), vars.rend());
                    if (anisotropy_chain(tw, down)) {
                        detail["route"] = "direct";
                        return true;
                    }
                    // quadratic-extension device: over k(sqrt(-1)) the twist
                    // is absorbed and the plain Pfister chain applies
                    FieldRef kk = ff_is_square(k->from_int(-1))
                                      ? k
                                      : Field::finite(p, {1, 0, 1});
                    FieldRef KK = kk;
                    for (const auto& v : vars) KK = Field::rational(KK, v);
                    std::vector<Element> slots2;
                    for (const auto& v : vars) slots2.push_back(var_elem(KK, v));
                    QForm pf = pfister(slots2);
                    detail["route"] = "quadratic-extension";
                    return anisotropy_chain(pf, down).has_value();
                });
        }
    }

    // the extended (2^r + 1)-dimensional family
    for (ffint p : {ffint(3), ffint(5)}) {
        run("tilde-r2-p" + std::to_string(p), [&](json& detail) {
            FieldRef k = Field::prime(p);
            Element one = k->one();
            Poly g(k, {one, k->from_int(-2), one}); // (s - 1)^2, g(0) = 1
            try {
                TildeBuild tb = build_tilde({g, g});
                ViolationCertificate cert = verify_violation_tilde(tb);
                json params;
                params["p"] = p;
                params["g"] = json::array();
                for (int rep = 0; rep < 2; ++rep) params["g"].push_back(json::array({1, -2, 1}));
                cert.doc["parameters"] = params;
                bool ok = verify_certificate(cert.doc);
                detail["outcome"] = "certified";
                detail["replay"] = ok;
                write_certificate(cert.doc, opts.outdir, "tilde_r2_p" + std::to_string(p),
                                  report);
                return ok;
            } catch (const Error& e) {
                if (e.code() == errc::unverified_anisotropy_hypothesis) {
                    detail["outcome"] = "hypothesis-chain-absent";
                    detail["explanation"] = e.what();
                    return true; // explained refusal, not an engine error
                }
                throw;
            }
        });
    }

    // documented out-of-scope disclosures
    add("algebraically-closed-base-out-of-scale", "skipped",
        json{{"reason", "algebraically closed base fields have no finite representation; the "
                        "ingredient chains are exercised over finite bases instead"}},
        0.0);
    add("nine-dimensional-padic-example", "skipped",
        json{{"reason", "p-adic base arithmetic is outside the engine"}}, 0.0);
    {
        // a depth-4 tensor-product chain along the x1-first order needs a
        // reorder the engine does not perform; the entry is skipped, not run
        Stopwatch sw;
        json detail;
        try {
            FieldRef K = Field::prime(3);
            std::vector<std::string> vars;
            for (int j = 1; j <= 4; ++j) {
                vars.push_back("x" + std::to_string(j));
                K = Field::rational(K, vars.back());
            }
            std::vector<Element> slots;
            for (const auto& v : vars) slots.push_back(var_elem(K, v));
            anisotropy_chain(pfister(slots), vars);
            add("depth-4-tensor-chain", "fail",
                json{{"unexpected", "reorder beyond the depth limit succeeded"}}, sw.ms());
        } catch (const Error& e) {
            if (e.code() == errc::unsupported_reorder)
                add("depth-4-tensor-chain", "skipped", json{{"reason", e.what()}}, sw.ms());
            else
                add("depth-4-tensor-chain", "error", json{{"error", e.what()}}, sw.ms());
        }
    }

    report["all_pass"] = all_pass;
    return report;
}

} // namespace ws
