#include "ws/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "ws/families.hpp"
#include "ws/parse.hpp"

namespace ws {

namespace {

int error_exit_code(const Error& e) {
    switch (e.code()) {
        case errc::chain_absent:
        case errc::unverified_anisotropy_hypothesis:
        case errc::unsupported_depth:
        case errc::unsupported_base:
        case errc::unsupported_residue_field:
        case errc::unsupported_reorder:
            return 2;
        case errc::internal_error:
            return 3;
        default:
            return 1;
    }
}

Place parse_place(const std::string& text, const FieldRef& f) {
    if (!f->is_rational()) fail(errc::unsupported_base, "places need a rational function field");
    if (text.rfind("inf(", 0) == 0 && text.back() == ')') {
        std::string var = text.substr(4, text.size() - 5);
        if (var != f->var())
            fail(errc::unknown_variable, "infinite place names '" + var + "', top variable is '" +
                                             f->var() + "'");
        return Place::infinity(f);
    }
    std::string body = text;
    if (body.rfind("fin(", 0) == 0 && body.back() == ')') body = body.substr(4, body.size() - 5);
    Element e = parse_element(body, f);
    if (!e.den().is_one()) fail(errc::syntax_error, "place polynomial must be integral");
    return Place::finite_place(f, e.num());
}

std::vector<std::string> parse_order(const std::string& text, const FieldRef& f) {
    std::vector<std::string> order;
    std::string cur;
    for (char c : text + ",") {
        if (c == ',' || c == ' ') {
            if (!cur.empty()) order.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (order.empty()) {
        // default: top variable down to the bottom
        order = f->vars();
        std::reverse(order.begin(), order.end());
    }
    return order;
}

void emit(std::ostream& out, const std::string& text_line, const json& doc, bool as_json,
          const std::string& out_path) {
    if (!out_path.empty()) {
        std::ofstream os(out_path);
        os << doc.dump(2) << "\n";
    }
    if (as_json)
        out << doc.dump(2) << "\n";
    else
        out << text_line << "\n";
}

std::uint64_t effective_seed(std::uint64_t flag_seed) {
    if (const char* env = std::getenv("WITT_SPRINGER_SEED")) {
        try {
            return std::stoull(env);
        } catch (...) {
            fail(errc::syntax_error, "WITT_SPRINGER_SEED is not an integer");
        }
    }
    return flag_seed;
}

struct Options {
    std::string field, form, form2, place, order, out;
    bool as_json = false;
    std::vector<ffint> p_list;
    ffint alpha = 0;
    std::uint64_t seed = 42;

    ffint p() const { return p_list.empty() ? 3 : p_list.front(); }
};

int dispatch(CLI::App& app, const Options& o, std::ostream& out) {
    auto need_field = [&]() {
        if (o.field.empty()) fail(errc::syntax_error, "--field is required");
        return parse_field(o.field);
    };
    auto need_form = [&](const FieldRef& f, const std::string& text) {
        if (text.empty()) fail(errc::syntax_error, "--form is required");
        return parse_form(text, f);
    };

    if (app.got_subcommand("decide")) {
        CLI::App* decide = app.get_subcommand("decide");
        FieldRef f = need_field();
        QForm q = need_form(f, o.form);
        if (decide->got_subcommand("isotropy")) {
            Decision d;
            if (!o.place.empty()) {
                d = isotropic_completion(q, parse_place(o.place, f));
            } else if (f->is_finite() || f->depth() == 1) {
                d = isotropic_over(q);
            } else if (!o.order.empty()) {
                auto chain = anisotropy_chain(q, parse_order(o.order, f));
                if (chain) {
                    d.verdict = Verdict::anisotropic;
                    d.trace = {{"rule", "anisotropy-chain"}, {"chain", chain->doc}};
                } else {
                    d.verdict = Verdict::undecided;
                    d.trace = {{"rule", "anisotropy-chain"},
                               {"note", "no chain along the given order; this proves nothing"}};
                }
            } else {
                d.verdict = Verdict::undecided;
                d.trace = {{"note", "no decision procedure for this field without --place or "
                                    "--order"}};
            }
            emit(out, verdict_name(d.verdict), d.trace, o.as_json, o.out);
            return d.undecided() ? 2 : 0;
        }
        if (decide->got_subcommand("hyperbolic")) {
            HypDecision d = hyperbolic(q);
            emit(out, hyp_verdict_name(d.verdict), d.trace, o.as_json, o.out);
            return d.verdict == HypVerdict::undecided ? 2 : 0;
        }
        if (decide->got_subcommand("isometric")) {
            QForm q2 = need_form(f, o.form2);
            IsoDecision d = isometric(q, q2);
            emit(out, iso_verdict_name(d.verdict), d.trace, o.as_json, o.out);
            return d.verdict == IsoVerdict::undecided ? 2 : 0;
        }
        fail(errc::syntax_error, "decide needs isotropy, hyperbolic or isometric");
    }

    if (app.got_subcommand("witt-class")) {
        FieldRef f = need_field();
        WittResult w = witt_class(need_form(f, o.form));
        if (!w.cls) {
            emit(out, "undecided: " + w.undecided_reason, w.trace, o.as_json, o.out);
            return 2;
        }
        std::string line = w.cls->is_zero() ? "zero (hyperbolic class)" : "nonzero";
        emit(out, line, w.cls->to_json(), o.as_json, o.out);
        return 0;
    }

    if (app.got_subcommand("springer-split")) {
        FieldRef f = need_field();
        QForm q = need_form(f, o.form);
        if (o.place.empty()) fail(errc::syntax_error, "--place is required");
        SpringerSplit s = springer_split(q, parse_place(o.place, f));
        std::string line = "first: " + (s.even ? to_string(*s.even) : std::string("(absent)")) +
                           "  second: " + (s.odd ? to_string(*s.odd) : std::string("(absent)"));
        emit(out, line, s.trace, o.as_json, o.out);
        return 0;
    }

    auto tilde_polys = [&]() {
        FieldRef k = Field::prime(o.p());
        Poly g(k, {k->one(), k->from_int(-2), k->one()}); // (s-1)^2
        return std::vector<Poly>{g, g};
    };
    auto tilde_params = [&]() {
        json params;
        params["p"] = o.p();
        params["g"] = json::array({json::array({1, -2, 1}), json::array({1, -2, 1})});
        return params;
    };

    if (app.got_subcommand("build")) {
        CLI::App* build = app.get_subcommand("build");
        if (build->got_subcommand("example1")) {
            QForm psi = build_example1(o.p(), o.alpha);
            emit(out, to_string(psi),
                 json{{"field", psi.field()->name()}, {"form", to_string(psi)}}, o.as_json, o.out);
            return 0;
        }
        if (build->got_subcommand("thm22")) {
            FieldRef ell = need_field();
            QForm q = need_form(ell, o.form);
            PhiFamily fam = build_phi(q);
            json detail = {{"field", fam.L2->name()},
                           {"form", to_string(fam.phi)},
                           {"mandatory_positions", fam.mandatory}};
            emit(out, to_string(fam.phi), detail, o.as_json, o.out);
            return 0;
        }
        if (build->got_subcommand("tilde")) {
            TildeBuild tb = build_tilde(tilde_polys());
            json detail = {{"field", tb.K_r1->name()},
                           {"q_r", to_string(tb.q_r)},
                           {"q_tilde", to_string(tb.q_tilde)}};
            emit(out, to_string(tb.q_tilde), detail, o.as_json, o.out);
            return 0;
        }
        fail(errc::syntax_error, "build needs thm22, example1 or tilde");
    }

    if (app.got_subcommand("verify")) {
        CLI::App* verify = app.get_subcommand("verify");
        if (verify->got_subcommand("example1")) {
            QForm psi = build_example1(o.p(), o.alpha);
            ViolationCertificate cert = verify_violation_subform(psi, {"x1", "x2"});
            if (!verify_certificate(cert.doc))
                fail(errc::internal_error, "certificate failed its own replay");
            emit(out, "certified: " + to_string(psi), cert.doc, o.as_json, o.out);
            return 0;
        }
        if (verify->got_subcommand("thm22")) {
            FieldRef ell = need_field();
            QForm q = need_form(ell, o.form);
            PhiFamily fam = build_phi(q);
            QForm psi = build_thm22(q, default_selection(fam, fam.phi.dim()));
            ViolationCertificate cert = verify_violation_subform(psi, {"x1", "x2"});
            if (!verify_certificate(cert.doc))
                fail(errc::internal_error, "certificate failed its own replay");
            emit(out, "certified: " + to_string(psi), cert.doc, o.as_json, o.out);
            return 0;
        }
        if (verify->got_subcommand("tilde")) {
            TildeBuild tb = build_tilde(tilde_polys());
            ViolationCertificate cert = verify_violation_tilde(tb);
            cert.doc["parameters"] = tilde_params();
            if (!verify_certificate(cert.doc))
                fail(errc::internal_error, "certificate failed its own replay");
            emit(out, "certified (anisotropy; local cases partially verified): " +
                          to_string(tb.q_tilde),
                 cert.doc, o.as_json, o.out);
            return 0;
        }
        fail(errc::syntax_error, "verify needs example1, thm22 or tilde");
    }

    if (app.got_subcommand("selftest")) {
        SelftestOptions so;
        so.seed = effective_seed(o.seed);
        if (!o.p_list.empty()) so.primes = o.p_list;
        so.outdir = o.out;
        json rep = selftest(so);
        out << rep.dump(2) << "\n";
        return rep["all_pass"].get<bool>() ? 0 : 2;
    }

    fail(errc::syntax_error, "no subcommand given (try --help)");
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"exact quadratic-form engine over function-field towers"};
    app.require_subcommand(0);
    Options o;

    app.add_option("--field", o.field, "field expression, e.g. GF(3)(x1)(x2)");
    app.add_option("--form", o.form, "form literal, e.g. <1,1,t>");
    app.add_option("--form2", o.form2, "second form (isometry)");
    app.add_option("--place", o.place, "place: fin(<poly>) or inf(<var>)");
    app.add_option("--order", o.order, "completion order, e.g. x1,x2");
    app.add_option("--out", o.out, "write JSON output to this path (selftest: directory)");
    app.add_flag("--json", o.as_json, "print the JSON trace instead of the text verdict");
    app.add_option("--p", o.p_list, "prime(s): builders use the first, selftest runs all");
    app.add_option("--alpha", o.alpha, "nonsquare residue for example1");
    app.add_option("--seed", o.seed, "seed for randomized self-test corpora");

    CLI::App* decide = app.add_subcommand("decide", "decision procedures");
    decide->add_subcommand("isotropy", "isotropy over the field, a completion, or by chain");
    decide->add_subcommand("hyperbolic", "hyperbolicity via the Witt class");
    decide->add_subcommand("isometric", "isometry of --form and --form2");
    decide->require_subcommand(0);
    app.add_subcommand("witt-class", "Witt-class normal form");
    app.add_subcommand("springer-split", "valuation-parity split at --place");
    CLI::App* build = app.add_subcommand("build", "construct the named families");
    build->add_subcommand("thm22", "the 4n-dimensional family over --field from --form");
    build->add_subcommand("example1", "the printed 5-dimensional family for --p/--alpha");
    build->add_subcommand("tilde", "the (2^r+1)-dimensional extension for --p");
    build->require_subcommand(0);
    CLI::App* verify = app.add_subcommand("verify", "emit and replay violation certificates");
    verify->add_subcommand("example1", "certificate for the printed family");
    verify->add_subcommand("thm22", "certificate for the full family member");
    verify->add_subcommand("tilde", "composite certificate for the extension family");
    verify->require_subcommand(0);
    app.add_subcommand("selftest", "run the named checks and disclosures");

    // global flags may follow the subcommand on the command line
    for (CLI::App* sub : app.get_subcommands(nullptr)) {
        sub->fallthrough();
        for (CLI::App* inner : sub->get_subcommands(nullptr)) inner->fallthrough();
    }

    std::vector<std::string> argv = args;
    std::reverse(argv.begin(), argv.end());
    try {
        app.parse(argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            // --help
            out << app.help() << "\n";
            return 0;
        }
        err << "usage error: " << e.what() << "\n";
        return 1;
    }

    try {
        return dispatch(app, o, out);
    } catch (const Error& e) {
        err << e.what() << "\n";
        return error_exit_code(e);
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return 3;
    }
}

} // namespace ws
