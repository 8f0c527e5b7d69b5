#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ws/decide.hpp"

namespace ws {

// ---------------------------------------------------------------------------
// Builders for the counterexample families
// ---------------------------------------------------------------------------

/**
 * The 4n-dimensional form over ell(x1)(x2) built from an anisotropic
 * n-dimensional q over ell that represents 1:
 *
 *   phi = <x2+1, -x2-x1>  _|_  <1,-x2> (x) q'  _|_  x1 * (<<x2>> (x) q)
 *
 * `mandatory` indexes the four entries x2+1, -x2-x1, x1, x1*x2 inside the
 * canonical entry list.
 */
struct PhiFamily {
    FieldRef L2;
    QForm phi;
    std::vector<int> mandatory;
    QForm q;  // the input form, kept for replay
};

PhiFamily build_phi(const QForm& q_ell);

/// Selects the sublist of phi's canonical entries given by `selection`
/// (ascending positions). Enforces the dimension window
/// 2^(i+1) < m <= 2^(i+2), m != 3, and the four mandatory entries.
QForm build_thm22(const QForm& q_ell, const std::vector<int>& selection);

/// Default selection for dimension m: the four mandatory entries plus the
/// first remaining entries in canonical order.
std::vector<int> default_selection(const PhiFamily& fam, int m);

/// <x2+1, -x2-x1, -alpha, x1, x1*x2> over GF(p)(x1)(x2); alpha must be a
/// nonsquare mod p.
QForm build_example1(ffint p, ffint alpha);

/// f_r = prod_i x_i * g_i(x_i) as an element of K_r = k(x1)...(xr).
/// Each g_i is a polynomial over the bottom field with positive degree and
/// square nonzero constant term.
Element build_f_r(const std::vector<Poly>& gs, const FieldRef& K_r);

struct TildeBuild {
    FieldRef K_r;
    FieldRef K_r1;
    QForm q_r;        // <<x1,...,xr; f_r>> over K_r
    QForm claim;      // q_r' _|_ <-x1...xr> over K_r
    QForm q_tilde;    // q_r _|_ <-x_{r+1}^2 - x1...xr> over K_{r+1}
    json hypothesis_chain; // anisotropy chain for q_r (order xr..x1)
    json claim_chain;      // anisotropy chain for the claim (order x1, xr..x2)
};

/// Builds q_tilde and certifies the two chains the anisotropy argument
/// rests on. Refuses with unverified_anisotropy_hypothesis when the q_r
/// chain is absent.
TildeBuild build_tilde(const std::vector<Poly>& gs, const std::string& new_var = "");

// ---------------------------------------------------------------------------
// Local isotropy reports
// ---------------------------------------------------------------------------

struct LocalIsotropyReport {
    json doc;          // { cases: [...], verdict: ... }
    bool all_isotropic = false;
};

/// Case engine for subforms of phi over ell(x1)(x2): infinity, the named
/// places x2 / x2+1 / x2+x1, and the generic u-bound class.
LocalIsotropyReport local_report_subform_cases(const QForm& psi);

struct TwistedCaseParams {
    std::vector<Element> slots; // a_1..a_i over ell
    Element d;
};

/// Case engine for q_i _|_ <-x^2 - a_1...a_i> over ell(x): restriction to
/// the base (recorded hypothesis), infinity, the quadratic place
/// x^2 + a_1...a_i, and the generic u-bound class (validity depends on the
/// index of ell matching the slot count).
LocalIsotropyReport local_report_twisted_cases(const QForm& q_tilde, const TwistedCaseParams& params);

/// Filters a report to a place subset containing every named place; returns
/// the filtered doc and whether it remains a valid full-coverage report.
std::pair<json, bool> filter_report(const json& report_doc,
                                    const std::vector<std::string>& keep_places);

// ---------------------------------------------------------------------------
// Violation certificates
// ---------------------------------------------------------------------------

struct ViolationCertificate {
    json doc;
};

/// Chain + subform-case report for a subform-family member (example1 / thm22).
ViolationCertificate verify_violation_subform(const QForm& psi,
                                              const std::vector<std::string>& order);

/// Composite certificate for the tilde family: direct chain for q_tilde,
/// hypothesis + claim chains, twisted-case report, substitution ledger.
ViolationCertificate verify_violation_tilde(const TildeBuild& tb);

/// Replays a certificate from scratch and compares it bit-for-bit.
bool verify_certificate(const json& doc);

// ---------------------------------------------------------------------------
// Self-test
// ---------------------------------------------------------------------------

struct SelftestOptions {
    std::uint64_t seed = 42;
    std::vector<ffint> primes = {3, 5, 7};
    std::string outdir; // certificates are written here when nonempty
};

/// Runs the named checks of the counterexample families plus the documented
/// out-of-scope disclosures; returns the structured report.
json selftest(const SelftestOptions& opts);

} // namespace ws
