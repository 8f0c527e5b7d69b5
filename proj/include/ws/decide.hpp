#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ws/place.hpp"
#include "ws/qform.hpp"

namespace ws {

using json = nlohmann::ordered_json;

enum class Verdict { isotropic, anisotropic, undecided };
const char* verdict_name(Verdict v);

struct Decision {
    Verdict verdict = Verdict::undecided;
    json trace;

    bool isotropic() const { return verdict == Verdict::isotropic; }
    bool anisotropic() const { return verdict == Verdict::anisotropic; }
    bool undecided() const { return verdict == Verdict::undecided; }
};

/// u-invariant bound 2^index: 2 over finite fields, doubled per rational layer.
long u_bound(const Field& f);

/// Finite fields: dim 1 anisotropic; dim 2 by the square test on -a1*a2;
/// dim >= 3 isotropic.
Decision isotropic_ff(const QForm& q);

struct SpringerSplit {
    std::optional<QForm> even; // first residue form (even-valuation entries)
    std::optional<QForm> odd;  // second residue form (odd-valuation entries)
    ResidueField rf;
    json trace;
};

/// Valuation-parity split of the entries at v, residues over kappa_v.
/// Entries are reduced by even uniformizer powers only.
SpringerSplit springer_split(const QForm& q, const Place& v);

/// Isotropy over the completion at v, by the residue-form recursion.
/// Unsupported residue fields yield undecided with the place in the trace.
Decision isotropic_completion(const QForm& q, const Place& v);

/// Isotropy over F_q(t): dim 1 anisotropic, dim 2 by the square test,
/// dim >= 5 isotropic, dims 3-4 by checking every support place and infinity.
Decision isotropic_global(const QForm& q);

/// Dispatch: finite field or depth-1 tower decides, anything else undecided.
Decision isotropic_over(const QForm& q);

/// The odd part of springer_split (empty -> nullopt).
std::optional<QForm> second_residue(const QForm& q, const Place& v);

struct AnisotropyChain {
    json doc;
};

/// Recursive Springer-split certificate along the given completion order
/// (outermost completion first). Present iff every branch terminates in an
/// anisotropic base verdict; absence proves nothing.
std::optional<AnisotropyChain> anisotropy_chain(const QForm& q,
                                                const std::vector<std::string>& order);

/// Recomputes the chain from scratch and compares it bit-for-bit.
bool replay_chain(const json& doc, const QForm& q, const std::vector<std::string>& order);

// ---------------------------------------------------------------------------
// Witt classes
// ---------------------------------------------------------------------------

struct WittClass;
using WittClassRef = std::shared_ptr<const WittClass>;

/**
 * Recursive Witt-class normal form. At a finite level the class is the pair
 * (dimension mod 2, discriminant square class). At a rational level it is the
 * unramified part (a class over the base) together with the nonzero second
 * residues at finite places of the top layer.
 */
struct WittClass {
    FieldRef level;
    // finite level
    int dim_mod2 = 0;
    bool disc_nontrivial = false;
    // rational level
    WittClassRef unramified;
    std::vector<std::pair<Place, WittClassRef>> ramified; // canonical place order

    bool is_zero() const;
    static bool equal(const WittClass& a, const WittClass& b);
    static WittClass add(const WittClass& a, const WittClass& b);
    json to_json() const;
};

struct WittResult {
    std::optional<WittClass> cls;
    std::string undecided_reason; // set when !cls
    json trace;
};

WittResult witt_class(const QForm& q);

enum class HypVerdict { hyperbolic, not_hyperbolic, undecided };
const char* hyp_verdict_name(HypVerdict v);

struct HypDecision {
    HypVerdict verdict = HypVerdict::undecided;
    json trace;
};

/// Hyperbolicity: even dimension and zero Witt class.
HypDecision hyperbolic(const QForm& q);

enum class IsoVerdict { isometric, not_isometric, undecided };
const char* iso_verdict_name(IsoVerdict v);

struct IsoDecision {
    IsoVerdict verdict = IsoVerdict::undecided;
    json trace;
};

/// Isometry: equal dimension and q1 _|_ -q2 hyperbolic.
IsoDecision isometric(const QForm& q1, const QForm& q2);

} // namespace ws
