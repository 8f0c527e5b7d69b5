#pragma once

#include <optional>
#include <vector>

#include "ws/algebra.hpp"

namespace ws {

/**
 * A regular diagonal quadratic form: a nonempty ordered list of nonzero
 * entries, all living in one field of the tower.
 */
class QForm {
public:
    QForm() = default; // detached placeholder, unusable until assigned

    static QForm make(FieldRef field, std::vector<Element> entries);

    const FieldRef& field() const { return field_; }
    const std::vector<Element>& entries() const { return entries_; }
    int dim() const { return static_cast<int>(entries_.size()); }
    const Element& entry(int i) const { return entries_[static_cast<size_t>(i)]; }

    bool operator==(const QForm& o) const;

private:
    FieldRef field_;
    std::vector<Element> entries_;
};

Element det(const QForm& q);
/// disc = (-1)^(n(n-1)/2) * det, returned literally; compare square classes
/// with same_square_class.
Element disc(const QForm& q);

QForm orthogonal_sum(const QForm& a, const QForm& b);
QForm scale(const Element& c, const QForm& q);
/// All pairwise products, row-major in the first argument.
QForm tensor(const QForm& a, const QForm& b);
/// <<a_1, ..., a_n>>, entries in binary-counter subset order (first entry 1).
QForm pfister(const std::vector<Element>& slots);
/// <<a_1, ..., a_n; d>>: pfister with the final entry multiplied by d.
QForm twisted_pfister(const std::vector<Element>& slots, const Element& d);
/// Removes one literal entry 1 from a form of dimension >= 2.
QForm pure_subform(const QForm& q);
/// Scales q by its first entry and replaces that slot by 1; the result is
/// isometric to a scaling of q and represents 1 syntactically.
QForm represent_one(const QForm& q);
QForm negate(const QForm& q);

/// a/b a square? Exact over finite and depth-1 fields; nullopt when the
/// partial square test cannot settle it.
std::optional<bool> same_square_class(const Element& a, const Element& b);

/// Multiset inclusion by exact entry equality.
bool contains_subform(const QForm& big, const QForm& sub);
bool contains_entry(const QForm& q, const Element& e);

/// Maps all entries into an extension tower of the same bottom field.
QForm embed_form(const QForm& q, const FieldRef& target);

} // namespace ws
