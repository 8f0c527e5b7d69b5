#include "ws/qform.hpp"

#include <algorithm>

#include "ws/factor.hpp"

namespace ws {

QForm QForm::make(FieldRef field, std::vector<Element> entries) {
    if (!field) fail(errc::internal_error, "null field");
    if (entries.empty()) fail(errc::empty_form, "a form needs at least one entry");
    for (const auto& e : entries) {
        if (!e.attached() || !e.field()->same(*field))
            fail(errc::field_mismatch, "entry in the wrong field");
        if (e.is_zero()) fail(errc::zero_entry, "regular forms have nonzero entries");
    }
    QForm q;
    q.field_ = std::move(field);
    q.entries_ = std::move(entries);
    return q;
}

bool QForm::operator==(const QForm& o) const {
    return field_->same(*o.field_) && entries_ == o.entries_;
}

Element det(const QForm& q) {
    Element d = q.field()->one();
    for (const auto& e : q.entries()) d = d * e;
    return d;
}

Element disc(const QForm& q) {
    long long n = q.dim();
    Element d = det(q);
    return (n * (n - 1) / 2) % 2 == 0 ? d : -d;
}

QForm orthogonal_sum(const QForm& a, const QForm& b) {
    if (!a.field()->same(*b.field())) fail(errc::field_mismatch, "orthogonal sum across fields");
    std::vector<Element> es = a.entries();
    es.insert(es.end(), b.entries().begin(), b.entries().end());
    return QForm::make(a.field(), std::move(es));
}

QForm scale(const Element& c, const QForm& q) {
    if (!c.attached() || !c.field()->same(*q.field()))
        fail(errc::field_mismatch, "scalar in the wrong field");
    if (c.is_zero()) fail(errc::zero_scalar, "scaling by zero");
    std::vector<Element> es;
    es.reserve(q.entries().size());
    for (const auto& e : q.entries()) es.push_back(c * e);
    return QForm::make(q.field(), std::move(es));
}

QForm tensor(const QForm& a, const QForm& b) {
    if (!a.field()->same(*b.field())) fail(errc::field_mismatch, "tensor across fields");
    std::vector<Element> es;
    es.reserve(a.entries().size() * b.entries().size());
    for (const auto& x : a.entries())
        for (const auto& y : b.entries()) es.push_back(x * y);
    return QForm::make(a.field(), std::move(es));
}

QForm pfister(const std::vector<Element>& slots) {
    if (slots.empty()) fail(errc::empty_form, "pfister needs at least one slot");
    FieldRef f = slots[0].field();
    for (const auto& s : slots) {
        if (!s.attached() || !s.field()->same(*f)) fail(errc::field_mismatch, "pfister slot field");
        if (s.is_zero()) fail(errc::zero_entry, "pfister slots must be nonzero");
    }
    size_t n = slots.size();
    std::vector<Element> es;
    es.reserve(size_t(1) << n);
    for (size_t mask = 0; mask < (size_t(1) << n); ++mask) {
        Element prod = f->one();
        for (size_t i = 0; i < n; ++i)
            if (mask & (size_t(1) << i)) prod = prod * slots[i];
        es.push_back(std::move(prod));
    }
    return QForm::make(f, std::move(es));
}

QForm twisted_pfister(const std::vector<Element>& slots, const Element& d) {
    if (d.is_zero()) fail(errc::zero_entry, "twist must be nonzero");
    QForm p = pfister(slots);
    std::vector<Element> es = p.entries();
    es.back() = es.back() * d;
    return QForm::make(p.field(), std::move(es));
}

QForm pure_subform(const QForm& q) {
    if (q.dim() < 2) fail(errc::dimension_one, "pure subform needs dimension >= 2");
    std::vector<Element> es = q.entries();
    Element one = q.field()->one();
    auto it = std::find(es.begin(), es.end(), one);
    if (it == es.end()) fail(errc::no_unit_entry, "form has no entry equal to 1");
    es.erase(it);
    return QForm::make(q.field(), std::move(es));
}

QForm represent_one(const QForm& q) {
    QForm s = scale(q.entry(0), q);
    std::vector<Element> es = s.entries();
    es[0] = q.field()->one();
    return QForm::make(q.field(), std::move(es));
}

QForm negate(const QForm& q) { return scale(-q.field()->one(), q); }

std::optional<bool> same_square_class(const Element& a, const Element& b) {
    if (a.is_zero() || b.is_zero()) fail(errc::zero_input, "square class of zero");
    return is_square(a / b);
}

bool contains_entry(const QForm& q, const Element& e) {
    return std::find(q.entries().begin(), q.entries().end(), e) != q.entries().end();
}

bool contains_subform(const QForm& big, const QForm& sub) {
    if (!big.field()->same(*sub.field())) return false;
    std::vector<Element> pool = big.entries();
    for (const auto& e : sub.entries()) {
        auto it = std::find(pool.begin(), pool.end(), e);
        if (it == pool.end()) return false;
        pool.erase(it);
    }
    return true;
}

QForm embed_form(const QForm& q, const FieldRef& target) {
    std::vector<Element> es;
    es.reserve(q.entries().size());
    for (const auto& e : q.entries()) es.push_back(embed(e, target));
    return QForm::make(target, std::move(es));
}

} // namespace ws
