#pragma once

#include <string>

#include "ws/algebra.hpp"
#include "ws/qform.hpp"

namespace ws {

// Canonical text output. parse(print(x)) == x on every value, and printing
// is deterministic, so these strings are safe to embed in certificates.

std::string to_string(const Element& e);
/// Polynomial in the named variable with canonically printed coefficients.
std::string to_string(const Poly& p, const std::string& var);
std::string to_string(const QForm& q);

/// Field grammar: GF(p) | GF(p^d) followed by (var)* suffixes.
FieldRef parse_field(const std::string& text);

/// Element grammar: integer literals, tower variables, the generator z of an
/// extension bottom field, + - * / ^ and parentheses.
Element parse_element(const std::string& text, const FieldRef& field);

/// Form grammar: <e1, e2, ..., en>.
QForm parse_form(const std::string& text, const FieldRef& field);

} // namespace ws
