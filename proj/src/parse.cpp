#include "ws/parse.hpp"

#include <cctype>
#include <sstream>

namespace ws {

// ---------------------------------------------------------------------------
// Printing
// ---------------------------------------------------------------------------

namespace {

bool is_atomic_text(const std::string& s) {
    if (s.empty()) return false;
    bool digits = true;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) digits = false;
    if (digits) return true;
    if (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_') return false;
    for (char c : s)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
    return true;
}

std::string wrap_coeff(const std::string& s) { return is_atomic_text(s) ? s : "(" + s + ")"; }

} // namespace

std::string to_string(const Poly& p, const std::string& var) {
    if (p.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (int i = p.degree(); i >= 0; --i) {
        Element c = p.coeff(i);
        if (c.is_zero()) continue;
        if (!first) os << "+";
        first = false;
        if (i == 0) {
            os << wrap_coeff(to_string(c));
            continue;
        }
        if (!c.is_one()) os << wrap_coeff(to_string(c)) << "*";
        os << var;
        if (i > 1) os << "^" << i;
    }
    return os.str();
}

std::string to_string(const Element& e) {
    if (!e.attached()) return "<detached>";
    const FieldRef& f = e.field();
    if (f->is_finite()) {
        if (f->ext_degree() == 1) return std::to_string(e.ff_value());
        // polynomial in the generator z
        const auto& cs = e.ff_coeffs();
        FieldRef fp = Field::prime(f->characteristic());
        std::vector<Element> coeffs;
        for (ffint c : cs) coeffs.push_back(fp->from_int(c));
        return to_string(Poly(fp, std::move(coeffs)), "z");
    }
    std::string num = to_string(e.num(), f->var());
    if (e.den().is_one()) return num;
    return "(" + num + ")/(" + to_string(e.den(), f->var()) + ")";
}

std::string to_string(const QForm& q) {
    std::ostringstream os;
    os << "<";
    for (int i = 0; i < q.dim(); ++i) {
        if (i) os << ", ";
        os << to_string(q.entry(i));
    }
    os << ">";
    return os.str();
}

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

namespace {

struct Cursor {
    const std::string& text;
    size_t pos = 0;

    [[noreturn]] void error(const std::string& what) const {
        fail(errc::syntax_error,
             what + " at position " + std::to_string(pos + 1) + " in '" + text + "'");
    }

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }
    bool eof() {
        skip_ws();
        return pos >= text.size();
    }
    char peek() {
        skip_ws();
        return pos < text.size() ? text[pos] : '\0';
    }
    bool accept(char c) {
        if (peek() == c) {
            ++pos;
            return true;
        }
        return false;
    }
    void expect(char c) {
        if (!accept(c)) error(std::string("expected '") + c + "'");
    }
    long long integer() {
        skip_ws();
        size_t start = pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
        if (pos == start) error("expected an integer");
        return std::stoll(text.substr(start, pos - start));
    }
    std::string identifier() {
        skip_ws();
        size_t start = pos;
        if (pos < text.size() &&
            (std::isalpha(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
            ++pos;
        while (pos < text.size() &&
               (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
            ++pos;
        if (pos == start) error("expected an identifier");
        return text.substr(start, pos - start);
    }
};

class ElementParser {
public:
    ElementParser(Cursor& cur, FieldRef field) : cur_(cur), field_(std::move(field)) {}

    Element parse() { return sum(); }

private:
    Cursor& cur_;
    FieldRef field_;

    Element sum() {
        Element acc = product();
        while (true) {
            if (cur_.accept('+'))
                acc = acc + product();
            else if (cur_.accept('-'))
                acc = acc - product();
            else
                return acc;
        }
    }

    Element product() {
        Element acc = unary();
        while (true) {
            if (cur_.accept('*'))
                acc = acc * unary();
            else if (cur_.accept('/')) {
                Element d = unary();
                if (d.is_zero()) cur_.error("division by zero");
                acc = acc / d;
            } else
                return acc;
        }
    }

    Element unary() {
        if (cur_.accept('-')) return -unary();
        return power();
    }

    Element power() {
        Element base = atom();
        if (cur_.accept('^')) {
            bool neg = cur_.accept('-');
            long long e = cur_.integer();
            if (neg && base.is_zero()) cur_.error("negative power of zero");
            return base.pow(neg ? -e : e);
        }
        return base;
    }

    Element atom() {
        char c = cur_.peek();
        if (c == '(') {
            cur_.expect('(');
            Element e = sum();
            cur_.expect(')');
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) return field_->from_int(cur_.integer());
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t at = cur_.pos;
            std::string name = cur_.identifier();
            if (field_->has_var(name)) {
                FieldRef layer = field_->layer_of(name);
                Element gen = Element::fraction(layer, Poly::variable(layer->base()),
                                                Poly::constant(layer->base()->one()));
                return embed(gen, field_);
            }
            if (name == "z" && field_->bottom()->ext_degree() > 1) {
                Element gen = Element::ff_make(field_->bottom(), {0, 1});
                return embed(gen, field_);
            }
            cur_.pos = at;
            fail(errc::unknown_variable, "unknown variable '" + name + "' at position " +
                                             std::to_string(at + 1) + " in '" + cur_.text + "'");
        }
        cur_.error("expected an expression");
    }
};

} // namespace

FieldRef parse_field(const std::string& text) {
    Cursor cur{text};
    std::string head = cur.identifier();
    if (head != "GF") cur.error("field expressions start with GF");
    cur.expect('(');
    long long p = cur.integer();
    int d = 1;
    if (cur.accept('^')) d = static_cast<int>(cur.integer());
    cur.expect(')');
    FieldRef f = d == 1 ? Field::prime(p) : Field::finite_canonical(p, d);
    while (cur.accept('(')) {
        std::string var = cur.identifier();
        cur.expect(')');
        f = Field::rational(f, var);
    }
    if (!cur.eof()) cur.error("trailing input");
    return f;
}

Element parse_element(const std::string& text, const FieldRef& field) {
    Cursor cur{text};
    Element e = ElementParser(cur, field).parse();
    if (!cur.eof()) cur.error("trailing input");
    return e;
}

QForm parse_form(const std::string& text, const FieldRef& field) {
    Cursor cur{text};
    cur.expect('<');
    std::vector<Element> entries;
    entries.push_back(ElementParser(cur, field).parse());
    while (cur.accept(',')) entries.push_back(ElementParser(cur, field).parse());
    cur.expect('>');
    if (!cur.eof()) cur.error("trailing input");
    return QForm::make(field, std::move(entries));
}

} // namespace ws
