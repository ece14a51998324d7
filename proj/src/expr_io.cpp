#include "lagrax/expr_io.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace lagrax {

int Context::var_id(const std::string& name) const {
    for (size_t i = 0; i < vars.size(); ++i)
        if (vars[i] == name) return static_cast<int>(i);
    return -1;
}

int Context::param_id(const std::string& name) const {
    for (size_t i = 0; i < params.size(); ++i)
        if (params[i] == name) return static_cast<int>(i);
    return -1;
}

// ----------------------------------------------------------- s-expressions

namespace {

struct Sexp {
    bool atom = false;
    std::string text;
    std::vector<Sexp> items;
    size_t pos = 0;
};

struct SexpParser {
    const std::string& src;
    size_t i = 0;

    [[noreturn]] void error(const std::string& what, size_t at) const {
        size_t line = 1, col = 1;
        for (size_t k = 0; k < at && k < src.size(); ++k) {
            if (src[k] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        fail("syntax_error",
             what + " at line " + std::to_string(line) + ", column " + std::to_string(col));
    }

    void skip() {
        while (i < src.size()) {
            if (std::isspace(static_cast<unsigned char>(src[i]))) {
                ++i;
            } else if (src[i] == ';') {
                while (i < src.size() && src[i] != '\n') ++i;
            } else {
                break;
            }
        }
    }

    Sexp parse() {
        skip();
        if (i >= src.size()) error("unexpected end of input", i);
        Sexp s;
        s.pos = i;
        if (src[i] == '(') {
            ++i;
            for (;;) {
                skip();
                if (i >= src.size()) error("missing ')'", s.pos);
                if (src[i] == ')') {
                    ++i;
                    break;
                }
                s.items.push_back(parse());
            }
        } else if (src[i] == ')') {
            error("unexpected ')'", i);
        } else {
            s.atom = true;
            size_t start = i;
            while (i < src.size() && !std::isspace(static_cast<unsigned char>(src[i])) &&
                   src[i] != '(' && src[i] != ')' && src[i] != ';')
                ++i;
            s.text = src.substr(start, i - start);
        }
        return s;
    }

    Sexp parse_whole() {
        Sexp s = parse();
        skip();
        if (i < src.size()) error("trailing input after expression", i);
        return s;
    }
};

[[noreturn]] void sexp_error(const std::string& src, const Sexp& s, const std::string& what) {
    SexpParser p{src};
    p.error(what, s.pos);
}

bool is_rational_atom(const std::string& t) {
    if (t.empty()) return false;
    size_t k = (t[0] == '-' || t[0] == '+') ? 1 : 0;
    if (k >= t.size() || !std::isdigit(static_cast<unsigned char>(t[k]))) return false;
    bool slash = false;
    for (; k < t.size(); ++k) {
        if (t[k] == '/') {
            if (slash) return false;
            slash = true;
        } else if (!std::isdigit(static_cast<unsigned char>(t[k]))) {
            return false;
        }
    }
    return true;
}

Rational parse_rational(const std::string& t) {
    Rational r(t);
    r.canonicalize();
    return r;
}

// generator-level hooks so the same walker serves jet, discrete and chart forms
template <class P>
struct ExprHooks {
    std::function<P(const std::string& src, const Sexp&)> compound;  // (u ...) / (q ...) etc.
    std::function<P(const std::string& src, const Sexp&)> symbol;    // bare identifier
};

template <class P>
P eval_expr(const std::string& src, const Sexp& s, const ExprHooks<P>& h) {
    if (s.atom) {
        if (is_rational_atom(s.text)) return P(Coeff(parse_rational(s.text)));
        if (s.text == "i") return P(Coeff::i());
        return h.symbol(src, s);
    }
    if (s.items.empty()) sexp_error(src, s, "empty form");
    const Sexp& head = s.items[0];
    if (!head.atom) sexp_error(src, head, "operator expected");
    const std::string& op = head.text;
    auto arity_at_least = [&](size_t n) {
        if (s.items.size() - 1 < n) sexp_error(src, s, "operator '" + op + "' needs arguments");
    };
    if (op == "+") {
        P r(Coeff(0));
        for (size_t k = 1; k < s.items.size(); ++k) r += eval_expr(src, s.items[k], h);
        return r;
    }
    if (op == "*") {
        P r(Coeff(1));
        for (size_t k = 1; k < s.items.size(); ++k) r *= eval_expr(src, s.items[k], h);
        return r;
    }
    if (op == "-") {
        arity_at_least(1);
        if (s.items.size() == 2) return -eval_expr(src, s.items[1], h);
        if (s.items.size() == 3)
            return eval_expr(src, s.items[1], h) - eval_expr(src, s.items[2], h);
        sexp_error(src, s, "'-' takes one or two arguments");
    }
    if (op == "^") {
        if (s.items.size() != 3 || !s.items[2].atom || !is_rational_atom(s.items[2].text))
            sexp_error(src, s, "'^' takes an expression and an integer exponent");
        Rational e = parse_rational(s.items[2].text);
        if (e.get_den() != 1 || e < 0) sexp_error(src, s.items[2], "exponent must be a nonnegative integer");
        return eval_expr(src, s.items[1], h).pow(static_cast<int>(e.get_num().get_si()));
    }
    return h.compound(src, s);
}

long atom_int(const std::string& src, const Sexp& s) {
    if (!s.atom || !is_rational_atom(s.text)) sexp_error(src, s, "integer expected");
    Rational r = parse_rational(s.text);
    if (r.get_den() != 1) sexp_error(src, s, "integer expected");
    return r.get_num().get_si();
}

// ------------------------------------------------------- coefficient print

std::string coeff_str(const Coeff& c) {
    // pure rationals print bare; imaginary parts expand to (+ a (* b i))
    if (c.is_real()) return c.re().get_str();
    if (c.re() == 0) {
        if (c.im() == 1) return "i";
        return "(* " + c.im().get_str() + " i)";
    }
    std::string im = (c.im() == 1) ? "i" : "(* " + c.im().get_str() + " i)";
    return "(+ " + c.re().get_str() + " " + im + ")";
}

template <class Key>
std::string print_poly(const Poly<Key>& p,
                       const std::function<std::string(const Key&)>& gen) {
    if (p.is_zero()) return "0";
    std::vector<std::string> parts;
    const auto& terms = p.terms();
    for (auto it = terms.rbegin(); it != terms.rend(); ++it) {
        const auto& [m, c] = *it;
        std::vector<std::string> fac;
        if (!c.is_one() || m.is_unit()) fac.push_back(coeff_str(c));
        for (const auto& [k, e] : m.factors()) {
            std::string g = gen(k);
            fac.push_back(e == 1 ? g : "(^ " + g + " " + std::to_string(e) + ")");
        }
        if (fac.size() == 1) {
            parts.push_back(fac[0]);
        } else {
            std::string t = "(*";
            for (const auto& f : fac) t += " " + f;
            parts.push_back(t + ")");
        }
    }
    if (parts.size() == 1) return parts[0];
    std::string out = "(+";
    for (const auto& t : parts) out += " " + t;
    return out + ")";
}

std::string jet_gen_str(const JetKey& k, const Context& ctx) {
    switch (k.kind) {
        case JetKey::Kind::jet: {
            std::string s = "(u " + std::to_string(k.index) + " (";
            size_t nv = std::max<size_t>(ctx.vars.size(), 1);
            for (size_t v = 0; v < nv; ++v) {
                if (v) s += " ";
                s += std::to_string(k.orders[v]);
            }
            return s + "))";
        }
        case JetKey::Kind::var:
            if (k.index < ctx.vars.size()) return ctx.vars[k.index];
            return "?var" + std::to_string(k.index);
        case JetKey::Kind::param:
            if (k.index < ctx.params.size()) return ctx.params[k.index];
            return "?param" + std::to_string(k.index);
    }
    return "?";
}

}  // namespace

std::string print_expr(const DiffPoly& p, const Context& ctx) {
    return print_poly<JetKey>(p, [&](const JetKey& k) { return jet_gen_str(k, ctx); });
}

DiffPoly parse_expr(const std::string& text, const Context& ctx) {
    SexpParser sp{text};
    Sexp s = sp.parse_whole();
    ExprHooks<DiffPoly> h;
    h.symbol = [&](const std::string& src, const Sexp& a) -> DiffPoly {
        int v = ctx.var_id(a.text);
        if (v >= 0) return varsym(static_cast<uint16_t>(v));
        int pid = ctx.param_id(a.text);
        if (pid >= 0) return paramsym(static_cast<uint16_t>(pid));
        sexp_error(src, a, "undeclared symbol '" + a.text + "'");
    };
    h.compound = [&](const std::string& src, const Sexp& f) -> DiffPoly {
        if (f.items[0].text == "u") {
            if (f.items.size() != 3 || f.items[2].atom)
                sexp_error(src, f, "jet syntax is (u <field> (<orders>))");
            long field = atom_int(src, f.items[1]);
            if (field < 0 || field >= static_cast<long>(std::max<size_t>(ctx.fields.size(), 1)))
                sexp_error(src, f.items[1],
                           "undeclared symbol: field index " + std::to_string(field) +
                               " out of range");
            const Sexp& ords = f.items[2];
            if (ords.items.size() > static_cast<size_t>(kMaxVars) ||
                (ctx.vars.size() && ords.items.size() > ctx.vars.size()))
                sexp_error(src, ords, "too many derivative orders");
            JetKey k;
            k.kind = JetKey::Kind::jet;
            k.index = static_cast<uint16_t>(field);
            for (size_t v = 0; v < ords.items.size(); ++v) {
                long o = atom_int(src, ords.items[v]);
                if (o < 0 || o > 255) sexp_error(src, ords.items[v], "bad derivative order");
                k.orders[v] = static_cast<uint8_t>(o);
            }
            return DiffPoly::generator(k);
        }
        sexp_error(src, f, "unknown form '" + f.items[0].text + "'");
    };
    return eval_expr(text, s, h);
}

std::string print_discrete(const DiscretePoly& p, const Context& ctx) {
    (void)ctx;
    return print_poly<ShiftCoord>(p, [&](const ShiftCoord& k) {
        return "(u " + std::to_string(k.field) + " " + std::to_string(k.offset) + ")";
    });
}

DiscretePoly parse_discrete(const std::string& text, const Context& ctx) {
    SexpParser sp{text};
    Sexp s = sp.parse_whole();
    ExprHooks<DiscretePoly> h;
    h.symbol = [&](const std::string& src, const Sexp& a) -> DiscretePoly {
        sexp_error(src, a, "undeclared symbol '" + a.text + "'");
    };
    h.compound = [&](const std::string& src, const Sexp& f) -> DiscretePoly {
        if (f.items[0].text == "u") {
            if (f.items.size() != 3 || !f.items[2].atom)
                sexp_error(src, f, "site syntax is (u <field> <offset>)");
            long field = atom_int(src, f.items[1]);
            if (field < 0 || field >= static_cast<long>(std::max<size_t>(ctx.fields.size(), 1)))
                sexp_error(src, f.items[1], "undeclared symbol: field index out of range");
            long off = atom_int(src, f.items[2]);
            return site(static_cast<uint16_t>(field), static_cast<int>(off));
        }
        sexp_error(src, f, "unknown form '" + f.items[0].text + "'");
    };
    return eval_expr(text, s, h);
}

std::string print_chart_expr(const DiffPoly& p, const Chart& chart, const Context& ctx) {
    (void)ctx;
    return print_poly<JetKey>(p, [&](const JetKey& k) -> std::string {
        if (k.kind == JetKey::Kind::param)
            return k.index < ctx.params.size() ? ctx.params[k.index]
                                               : "?param" + std::to_string(k.index);
        if (k.kind != JetKey::Kind::jet) return "?";
        bool is_p = k.index >= chart.m;
        size_t f = is_p ? k.index - chart.m : k.index;
        return std::string("(") + (is_p ? "p" : "q") + " " + std::to_string(f) + " " +
               std::to_string(k.orders[0]) + ")";
    });
}

DiffPoly parse_chart_expr(const std::string& text, const Chart& chart, const Context& ctx) {
    SexpParser sp{text};
    Sexp s = sp.parse_whole();
    ExprHooks<DiffPoly> h;
    h.symbol = [&](const std::string& src, const Sexp& a) -> DiffPoly {
        int pid = ctx.param_id(a.text);
        if (pid >= 0) return paramsym(static_cast<uint16_t>(pid));
        sexp_error(src, a, "undeclared symbol '" + a.text + "'");
    };
    h.compound = [&](const std::string& src, const Sexp& f) -> DiffPoly {
        const std::string& tag = f.items[0].text;
        if (tag == "q" || tag == "p") {
            if (f.items.size() != 3) sexp_error(src, f, "chart syntax is (q|p <field> <level>)");
            long field = atom_int(src, f.items[1]);
            long level = atom_int(src, f.items[2]);
            if (field < 0 || field >= static_cast<long>(chart.m))
                sexp_error(src, f.items[1], "field index out of range for the chart");
            if (level < 0 || level > chart.N)
                sexp_error(src, f.items[2], "chart level out of range");
            JetKey k = (tag == "q") ? chart.q(field, static_cast<int>(level))
                                    : chart.p(field, static_cast<int>(level));
            return DiffPoly::generator(k);
        }
        sexp_error(src, f, "unknown form '" + tag + "'");
    };
    return eval_expr(text, s, h);
}

// ------------------------------------------------------------------ latex

namespace {

std::string latex_coeff(const Coeff& c, bool leading) {
    std::ostringstream os;
    auto rat_tex = [](const Rational& r) {
        if (r.get_den() == 1) return r.get_num().get_str();
        return "\\tfrac{" + r.get_num().get_str() + "}{" + r.get_den().get_str() + "}";
    };
    if (c.is_real()) {
        Rational r = c.re();
        std::string sign = (r < 0) ? "-" : (leading ? "" : "+");
        Rational a = abs(r);
        os << sign;
        if (a != 1) os << rat_tex(a);
        return os.str();
    }
    os << (leading ? "" : "+") << "(" << rat_tex(c.re()) << (c.im() < 0 ? "-" : "+");
    Rational b = abs(c.im());
    if (b != 1) os << rat_tex(b);
    os << "i)";
    return os.str();
}

template <class Key>
std::string latex_poly(const Poly<Key>& p,
                       const std::function<std::string(const Key&)>& gen) {
    if (p.is_zero()) return "0";
    std::string out;
    const auto& terms = p.terms();
    bool first = true;
    for (auto it = terms.rbegin(); it != terms.rend(); ++it) {
        const auto& [m, c] = *it;
        std::string cs = latex_coeff(c, first);
        out += cs;
        if (m.is_unit() && (cs.empty() || cs == "+" || cs == "-")) out += "1";
        for (const auto& [k, e] : m.factors()) {
            out += gen(k);
            if (e != 1) out += "^{" + std::to_string(e) + "}";
        }
        if ((cs.empty() || cs == "+" || cs == "-") && !m.is_unit()) {
            // sign only, fine
        } else if (m.is_unit() && !(cs.empty() || cs == "+" || cs == "-")) {
            // bare coefficient, fine
        }
        first = false;
    }
    return out;
}

}  // namespace

std::string latex_expr(const DiffPoly& p, const Context& ctx) {
    return latex_poly<JetKey>(p, [&](const JetKey& k) -> std::string {
        if (k.kind == JetKey::Kind::var)
            return k.index < ctx.vars.size() ? ctx.vars[k.index] : "x_{" + std::to_string(k.index) + "}";
        if (k.kind == JetKey::Kind::param)
            return k.index < ctx.params.size() ? "c_{" + std::to_string(k.index) + "}"
                                               : "c_{" + std::to_string(k.index) + "}";
        std::string name =
            k.index < ctx.fields.size() ? ctx.fields[k.index] : "u_{" + std::to_string(k.index) + "}";
        if (k.total_order() == 0) return name;
        if (ctx.vars.size() <= 1) return name + "^{(" + std::to_string(k.orders[0]) + ")}";
        std::string sub;
        for (size_t v = 0; v < ctx.vars.size(); ++v)
            for (int i = 0; i < k.orders[v]; ++i) sub += ctx.vars[v];
        return name + "_{" + sub + "}";
    });
}

std::string latex_chart_expr(const DiffPoly& p, const Chart& chart, const Context& ctx) {
    (void)ctx;
    return latex_poly<JetKey>(p, [&](const JetKey& k) -> std::string {
        if (k.kind == JetKey::Kind::param) return "c_{" + std::to_string(k.index) + "}";
        bool is_p = k.index >= chart.m;
        size_t f = is_p ? k.index - chart.m : k.index;
        std::string base = is_p ? "p" : "q";
        std::string out = base + "_{" + std::to_string(k.orders[0]) + "}";
        if (chart.m > 1) out += "^{(" + std::to_string(f) + ")}";
        return out;
    });
}

// -------------------------------------------------------------- documents

namespace {

struct DocReader {
    const std::string& src;
    Sexp root;

    const Sexp* find(const std::string& tag) const {
        for (size_t i = 1; i < root.items.size(); ++i)
            if (!root.items[i].atom && !root.items[i].items.empty() &&
                root.items[i].items[0].atom && root.items[i].items[0].text == tag)
                return &root.items[i];
        return nullptr;
    }

    const Sexp& require(const std::string& tag) const {
        const Sexp* s = find(tag);
        if (!s) fail("syntax_error", "document is missing the (" + tag + " ...) section");
        return *s;
    }

    std::vector<std::string> name_list(const std::string& tag) const {
        std::vector<std::string> out;
        const Sexp* s = find(tag);
        if (!s) return out;
        for (size_t i = 1; i < s->items.size(); ++i) {
            if (!s->items[i].atom) sexp_error(src, s->items[i], "name expected");
            out.push_back(s->items[i].text);
        }
        return out;
    }

    Context context() const {
        Context ctx;
        ctx.vars = name_list("vars");
        ctx.fields = name_list("fields");
        ctx.params = name_list("params");
        if (ctx.vars.empty()) ctx.vars = {"x"};
        return ctx;
    }
};

DocReader read_doc(const std::string& text, const std::string& kind) {
    SexpParser sp{text};
    Sexp root = sp.parse_whole();
    if (root.atom || root.items.empty() || !root.items[0].atom || root.items[0].text != kind)
        fail("syntax_error", "expected a (" + kind + " ...) document");
    return DocReader{text, std::move(root)};
}

std::string subtext(const std::string& src, const Sexp& s) {
    // re-serialize a node so the expression parsers can run on it
    if (s.atom) return s.text;
    std::string out = "(";
    for (size_t i = 0; i < s.items.size(); ++i) {
        if (i) out += " ";
        out += subtext(src, s.items[i]);
    }
    return out + ")";
}

}  // namespace

LagrangianDoc parse_lagrangian_doc(const std::string& text) {
    DocReader d = read_doc(text, "lagrangian");
    LagrangianDoc doc;
    doc.ctx = d.context();
    if (doc.ctx.fields.empty()) doc.ctx.fields = {"u"};
    const Sexp& den = d.require("density");
    if (den.items.size() != 2) sexp_error(text, den, "(density <expr>) expected");
    doc.density = parse_expr(subtext(text, den.items[1]), doc.ctx);
    if (const Sexp* dv = d.find("defaults")) {
        for (size_t i = 1; i < dv->items.size(); ++i) {
            const Sexp& pr = dv->items[i];
            if (pr.atom || pr.items.size() != 2 || !pr.items[0].atom || !pr.items[1].atom)
                sexp_error(text, pr, "(name value) expected");
            doc.params.emplace_back(pr.items[0].text, parse_rational(pr.items[1].text));
        }
    }
    return doc;
}

SystemDoc parse_system_doc(const std::string& text) {
    DocReader d = read_doc(text, "system");
    SystemDoc doc;
    doc.ctx = d.context();
    const Sexp& ch = d.require("chart");
    if (ch.items.size() != 3) sexp_error(text, ch, "(chart <m> <N>) expected");
    doc.chart.m = static_cast<size_t>(atom_int(text, ch.items[1]));
    doc.chart.N = static_cast<int>(atom_int(text, ch.items[2]));
    const Sexp& h = d.require("hamiltonian");
    if (h.items.size() != 2) sexp_error(text, h, "(hamiltonian <expr>) expected");
    doc.h = parse_chart_expr(subtext(text, h.items[1]), doc.chart, doc.ctx);
    return doc;
}

std::string print_system_doc(const SystemDoc& doc) {
    std::ostringstream os;
    os << "(system\n  (chart " << doc.chart.m << " " << doc.chart.N << ")\n";
    if (!doc.ctx.params.empty()) {
        os << "  (params";
        for (const auto& p : doc.ctx.params) os << " " << p;
        os << ")\n";
    }
    os << "  (hamiltonian " << print_chart_expr(doc.h, doc.chart, doc.ctx) << "))\n";
    return os.str();
}

DiscreteDoc parse_discrete_doc(const std::string& text) {
    DocReader d = read_doc(text, "discrete-lagrangian");
    DiscreteDoc doc;
    doc.ctx = d.context();
    if (doc.ctx.fields.empty()) doc.ctx.fields = {"u"};
    const Sexp& den = d.require("density");
    if (den.items.size() != 2) sexp_error(text, den, "(density <expr>) expected");
    doc.density = parse_discrete(subtext(text, den.items[1]), doc.ctx);
    return doc;
}

std::string print_disc_chart(const DiscChartPoly& p) {
    return print_poly<DiscChartVar>(p, [&](const DiscChartVar& k) {
        return std::string("(") + (k.kind ? "p" : "u") + " " + std::to_string(k.field) + " " +
               std::to_string(k.offset) + ")";
    });
}

DiscChartPoly parse_disc_chart(const std::string& text, const Context& ctx) {
    SexpParser sp{text};
    Sexp s = sp.parse_whole();
    ExprHooks<DiscChartPoly> h;
    h.symbol = [&](const std::string& src, const Sexp& a) -> DiscChartPoly {
        sexp_error(src, a, "undeclared symbol '" + a.text + "'");
    };
    h.compound = [&](const std::string& src, const Sexp& f) -> DiscChartPoly {
        const std::string& tag = f.items[0].text;
        if (tag == "u" || tag == "p") {
            if (f.items.size() != 3 || !f.items[1].atom || !f.items[2].atom)
                sexp_error(src, f, "site syntax is (u|p <field> <offset>)");
            long field = atom_int(src, f.items[1]);
            if (field < 0 || field >= static_cast<long>(std::max<size_t>(ctx.fields.size(), 1)))
                sexp_error(src, f.items[1], "undeclared symbol: field index out of range");
            long off = atom_int(src, f.items[2]);
            return DiscChartPoly::generator(DiscChartVar{
                static_cast<uint8_t>(tag == "p"), static_cast<uint16_t>(field),
                static_cast<int16_t>(off)});
        }
        sexp_error(src, f, "unknown form '" + tag + "'");
    };
    return eval_expr(text, s, h);
}

DiscreteSystemDoc parse_discrete_system_doc(const std::string& text) {
    DocReader d = read_doc(text, "discrete-system");
    DiscreteSystemDoc doc;
    doc.ctx = d.context();
    if (doc.ctx.fields.empty()) doc.ctx.fields = {"u"};
    const Sexp& h = d.require("hamiltonian");
    if (h.items.size() != 2) sexp_error(text, h, "(hamiltonian <expr>) expected");
    doc.h = parse_disc_chart(subtext(text, h.items[1]), doc.ctx);
    return doc;
}

PsidoDoc parse_psido_doc(const std::string& text) {
    DocReader d = read_doc(text, "psido");
    PsidoDoc doc;
    doc.ctx = d.context();
    if (doc.ctx.fields.empty()) doc.ctx.fields = {"u"};
    const Sexp& sz = d.require("size");
    if (sz.items.size() != 2) sexp_error(text, sz, "(size <n>) expected");
    doc.size = static_cast<size_t>(atom_int(text, sz.items[1]));
    for (size_t i = 1; i < d.root.items.size(); ++i) {
        const Sexp& node = d.root.items[i];
        if (node.atom || node.items.empty() || !node.items[0].atom ||
            node.items[0].text != "operator")
            continue;
        PsiDO op(doc.size);
        for (size_t k = 1; k < node.items.size(); ++k) {
            const Sexp& co = node.items[k];
            if (co.atom || co.items.size() != 3 || co.items[0].text != "coeff")
                sexp_error(text, co, "(coeff <order> <matrix>) expected");
            int order = static_cast<int>(atom_int(text, co.items[1]));
            const Sexp& rows = co.items[2];
            if (rows.atom || rows.items.size() != doc.size)
                sexp_error(text, rows, "matrix row count mismatch");
            PolyMat m(doc.size, doc.size);
            for (size_t r = 0; r < doc.size; ++r) {
                const Sexp& row = rows.items[r];
                if (row.atom || row.items.size() != doc.size)
                    sexp_error(text, row, "matrix column count mismatch");
                for (size_t c = 0; c < doc.size; ++c)
                    m.at(r, c) = parse_expr(subtext(text, row.items[c]), doc.ctx);
            }
            op.add_coeff(order, m);
        }
        doc.ops.push_back(std::move(op));
    }
    if (doc.ops.empty()) fail("syntax_error", "psido document contains no (operator ...)");
    return doc;
}

std::string print_psido(const PsiDO& op, const Context& ctx) {
    std::ostringstream os;
    os << "(operator";
    for (auto it = op.coeffs().rbegin(); it != op.coeffs().rend(); ++it) {
        os << "\n  (coeff " << it->first << " (";
        for (size_t r = 0; r < op.dim(); ++r) {
            if (r) os << " ";
            os << "(";
            for (size_t c = 0; c < op.dim(); ++c) {
                if (c) os << " ";
                os << print_expr(it->second.at(r, c), ctx);
            }
            os << ")";
        }
        os << "))";
    }
    os << ")";
    if (!op.exact()) os << " ; trusted down to order " << op.tail();
    return os.str();
}

SpectralDoc parse_spectral_doc(const std::string& text) {
    DocReader d = read_doc(text, "spectral");
    SpectralDoc doc;
    doc.ctx = d.context();
    const Sexp& sz = d.require("size");
    if (sz.items.size() != 2) sexp_error(text, sz, "(size <n>) expected");
    doc.M = SpectralMatrix(static_cast<size_t>(atom_int(text, sz.items[1])));
    for (size_t i = 1; i < d.root.items.size(); ++i) {
        const Sexp& node = d.root.items[i];
        if (node.atom || node.items.empty() || node.items[0].text != "entry") continue;
        if (node.items.size() < 3) sexp_error(text, node, "(entry <r> <c> ...) expected");
        size_t r = static_cast<size_t>(atom_int(text, node.items[1]));
        size_t c = static_cast<size_t>(atom_int(text, node.items[2]));
        if (r < 1 || c < 1 || r > doc.M.n || c > doc.M.n)
            sexp_error(text, node, "entry indices out of range (1-based)");
        LambdaPoly lp;
        for (size_t k = 3; k < node.items.size(); ++k) {
            const Sexp& t = node.items[k];
            if (!t.atom && t.items.size() == 3 && t.items[0].atom && t.items[0].text == "lterm") {
                int pw = static_cast<int>(atom_int(text, t.items[1]));
                lp.add(pw, parse_expr(subtext(text, t.items[2]), doc.ctx));
            } else {
                lp.add(0, parse_expr(subtext(text, t), doc.ctx));
            }
        }
        doc.M.at(r - 1, c - 1) = lp;
    }
    return doc;
}

RulesDoc parse_rules_doc(const std::string& text) {
    DocReader d = read_doc(text, "rules");
    RulesDoc doc;
    doc.ctx = d.context();
    for (size_t i = 1; i < d.root.items.size(); ++i) {
        const Sexp& node = d.root.items[i];
        if (node.atom || node.items.empty() || node.items[0].text != "rule") continue;
        if (node.items.size() != 4 || !node.items[2].atom)
            sexp_error(text, node, "(rule <field> <flow-var> <expr>) expected");
        long field = atom_int(text, node.items[1]);
        int var = doc.ctx.var_id(node.items[2].text);
        if (var < 0) sexp_error(text, node.items[2], "undeclared variable");
        doc.rules.set(static_cast<uint16_t>(field), static_cast<uint16_t>(var),
                      parse_expr(subtext(text, node.items[3]), doc.ctx));
    }
    return doc;
}

ConstraintsDoc parse_constraints_doc(const std::string& text) {
    DocReader d = read_doc(text, "constraints");
    ConstraintsDoc doc;
    doc.ctx = d.context();
    for (size_t i = 1; i < d.root.items.size(); ++i) {
        const Sexp& node = d.root.items[i];
        if (!node.atom && !node.items.empty() && node.items[0].atom &&
            (node.items[0].text == "vars" || node.items[0].text == "fields" ||
             node.items[0].text == "params"))
            continue;
        doc.exprs.push_back(parse_expr(subtext(text, node), doc.ctx));
    }
    return doc;
}

}  // namespace lagrax
