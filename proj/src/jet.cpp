#include "lagrax/jet.hpp"

#include <algorithm>
#include <sstream>

namespace lagrax {

int max_order(const DiffPoly& p, int var) {
    int m = 0;
    for (const JetKey& k : p.support())
        if (k.kind == JetKey::Kind::jet) m = std::max(m, int(k.orders[var]));
    return m;
}

int max_order_of_field(const DiffPoly& p, uint16_t field, int var) {
    int m = -1;
    for (const JetKey& k : p.support())
        if (k.kind == JetKey::Kind::jet && k.index == field)
            m = std::max(m, int(k.orders[var]));
    return m;
}

std::vector<uint16_t> fields_of(const DiffPoly& p) {
    std::vector<uint16_t> f;
    for (const JetKey& k : p.support())
        if (k.kind == JetKey::Kind::jet) f.push_back(k.index);
    std::sort(f.begin(), f.end());
    f.erase(std::unique(f.begin(), f.end()), f.end());
    return f;
}

bool single_variable(const DiffPoly& p, int var) {
    for (const JetKey& k : p.support()) {
        if (k.kind == JetKey::Kind::jet) {
            for (int v = 0; v < kMaxVars; ++v)
                if (v != var && k.orders[v] != 0) return false;
        }
    }
    return true;
}

DiffPoly total_derivative(const DiffPoly& p, int var) {
    DiffPoly out;
    for (const JetKey& k : p.support()) {
        if (k.kind == JetKey::Kind::param) continue;
        DiffPoly dp = p.derivative(k);
        if (dp.is_zero()) continue;
        if (k.kind == JetKey::Kind::var) {
            if (k.index == var) out += dp;
        } else {
            JetKey up = k;
            if (up.orders[var] == 0xff) fail("internal", "derivative order overflow");
            up.orders[var] = static_cast<uint8_t>(up.orders[var] + 1);
            out += dp * DiffPoly::generator(up);
        }
    }
    return out;
}

DiffPoly total_derivative(const DiffPoly& p, int var, int times) {
    DiffPoly q = p;
    for (int i = 0; i < times; ++i) q = total_derivative(q, var);
    return q;
}

DiffPoly euler(const DiffPoly& p, uint16_t field, int var) {
    if (!single_variable(p, var))
        fail("multi_variable", "Euler operator requires a single independent variable");
    DiffPoly out;
    int n = max_order_of_field(p, field, var);
    for (int k = 0; k <= n; ++k) {
        DiffPoly d = p.derivative(jet_key1(field, k, var));
        if (d.is_zero()) continue;
        d = total_derivative(d, var, k);
        out += (k % 2 == 0) ? d : -d;
    }
    return out;
}

std::map<uint16_t, DiffPoly> euler_all(const DiffPoly& p, int var) {
    std::map<uint16_t, DiffPoly> out;
    for (uint16_t f : fields_of(p)) out[f] = euler(p, f, var);
    return out;
}

bool is_exact(const DiffPoly& p, int var) {
    for (const auto& [f, e] : euler_all(p, var))
        if (!e.is_zero()) return false;
    return true;
}

namespace {

// largest jet generator present, by (order in var, field); nullopt if none
std::optional<JetKey> top_jet(const DiffPoly& p, int var) {
    std::optional<JetKey> best;
    for (const JetKey& k : p.support()) {
        if (k.kind != JetKey::Kind::jet) continue;
        if (!best || int(k.orders[var]) > int(best->orders[var]) ||
            (k.orders[var] == best->orders[var] && k.index > best->index))
            best = k;
    }
    return best;
}

std::string residual_text(const std::map<uint16_t, DiffPoly>& res) {
    std::ostringstream os;
    os << "nonzero Euler residual on field(s):";
    for (const auto& [f, e] : res)
        if (!e.is_zero()) os << " " << f;
    return os.str();
}

}  // namespace

DiffPoly antiderivative(const DiffPoly& p, int var) {
    DiffPoly rest = p;
    DiffPoly q;
    // generous guard; each pass removes the current top jet
    size_t guard = 16 * (p.size() + 4) * (size_t(max_order(p, var)) + 2);
    while (!rest.is_zero()) {
        if (!single_variable(rest, var))
            fail("multi_variable", "antiderivative requires a single independent variable");
        auto z = top_jet(rest, var);
        if (!z) {
            // pure polynomial in the explicit variable (and parameters)
            JetKey xk = var_key(static_cast<uint16_t>(var));
            for (const auto& [m, c] : rest.terms()) {
                int e = m.exponent_of(xk);
                JetMono nm = m.times(JetMono(xk));
                q += DiffPoly(nm, c * Coeff(rat(1, e + 1)));
            }
            break;
        }
        int n = z->orders[var];
        if (n == 0 || rest.degree_in(*z) > 1)
            fail("not_exact", residual_text(euler_all(p, var)));
        DiffPoly c = rest.derivative(*z);
        if (c.depends_on(*z)) fail("not_exact", residual_text(euler_all(p, var)));
        // integrate c with respect to the one-step-lower jet
        JetKey zl = *z;
        zl.orders[var] = static_cast<uint8_t>(n - 1);
        DiffPoly qstep;
        for (const auto& [m, cc] : c.terms()) {
            int e = m.exponent_of(zl);
            qstep += DiffPoly(m.times(JetMono(zl)), cc * Coeff(rat(1, e + 1)));
        }
        q += qstep;
        rest -= total_derivative(qstep, var);
        if (guard-- == 0) fail("not_exact", residual_text(euler_all(p, var)));
    }
    // normalization: no additive constant
    return q - DiffPoly(q.constant_term());
}

DiffPoly substitute_jets(const DiffPoly& p, const std::map<JetKey, DiffPoly>& images) {
    return p.substitute([&](const JetKey& k) -> const DiffPoly* {
        auto it = images.find(k);
        return it == images.end() ? nullptr : &it->second;
    });
}

DiffPoly substitute_params(const DiffPoly& p, const std::map<uint16_t, Coeff>& values) {
    std::map<JetKey, DiffPoly> images;
    for (const auto& [id, c] : values) images.emplace(param_key(id), DiffPoly(c));
    return substitute_jets(p, images);
}

DiffPoly dot(const std::vector<DiffPoly>& a, const std::vector<DiffPoly>& b) {
    if (a.size() != b.size()) fail("shape_mismatch", "dot: length mismatch");
    DiffPoly s;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

}  // namespace lagrax
