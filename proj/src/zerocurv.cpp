#include "lagrax/zerocurv.hpp"

#include <algorithm>
#include <sstream>

#include "lagrax/expr_io.hpp"

namespace lagrax {

void LambdaPoly::add(int power, const DiffPoly& p) {
    auto& slot = c[power];
    slot += p;
    if (slot.is_zero()) c.erase(power);
}

LambdaPoly LambdaPoly::operator+(const LambdaPoly& o) const {
    LambdaPoly r(*this);
    for (const auto& [k, p] : o.c) r.add(k, p);
    return r;
}

LambdaPoly LambdaPoly::operator-(const LambdaPoly& o) const { return *this + (-o); }

LambdaPoly LambdaPoly::operator-() const {
    LambdaPoly r;
    for (const auto& [k, p] : c) r.c.emplace(k, -p);
    return r;
}

LambdaPoly LambdaPoly::operator*(const LambdaPoly& o) const {
    LambdaPoly r;
    for (const auto& [k1, p1] : c)
        for (const auto& [k2, p2] : o.c) r.add(k1 + k2, p1 * p2);
    return r;
}

LambdaPoly LambdaPoly::map(const std::function<DiffPoly(const DiffPoly&)>& fn) const {
    LambdaPoly r;
    for (const auto& [k, p] : c) r.add(k, fn(p));
    return r;
}

bool SpectralMatrix::is_zero() const {
    return std::all_of(e.begin(), e.end(), [](const LambdaPoly& p) { return p.is_zero(); });
}

SpectralMatrix SpectralMatrix::operator+(const SpectralMatrix& o) const {
    if (n != o.n) fail("shape_mismatch", "SpectralMatrix: shape mismatch");
    SpectralMatrix r(n);
    for (size_t i = 0; i < e.size(); ++i) r.e[i] = e[i] + o.e[i];
    return r;
}

SpectralMatrix SpectralMatrix::operator-(const SpectralMatrix& o) const {
    if (n != o.n) fail("shape_mismatch", "SpectralMatrix: shape mismatch");
    SpectralMatrix r(n);
    for (size_t i = 0; i < e.size(); ++i) r.e[i] = e[i] - o.e[i];
    return r;
}

SpectralMatrix SpectralMatrix::operator*(const SpectralMatrix& o) const {
    if (n != o.n) fail("shape_mismatch", "SpectralMatrix: shape mismatch");
    SpectralMatrix r(n);
    for (size_t i = 0; i < n; ++i)
        for (size_t k = 0; k < n; ++k) {
            if (at(i, k).is_zero()) continue;
            for (size_t j = 0; j < n; ++j) r.at(i, j) = r.at(i, j) + at(i, k) * o.at(k, j);
        }
    return r;
}

SpectralMatrix SpectralMatrix::map(const std::function<DiffPoly(const DiffPoly&)>& fn) const {
    SpectralMatrix r(n);
    for (size_t i = 0; i < e.size(); ++i) r.e[i] = e[i].map(fn);
    return r;
}

FlowRules FlowRules::merged(const FlowRules& o) const {
    FlowRules r(*this);
    for (const auto& [k, v] : o.m) r.m[k] = v;
    return r;
}

DiffPoly prolonged_rule(const FlowRules& rules, uint16_t field, uint16_t flow_var,
                        const std::array<uint8_t, kMaxVars>& orders) {
    const DiffPoly* base = rules.find(field, flow_var);
    if (!base)
        fail("missing_rule", "no evolution rule for field " + std::to_string(field) +
                                 " in flow variable " + std::to_string(flow_var));
    DiffPoly r = *base;
    for (int v = 0; v < kMaxVars; ++v)
        for (int i = 0; i < orders[v]; ++i) r = total_derivative(r, v);
    return r;
}

DiffPoly flow_derivative(const DiffPoly& p, uint16_t flow_var, const FlowRules& rules,
                         bool strict) {
    DiffPoly out;
    for (const JetKey& k : p.support()) {
        DiffPoly dp = p.derivative(k);
        if (dp.is_zero()) continue;
        if (k.kind == JetKey::Kind::param) continue;
        if (k.kind == JetKey::Kind::var) {
            if (k.index == flow_var) out += dp;
            continue;
        }
        if (k.orders[flow_var] != 0)
            fail("flow_jet", "expression already carries a jet of the flow variable");
        if (rules.find(k.index, flow_var)) {
            out += dp * prolonged_rule(rules, k.index, flow_var, k.orders);
        } else if (strict) {
            fail("missing_rule",
                 "no evolution rule for field " + std::to_string(k.index) + " under the flow");
        } else {
            JetKey up = k;
            up.orders[flow_var] = static_cast<uint8_t>(up.orders[flow_var] + 1);
            out += dp * DiffPoly::generator(up);
        }
    }
    return out;
}

FlowRules prolong(const FlowRules& rules) {
    // cross-derivative closure where one field evolves along two flows
    for (const auto& [key1, rhs1] : rules.m)
        for (const auto& [key2, rhs2] : rules.m) {
            if (key1.first != key2.first || key1.second >= key2.second) continue;
            DiffPoly a = flow_derivative(rhs1, key2.second, rules, /*strict=*/false);
            DiffPoly b = flow_derivative(rhs2, key1.second, rules, /*strict=*/false);
            if (!(a == b))
                fail("prolongation_inconsistent",
                     "cross-derivative mismatch for field " + std::to_string(key1.first) +
                         " between flow variables " + std::to_string(key1.second) + " and " +
                         std::to_string(key2.second));
        }
    return rules;
}

namespace {

// reduced flow derivative of a var-free expression (jets carry no `var`)
DiffPoly reduced_dv(const DiffPoly& q, uint16_t var, const FlowRules& rules);

struct Reducer {
    uint16_t var;
    const FlowRules& rules;
    std::map<JetKey, DiffPoly> memo;

    // image of a jet with orders[var] = b >= 1, itself free of var-jets
    const DiffPoly& image(const JetKey& k) {
        auto it = memo.find(k);
        if (it != memo.end()) return it->second;
        JetKey base = k;
        base.orders[var] = 0;
        DiffPoly img = *rules.find(k.index, var);  // presence checked by caller
        img = reduce_jets(img, var, rules);
        for (int step = 1; step < k.orders[var]; ++step) img = reduced_dv(img, var, rules);
        for (int v = 0; v < kMaxVars; ++v) {
            if (v == var) continue;
            for (int i = 0; i < k.orders[v]; ++i) img = total_derivative(img, v);
        }
        return memo.emplace(k, std::move(img)).first->second;
    }
};

DiffPoly reduced_dv(const DiffPoly& q, uint16_t var, const FlowRules& rules) {
    // q is var-free; differentiate along var, substituting rules where they
    // exist and keeping honest jets where they do not
    return reduce_jets(flow_derivative(q, var, rules, /*strict=*/false), var, rules);
}

}  // namespace

DiffPoly reduce_jets(const DiffPoly& p, uint16_t var, const FlowRules& rules) {
    Reducer red{var, rules, {}};
    DiffPoly cur = p;
    for (;;) {
        std::optional<JetKey> target;
        for (const JetKey& k : cur.support()) {
            if (k.kind != JetKey::Kind::jet || k.orders[var] == 0) continue;
            if (!rules.find(k.index, var)) continue;
            if (!target || k.orders[var] > target->orders[var] ||
                (k.orders[var] == target->orders[var] && k < *target))
                target = k;
        }
        if (!target) return cur;
        const DiffPoly& img = red.image(*target);
        cur = cur.substitute(
            [&](const JetKey& kk) -> const DiffPoly* { return kk == *target ? &img : nullptr; });
    }
}

SpectralMatrix curvature(const SpectralMatrix& U, const SpectralMatrix& W, uint16_t base_var,
                         uint16_t flow_var, const FlowRules& rules) {
    if (U.n != W.n) fail("shape_mismatch", "curvature: matrix sizes differ");
    SpectralMatrix dU = U.map(
        [&](const DiffPoly& p) { return flow_derivative(p, flow_var, rules, /*strict=*/true); });
    SpectralMatrix dW =
        W.map([&](const DiffPoly& p) { return total_derivative(p, base_var); });
    return dU - dW + (U * W - W * U);
}

// ------------------------------------------------------------- DS dataset

namespace {

// field ids
constexpr uint16_t FU = 0, FUB = 1, F1 = 2, F2 = 3, G1 = 4, G2 = 5;
// variable ids
constexpr uint16_t VX = 0, VY = 1;

DiffPoly fld(uint16_t f) { return jet(f, 0); }
DiffPoly d_x(uint16_t f, int n = 1) { return jetm(f, {n, 0}); }
DiffPoly d_y(uint16_t f) { return jetm(f, {0, 1}); }

}  // namespace

DsData ds_instantiate() {
    DsData d;
    d.field_names = {"u", "u~", "f1", "f2", "f1*", "f2*"};
    Coeff I = Coeff::i();
    Coeff half = Coeff::fraction(1, 2);

    DiffPoly u = fld(FU), ub = fld(FUB), f1 = fld(F1), f2 = fld(F2), g1 = fld(G1), g2 = fld(G2);

    d.U = SpectralMatrix(3);
    d.U.at(0, 0) = LambdaPoly::lambda();
    d.U.at(0, 1) = LambdaPoly(u);
    d.U.at(0, 2) = LambdaPoly(-f1);
    d.U.at(1, 0) = LambdaPoly(ub);
    d.U.at(1, 1) = LambdaPoly::lambda(1, DiffPoly(-1));
    d.U.at(1, 2) = LambdaPoly(f2);
    d.U.at(2, 0) = LambdaPoly(g1);
    d.U.at(2, 1) = LambdaPoly(g2);

    d.V = SpectralMatrix(3);
    d.V.at(0, 0) = LambdaPoly::lambda();
    d.V.at(0, 2) = LambdaPoly(-f1);
    d.V.at(1, 1) = LambdaPoly::lambda();
    d.V.at(1, 2) = LambdaPoly(-f2);
    d.V.at(2, 0) = LambdaPoly(g1);
    d.V.at(2, 1) = LambdaPoly(-g2);

    d.W = SpectralMatrix(3);
    d.W.at(0, 0) = LambdaPoly::lambda(2, DiffPoly(I)) + LambdaPoly(I * (f1 * g1));
    d.W.at(0, 1) = LambdaPoly((I * half) * d_y(FU));
    d.W.at(0, 2) = LambdaPoly::lambda(1, -I * f1) + LambdaPoly(-I * d_y(F1));
    d.W.at(1, 0) = LambdaPoly((-(I * half)) * d_y(FUB));
    d.W.at(1, 1) = LambdaPoly::lambda(2, DiffPoly(I)) + LambdaPoly(-I * (f2 * g2));
    d.W.at(1, 2) = LambdaPoly::lambda(1, -I * f2) + LambdaPoly(-I * d_y(F2));
    d.W.at(2, 0) = LambdaPoly::lambda(1, I * g1) + LambdaPoly(-I * d_y(G1));
    d.W.at(2, 1) = LambdaPoly::lambda(1, -I * g2) + LambdaPoly(I * d_y(G2));
    d.W.at(2, 2) = LambdaPoly(I * (f2 * g2 - f1 * g1));

    d.rules_y.set(FU, VY, Coeff(-2) * (f1 * g2));
    d.rules_y.set(FUB, VY, Coeff(-2) * (g1 * f2));
    d.rules_y.set(F1, VY, d_x(F1) - u * f2);
    d.rules_y.set(G1, VY, d_x(G1) - ub * g2);
    d.rules_y.set(F2, VY, -d_x(F2) + ub * f1);
    d.rules_y.set(G2, VY, -d_x(G2) + u * g1);

    DiffPoly phi = f1 * g1 + f2 * g2;
    d.rules_t.set(FU, 2, I * (jetm(FU, {1, 1}) + Coeff(2) * (u * phi)));
    d.rules_t.set(FUB, 2, -I * (jetm(FUB, {1, 1}) + Coeff(2) * (ub * phi)));
    d.rules_t.set(F1, 2,
                  I * (d_x(F1, 2) + (Coeff(2) * (f1 * g1) - u * ub) * f1 - d_x(FU) * f2));
    d.rules_t.set(G1, 2,
                  -I * (d_x(G1, 2) + (Coeff(2) * (f1 * g1) - u * ub) * g1 - d_x(FUB) * g2));
    d.rules_t.set(F2, 2,
                  I * (d_x(F2, 2) - (Coeff(2) * (f2 * g2) + u * ub) * f2 - d_x(FUB) * f1));
    d.rules_t.set(G2, 2,
                  -I * (d_x(G2, 2) - (Coeff(2) * (f2 * g2) + u * ub) * g2 - d_x(FU) * g1));

    // (f1 f1*)_y - (f1 f1*)_x = 1/2 (u u~)_y = -((f2 f2*)_x + (f2 f2*)_y)
    DiffPoly c_lhs = d_y(F1) * g1 + f1 * d_y(G1) - d_x(F1) * g1 - f1 * d_x(G1);
    DiffPoly c_mid = half * (d_y(FU) * ub + u * d_y(FUB));
    DiffPoly c_rhs = -(d_x(F2) * g2 + f2 * d_x(G2) + d_y(F2) * g2 + f2 * d_y(G2));
    d.constraints.push_back(c_lhs - c_mid);
    d.constraints.push_back(c_mid - c_rhs);

    d.notes = {
        "printed source data required five corrections, each certified by the zero-curvature "
        "residuals: ",
        "V(3,2): f2* -> -f2*",
        "W(2,3): derivative term is df2/dy, not df1/dy",
        "W(3,1): lambda f1* + df1*/dy -> lambda f1* - df1*/dy",
        "W(3,2): lambda f2* + df2*/dy -> -lambda f2* + df2*/dy",
        "W(3,3): 0 -> i (f2 f2* - f1 f1*)",
    };
    return d;
}

namespace {

void report_matrix(const SpectralMatrix& R, const std::string& check,
                   const std::vector<std::string>& names, std::vector<ResidualItem>* out) {
    Context ctx;
    ctx.vars = {"x", "y", "t"};
    ctx.fields = names;
    for (size_t r = 0; r < R.n; ++r)
        for (size_t c = 0; c < R.n; ++c)
            for (const auto& [lp, p] : R.at(r, c).c)
                if (!p.is_zero())
                    out->push_back(ResidualItem{check, r + 1, c + 1, lp, print_expr(p, ctx)});
}

}  // namespace

DsReport ds_verify(const DsData& data, const DsOptions& opts) {
    DsReport rep;
    rep.notes = data.notes;

    FlowRules reduce_rules = data.rules_y;
    if (!opts.reduce_u_rules) {
        reduce_rules.m.erase({FU, VY});
        reduce_rules.m.erase({FUB, VY});
    }
    auto reduce_all = [&](const DiffPoly& p) { return reduce_jets(p, VY, reduce_rules); };

    SpectralMatrix rxy =
        curvature(data.U, data.V, VX, VY, data.rules_y).map(reduce_all);
    report_matrix(rxy, "xy", data.field_names, &rep.items);

    SpectralMatrix rxt =
        curvature(data.U, data.W, VX, 2, data.rules_t).map(reduce_all);
    report_matrix(rxt, "xt", data.field_names, &rep.items);

    if (opts.check_constraint) {
        Context ctx;
        ctx.vars = {"x", "y", "t"};
        ctx.fields = data.field_names;
        for (size_t i = 0; i < data.constraints.size(); ++i) {
            DiffPoly r = reduce_all(data.constraints[i]);
            if (!r.is_zero())
                rep.items.push_back(
                    ResidualItem{"constraint", i + 1, 0, 0, print_expr(r, ctx)});
        }
    }
    return rep;
}

std::vector<DsMutation> ds_mutations() {
    Coeff I = Coeff::i();
    std::vector<DsMutation> muts;
    auto add = [&](std::string name, std::function<void(DsData&)> fn) {
        muts.push_back(DsMutation{std::move(name), std::move(fn)});
    };
    add("V(3,2) reverted to printed +f2*",
        [](DsData& d) { d.V.at(2, 1) = LambdaPoly(fld(G2)); });
    add("W(2,3) reverted to printed df1/dy", [I](DsData& d) {
        d.W.at(1, 2) = LambdaPoly::lambda(1, -I * fld(F2)) + LambdaPoly(-I * d_y(F1));
    });
    add("W(3,1) reverted to printed +df1*/dy", [I](DsData& d) {
        d.W.at(2, 0) = LambdaPoly::lambda(1, I * fld(G1)) + LambdaPoly(I * d_y(G1));
    });
    add("W(3,2) reverted to printed +lambda f2*", [I](DsData& d) {
        d.W.at(2, 1) = LambdaPoly::lambda(1, I * fld(G2)) + LambdaPoly(I * d_y(G2));
    });
    add("W(3,3) reverted to printed 0", [](DsData& d) { d.W.at(2, 2) = LambdaPoly(); });
    add("sign flip in du/dy rule", [](DsData& d) {
        d.rules_y.set(FU, VY, Coeff(2) * (fld(F1) * fld(G2)));
    });
    add("dropped -u f2 from df1/dy rule",
        [](DsData& d) { d.rules_y.set(F1, VY, d_x(F1)); });
    add("sign flip of x-transport in df2/dy rule", [](DsData& d) {
        d.rules_y.set(F2, VY, d_x(F2) + fld(FUB) * fld(F1));
    });
    add("coefficient 2 -> 1 in du/dt rule", [I](DsData& d) {
        DiffPoly phi = fld(F1) * fld(G1) + fld(F2) * fld(G2);
        d.rules_t.set(FU, 2, I * (jetm(FU, {1, 1}) + fld(FU) * phi));
    });
    add("W(1,1) potential sign flipped", [I](DsData& d) {
        d.W.at(0, 0) = LambdaPoly::lambda(2, DiffPoly(I)) + LambdaPoly(-I * (fld(F1) * fld(G1)));
    });
    add("U(1,2) sign flipped", [](DsData& d) { d.U.at(0, 1) = LambdaPoly(-fld(FU)); });
    add("sign flip of u_x f2* term in df2*/dt rule", [I](DsData& d) {
        d.rules_t.set(G2, 2,
                      -I * (d_x(G2, 2) - (Coeff(2) * (fld(F2) * fld(G2)) + fld(FU) * fld(FUB)) *
                                fld(G2) + d_x(FU) * fld(G1)));
    });
    add("W(1,2) sign flipped", [I](DsData& d) {
        d.W.at(0, 1) = LambdaPoly((-(I * Coeff::fraction(1, 2))) * d_y(FU));
    });
    add("constraint shifted by u u~", [](DsData& d) {
        d.constraints[0] += fld(FU) * fld(FUB);
    });
    return muts;
}

}  // namespace lagrax
