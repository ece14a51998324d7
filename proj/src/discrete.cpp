#include "lagrax/discrete.hpp"

#include <algorithm>

namespace lagrax {

DiscretePoly shift(const DiscretePoly& p, int s) {
    DiscretePoly out;
    for (const auto& [m, c] : p.terms()) {
        DiscMono nm;
        for (const auto& [k, e] : m.factors())
            nm = nm.times(DiscMono(ShiftCoord{k.field, static_cast<int16_t>(k.offset + s)}, e));
        out += DiscretePoly(nm, c);
    }
    return out;
}

int max_offset(const DiscretePoly& p) {
    int m = 0;
    for (const ShiftCoord& k : p.support()) m = std::max(m, int(k.offset));
    return m;
}

int min_offset(const DiscretePoly& p) {
    int m = 0;
    for (const ShiftCoord& k : p.support()) m = std::min(m, int(k.offset));
    return m;
}

std::vector<uint16_t> fields_of(const DiscretePoly& p) {
    std::vector<uint16_t> f;
    for (const ShiftCoord& k : p.support()) f.push_back(k.field);
    std::sort(f.begin(), f.end());
    f.erase(std::unique(f.begin(), f.end()), f.end());
    return f;
}

DiscretePoly discrete_euler(const DiscretePoly& L, uint16_t field) {
    DiscretePoly out;
    for (const ShiftCoord& k : L.support()) {
        if (k.field != field) continue;
        out += shift(L.derivative(k), -k.offset);
    }
    return out;
}

std::map<uint16_t, DiscretePoly> discrete_gradient(const DiscretePoly& L) {
    std::map<uint16_t, DiscretePoly> g;
    for (uint16_t f : fields_of(L)) g[f] = discrete_euler(L, f);
    return g;
}

DiscreteOneForm shift(const DiscreteOneForm& a, int s) {
    DiscreteOneForm out;
    for (const auto& [k, c] : a.comp)
        out.add(ShiftCoord{k.field, static_cast<int16_t>(k.offset + s)}, shift(c, s));
    return out;
}

DiscreteOneForm differential(const DiscretePoly& L) {
    DiscreteOneForm d;
    for (const ShiftCoord& k : L.support()) d.add(k, L.derivative(k));
    return d;
}

DiscreteOneForm alpha_form(const DiscretePoly& L) {
    if (min_offset(L) < 0)
        fail("bad_argument", "alpha_form: density must live on offsets >= 0");
    // telescoping of <dL/du_k, du_k> against <Delta^{-k} dL/du_k, du_0>:
    // alpha_{f,j} = sum_{k > j} Delta^{j-k} dL/du_{f,k}
    DiscreteOneForm alpha;
    for (const ShiftCoord& k : L.support()) {
        if (k.offset < 1) continue;
        DiscretePoly c = L.derivative(k);
        for (int j = 0; j < k.offset; ++j)
            alpha.add(ShiftCoord{k.field, static_cast<int16_t>(j)}, shift(c, j - k.offset));
    }
    return alpha;
}

DiscreteOneForm lemma2_residual(const DiscretePoly& L, const DiscreteOneForm& alpha) {
    DiscreteOneForm r = differential(L);
    for (const auto& [f, g] : discrete_gradient(L)) r.add(ShiftCoord{f, 0}, -g);
    DiscreteOneForm sh = shift(alpha, 1);
    for (const auto& [k, c] : sh.comp) r.add(k, -c);
    for (const auto& [k, c] : alpha.comp) r.add(k, c);
    return r;
}

std::map<ShiftCoord, DiscretePoly> discrete_momenta(const DiscretePoly& L) {
    return alpha_form(L).comp;
}

DiscreteSystem discrete_hamilton_equations(const DiscChartPoly& h) {
    DiscreteSystem sys;
    sys.h = h;
    for (const DiscChartVar& v : h.support()) {
        DiscChartVar u{0, v.field, v.offset};
        DiscChartVar p{1, v.field, v.offset};
        if (sys.du.count(u)) continue;
        sys.du[u] = h.derivative(p);
        sys.dp[u] = -h.derivative(u);
    }
    return sys;
}

}  // namespace lagrax
