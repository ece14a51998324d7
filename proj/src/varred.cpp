#include "lagrax/varred.hpp"

#include <sstream>

namespace lagrax {

namespace {

// exact inverse of a small matrix of constants, nullopt when singular
std::optional<std::vector<std::vector<Coeff>>> invert(std::vector<std::vector<Coeff>> A) {
    size_t n = A.size();
    std::vector<std::vector<Coeff>> inv(n, std::vector<Coeff>(n, Coeff(0)));
    for (size_t i = 0; i < n; ++i) inv[i][i] = Coeff(1);
    for (size_t col = 0; col < n; ++col) {
        size_t piv = col;
        while (piv < n && A[piv][col].is_zero()) ++piv;
        if (piv == n) return std::nullopt;
        std::swap(A[piv], A[col]);
        std::swap(inv[piv], inv[col]);
        Coeff d = A[col][col];
        for (size_t j = 0; j < n; ++j) {
            A[col][j] = A[col][j] / d;
            inv[col][j] = inv[col][j] / d;
        }
        for (size_t r = 0; r < n; ++r) {
            if (r == col || A[r][col].is_zero()) continue;
            Coeff f = A[r][col];
            for (size_t j = 0; j < n; ++j) {
                A[r][j] -= f * A[col][j];
                inv[r][j] -= f * inv[col][j];
            }
        }
    }
    return inv;
}

}  // namespace

LagrangianDensity make_lagrangian(const DiffPoly& density, size_t arity, int var) {
    if (!single_variable(density, var))
        fail("multi_variable", "Lagrangian density must involve a single independent variable");
    for (uint16_t f : fields_of(density))
        if (f >= arity) fail("bad_argument", "Lagrangian refers to a field beyond its arity");
    LagrangianDensity L;
    L.density = density;
    L.arity = arity;
    L.var = var;
    L.order = std::max(1, max_order(density, var));
    DiffPoly det = determinant(hessian_top(L));
    if (det.is_zero())
        fail("degenerate_hessian",
             "Hessian in the top jets is identically singular (order " +
                 std::to_string(L.order) + ")");
    return L;
}

std::vector<std::vector<DiffPoly>> hessian_top(const LagrangianDensity& L) {
    std::vector<std::vector<DiffPoly>> H(L.arity, std::vector<DiffPoly>(L.arity));
    for (size_t i = 0; i < L.arity; ++i) {
        DiffPoly di = L.density.derivative(jet_key1(static_cast<uint16_t>(i), L.order, L.var));
        for (size_t j = 0; j < L.arity; ++j)
            H[i][j] = di.derivative(jet_key1(static_cast<uint16_t>(j), L.order, L.var));
    }
    return H;
}

DiffPoly determinant(const std::vector<std::vector<DiffPoly>>& M) {
    size_t n = M.size();
    if (n == 0) return DiffPoly(1);
    if (n == 1) return M[0][0];
    DiffPoly det;
    for (size_t j = 0; j < n; ++j) {
        if (M[0][j].is_zero()) continue;
        std::vector<std::vector<DiffPoly>> minor(n - 1, std::vector<DiffPoly>(n - 1));
        for (size_t r = 1; r < n; ++r) {
            size_t cc = 0;
            for (size_t c = 0; c < n; ++c)
                if (c != j) minor[r - 1][cc++] = M[r][c];
        }
        DiffPoly term = M[0][j] * determinant(minor);
        det += (j % 2 == 0) ? term : -term;
    }
    return det;
}

std::vector<std::vector<DiffPoly>> momenta(const LagrangianDensity& L) {
    int N = L.N();
    std::vector<std::vector<DiffPoly>> p(N + 1, std::vector<DiffPoly>(L.arity));
    for (int j = 0; j <= N; ++j)
        for (size_t i = 0; i < L.arity; ++i)
            for (int k = 0; j + k + 1 <= L.order; ++k) {
                DiffPoly d =
                    L.density.derivative(jet_key1(static_cast<uint16_t>(i), j + k + 1, L.var));
                if (d.is_zero()) continue;
                d = total_derivative(d, L.var, k);
                p[j][i] += (k % 2 == 0) ? d : -d;
            }
    // re-verify the defining recurrence dp_j/dx + p_{j-1} = dL/du^(j)
    for (int j = 1; j <= N + 1; ++j)
        for (size_t i = 0; i < L.arity; ++i) {
            DiffPoly lhs = (j <= N) ? total_derivative(p[j][i], L.var) : DiffPoly();
            if (j - 1 >= 0) lhs += p[j - 1][i];
            lhs -= L.density.derivative(jet_key1(static_cast<uint16_t>(i), j, L.var));
            if (!lhs.is_zero())
                fail("internal", "momentum recurrence failed at j=" + std::to_string(j) +
                                     ", field " + std::to_string(i));
        }
    return p;
}

namespace {

// top-jet Legendre data: constant invertible A with p_N = A u^(N+1) + b
struct LegendreTop {
    std::vector<std::vector<Coeff>> A, Ainv;
    std::vector<DiffPoly> b;  // jets <= N
};

std::optional<LegendreTop> legendre_top(const LagrangianDensity& L, std::string* why) {
    size_t m = L.arity;
    auto H = hessian_top(L);
    LegendreTop t;
    t.A.assign(m, std::vector<Coeff>(m, Coeff(0)));
    for (size_t i = 0; i < m; ++i)
        for (size_t j = 0; j < m; ++j) {
            if (!H[i][j].is_constant()) {
                *why = "top-jet coefficient is not constant (Legendre inversion not affine)";
                return std::nullopt;
            }
            t.A[i][j] = H[i][j].constant_term();
        }
    auto inv = invert(t.A);
    if (!inv) {
        *why = "constant top-jet coefficient matrix is singular";
        return std::nullopt;
    }
    t.Ainv = *inv;
    t.b.resize(m);
    for (size_t i = 0; i < m; ++i) {
        DiffPoly pN = L.density.derivative(jet_key1(static_cast<uint16_t>(i), L.order, L.var));
        for (size_t j = 0; j < m; ++j)
            pN -= t.A[i][j] * jet(static_cast<uint16_t>(j), L.order, L.var);
        if (max_order(pN, L.var) >= L.order) {
            *why = "momentum p_N is not affine in the top jet";
            return std::nullopt;
        }
        t.b[i] = pN;
    }
    return t;
}

}  // namespace

HamiltonianX hamiltonian_x(const LagrangianDensity& L) {
    int N = L.N();
    auto p = momenta(L);
    HamiltonianX out;
    out.chart = Chart{L.arity, N};
    for (int j = 0; j <= N; ++j)
        for (size_t i = 0; i < L.arity; ++i)
            out.jet_form += p[j][i] * jet(static_cast<uint16_t>(i), j + 1, L.var);
    out.jet_form -= L.density;

    // Eq (4.4): d h^(x) / dx = -<grad L, u^(1)>
    DiffPoly check = total_derivative(out.jet_form, L.var);
    for (size_t i = 0; i < L.arity; ++i)
        check += euler(L.density, static_cast<uint16_t>(i), L.var) *
                 jet(static_cast<uint16_t>(i), 1, L.var);
    if (!check.is_zero()) fail("internal", "h^(x) identity (4.4) violated");

    std::string why;
    auto top = legendre_top(L, &why);
    if (!top) {
        out.unavailable_reason = why;
        return out;
    }
    const Chart& ch = out.chart;
    // solved top jet: S = A^{-1} (p_N - b), with p_N the chart momenta
    std::vector<DiffPoly> S(L.arity);
    for (size_t i = 0; i < L.arity; ++i)
        for (size_t l = 0; l < L.arity; ++l)
            S[i] += top->Ainv[i][l] * (DiffPoly::generator(ch.p(l, N)) - top->b[l]);
    std::map<JetKey, DiffPoly> sub;
    for (size_t i = 0; i < L.arity; ++i)
        sub.emplace(jet_key1(static_cast<uint16_t>(i), N + 1, L.var), S[i]);

    DiffPoly h;
    for (int j = 0; j < N; ++j)
        for (size_t i = 0; i < L.arity; ++i)
            h += DiffPoly::generator(ch.p(i, j)) * DiffPoly::generator(ch.q(i, j + 1));
    for (size_t i = 0; i < L.arity; ++i) h += DiffPoly::generator(ch.p(i, N)) * S[i];
    h -= substitute_jets(L.density, sub);
    out.chart_form = h;
    return out;
}

DiffPoly symmetry_hamiltonian(const LagrangianDensity& L, const std::vector<DiffPoly>& K) {
    if (K.size() != L.arity) fail("shape_mismatch", "symmetry_hamiltonian: K arity mismatch");
    DiffPoly pairing;
    for (size_t i = 0; i < L.arity; ++i)
        pairing += euler(L.density, static_cast<uint16_t>(i), L.var) * K[i];
    return -antiderivative(pairing, L.var);
}

LagrangianDensity assemble_lagrangian(const std::vector<DiffPoly>& densities,
                                      const std::vector<Rational>& c, int N, size_t arity) {
    if (N < 0) fail("bad_argument", "assemble_lagrangian: N must be nonnegative");
    if (densities.size() != static_cast<size_t>(N) + 2)
        fail("shape_mismatch", "assemble_lagrangian: need N+2 densities, got " +
                                   std::to_string(densities.size()));
    if (c.size() != static_cast<size_t>(N) + 1)
        fail("shape_mismatch", "assemble_lagrangian: need N+1 coefficients, got " +
                                   std::to_string(c.size()));
    int top = max_order(densities.back(), 0);
    for (int j = 0; j <= N; ++j)
        if (max_order(densities[j], 0) >= top)
            fail("order_condition",
                 "assemble_lagrangian: gamma_" + std::to_string(N + 1) +
                     " must have strictly highest differential order");
    DiffPoly L = -densities.back();
    for (int j = 0; j <= N; ++j) L += Coeff(c[j]) * densities[j];
    return make_lagrangian(L, arity);
}

ChartReduction::ChartReduction(const LagrangianDensity& L) : L_(L) {
    int N = L.N();
    chart_ = Chart{L.arity, N};
    momenta_ = momenta(L);
    std::string why;
    auto top = legendre_top(L, &why);
    if (!top) fail("chart_unavailable", why);

    // triangular solve: u^(2N+1-j) from p_j, j = N..0
    for (int j = N; j >= 0; --j) {
        int o = 2 * N + 1 - j;
        int sign = ((N - j) % 2 == 0) ? 1 : -1;
        std::vector<DiffPoly> R(L.arity);
        for (size_t i = 0; i < L.arity; ++i) {
            R[i] = momenta_[j][i];
            for (size_t l = 0; l < L.arity; ++l)
                R[i] -= Coeff(sign) * top->A[i][l] * jet(static_cast<uint16_t>(l), o, L.var);
            // rewrite previously solved jets (orders o+1..2N+1 cannot occur;
            // orders N+1..o-1 come from earlier rounds)
            R[i] = substitute_jets(R[i], table_);
            if (max_order(R[i], L.var) > N)
                fail("internal", "chart reduction: residual momentum order too high");
        }
        for (size_t l = 0; l < L.arity; ++l) {
            DiffPoly rhs;
            for (size_t i = 0; i < L.arity; ++i)
                rhs += Coeff(sign) * top->Ainv[l][i] *
                       (DiffPoly::generator(chart_.p(i, j)) - R[i]);
            table_.emplace(jet_key1(static_cast<uint16_t>(l), o, L.var), rhs);
        }
    }

    // Euler-Lagrange rule: top jet of euler(L) = 0 solved for u^(2N+2)
    int s = ((N + 1) % 2 == 0) ? 1 : -1;
    std::vector<DiffPoly> Q(L.arity);
    for (size_t i = 0; i < L.arity; ++i) {
        Q[i] = euler(L.density, static_cast<uint16_t>(i), L.var);
        for (size_t l = 0; l < L.arity; ++l)
            Q[i] -= Coeff(s) * top->A[i][l] * jet(static_cast<uint16_t>(l), 2 * N + 2, L.var);
        if (max_order(Q[i], L.var) >= 2 * N + 2)
            fail("internal", "chart reduction: Euler rule extraction failed");
    }
    euler_rule_.resize(L.arity);
    for (size_t l = 0; l < L.arity; ++l)
        for (size_t i = 0; i < L.arity; ++i)
            euler_rule_[l] -= Coeff(s) * top->Ainv[l][i] * Q[i];
}

DiffPoly ChartReduction::reduce_high_jet(const JetKey& k) const {
    auto it = cache_.find(k);
    if (it != cache_.end()) return it->second;
    int N = chart_.N;
    int o = k.orders[L_.var];
    DiffPoly img;
    if (o <= 2 * N + 1) {
        img = table_.at(k);
    } else {
        img = total_derivative(euler_rule_[k.index], L_.var, o - (2 * N + 2));
    }
    cache_.emplace(k, img);
    return img;
}

DiffPoly ChartReduction::to_chart(const DiffPoly& p) const {
    int N = chart_.N;
    DiffPoly cur = p;
    for (;;) {
        std::optional<JetKey> target;
        for (const JetKey& k : cur.support()) {
            if (k.kind != JetKey::Kind::jet) continue;
            if (k.index < chart_.m && k.orders[L_.var] > N) {
                if (!target || k.orders[L_.var] > target->orders[L_.var] ||
                    (k.orders[L_.var] == target->orders[L_.var] && k.index > target->index))
                    target = k;
            }
        }
        if (!target) return cur;
        DiffPoly img = reduce_high_jet(*target);
        cur = cur.substitute(
            [&](const JetKey& kk) -> const DiffPoly* { return kk == *target ? &img : nullptr; });
    }
}

}  // namespace lagrax
