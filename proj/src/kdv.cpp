#include "lagrax/kdv.hpp"

namespace lagrax {

KdvDemo kdv_demo() {
    KdvDemo d;
    DiffPoly u = jet(0, 0), u1 = jet(0, 1);

    PsiDO L2 = add(psido_scalar_term(2, DiffPoly(1)), psido_scalar_term(0, u));
    PsiDO r = root(L2, 2, 7);
    d.residue12 = residue(r).at(0, 0);
    d.residue32 = residue(power(r, 3, 6)).at(0, 0);
    d.residue52 = residue(power(r, 5, 6)).at(0, 0);

    d.gamma0 = u;
    d.gamma1 = u * u;
    d.gamma2 = u * u * u - Coeff::fraction(1, 2) * (u1 * u1);
    // the canonical representatives must match the residue densities mod d/dx
    if (!is_exact(Coeff(2) * d.residue12 - d.gamma0) ||
        !is_exact(Coeff::fraction(8, 3) * d.residue32 - d.gamma1) ||
        !is_exact(Coeff::fraction(16, 5) * d.residue52 - d.gamma2))
        fail("internal", "kdv-demo: residue densities disagree with the canonical gammas");

    PsiDO flow = lax_rhs(L2, power(r, 3, 6), 6);
    require_differential(flow);
    if (flow.top() != 0 || flow.lowest() != 0)
        fail("internal", "kdv-demo: KdV flow is not a multiplication operator");
    d.kdv_flow = flow.coeff(0).at(0, 0);

    DiffPoly density = -d.gamma2 + paramsym(1) * d.gamma1 + paramsym(0) * d.gamma0;
    d.L = make_lagrangian(density, 1);
    auto H = hamiltonian_x(d.L);
    if (!H.chart_form) fail("internal", "kdv-demo: Legendre inversion failed");
    d.chart = H.chart;
    d.h_x_chart = *H.chart_form;

    d.h_t_jet = symmetry_hamiltonian(d.L, {d.kdv_flow});
    ChartReduction red(d.L);
    d.h_t_chart = red.to_chart(d.h_t_jet);
    d.bracket = poisson_bracket(d.chart, d.h_t_chart, d.h_x_chart);
    return d;
}

KdvConservation kdv_conservation(const KdvDemo& demo, const Rational& c0, const Rational& c1,
                                 const std::vector<double>& state, double step, int steps) {
    std::map<uint16_t, Coeff> binding{{0, Coeff(c0)}, {1, Coeff(c1)}};
    DiffPoly h = substitute_params(demo.h_x_chart, binding);
    ReducedSystem sys = hamilton_equations(demo.chart, h);

    KdvConservation out;
    out.traj = integrate_reduced(sys, state, step, steps);
    if (out.traj.aborted_at) fail("not_finite", "kdv-demo: trajectory left the finite range");
    out.drift = std::abs(out.traj.energy.back() - out.traj.energy.front());

    Trajectory half = integrate_reduced(sys, state, step / 2, 2 * steps);
    if (half.aborted_at) fail("not_finite", "kdv-demo: half-step trajectory not finite");
    out.drift_half = std::abs(half.energy.back() - half.energy.front());
    return out;
}

}  // namespace lagrax
