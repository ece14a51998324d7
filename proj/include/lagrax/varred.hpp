#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lagrax/chart.hpp"
#include "lagrax/jet.hpp"

namespace lagrax {

// Lagrangian density L[u] in one independent variable; order = N+1 is the
// highest jet order present and the Hessian block in the top jets must have
// a determinant that is not identically zero.
struct LagrangianDensity {
    DiffPoly density;
    size_t arity = 1;   // number of fields m
    int order = 1;      // N + 1
    int var = 0;

    int N() const { return order - 1; }
};

// validates single-variable form, finite order >= 1 and the Hessian condition
LagrangianDensity make_lagrangian(const DiffPoly& density, size_t arity, int var = 0);

// dL/du_i^(N+1) du_j^(N+1) as an arity x arity matrix
std::vector<std::vector<DiffPoly>> hessian_top(const LagrangianDensity& L);

DiffPoly determinant(const std::vector<std::vector<DiffPoly>>& M);

// Momenta p_j, j = 0..N, p[j][i] for field i, from the closed-form solution
// of the recurrence dp_j/dx + p_{j-1} = dL/du^(j); the recurrence is
// re-verified before returning.
std::vector<std::vector<DiffPoly>> momenta(const LagrangianDensity& L);

struct HamiltonianX {
    DiffPoly jet_form;                  // sum <p_j, u^(j+1)> - L
    std::optional<DiffPoly> chart_form; // in chart variables, when Legendre inverts
    std::string unavailable_reason;     // set when chart_form is absent
    Chart chart;
};

HamiltonianX hamiltonian_x(const LagrangianDensity& L);

// h with dh/dx = -<euler(L), K>; throws Error("not_exact") with the Euler
// residual when K is not conservation-compatible for L
DiffPoly symmetry_hamiltonian(const LagrangianDensity& L, const std::vector<DiffPoly>& K);

// L_N = -gamma_{N+1} + sum_{j=0}^{N} c_j gamma_j  (densities = gamma_0..gamma_{N+1})
LagrangianDensity assemble_lagrangian(const std::vector<DiffPoly>& densities,
                                      const std::vector<Rational>& c, int N, size_t arity = 1);

// Rewriting of jet expressions into chart coordinates on the critical
// submanifold: jets of order N+1..2N+1 are solved from the momenta
// (triangular Legendre data), higher jets from the prolonged Euler-Lagrange
// rule.  Requires the top Hessian to be a constant invertible matrix.
class ChartReduction {
public:
    explicit ChartReduction(const LagrangianDensity& L);

    const Chart& chart() const { return chart_; }

    // rewrite p into chart variables; throws when a jet cannot be reduced
    DiffPoly to_chart(const DiffPoly& p) const;

private:
    DiffPoly reduce_high_jet(const JetKey& k) const;

    LagrangianDensity L_;
    Chart chart_;
    std::vector<std::vector<DiffPoly>> momenta_;
    std::map<JetKey, DiffPoly> table_;           // jets N+1..2N+1 -> chart polys
    std::vector<DiffPoly> euler_rule_;           // u_i^(2N+2) = euler_rule_[i] (jets <= 2N+1)
    mutable std::map<JetKey, DiffPoly> cache_;   // prolonged substitutions
};

}  // namespace lagrax
