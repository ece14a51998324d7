#pragma once

#include "lagrax/chart.hpp"
#include "lagrax/psido.hpp"
#include "lagrax/varred.hpp"

namespace lagrax {

// Stationary-KdV workbench demo: conserved densities from the residue trace
// of fractional powers of xi^2 + u, the assembled Lagrangian
// L_1 = -gamma_2 + c1 gamma_1 + c0 gamma_0 (c0, c1 symbolic parameters),
// its canonical chart, and the reduced symmetry Hamiltonian of the KdV flow.
struct KdvDemo {
    DiffPoly residue12, residue32, residue52;  // res of L^(1/2), L^(3/2), L^(5/2)
    DiffPoly gamma0, gamma1, gamma2;           // canonical representatives
    DiffPoly kdv_flow;                         // 1/4 u''' + 3/2 u u'
    LagrangianDensity L;
    Chart chart;
    DiffPoly h_x_chart;   // 1/2 p^2 + q^3 - c1 q^2 - c0 q
    DiffPoly h_t_jet;     // symmetry Hamiltonian of the KdV flow, jet form
    DiffPoly h_t_chart;   // reduced modulo the stationary ideal
    DiffPoly bracket;     // {h_t, h_x} on the chart; zero certifies commutation
};

KdvDemo kdv_demo();

struct KdvConservation {
    Trajectory traj;
    double drift;       // |h(end) - h(0)| at the requested step
    double drift_half;  // same with the step halved
};

KdvConservation kdv_conservation(const KdvDemo& demo, const Rational& c0, const Rational& c1,
                                 const std::vector<double>& state, double step, int steps);

}  // namespace lagrax
