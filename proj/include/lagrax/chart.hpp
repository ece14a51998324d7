#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "lagrax/jet.hpp"

namespace lagrax {

// Canonical chart (q_j, p_j), j = 0..N, for m fields.  Chart polynomials are
// DiffPolys in which jet (i, j) stands for q_j of field i and jet (m+i, j)
// for the conjugate momentum p_j; dimension is 2m(N+1).
struct Chart {
    size_t m = 1;
    int N = 0;

    size_t dim() const { return 2 * m * (N + 1); }
    JetKey q(size_t field, int level) const { return jet_key1(static_cast<uint16_t>(field), level); }
    JetKey p(size_t field, int level) const {
        return jet_key1(static_cast<uint16_t>(m + field), level);
    }
    // flat state layout: q_{0,0..N}, q_{1,0..N}, ..., then all p likewise
    size_t q_slot(size_t field, int level) const { return field * (N + 1) + level; }
    size_t p_slot(size_t field, int level) const { return m * (N + 1) + q_slot(field, level); }
};

struct ReducedSystem {
    Chart chart;
    DiffPoly h;
    std::vector<DiffPoly> dq;  // indexed by q_slot
    std::vector<DiffPoly> dp;  // indexed by q_slot as well (same shape)
};

// dq_j/ds = dh/dp_j, dp_j/ds = -dh/dq_j
ReducedSystem hamilton_equations(const Chart& chart, const DiffPoly& h);

// sum_j (dh1/dq_j dh2/dp_j - dh1/dp_j dh2/dq_j)
DiffPoly poisson_bracket(const Chart& chart, const DiffPoly& h1, const DiffPoly& h2);

struct Trajectory {
    std::vector<double> s;                    // abscissae, starting at 0
    std::vector<std::vector<double>> states;  // chart.dim() values per row
    std::vector<double> energy;               // Hamiltonian value per row
    std::optional<size_t> aborted_at;         // index of last finite state, if any
};

// classical fixed-step RK4; emits the Hamiltonian at every step
Trajectory integrate_reduced(const ReducedSystem& sys, const std::vector<double>& state0,
                             double step, int n_steps);

}  // namespace lagrax
