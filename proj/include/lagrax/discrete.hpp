#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <vector>

#include "lagrax/poly.hpp"

namespace lagrax {

// Shifted field value u_{field, n+offset} on the lattice.
struct ShiftCoord {
    uint16_t field = 0;
    int16_t offset = 0;

    friend auto operator<=>(const ShiftCoord&, const ShiftCoord&) = default;
};

using DiscretePoly = Poly<ShiftCoord>;
using DiscMono = Monomial<ShiftCoord>;

inline DiscretePoly site(uint16_t field, int offset) {
    return DiscretePoly::generator(ShiftCoord{field, static_cast<int16_t>(offset)});
}

// ring homomorphism u_{n+k} -> u_{n+k+s}
DiscretePoly shift(const DiscretePoly& p, int s);

int max_offset(const DiscretePoly& p);
int min_offset(const DiscretePoly& p);
std::vector<uint16_t> fields_of(const DiscretePoly& p);

// grad L_n = sum_k d(shift(L,-k))/du_{n}; vanishes exactly on im(Delta - 1)
DiscretePoly discrete_euler(const DiscretePoly& L, uint16_t field);
std::map<uint16_t, DiscretePoly> discrete_gradient(const DiscretePoly& L);

// Formal one-form sum <c_{f,k}, du_{f,n+k}>.
struct DiscreteOneForm {
    std::map<ShiftCoord, DiscretePoly> comp;

    void add(ShiftCoord k, const DiscretePoly& c) {
        auto& slot = comp[k];
        slot += c;
        if (slot.is_zero()) comp.erase(k);
    }
    bool is_zero() const { return comp.empty(); }
    friend bool operator==(const DiscreteOneForm&, const DiscreteOneForm&) = default;
};

DiscreteOneForm shift(const DiscreteOneForm& a, int s);

// exterior differential dL = sum <dL/du_{n+k}, du_{n+k}>
DiscreteOneForm differential(const DiscretePoly& L);

// The unique alpha with dL_n = <grad L_n, du_n> + (Delta - 1) alpha_n.
// L must live on offsets >= 0.
DiscreteOneForm alpha_form(const DiscretePoly& L);

// dL - <grad L, du_0> - (Delta-1) alpha, identically zero for consistent data
DiscreteOneForm lemma2_residual(const DiscretePoly& L, const DiscreteOneForm& alpha);

// momenta p_{f,j} paired as alpha = sum <p_{f,j}, du_{f,n+j}>
std::map<ShiftCoord, DiscretePoly> discrete_momenta(const DiscretePoly& L);

// ---------------------------------------------------------------- chart

// generator of the discrete canonical chart: u- or p-type value at a site
struct DiscChartVar {
    uint8_t kind = 0;  // 0 = u, 1 = p
    uint16_t field = 0;
    int16_t offset = 0;

    friend auto operator<=>(const DiscChartVar&, const DiscChartVar&) = default;
};

using DiscChartPoly = Poly<DiscChartVar>;

inline DiscChartPoly chart_u(uint16_t field, int offset) {
    return DiscChartPoly::generator(DiscChartVar{0, field, static_cast<int16_t>(offset)});
}
inline DiscChartPoly chart_p(uint16_t field, int offset) {
    return DiscChartPoly::generator(DiscChartVar{1, field, static_cast<int16_t>(offset)});
}

struct DiscreteSystem {
    DiscChartPoly h;
    std::map<DiscChartVar, DiscChartPoly> du;  // keyed by the u-variable
    std::map<DiscChartVar, DiscChartPoly> dp;  // keyed by the matching u-variable
};

// du_{n+j}/dt = dh/dp_{n+j}, dp_{n+j}/dt = -dh/du_{n+j}
DiscreteSystem discrete_hamilton_equations(const DiscChartPoly& h);

}  // namespace lagrax
