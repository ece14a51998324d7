#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lagrax/poly.hpp"

namespace lagrax {

inline constexpr int kMaxVars = 4;

// Generator of the differential polynomial ring: a jet coordinate
// u_field^(orders), an explicit independent variable, or a constant
// parameter.  Jets sort first, explicit variables last among... after jets,
// parameters after variables; within jets the order is (field, multi-index).
struct JetKey {
    enum class Kind : uint8_t { jet = 0, var = 1, param = 2 };

    Kind kind = Kind::jet;
    uint16_t index = 0;                       // field index, or var/param id
    std::array<uint8_t, kMaxVars> orders{};   // per-variable derivative counts

    friend auto operator<=>(const JetKey&, const JetKey&) = default;

    int total_order() const {
        int t = 0;
        for (auto o : orders) t += o;
        return t;
    }
};

using DiffPoly = Poly<JetKey>;
using JetMono = Monomial<JetKey>;

inline JetKey jet_key(uint16_t field, std::initializer_list<int> orders) {
    JetKey k;
    k.kind = JetKey::Kind::jet;
    k.index = field;
    size_t i = 0;
    for (int o : orders) {
        if (i >= kMaxVars) fail("internal", "too many independent variables");
        k.orders[i++] = static_cast<uint8_t>(o);
    }
    return k;
}

inline JetKey jet_key1(uint16_t field, int order, int var = 0) {
    JetKey k;
    k.kind = JetKey::Kind::jet;
    k.index = field;
    k.orders[var] = static_cast<uint8_t>(order);
    return k;
}

inline JetKey var_key(uint16_t var) {
    JetKey k;
    k.kind = JetKey::Kind::var;
    k.index = var;
    return k;
}

inline JetKey param_key(uint16_t id) {
    JetKey k;
    k.kind = JetKey::Kind::param;
    k.index = id;
    return k;
}

// convenience constructors
inline DiffPoly jet(uint16_t field, int order = 0, int var = 0) {
    return DiffPoly::generator(jet_key1(field, order, var));
}
inline DiffPoly jetm(uint16_t field, std::initializer_list<int> orders) {
    return DiffPoly::generator(jet_key(field, orders));
}
inline DiffPoly varsym(uint16_t var) { return DiffPoly::generator(var_key(var)); }
inline DiffPoly paramsym(uint16_t id) { return DiffPoly::generator(param_key(id)); }

// ---------------------------------------------------------------- queries

// highest derivative order in variable `var` over all jets (0 if none)
int max_order(const DiffPoly& p, int var);

// highest jet order of a specific field in variable `var`, -1 if absent
int max_order_of_field(const DiffPoly& p, uint16_t field, int var);

std::vector<uint16_t> fields_of(const DiffPoly& p);

// true if every jet is purely a derivative in `var` (other slots zero)
bool single_variable(const DiffPoly& p, int var);

// ------------------------------------------------------------- operations

// total derivative d/d(var): explicit part plus the chain over all jets
DiffPoly total_derivative(const DiffPoly& p, int var);
DiffPoly total_derivative(const DiffPoly& p, int var, int times);

inline DiffPoly partial(const DiffPoly& p, const JetKey& k) { return p.derivative(k); }

// Euler variational derivative sum_k (-D)^k dp/du_field^(k); rejects input
// whose jets involve a second independent variable.
DiffPoly euler(const DiffPoly& p, uint16_t field, int var = 0);

// Euler image for every field occurring in p (indexed by field id)
std::map<uint16_t, DiffPoly> euler_all(const DiffPoly& p, int var = 0);

bool is_exact(const DiffPoly& p, int var = 0);

struct AntiderivativeError {
    std::map<uint16_t, DiffPoly> residual;  // nonzero Euler images
};

// q with total_derivative(q, var) == p, no additive constant.  Throws
// Error("not_exact", ...) carrying the Euler residual in text form when p is
// not a total derivative.
DiffPoly antiderivative(const DiffPoly& p, int var = 0);

// substitution of jet keys (non-jet generators pass through)
DiffPoly substitute_jets(const DiffPoly& p, const std::map<JetKey, DiffPoly>& images);

// bind parameters to constants
DiffPoly substitute_params(const DiffPoly& p, const std::map<uint16_t, Coeff>& values);

// scalar product of equal-length vectors of densities
DiffPoly dot(const std::vector<DiffPoly>& a, const std::vector<DiffPoly>& b);

}  // namespace lagrax
