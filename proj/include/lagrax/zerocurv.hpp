#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "lagrax/jet.hpp"

namespace lagrax {

// polynomial in the spectral parameter with DiffPoly coefficients
struct LambdaPoly {
    std::map<int, DiffPoly> c;

    LambdaPoly() = default;
    LambdaPoly(DiffPoly p) {  // NOLINT(google-explicit-constructor)
        if (!p.is_zero()) c.emplace(0, std::move(p));
    }
    static LambdaPoly lambda(int power = 1, DiffPoly coeff = DiffPoly(1)) {
        LambdaPoly r;
        if (!coeff.is_zero()) r.c.emplace(power, std::move(coeff));
        return r;
    }

    bool is_zero() const { return c.empty(); }
    void add(int power, const DiffPoly& p);

    LambdaPoly operator+(const LambdaPoly& o) const;
    LambdaPoly operator-(const LambdaPoly& o) const;
    LambdaPoly operator*(const LambdaPoly& o) const;
    LambdaPoly operator-() const;
    friend bool operator==(const LambdaPoly&, const LambdaPoly&) = default;

    LambdaPoly map(const std::function<DiffPoly(const DiffPoly&)>& fn) const;
};

struct SpectralMatrix {
    size_t n = 0;
    std::vector<LambdaPoly> e;

    SpectralMatrix() = default;
    explicit SpectralMatrix(size_t size) : n(size), e(size * size) {}

    LambdaPoly& at(size_t r, size_t c) { return e[r * n + c]; }
    const LambdaPoly& at(size_t r, size_t c) const { return e[r * n + c]; }

    bool is_zero() const;
    SpectralMatrix operator+(const SpectralMatrix& o) const;
    SpectralMatrix operator-(const SpectralMatrix& o) const;
    SpectralMatrix operator*(const SpectralMatrix& o) const;
    SpectralMatrix map(const std::function<DiffPoly(const DiffPoly&)>& fn) const;
};

// evolution rules (field, flow variable) -> right-hand side
struct FlowRules {
    std::map<std::pair<uint16_t, uint16_t>, DiffPoly> m;

    void set(uint16_t field, uint16_t var, DiffPoly rhs) {
        m[{field, var}] = std::move(rhs);
    }
    const DiffPoly* find(uint16_t field, uint16_t var) const {
        auto it = m.find({field, var});
        return it == m.end() ? nullptr : &it->second;
    }
    FlowRules merged(const FlowRules& o) const;
};

// Validates cross-derivative closure for fields carrying rules in two flow
// variables and returns the rules ready for on-demand prolongation.
FlowRules prolong(const FlowRules& rules);

// rule for a prolonged jet coordinate: D^orders applied to the base rule
DiffPoly prolonged_rule(const FlowRules& rules, uint16_t field, uint16_t flow_var,
                        const std::array<uint8_t, kMaxVars>& orders);

// total derivative along the flow, with field evolutions substituted from
// the rules; strict mode fails on a missing rule, lenient mode falls back to
// the honest jet derivative
DiffPoly flow_derivative(const DiffPoly& p, uint16_t flow_var, const FlowRules& rules,
                         bool strict = true);

// eliminate every jet with a positive order in `var` using the rules
// (lenient where no rule exists)
DiffPoly reduce_jets(const DiffPoly& p, uint16_t var, const FlowRules& rules);

// D_flow U - D_base W + [U, W] with flow derivatives substituted
SpectralMatrix curvature(const SpectralMatrix& U, const SpectralMatrix& W, uint16_t base_var,
                         uint16_t flow_var, const FlowRules& rules);

// ------------------------------------------------------------ DS instance

struct DsData {
    SpectralMatrix U, V, W;
    FlowRules rules_y, rules_t;
    std::vector<DiffPoly> constraints;  // must reduce to zero under rules_y
    std::vector<std::string> field_names;
    std::vector<std::string> notes;     // deviations from the printed source
};

// the Davey-Stewartson triple: verified matrices, flow rules and constraint
DsData ds_instantiate();

struct ResidualItem {
    std::string check;  // "xy", "xt", "constraint"
    size_t row = 0, col = 0;
    int lambda_power = 0;
    std::string residual;
};

struct DsReport {
    std::vector<ResidualItem> items;
    std::vector<std::string> notes;
    bool ok() const { return items.empty(); }
};

struct DsOptions {
    bool check_constraint = true;
    // probe switch: when false the u/ub y-rules are withheld from the
    // reduction of the (x,t) residual, exposing the constraint's role
    bool reduce_u_rules = true;
};

DsReport ds_verify(const DsData& data, const DsOptions& opts = {});
inline DsReport ds_verify() { return ds_verify(ds_instantiate()); }

// single-edit faults for the mutation suite; every one must be detected
struct DsMutation {
    std::string name;
    std::function<void(DsData&)> apply;
};
std::vector<DsMutation> ds_mutations();

}  // namespace lagrax
