#pragma once

#include <string>
#include <vector>

#include "lagrax/chart.hpp"
#include "lagrax/discrete.hpp"
#include "lagrax/jet.hpp"
#include "lagrax/psido.hpp"
#include "lagrax/varred.hpp"
#include "lagrax/zerocurv.hpp"

namespace lagrax {

// Symbol declarations backing the textual expression format.  Fields are
// referenced by index in expressions; variable and parameter names are
// resolved against these lists.
struct Context {
    std::vector<std::string> vars;    // independent variables, in order
    std::vector<std::string> fields;  // field names (index = field id)
    std::vector<std::string> params;  // constant parameter names

    int var_id(const std::string& name) const;
    int param_id(const std::string& name) const;
};

// parenthesized prefix form, canonical term order (leading term first)
std::string print_expr(const DiffPoly& p, const Context& ctx);
DiffPoly parse_expr(const std::string& text, const Context& ctx);

std::string print_discrete(const DiscretePoly& p, const Context& ctx);
DiscretePoly parse_discrete(const std::string& text, const Context& ctx);

// chart polynomials print with (q f j) / (p f j) generators
std::string print_chart_expr(const DiffPoly& p, const Chart& chart, const Context& ctx);
DiffPoly parse_chart_expr(const std::string& text, const Chart& chart, const Context& ctx);

std::string latex_expr(const DiffPoly& p, const Context& ctx);
std::string latex_chart_expr(const DiffPoly& p, const Chart& chart, const Context& ctx);

// ------------------------------------------------------------- documents

struct LagrangianDoc {
    Context ctx;
    DiffPoly density;
    std::vector<std::pair<std::string, Rational>> params;  // defaults, may be empty
};
LagrangianDoc parse_lagrangian_doc(const std::string& text);

struct SystemDoc {
    Context ctx;
    Chart chart;
    DiffPoly h;
};
SystemDoc parse_system_doc(const std::string& text);
std::string print_system_doc(const SystemDoc& doc);

struct DiscreteDoc {
    Context ctx;
    DiscretePoly density;
};
DiscreteDoc parse_discrete_doc(const std::string& text);

// discrete chart polynomials use (u f k) and (p f k) site generators
std::string print_disc_chart(const DiscChartPoly& p);
DiscChartPoly parse_disc_chart(const std::string& text, const Context& ctx);

struct DiscreteSystemDoc {
    Context ctx;
    DiscChartPoly h;
};
DiscreteSystemDoc parse_discrete_system_doc(const std::string& text);

struct PsidoDoc {
    Context ctx;
    size_t size = 1;
    std::vector<PsiDO> ops;
};
PsidoDoc parse_psido_doc(const std::string& text);
std::string print_psido(const PsiDO& op, const Context& ctx);

struct SpectralDoc {
    Context ctx;
    SpectralMatrix M;
};
SpectralDoc parse_spectral_doc(const std::string& text);

struct RulesDoc {
    Context ctx;
    FlowRules rules;
};
RulesDoc parse_rules_doc(const std::string& text);

struct ConstraintsDoc {
    Context ctx;
    std::vector<DiffPoly> exprs;
};
ConstraintsDoc parse_constraints_doc(const std::string& text);

}  // namespace lagrax
