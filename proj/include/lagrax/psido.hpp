#pragma once

#include <limits>
#include <map>
#include <vector>

#include "lagrax/jet.hpp"

namespace lagrax {

// Square matrix of differential polynomials.
class PolyMat {
public:
    PolyMat() = default;
    PolyMat(size_t rows, size_t cols) : rows_(rows), cols_(cols), a_(rows * cols) {}

    static PolyMat identity(size_t n) {
        PolyMat m(n, n);
        for (size_t i = 0; i < n; ++i) m.at(i, i) = DiffPoly(1);
        return m;
    }

    size_t rows() const { return rows_; }
    size_t cols() const { return cols_; }
    DiffPoly& at(size_t r, size_t c) { return a_[r * cols_ + c]; }
    const DiffPoly& at(size_t r, size_t c) const { return a_[r * cols_ + c]; }

    bool is_zero() const {
        for (const auto& p : a_)
            if (!p.is_zero()) return false;
        return true;
    }

    PolyMat operator+(const PolyMat& o) const;
    PolyMat operator-(const PolyMat& o) const;
    PolyMat operator*(const PolyMat& o) const;
    PolyMat operator-() const;
    PolyMat scaled(const Coeff& c) const;
    PolyMat transpose() const;
    PolyMat dx(int times = 1, int var = 0) const;
    DiffPoly trace() const;

    friend bool operator==(const PolyMat&, const PolyMat&) = default;

private:
    size_t rows_ = 0, cols_ = 0;
    std::vector<DiffPoly> a_;
};

// Formal series sum_j a_j xi^j of matrix coefficients in the symbol xi of
// d/dx.  Orders below `tail` are unknown (dropped by truncation); an object
// with tail == kExactTail is exact, every absent order being genuinely zero.
// Equality may only be asserted on trusted orders.
inline constexpr int kExactTail = std::numeric_limits<int>::min() / 2;

class PsiDO {
public:
    PsiDO() = default;
    explicit PsiDO(size_t dim, int tail = kExactTail) : dim_(dim), tail_(tail) {}

    size_t dim() const { return dim_; }
    int tail() const { return tail_; }
    bool exact() const { return tail_ == kExactTail; }
    void set_tail(int t) { tail_ = t; }

    bool has(int order) const { return c_.count(order) != 0; }
    const PolyMat& coeff(int order) const;
    void set_coeff(int order, PolyMat m);
    void add_coeff(int order, const PolyMat& m);
    const std::map<int, PolyMat>& coeffs() const { return c_; }

    bool is_zero() const { return c_.empty(); }
    int top() const;         // highest stored order (kExactTail if none)
    int lowest() const;      // lowest stored order

    // drop stored orders below `tail` and record the truncation
    PsiDO truncated(int tail) const;

private:
    size_t dim_ = 0;
    std::map<int, PolyMat> c_;
    int tail_ = kExactTail;
};

// xi^order with the given matrix coefficient; exact
PsiDO psido_term(int order, PolyMat m);
PsiDO psido_scalar_term(int order, const DiffPoly& p);

PsiDO add(const PsiDO& a, const PsiDO& b);
PsiDO negate(const PsiDO& a);
PsiDO scale(const Coeff& c, const PsiDO& a);

// product (10.3): a o b = sum_alpha 1/alpha! d_xi^alpha a . d_x^alpha b,
// truncated below -depth; associative on trusted orders
PsiDO compose(const PsiDO& a, const PsiDO& b, int depth);

PsiDO commutator(const PsiDO& a, const PsiDO& b, int depth);

PsiDO split_plus(const PsiDO& a);   // differential part, exact
PsiDO split_minus(const PsiDO& a);  // integral part, keeps the tail
PsiDO r_map(const PsiDO& a);        // (P+ - P-)/2
PsiDO r_bracket(const PsiDO& a, const PsiDO& b, int depth);  // [Ra,b] + [a,Rb]

// formal adjoint (sum a_j xi^j)* = sum (-xi)^j o a_j^T
PsiDO adjoint_psido(const PsiDO& a, int depth);

// coefficient of xi^{-1}; unavailable when the truncation hides it
PolyMat residue(const PsiDO& a);

struct TraceDensity {
    DiffPoly density;  // considered modulo im(d/dx)
};

TraceDensity trace_density(const PsiDO& a);
bool trace_equal(const TraceDensity& a, const TraceDensity& b);

PsiDO power(const PsiDO& a, int n, int depth);

// m-th root of a monic scalar operator of order divisible by m, computed by
// undetermined coefficients; power(root(a,m,depth), m, depth) == a through
// order -depth
PsiDO root(const PsiDO& a, int m, int depth);

// [split_plus(generator), l], the hierarchy right-hand side (10.12)
PsiDO lax_rhs(const PsiDO& l, const PsiDO& generator, int depth);

// throws "truncation_insufficient" unless p is exact
void require_differential(const PsiDO& p);

// rank-one integral term with entries f_i o xi^{-1} o g_j, normal ordered
PsiDO rank_one(const std::vector<DiffPoly>& f, const std::vector<DiffPoly>& g, int depth);

// l-tilde + f xi^{-1} (x) f*
PsiDO backlund_extend(const PsiDO& ltil, const std::vector<DiffPoly>& f,
                      const std::vector<DiffPoly>& fs, int depth);

// apply the differential part of P to a vector of densities
std::vector<DiffPoly> apply_plus(const PsiDO& P, const std::vector<DiffPoly>& v);

struct SourceTriple {
    PsiDO ltil;
    std::vector<DiffPoly> f, fs;
};

struct SourceFlow {
    PsiDO dl;
    std::vector<DiffPoly> df, dfs;
};

// dl/dtau_n = [(l^n)_+, l], df = (l^n)_+ f, df* = -((l*)^n)_+ f*
SourceFlow source_flow(const SourceTriple& t, int n, int depth);

struct GradientTriple {
    PsiDO dl;                       // delta gamma / delta l
    std::vector<DiffPoly> df, dfs;  // delta gamma / delta f, delta gamma / delta f*
};

// The Poisson tensor applied to a gradient, components as displayed after
// Theorem 1 of the source-extension construction; flows are -Theta grad.
SourceFlow theta_apply(const GradientTriple& grad, const SourceTriple& state, int depth);

// equality of stored coefficients on orders both sides trust
bool equal_trusted(const PsiDO& a, const PsiDO& b);

}  // namespace lagrax
