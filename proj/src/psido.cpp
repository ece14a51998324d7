#include "lagrax/psido.hpp"

#include <algorithm>

namespace lagrax {

PolyMat PolyMat::operator+(const PolyMat& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) fail("shape_mismatch", "PolyMat: addition shape");
    PolyMat r(*this);
    for (size_t i = 0; i < a_.size(); ++i) r.a_[i] += o.a_[i];
    return r;
}

PolyMat PolyMat::operator-(const PolyMat& o) const { return *this + (-o); }

PolyMat PolyMat::operator*(const PolyMat& o) const {
    if (cols_ != o.rows_) fail("shape_mismatch", "PolyMat: product shape");
    PolyMat r(rows_, o.cols_);
    for (size_t i = 0; i < rows_; ++i)
        for (size_t k = 0; k < cols_; ++k) {
            if (at(i, k).is_zero()) continue;
            for (size_t j = 0; j < o.cols_; ++j) r.at(i, j) += at(i, k) * o.at(k, j);
        }
    return r;
}

PolyMat PolyMat::operator-() const {
    PolyMat r(*this);
    for (auto& p : r.a_) p = -p;
    return r;
}

PolyMat PolyMat::scaled(const Coeff& c) const {
    PolyMat r(*this);
    for (auto& p : r.a_) p = c * p;
    return r;
}

PolyMat PolyMat::transpose() const {
    PolyMat r(cols_, rows_);
    for (size_t i = 0; i < rows_; ++i)
        for (size_t j = 0; j < cols_; ++j) r.at(j, i) = at(i, j);
    return r;
}

PolyMat PolyMat::dx(int times, int var) const {
    PolyMat r(*this);
    for (auto& p : r.a_) p = total_derivative(p, var, times);
    return r;
}

DiffPoly PolyMat::trace() const {
    if (rows_ != cols_) fail("shape_mismatch", "PolyMat: trace of non-square matrix");
    DiffPoly t;
    for (size_t i = 0; i < rows_; ++i) t += at(i, i);
    return t;
}

const PolyMat& PsiDO::coeff(int order) const {
    auto it = c_.find(order);
    if (it != c_.end()) return it->second;
    fail("internal", "PsiDO::coeff: absent order requested");
}

void PsiDO::set_coeff(int order, PolyMat m) {
    if (m.rows() != dim_ || m.cols() != dim_)
        fail("shape_mismatch", "PsiDO: coefficient dimension mismatch");
    if (m.is_zero())
        c_.erase(order);
    else
        c_[order] = std::move(m);
}

void PsiDO::add_coeff(int order, const PolyMat& m) {
    auto it = c_.find(order);
    if (it == c_.end()) {
        if (!m.is_zero()) c_.emplace(order, m);
    } else {
        it->second = it->second + m;
        if (it->second.is_zero()) c_.erase(it);
    }
}

int PsiDO::top() const { return c_.empty() ? kExactTail : c_.rbegin()->first; }
int PsiDO::lowest() const { return c_.empty() ? 0 : c_.begin()->first; }

PsiDO PsiDO::truncated(int tail) const {
    PsiDO r(dim_, std::max(tail, tail_ == kExactTail ? tail : tail_));
    for (const auto& [k, m] : c_)
        if (k >= tail) r.c_.emplace(k, m);
    return r;
}

PsiDO psido_term(int order, PolyMat m) {
    PsiDO r(m.rows());
    r.set_coeff(order, std::move(m));
    return r;
}

PsiDO psido_scalar_term(int order, const DiffPoly& p) {
    PolyMat m(1, 1);
    m.at(0, 0) = p;
    return psido_term(order, std::move(m));
}

PsiDO add(const PsiDO& a, const PsiDO& b) {
    if (a.dim() != b.dim()) fail("shape_mismatch", "PsiDO: dimension mismatch");
    PsiDO r(a.dim(), std::max(a.tail(), b.tail()));
    for (const auto& [k, m] : a.coeffs())
        if (k >= r.tail()) r.add_coeff(k, m);
    for (const auto& [k, m] : b.coeffs())
        if (k >= r.tail()) r.add_coeff(k, m);
    return r;
}

PsiDO negate(const PsiDO& a) { return scale(Coeff(-1), a); }

PsiDO scale(const Coeff& c, const PsiDO& a) {
    PsiDO r(a.dim(), a.tail());
    if (c.is_zero()) return PsiDO(a.dim());  // exactly zero
    for (const auto& [k, m] : a.coeffs()) r.set_coeff(k, m.scaled(c));
    return r;
}

namespace {

Coeff binom_gen(int j, int alpha) {
    Rational r(1);
    for (int i = 0; i < alpha; ++i) r *= Rational(j - i, i + 1);
    r.canonicalize();
    return Coeff(r);
}

}  // namespace

PsiDO compose(const PsiDO& a, const PsiDO& b, int depth) {
    if (a.dim() != b.dim()) fail("shape_mismatch", "PsiDO: dimension mismatch");
    if (depth < 0) fail("bad_argument", "compose: depth must be nonnegative");
    if (a.is_zero() || b.is_zero()) return PsiDO(a.dim());

    bool differential = a.exact() && b.exact() && a.lowest() >= 0 && b.lowest() >= 0;
    int tail;
    if (differential) {
        tail = kExactTail;
    } else {
        tail = -depth;
        if (!a.exact()) tail = std::max(tail, a.tail() + std::max(b.top(), 0));
        if (!b.exact()) tail = std::max(tail, b.tail() + std::max(a.top(), 0));
    }

    PsiDO r(a.dim(), tail);
    for (const auto& [j, Aj] : a.coeffs())
        for (const auto& [k, Bk] : b.coeffs()) {
            int alpha_max = (j >= 0) ? j : (tail == kExactTail ? 0 : j + k - tail);
            for (int alpha = 0; alpha <= alpha_max; ++alpha) {
                int order = j + k - alpha;
                if (tail != kExactTail && order < tail) break;
                Coeff c = binom_gen(j, alpha);
                if (c.is_zero()) continue;
                r.add_coeff(order, (Aj * Bk.dx(alpha)).scaled(c));
            }
        }
    return r;
}

PsiDO commutator(const PsiDO& a, const PsiDO& b, int depth) {
    return add(compose(a, b, depth), negate(compose(b, a, depth)));
}

PsiDO split_plus(const PsiDO& a) {
    if (!a.exact() && a.tail() > 0)
        fail("depth_insufficient", "split_plus: differential part not fully trusted");
    PsiDO r(a.dim());  // exact
    for (const auto& [k, m] : a.coeffs())
        if (k >= 0) r.set_coeff(k, m);
    return r;
}

PsiDO split_minus(const PsiDO& a) {
    PsiDO r(a.dim(), a.tail());
    for (const auto& [k, m] : a.coeffs())
        if (k < 0) r.set_coeff(k, m);
    return r;
}

PsiDO r_map(const PsiDO& a) {
    Coeff half = Coeff::fraction(1, 2);
    PsiDO r = add(scale(half, split_plus(a)), scale(-half, split_minus(a)));
    r.set_tail(a.tail());
    return r;
}

PsiDO r_bracket(const PsiDO& a, const PsiDO& b, int depth) {
    return add(commutator(r_map(a), b, depth), commutator(a, r_map(b), depth));
}

PsiDO adjoint_psido(const PsiDO& a, int depth) {
    bool differential = a.exact() && a.lowest() >= 0;
    int tail = differential ? kExactTail : std::max(-depth, a.exact() ? -depth : a.tail());
    PsiDO r(a.dim(), tail);
    for (const auto& [j, Aj] : a.coeffs()) {
        Coeff sign((j % 2 == 0) ? 1 : -1);
        PolyMat T = Aj.transpose();
        int alpha_max = (j >= 0) ? j : (tail == kExactTail ? 0 : j - tail);
        for (int alpha = 0; alpha <= alpha_max; ++alpha) {
            int order = j - alpha;
            if (tail != kExactTail && order < tail) break;
            Coeff c = sign * binom_gen(j, alpha);
            if (c.is_zero()) continue;
            r.add_coeff(order, T.dx(alpha).scaled(c));
        }
    }
    return r;
}

PolyMat residue(const PsiDO& a) {
    if (!a.exact() && a.tail() > -1)
        fail("depth_insufficient", "residue unavailable: xi^{-1} coefficient not trusted");
    if (a.has(-1)) return a.coeff(-1);
    return PolyMat(a.dim(), a.dim());
}

TraceDensity trace_density(const PsiDO& a) { return TraceDensity{residue(a).trace()}; }

bool trace_equal(const TraceDensity& a, const TraceDensity& b) {
    return is_exact(a.density - b.density, 0);
}

PsiDO power(const PsiDO& a, int n, int depth) {
    if (n < 0) fail("bad_argument", "power: exponent must be nonnegative");
    PsiDO r = psido_term(0, PolyMat::identity(a.dim()));
    if (n == 0) return r;
    int growth = std::max(a.top(), 0);
    r = a;
    for (int i = 2; i <= n; ++i) r = compose(r, a, depth + (n - i) * growth);
    return r;
}

PsiDO root(const PsiDO& a, int m, int depth) {
    if (m < 1) fail("bad_argument", "root: index must be positive");
    if (a.dim() != 1) fail("unsupported", "root: only scalar operators are supported");
    if (a.is_zero() || a.top() % m != 0)
        fail("unsupported", "root: leading order not divisible by the root index");
    if (!(a.coeff(a.top()).at(0, 0) == DiffPoly(1)))
        fail("unsupported", "root: operator must be monic");
    if (!a.exact() && a.tail() > -depth)
        fail("depth_insufficient", "root: input not trusted deep enough");

    int s = a.top() / m;
    int dp = depth + (m - 1) * s;   // internal tail so that r^m is exact to -depth
    int wd = dp + (m - 1) * std::max(s, 0) + 2;

    PsiDO r = psido_scalar_term(s, DiffPoly(1));  // ladder works on exact snapshots
    int prev = s;
    for (;;) {
        PsiDO e = add(power(r, m, wd), negate(a));
        int t = kExactTail;
        for (const auto& [k, mm] : e.coeffs())
            if (!mm.is_zero()) t = std::max(t, k);
        if (t == kExactTail) break;
        int j = t - (m - 1) * s;
        if (j < -dp) break;
        if (j >= prev) fail("internal", "root: coefficient ladder failed to descend");
        prev = j;
        r.add_coeff(j, e.coeff(t).scaled(Coeff(rat(-1, m))));
    }
    r.set_tail(-dp);

    // defining property, checked on the caller's trusted range
    PsiDO check = add(power(r, m, depth), negate(a));
    for (const auto& [k, mm] : check.coeffs())
        if (k >= -depth && !mm.is_zero())
            fail("internal", "root: defining property violated at order " + std::to_string(k));
    return r;
}

PsiDO lax_rhs(const PsiDO& l, const PsiDO& generator, int depth) {
    return commutator(split_plus(generator), l, depth);
}

void require_differential(const PsiDO& p) {
    if (p.exact()) return;
    fail("truncation_insufficient",
         "operator retains unresolved negative orders below " + std::to_string(p.tail()));
}

PsiDO rank_one(const std::vector<DiffPoly>& f, const std::vector<DiffPoly>& g, int depth) {
    if (f.size() != g.size()) fail("shape_mismatch", "rank_one: vector length mismatch");
    size_t n = f.size();
    PsiDO r(n, -depth);
    for (int k = 0; k < depth; ++k) {
        PolyMat m(n, n);
        Coeff sign((k % 2 == 0) ? 1 : -1);
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j)
                m.at(i, j) = sign * (f[i] * total_derivative(g[j], 0, k));
        r.set_coeff(-1 - k, std::move(m));
    }
    return r;
}

PsiDO backlund_extend(const PsiDO& ltil, const std::vector<DiffPoly>& f,
                      const std::vector<DiffPoly>& fs, int depth) {
    if (ltil.dim() != f.size()) fail("shape_mismatch", "backlund_extend: dimension mismatch");
    return add(ltil, rank_one(f, fs, depth));
}

std::vector<DiffPoly> apply_plus(const PsiDO& P, const std::vector<DiffPoly>& v) {
    PsiDO D = split_plus(P);
    if (v.size() != D.dim()) fail("shape_mismatch", "apply_plus: vector length mismatch");
    std::vector<DiffPoly> out(v.size());
    for (const auto& [k, m] : D.coeffs())
        for (size_t i = 0; i < v.size(); ++i)
            for (size_t j = 0; j < v.size(); ++j)
                out[i] += m.at(i, j) * total_derivative(v[j], 0, k);
    return out;
}

SourceFlow source_flow(const SourceTriple& t, int n, int depth) {
    if (n < 1) fail("bad_argument", "source_flow: n must be >= 1");
    int growth = std::max(t.ltil.top(), 1);
    int wd = depth + n * growth + 2;
    PsiDO lhat = backlund_extend(t.ltil, t.f, t.fs, wd);
    PsiDO G = split_plus(power(lhat, n, wd));
    SourceFlow out;
    out.dl = commutator(G, lhat, depth);
    out.df = apply_plus(G, t.f);
    PsiDO Ga = split_plus(power(adjoint_psido(lhat, wd), n, wd));
    out.dfs = apply_plus(Ga, t.fs);
    for (auto& p : out.dfs) p = -p;
    return out;
}

SourceFlow theta_apply(const GradientTriple& grad, const SourceTriple& state, int depth) {
    int wd = depth + std::max(grad.dl.top(), 1) + 2;
    PsiDO lhat = backlund_extend(state.ltil, state.f, state.fs, wd);
    PsiDO Aplus = split_plus(grad.dl);

    SourceFlow out;
    out.dl = add(commutator(lhat, Aplus, depth),
                 negate(split_plus(commutator(lhat, grad.dl, wd))));
    if (!grad.df.empty() && std::any_of(grad.df.begin(), grad.df.end(),
                                        [](const DiffPoly& p) { return !p.is_zero(); }))
        out.dl = add(out.dl, negate(rank_one(state.f, grad.df, depth)));
    if (!grad.dfs.empty() && std::any_of(grad.dfs.begin(), grad.dfs.end(),
                                         [](const DiffPoly& p) { return !p.is_zero(); }))
        out.dl = add(out.dl, rank_one(grad.dfs, state.fs, depth));

    std::vector<DiffPoly> Af = apply_plus(Aplus, state.f);
    std::vector<DiffPoly> Asfs = apply_plus(adjoint_psido(Aplus, wd), state.fs);
    out.df.resize(state.f.size());
    out.dfs.resize(state.fs.size());
    for (size_t i = 0; i < state.f.size(); ++i) {
        out.df[i] = (i < grad.dfs.size() ? grad.dfs[i] : DiffPoly()) - Af[i];
        out.dfs[i] = -(i < grad.df.size() ? grad.df[i] : DiffPoly()) + Asfs[i];
    }
    return out;
}

bool equal_trusted(const PsiDO& a, const PsiDO& b) {
    if (a.dim() != b.dim()) return false;
    int from = std::max(a.tail(), b.tail());
    auto coeff_or_zero = [](const PsiDO& p, int k) {
        return p.has(k) ? p.coeff(k) : PolyMat(p.dim(), p.dim());
    };
    int hi = std::max(a.top(), b.top());
    if (hi == kExactTail) return true;
    for (int k = from; k <= hi; ++k)
        if (!(coeff_or_zero(a, k) == coeff_or_zero(b, k))) return false;
    return true;
}

}  // namespace lagrax
