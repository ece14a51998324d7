#include "lagrax/diffop.hpp"

#include <algorithm>

namespace lagrax {

namespace {

long binomial(int n, int k) {
    long r = 1;
    for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
    return r;
}

}  // namespace

void DiffOperator::add_term(size_t r, size_t c, int order, const DiffPoly& coeff) {
    if (order < 0) fail("internal", "DiffOperator: negative order");
    DiffPoly& slot = at(r, c)[order];
    slot += coeff;
    if (slot.is_zero()) at(r, c).erase(order);
}

int DiffOperator::order() const {
    int m = 0;
    for (const Entry& en : e_)
        if (!en.empty()) m = std::max(m, en.rbegin()->first);
    return m;
}

std::vector<DiffPoly> DiffOperator::apply(const std::vector<DiffPoly>& v) const {
    if (v.size() != cols_) fail("shape_mismatch", "DiffOperator::apply: size mismatch");
    std::vector<DiffPoly> out(rows_);
    for (size_t r = 0; r < rows_; ++r)
        for (size_t c = 0; c < cols_; ++c)
            for (const auto& [k, coeff] : at(r, c))
                out[r] += coeff * total_derivative(v[c], var_, k);
    return out;
}

DiffOperator DiffOperator::operator+(const DiffOperator& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_)
        fail("shape_mismatch", "DiffOperator: addition shape mismatch");
    DiffOperator r(*this);
    for (size_t i = 0; i < e_.size(); ++i)
        for (const auto& [k, c] : o.e_[i]) {
            r.e_[i][k] += c;
            if (r.e_[i][k].is_zero()) r.e_[i].erase(k);
        }
    return r;
}

DiffOperator DiffOperator::operator-() const {
    DiffOperator r(*this);
    for (Entry& en : r.e_)
        for (auto& [k, c] : en) c = -c;
    return r;
}

DiffOperator DiffOperator::compose(const DiffOperator& o) const {
    if (cols_ != o.rows_) fail("shape_mismatch", "DiffOperator: composition shape mismatch");
    DiffOperator r(rows_, o.cols_, var_);
    // (c D^a) o (d D^b) = sum_m C(a,m) c d^(m) D^(a-m+b)
    for (size_t i = 0; i < rows_; ++i)
        for (size_t j = 0; j < o.cols_; ++j)
            for (size_t k = 0; k < cols_; ++k)
                for (const auto& [a, c] : at(i, k))
                    for (const auto& [b, d] : o.at(k, j))
                        for (int m = 0; m <= a; ++m)
                            r.add_term(i, j, a - m + b,
                                       Coeff(rat(binomial(a, m))) * c *
                                           total_derivative(d, var_, m));
    return r;
}

DiffOperator DiffOperator::adjoint() const {
    DiffOperator r(cols_, rows_, var_);
    // (-1)^k D^k o c, transposed: push D^k through c by Leibniz
    for (size_t i = 0; i < rows_; ++i)
        for (size_t j = 0; j < cols_; ++j)
            for (const auto& [k, c] : at(i, j)) {
                Coeff sign((k % 2 == 0) ? 1 : -1);
                for (int m = 0; m <= k; ++m)
                    r.add_term(j, i, k - m,
                               sign * Coeff(rat(binomial(k, m))) *
                                   total_derivative(c, var_, m));
            }
    return r;
}

bool DiffOperator::operator==(const DiffOperator& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && var_ == o.var_ && e_ == o.e_;
}

DiffOperator frechet(const std::vector<DiffPoly>& K, int var) {
    size_t m = K.size();
    DiffOperator r(m, m, var);
    for (size_t i = 0; i < m; ++i) {
        if (!single_variable(K[i], var))
            fail("multi_variable", "frechet requires a single independent variable");
        for (size_t j = 0; j < m; ++j) {
            int n = max_order_of_field(K[i], static_cast<uint16_t>(j), var);
            for (int k = 0; k <= n; ++k) {
                DiffPoly d = K[i].derivative(jet_key1(static_cast<uint16_t>(j), k, var));
                if (!d.is_zero()) r.add_term(i, j, k, d);
            }
        }
    }
    return r;
}

DiffPoly concomitant(const DiffOperator& A, const std::vector<DiffPoly>& a,
                     const std::vector<DiffPoly>& b) {
    DiffPoly lhs = dot(A.adjoint().apply(a), b) - dot(a, A.apply(b));
    return antiderivative(lhs, A.var());
}

}  // namespace lagrax
