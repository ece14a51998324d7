#pragma once

#include <map>
#include <vector>

#include "lagrax/jet.hpp"

namespace lagrax {

// Matrix differential operator sum_k c_k(.) D^k in one independent variable,
// entries stored as order -> DiffPoly coefficient.
class DiffOperator {
public:
    using Entry = std::map<int, DiffPoly>;

    DiffOperator(size_t rows, size_t cols, int var = 0)
        : rows_(rows), cols_(cols), var_(var), e_(rows * cols) {}

    static DiffOperator zero(size_t rows, size_t cols, int var = 0) {
        return DiffOperator(rows, cols, var);
    }

    size_t rows() const { return rows_; }
    size_t cols() const { return cols_; }
    int var() const { return var_; }

    Entry& at(size_t r, size_t c) { return e_[r * cols_ + c]; }
    const Entry& at(size_t r, size_t c) const { return e_[r * cols_ + c]; }

    void add_term(size_t r, size_t c, int order, const DiffPoly& coeff);

    int order() const;

    std::vector<DiffPoly> apply(const std::vector<DiffPoly>& v) const;

    DiffOperator operator+(const DiffOperator& o) const;
    DiffOperator operator-() const;

    // operator composition with Leibniz normal ordering
    DiffOperator compose(const DiffOperator& o) const;

    // formal adjoint wrt (a,b) = \int <a,b> dx: (c D^k)* = (-1)^k D^k o c^T
    DiffOperator adjoint() const;

    bool operator==(const DiffOperator& o) const;

private:
    void prune();

    size_t rows_, cols_;
    int var_;
    std::vector<Entry> e_;
};

// Frechet derivative of a local functional K (one component per field):
// entry (i,j) = sum_k dK_i/du_j^(k) D^k
DiffOperator frechet(const std::vector<DiffPoly>& K, int var = 0);

// bilinear concomitant H[a,b] with d/dx H = <A* a, b> - <a, A b>
DiffPoly concomitant(const DiffOperator& A, const std::vector<DiffPoly>& a,
                     const std::vector<DiffPoly>& b);

}  // namespace lagrax
