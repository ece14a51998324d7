#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <utility>
#include <vector>

#include "lagrax/coeff.hpp"
#include "lagrax/error.hpp"

namespace lagrax {

// Power product of generators.  Factors are sorted by key and carry positive
// exponents; the empty monomial is the unit.
template <class Key>
class Monomial {
public:
    using Factor = std::pair<Key, int>;

    Monomial() = default;
    explicit Monomial(Key k, int exp = 1) {
        if (exp != 0) factors_.emplace_back(std::move(k), exp);
    }

    static Monomial unit() { return Monomial(); }

    const std::vector<Factor>& factors() const { return factors_; }
    bool is_unit() const { return factors_.empty(); }

    int total_degree() const {
        int d = 0;
        for (const auto& [k, e] : factors_) d += e;
        return d;
    }

    int exponent_of(const Key& k) const {
        for (const auto& [key, e] : factors_)
            if (key == k) return e;
        return 0;
    }

    Monomial times(const Monomial& o) const {
        Monomial r;
        r.factors_.reserve(factors_.size() + o.factors_.size());
        auto a = factors_.begin(), b = o.factors_.begin();
        while (a != factors_.end() && b != o.factors_.end()) {
            if (a->first < b->first)
                r.factors_.push_back(*a++);
            else if (b->first < a->first)
                r.factors_.push_back(*b++);
            else {
                r.factors_.emplace_back(a->first, a->second + b->second);
                ++a;
                ++b;
            }
        }
        r.factors_.insert(r.factors_.end(), a, factors_.end());
        r.factors_.insert(r.factors_.end(), b, o.factors_.end());
        return r;
    }

    // monomial with the exponent of k lowered by one (k must divide)
    Monomial divide_once(const Key& k) const {
        Monomial r;
        bool found = false;
        for (const auto& [key, e] : factors_) {
            if (key == k) {
                found = true;
                if (e > 1) r.factors_.emplace_back(key, e - 1);
            } else {
                r.factors_.emplace_back(key, e);
            }
        }
        if (!found) fail("internal", "divide_once: key absent from monomial");
        return r;
    }

    // graded order: total degree first, then lexicographic on factors
    friend std::strong_ordering operator<=>(const Monomial& a, const Monomial& b) {
        if (auto c = a.total_degree() <=> b.total_degree(); c != 0) return c;
        size_t n = std::min(a.factors_.size(), b.factors_.size());
        for (size_t i = 0; i < n; ++i) {
            if (auto c = a.factors_[i].first <=> b.factors_[i].first; c != 0) return c;
            if (auto c = a.factors_[i].second <=> b.factors_[i].second; c != 0) return c;
        }
        return a.factors_.size() <=> b.factors_.size();
    }
    friend bool operator==(const Monomial& a, const Monomial& b) {
        return a.factors_ == b.factors_;
    }

private:
    std::vector<Factor> factors_;
};

// Sparse polynomial with exact coefficients over an ordered generator set.
// Terms are kept sorted by monomial and never store a zero coefficient, so
// structural equality is mathematical equality.
template <class Key>
class Poly {
public:
    using Mono = Monomial<Key>;
    using Term = std::pair<Mono, Coeff>;

    Poly() = default;
    Poly(const Coeff& c) {  // NOLINT(google-explicit-constructor)
        if (!c.is_zero()) terms_.emplace_back(Mono::unit(), c);
    }
    Poly(long n) : Poly(Coeff(n)) {}  // NOLINT(google-explicit-constructor)

    static Poly generator(Key k) { return Poly(Mono(std::move(k)), Coeff(1)); }
    Poly(Mono m, Coeff c) {
        if (!c.is_zero()) terms_.emplace_back(std::move(m), std::move(c));
    }

    const std::vector<Term>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    size_t size() const { return terms_.size(); }

    bool is_constant() const {
        return terms_.empty() || (terms_.size() == 1 && terms_[0].first.is_unit());
    }
    Coeff constant_term() const {
        for (const auto& [m, c] : terms_)
            if (m.is_unit()) return c;
        return Coeff(0);
    }

    int total_degree() const {
        int d = 0;
        for (const auto& [m, c] : terms_) d = std::max(d, m.total_degree());
        return d;
    }

    int degree_in(const Key& k) const {
        int d = 0;
        for (const auto& [m, c] : terms_) d = std::max(d, m.exponent_of(k));
        return d;
    }

    Coeff coefficient(const Mono& m) const {
        auto it = std::lower_bound(terms_.begin(), terms_.end(), m,
                                   [](const Term& t, const Mono& mm) { return t.first < mm; });
        if (it != terms_.end() && it->first == m) return it->second;
        return Coeff(0);
    }

    // every generator occurring, without repetition
    std::vector<Key> support() const {
        std::vector<Key> keys;
        for (const auto& [m, c] : terms_)
            for (const auto& [k, e] : m.factors()) keys.push_back(k);
        std::sort(keys.begin(), keys.end());
        keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
        return keys;
    }

    bool depends_on(const Key& k) const {
        for (const auto& [m, c] : terms_)
            if (m.exponent_of(k) > 0) return true;
        return false;
    }

    Poly operator-() const {
        Poly r(*this);
        for (auto& [m, c] : r.terms_) c = -c;
        return r;
    }

    friend Poly operator+(const Poly& a, const Poly& b) {
        Poly r;
        r.terms_.reserve(a.terms_.size() + b.terms_.size());
        auto i = a.terms_.begin(), j = b.terms_.begin();
        while (i != a.terms_.end() && j != b.terms_.end()) {
            if (i->first < j->first)
                r.terms_.push_back(*i++);
            else if (j->first < i->first)
                r.terms_.push_back(*j++);
            else {
                Coeff c = i->second + j->second;
                if (!c.is_zero()) r.terms_.emplace_back(i->first, std::move(c));
                ++i;
                ++j;
            }
        }
        r.terms_.insert(r.terms_.end(), i, a.terms_.end());
        r.terms_.insert(r.terms_.end(), j, b.terms_.end());
        return r;
    }
    friend Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }

    friend Poly operator*(const Poly& a, const Poly& b) {
        std::map<Mono, Coeff> acc;
        for (const auto& [ma, ca] : a.terms_)
            for (const auto& [mb, cb] : b.terms_) {
                Coeff c = ca * cb;
                if (c.is_zero()) continue;
                auto [it, fresh] = acc.emplace(ma.times(mb), c);
                if (!fresh) it->second += c;
            }
        return from_map(acc);
    }

    Poly& operator+=(const Poly& o) { return *this = *this + o; }
    Poly& operator-=(const Poly& o) { return *this = *this - o; }
    Poly& operator*=(const Poly& o) { return *this = *this * o; }

    friend Poly operator*(const Coeff& c, const Poly& p) {
        if (c.is_zero()) return Poly();
        Poly r(p);
        for (auto& [m, cc] : r.terms_) cc *= c;
        return r;
    }

    Poly pow(int n) const {
        if (n < 0) fail("internal", "Poly::pow: negative exponent");
        Poly r(1);
        Poly base(*this);
        while (n > 0) {
            if (n & 1) r *= base;
            base = (n >>= 1) ? base * base : base;
        }
        return r;
    }

    friend bool operator==(const Poly& a, const Poly& b) { return a.terms_ == b.terms_; }
    friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }
    // lexicographic on the canonical term list; a deterministic total order
    friend bool operator<(const Poly& a, const Poly& b) {
        size_t n = std::min(a.terms_.size(), b.terms_.size());
        for (size_t i = 0; i < n; ++i) {
            if (a.terms_[i].first != b.terms_[i].first)
                return a.terms_[i].first < b.terms_[i].first;
            if (a.terms_[i].second != b.terms_[i].second)
                return a.terms_[i].second < b.terms_[i].second;
        }
        return a.terms_.size() < b.terms_.size();
    }

    // d/d(generator k), treating all other generators as independent
    Poly derivative(const Key& k) const {
        std::map<Mono, Coeff> acc;
        for (const auto& [m, c] : terms_) {
            int e = m.exponent_of(k);
            if (e == 0) continue;
            Coeff nc = Coeff(Rational(e)) * c;
            auto [it, fresh] = acc.emplace(m.divide_once(k), nc);
            if (!fresh) it->second += nc;
        }
        return from_map(acc);
    }

    // substitute each occurrence of generator k by the polynomial image(k);
    // generators without an image are kept
    Poly substitute(const std::function<const Poly*(const Key&)>& image) const {
        Poly result;
        for (const auto& [m, c] : terms_) {
            Poly term(c);
            Mono untouched;
            for (const auto& [k, e] : m.factors()) {
                if (const Poly* img = image(k)) {
                    term *= img->pow(e);
                } else {
                    untouched = untouched.times(Mono(k, e));
                }
            }
            result += Poly(std::move(untouched), Coeff(1)) * term;
        }
        return result;
    }

    // numeric evaluation; every generator must have a value
    double evaluate(const std::function<double(const Key&)>& value) const {
        double s = 0;
        for (const auto& [m, c] : terms_) {
            double t = c.to_double();
            for (const auto& [k, e] : m.factors()) {
                double v = value(k);
                for (int i = 0; i < e; ++i) t *= v;
            }
            s += t;
        }
        return s;
    }

private:
    static Poly from_map(const std::map<Mono, Coeff>& acc) {
        Poly r;
        r.terms_.reserve(acc.size());
        for (const auto& [m, c] : acc)
            if (!c.is_zero()) r.terms_.emplace_back(m, c);
        return r;
    }

    std::vector<Term> terms_;  // sorted by monomial, no zero coefficients
};

}  // namespace lagrax
