#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "base_algebra.hpp"
#include "errors.hpp"

namespace dkf {

// Dense polynomials in X over F = F_q(t), lowest degree first.
class UPoly {
public:
    UPoly() = default;
    explicit UPoly(FieldPtr F) : F_(std::move(F)) {}
    UPoly(FieldPtr F, std::vector<RationalFn> c) : F_(std::move(F)), c_(std::move(c)) { trim(); }

    static UPoly x(const FieldPtr& F) { return UPoly(F, {RationalFn::constant(F, 0), RationalFn::constant(F, 1)}); }
    static UPoly constant(const FieldPtr& F, RationalFn c) { return UPoly(F, {std::move(c)}); }
    // sum_i c_i X^{q^i}
    static UPoly additive(const FieldPtr& F, const std::vector<RationalFn>& coeffs) {
        std::vector<RationalFn> c;
        std::size_t e = 1;
        for (std::size_t i = 0; i < coeffs.size(); ++i, e *= F->order()) {
            if (c.size() <= e) c.resize(e + 1, RationalFn::constant(F, 0));
            c[e] = coeffs[i];
        }
        return UPoly(F, std::move(c));
    }

    const FieldPtr& field() const noexcept { return F_; }
    const std::vector<RationalFn>& coeffs() const noexcept { return c_; }
    bool is_zero() const noexcept { return c_.empty(); }
    Degree degree() const noexcept { return c_.empty() ? Degree::neg_infinity() : Degree(static_cast<std::int64_t>(c_.size()) - 1); }
    RationalFn coeff(std::size_t i) const { return i < c_.size() ? c_[i] : RationalFn::constant(F_, 0); }
    const RationalFn& leading() const {
        if (c_.empty()) throw DomainError("leading coefficient of zero");
        return c_.back();
    }
    bool is_monic() const { return !c_.empty() && c_.back() == RationalFn::constant(F_, 1); }

    friend UPoly operator+(const UPoly& a, const UPoly& b) { return a.combine(b, false); }
    friend UPoly operator-(const UPoly& a, const UPoly& b) { return a.combine(b, true); }
    friend UPoly operator*(const UPoly& a, const UPoly& b) {
        if (a.is_zero() || b.is_zero()) return UPoly(a.F_ ? a.F_ : b.F_);
        std::vector<RationalFn> out(a.c_.size() + b.c_.size() - 1, RationalFn::constant(a.F_, 0));
        for (std::size_t i = 0; i < a.c_.size(); ++i) {
            if (a.c_[i].is_zero()) continue;
            for (std::size_t j = 0; j < b.c_.size(); ++j)
                if (!b.c_[j].is_zero()) out[i + j] = out[i + j] + a.c_[i] * b.c_[j];
        }
        return UPoly(a.F_, std::move(out));
    }
    UPoly scaled(const RationalFn& s) const {
        std::vector<RationalFn> out;
        for (const auto& c : c_) out.push_back(c * s);
        return UPoly(F_, std::move(out));
    }

    std::pair<UPoly, UPoly> divmod(const UPoly& d) const {
        if (d.is_zero()) throw DomainError("polynomial division by zero");
        std::vector<RationalFn> r = c_;
        const std::size_t n = d.c_.size();
        if (r.size() < n) return {UPoly(F_), *this};
        std::vector<RationalFn> quo(r.size() - n + 1, RationalFn::constant(F_, 0));
        const RationalFn inv = d.c_.back().inverse();
        for (std::size_t top = r.size(); top >= n; --top) {
            const std::size_t k = top - 1;
            if (r[k].is_zero()) continue;
            RationalFn f = r[k] * inv;
            quo[k - n + 1] = f;
            for (std::size_t j = 0; j < n; ++j) r[k - n + 1 + j] = r[k - n + 1 + j] - f * d.c_[j];
        }
        r.resize(n - 1);
        return {UPoly(F_, std::move(quo)), UPoly(F_, std::move(r))};
    }
    friend UPoly operator%(const UPoly& a, const UPoly& d) { return a.divmod(d).second; }

    UPoly derivative() const {
        std::vector<RationalFn> out;
        for (std::size_t i = 1; i < c_.size(); ++i)
            out.push_back(c_[i] * RationalFn::constant(F_, F_->from_int(static_cast<std::int64_t>(i % F_->characteristic()))));
        return UPoly(F_, std::move(out));
    }

    // f(g) mod h by Horner's rule.
    UPoly compose_mod(const UPoly& g, const UPoly& h) const {
        UPoly acc(F_);
        for (std::size_t i = c_.size(); i-- > 0;) acc = (acc * g + UPoly::constant(F_, c_[i])) % h;
        return acc;
    }

    friend bool operator==(const UPoly& a, const UPoly& b) { return a.c_ == b.c_; }

    std::string to_string(const std::string& var = "X") const {
        if (c_.empty()) return "0";
        std::string out;
        for (std::size_t i = c_.size(); i-- > 0;) {
            if (c_[i].is_zero()) continue;
            if (!out.empty()) out += " + ";
            const bool one = c_[i] == RationalFn::constant(F_, 1);
            const std::string cs = c_[i].is_polynomial() && c_[i].num().coeffs().size() <= 1 ? c_[i].to_string() : "(" + c_[i].to_string() + ")";
            if (i == 0) out += c_[i].to_string();
            else out += (one ? "" : cs + "*") + var + (i > 1 ? "^" + std::to_string(i) : "");
        }
        return out;
    }

private:
    UPoly combine(const UPoly& b, bool subtract) const {
        const FieldPtr& F = F_ ? F_ : b.F_;
        std::vector<RationalFn> out(std::max(c_.size(), b.c_.size()), RationalFn::constant(F, 0));
        for (std::size_t i = 0; i < c_.size(); ++i) out[i] = c_[i];
        for (std::size_t i = 0; i < b.c_.size(); ++i) out[i] = subtract ? out[i] - b.c_[i] : out[i] + b.c_[i];
        return UPoly(F, std::move(out));
    }
    void trim() {
        while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
    }

    FieldPtr F_;
    std::vector<RationalFn> c_;
};

// Res_X(a, b) by the Euclidean recursion.
inline RationalFn resultant(UPoly a, UPoly b) {
    const FieldPtr F = a.field();
    if (a.is_zero() || b.is_zero()) return RationalFn::constant(F, 0);
    RationalFn acc = RationalFn::constant(F, 1);
    const RationalFn minus_one = RationalFn::constant(F, F->neg(1));
    while (true) {
        const std::int64_t m = a.degree().value(), n = b.degree().value();
        if (n == 0) return acc * b.leading().pow(m);
        if (m == 0) return acc * a.leading().pow(n);
        // Res(a,b) = (-1)^{mn} Res(b,a) = (-1)^{mn} lc(b)^{m-k} Res(b, a mod b)
        UPoly r = a % b;
        if (r.is_zero()) return RationalFn::constant(F, 0);
        const std::int64_t k = r.degree().value();
        if ((m * n) % 2 == 1) acc = acc * minus_one;
        acc = acc * b.leading().pow(m - k);
        a = std::move(b);
        b = std::move(r);
    }
}

} // namespace dkf
