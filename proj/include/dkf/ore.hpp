#pragma once

#include <algorithm>
#include <concepts>
#include <cstddef>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "poly_a.hpp"

namespace dkf {

// A coefficient field carrying its own q-power Frobenius.
template <class C>
concept TwistField = requires(const C& a, const C& b) {
    { a + b } -> std::convertible_to<C>;
    { a - b } -> std::convertible_to<C>;
    { a * b } -> std::convertible_to<C>;
    { a.frob() } -> std::convertible_to<C>;
    { a.is_zero() } -> std::convertible_to<bool>;
    { a.zero_like() } -> std::convertible_to<C>;
};

// Twisted polynomial sum_i c_i tau^i with tau * c = c^q * tau.
template <TwistField C>
class OrePoly {
public:
    OrePoly() = default;
    explicit OrePoly(C zero) : zero_(std::move(zero)) {}
    OrePoly(C zero, std::vector<C> coeffs) : zero_(std::move(zero)), c_(std::move(coeffs)) { trim(); }

    static OrePoly scalar(const C& c) { return OrePoly(c.zero_like(), {c}); }
    static OrePoly tau_power(const C& one, std::size_t k) {
        std::vector<C> v(k + 1, one.zero_like());
        v[k] = one;
        return OrePoly(one.zero_like(), std::move(v));
    }

    const std::vector<C>& coeffs() const noexcept { return c_; }
    const C& zero() const noexcept { return zero_; }
    bool is_zero() const noexcept { return c_.empty(); }
    Degree degree() const noexcept {
        return c_.empty() ? Degree::neg_infinity() : Degree(static_cast<std::int64_t>(c_.size()) - 1);
    }
    const C& coeff(std::size_t i) const noexcept { return i < c_.size() ? c_[i] : zero_; }
    const C& leading() const noexcept { return c_.empty() ? zero_ : c_.back(); }

    friend OrePoly operator+(const OrePoly& a, const OrePoly& b) { return a.combine(b, false); }
    friend OrePoly operator-(const OrePoly& a, const OrePoly& b) { return a.combine(b, true); }

    // Product truncated to tau-degree <= max_degree.
    static OrePoly mul_truncated(const OrePoly& f, const OrePoly& g, std::size_t max_degree) {
        const C& z = f.zero_;
        if constexpr (requires { { f.zero_.field() } -> std::convertible_to<FieldPtr>; }) {
            if (!same_field(f.zero_.field(), g.zero_.field())) throw InputError("Ore product of polynomials over different coefficient fields");
        }
        if (f.is_zero() || g.is_zero()) return OrePoly(z);
        std::size_t n = std::min(f.c_.size() + g.c_.size() - 1, max_degree + 1);
        std::vector<C> out(n, z);
        // twisted[j] holds g_j^{q^i} for the current i.
        std::vector<C> twisted(g.c_.begin(), g.c_.begin() + static_cast<std::ptrdiff_t>(std::min(g.c_.size(), n)));
        for (std::size_t i = 0; i < f.c_.size() && i < n; ++i) {
            if (i > 0) {
                twisted.resize(std::min(twisted.size(), n - i));
                for (auto& x : twisted) x = x.frob();
            }
            if (f.c_[i].is_zero()) continue;
            for (std::size_t j = 0; j < twisted.size() && i + j < n; ++j) {
                if (twisted[j].is_zero()) continue;
                out[i + j] = out[i + j] + f.c_[i] * twisted[j];
            }
        }
        return OrePoly(z, std::move(out));
    }

    friend OrePoly operator*(const OrePoly& f, const OrePoly& g) {
        return mul_truncated(f, g, std::numeric_limits<std::size_t>::max() / 2);
    }

    OrePoly scaled_left(const C& s) const {
        std::vector<C> v;
        v.reserve(c_.size());
        for (const auto& x : c_) v.push_back(s * x);
        return OrePoly(zero_, std::move(v));
    }

    OrePoly truncated(std::size_t max_degree) const {
        if (c_.size() <= max_degree + 1) return *this;
        return OrePoly(zero_, std::vector<C>(c_.begin(), c_.begin() + static_cast<std::ptrdiff_t>(max_degree + 1)));
    }

    friend bool operator==(const OrePoly& a, const OrePoly& b) { return a.c_ == b.c_; }

    std::string to_string() const {
        if (c_.empty()) return "0";
        std::string out;
        for (std::size_t i = 0; i < c_.size(); ++i) {
            if (c_[i].is_zero()) continue;
            std::string c = c_[i].to_string();
            if (i > 0 && c.find_first_of("+-/") != std::string::npos) c = "(" + c + ")";
            std::string term;
            if (i == 0) term = c;
            else {
                std::string mono = i == 1 ? "tau" : "tau^" + std::to_string(i);
                term = c == "1" ? mono : c + "*" + mono;
            }
            if (!out.empty()) out += " + ";
            out += term;
        }
        return out;
    }

private:
    OrePoly combine(const OrePoly& b, bool subtract) const {
        std::vector<C> v(std::max(c_.size(), b.c_.size()), zero_);
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i < c_.size()) v[i] = c_[i];
            if (i < b.c_.size()) v[i] = subtract ? v[i] - b.c_[i] : v[i] + b.c_[i];
        }
        return OrePoly(zero_, std::move(v));
    }

    void trim() {
        while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
    }

    C zero_;
    std::vector<C> c_;
};

template <TwistField C>
OrePoly<C> ore_mul(const OrePoly<C>& f, const OrePoly<C>& g) { return f * g; }

} // namespace dkf
