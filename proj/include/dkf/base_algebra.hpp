#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "finite_field.hpp"
#include "numeric.hpp"
#include "poly_a.hpp"

namespace dkf {

// Default cap on q^d for exhaustive enumeration.
inline constexpr std::uint64_t kDefaultEnumerationCap = std::uint64_t{1} << 22;

namespace detail {

inline PolyA powmod(PolyA base, std::uint64_t e, const PolyA& m) {
    PolyA result = PolyA::constant(m.field(), 1) % m;
    base = base % m;
    while (e != 0) {
        if (e & 1U) result = (result * base) % m;
        e >>= 1U;
        if (e != 0) base = (base * base) % m;
    }
    return result;
}

inline std::uint64_t checked_pow(std::uint64_t q, std::uint64_t d, std::uint64_t cap) {
    std::uint64_t r = 1;
    for (std::uint64_t i = 0; i < d; ++i) {
        if (r > cap / q) throw ResourceLimitError("q^d = " + std::to_string(q) + "^" + std::to_string(d) + " exceeds the enumeration cap " + std::to_string(cap));
        r *= q;
    }
    return r;
}

} // namespace detail

// Ben-Or test: f of degree d is irreducible iff gcd(t^{q^i} - t, f) = 1 for
// all i <= d/2.
inline bool is_irreducible(const PolyA& f) {
    if (f.degree() < Degree(1)) return false;
    const auto d = static_cast<std::uint64_t>(f.degree().value());
    if (d == 1) return true;
    const FieldPtr& F = f.field();
    const PolyA t = PolyA::t(F);
    PolyA x = t % f;
    for (std::uint64_t i = 1; i <= d / 2; ++i) {
        x = detail::powmod(x, F->order(), f);
        if (!gcd(x - t, f).is_one()) return false;
    }
    return true;
}

// Monic polynomial of degree d with code `index` among the q^d monic ones.
inline PolyA monic_from_index(const FieldPtr& F, std::uint64_t d, std::uint64_t index) {
    std::vector<FqCode> v(d + 1);
    for (std::uint64_t i = 0; i < d; ++i) {
        v[i] = static_cast<FqCode>(index % F->order());
        index /= F->order();
    }
    v[d] = 1;
    return PolyA(F, std::move(v));
}

// All monic irreducibles of degree d in increasing code order.
inline std::vector<PolyA> enumerate_irreducibles(const FieldPtr& F, std::int64_t d,
                                                 std::uint64_t cap = kDefaultEnumerationCap) {
    if (d < 1) throw DomainError("enumerate_irreducibles requires degree >= 1");
    const std::uint64_t count = detail::checked_pow(F->order(), static_cast<std::uint64_t>(d), cap);
    std::vector<PolyA> out;
    for (std::uint64_t i = 0; i < count; ++i) {
        PolyA f = monic_from_index(F, static_cast<std::uint64_t>(d), i);
        if (is_irreducible(f)) out.push_back(std::move(f));
    }
    return out;
}

// F_q for q = p^e. For e > 1 the defining polynomial is the first monic
// irreducible of degree e over F_p in code order; the generator is named "w".
inline FieldPtr make_fq(std::uint32_t p, std::uint32_t e = 1) {
    if (e < 1) throw InputError("extension degree must be >= 1");
    FieldPtr Fp = FiniteField::prime(p);
    if (e == 1) return Fp;
    std::vector<PolyA> irr = enumerate_irreducibles(Fp, e);
    return FiniteField::extension(Fp, irr.front().coeffs(), "w");
}

inline FieldPtr make_fq_with_modulus(std::uint32_t p, const std::vector<FqCode>& modulus) {
    FieldPtr Fp = FiniteField::prime(p);
    if (modulus.size() <= 2) return Fp;
    PolyA m(Fp, modulus);
    if (!m.is_monic() || !is_irreducible(m)) throw InputError("defining polynomial is not monic irreducible over F_p");
    return FiniteField::extension(Fp, m.coeffs(), "w");
}

// q = p^e given as an integer.
inline FieldPtr make_fq_of_order(std::uint32_t q) {
    if (q < 2) throw InputError("q must be a prime power >= 2");
    std::uint32_t p = 0;
    for (std::uint32_t d = 2; d <= q; ++d) {
        if (q % d == 0) { p = d; break; }
    }
    std::uint32_t e = 0;
    std::uint32_t m = q;
    while (m % p == 0) { m /= p; ++e; }
    if (m != 1) throw InputError("q = " + std::to_string(q) + " is not a prime power");
    return make_fq(p, e);
}

struct Factorization {
    FqCode unit = 1;
    std::vector<std::pair<PolyA, int>> factors;

    PolyA expand(const FieldPtr& F) const {
        PolyA r = PolyA::constant(F, unit);
        for (const auto& [g, k] : factors) r *= g.pow(static_cast<std::uint64_t>(k));
        return r;
    }
};

// Trial division by the monic irreducibles of degree <= deg(f)/2; what
// remains after that is irreducible.
inline Factorization factor(const PolyA& f, std::uint64_t cap = kDefaultEnumerationCap) {
    if (f.is_zero()) throw DomainError("cannot factor the zero polynomial");
    Factorization out;
    out.unit = f.leading();
    PolyA rest = f.monic();
    const FieldPtr& F = f.field();
    for (std::int64_t d = 1; rest.degree() >= Degree(2 * d); ++d) {
        for (const PolyA& g : enumerate_irreducibles(F, d, cap)) {
            int k = 0;
            while (true) {
                auto [quo, rem] = rest.divmod(g);
                if (!rem.is_zero()) break;
                rest = std::move(quo);
                ++k;
            }
            if (k > 0) out.factors.emplace_back(g, k);
            if (rest.degree() < Degree(2 * d)) break;
        }
    }
    if (rest.degree() >= Degree(1)) {
        auto it = std::find_if(out.factors.begin(), out.factors.end(), [&](const auto& e) { return e.first == rest; });
        if (it != out.factors.end()) ++it->second;
        else out.factors.emplace_back(rest, 1);
    }
    std::sort(out.factors.begin(), out.factors.end(), [](const auto& a, const auto& b) {
        if (a.first.degree() != b.first.degree()) return a.first.degree() < b.first.degree();
        return a.first.code() < b.first.code();
    });
    return out;
}

// d = lcm{q^i - 1 : 1 <= i <= r}.
inline BigInt tame_lcm_d(const FieldPtr& F, std::int64_t r) {
    if (r < 1) throw DomainError("tame_lcm_d requires r >= 1");
    BigInt d = 1;
    BigInt qi = 1;
    for (std::int64_t i = 1; i <= r; ++i) {
        qi *= F->order();
        d = lcm(d, qi - 1);
    }
    return d;
}

// Multiplicity of the irreducible g in a nonzero polynomial a.
inline std::int64_t multiplicity(PolyA a, const PolyA& g) {
    if (a.is_zero()) throw DomainError("multiplicity in the zero polynomial");
    std::int64_t k = 0;
    while (true) {
        auto [quo, rem] = a.divmod(g);
        if (!rem.is_zero()) return k;
        a = std::move(quo);
        ++k;
    }
}

// A place of F = F_q(t): a monic irreducible of A, or infinity = (1/t).
class PrimePlace {
public:
    enum class Kind { finite, infinite };

    static PrimePlace finite(PolyA generator) {
        if (!generator.is_monic() || !is_irreducible(generator))
            throw DomainError("prime generator " + generator.to_string() + " is not monic irreducible");
        PrimePlace pl;
        pl.kind_ = Kind::finite;
        pl.degree_ = generator.degree().value();
        pl.field_ = generator.field();
        pl.generator_ = std::move(generator);
        return pl;
    }
    static PrimePlace infinite(FieldPtr F) {
        PrimePlace pl;
        pl.kind_ = Kind::infinite;
        pl.degree_ = 1;
        pl.field_ = std::move(F);
        return pl;
    }

    Kind kind() const noexcept { return kind_; }
    bool is_finite() const noexcept { return kind_ == Kind::finite; }
    bool is_infinite() const noexcept { return kind_ == Kind::infinite; }
    const PolyA& generator() const {
        if (!is_finite()) throw DomainError("the infinite place has no generator in A");
        return generator_;
    }
    std::int64_t degree() const noexcept { return degree_; }
    const FieldPtr& base_field() const noexcept { return field_; }

    std::string to_string() const { return is_finite() ? generator_.to_string() : "inf"; }

    friend bool operator==(const PrimePlace& a, const PrimePlace& b) noexcept {
        return a.kind_ == b.kind_ && same_field(a.field_, b.field_) && (a.kind_ == Kind::infinite || a.generator_ == b.generator_);
    }

private:
    PrimePlace() = default;
    Kind kind_ = Kind::infinite;
    PolyA generator_;
    std::int64_t degree_ = 1;
    FieldPtr field_;
};

// Element of F = F_q(t) in lowest terms with monic denominator.
class RationalFn {
public:
    RationalFn() = default;
    explicit RationalFn(PolyA num) : num_(std::move(num)), den_(PolyA::constant(num_.field(), 1)) {}
    RationalFn(PolyA num, PolyA den) : num_(std::move(num)), den_(std::move(den)) { normalize(); }

    static RationalFn constant(const FieldPtr& F, FqCode c) { return RationalFn(PolyA::constant(F, c)); }
    static RationalFn t(const FieldPtr& F) { return RationalFn(PolyA::t(F)); }

    const PolyA& num() const noexcept { return num_; }
    const PolyA& den() const noexcept { return den_; }
    const FieldPtr& field() const noexcept { return num_.field() ? num_.field() : den_.field(); }
    bool is_zero() const noexcept { return num_.is_zero(); }
    bool is_polynomial() const noexcept { return den_.is_one(); }
    bool is_constant() const noexcept { return is_polynomial() && num_.degree() <= Degree(0); }

    RationalFn zero_like() const { return RationalFn(PolyA(field())); }
    RationalFn one_like() const { return constant(field(), 1); }

    friend RationalFn operator+(const RationalFn& a, const RationalFn& b) {
        if (a.is_polynomial() && b.is_polynomial()) return RationalFn(a.num_ + b.num_);
        if (a.den_ == b.den_) return RationalFn(a.num_ + b.num_, a.den_);
        return RationalFn(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    friend RationalFn operator-(const RationalFn& a, const RationalFn& b) { return a + (-b); }
    RationalFn operator-() const {
        RationalFn r = *this;
        r.num_ = -r.num_;
        return r;
    }
    friend RationalFn operator*(const RationalFn& a, const RationalFn& b) {
        if (a.is_polynomial() && b.is_polynomial()) return RationalFn(a.num_ * b.num_);
        PolyA g1 = gcd(a.num_, b.den_);
        PolyA g2 = gcd(b.num_, a.den_);
        RationalFn r;
        r.num_ = (a.num_ / g1) * (b.num_ / g2);
        r.den_ = (a.den_ / g2) * (b.den_ / g1);
        r.fix_sign();
        return r;
    }
    RationalFn inverse() const {
        if (is_zero()) throw DomainError("inverse of zero in F_q(t)");
        return RationalFn(den_, num_);
    }
    friend RationalFn operator/(const RationalFn& a, const RationalFn& b) { return a * b.inverse(); }
    RationalFn& operator+=(const RationalFn& o) { return *this = *this + o; }
    RationalFn& operator-=(const RationalFn& o) { return *this = *this - o; }
    RationalFn& operator*=(const RationalFn& o) { return *this = *this * o; }

    friend bool operator==(const RationalFn& a, const RationalFn& b) noexcept {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }

    // x^q; the q-power map is injective so lowest terms are preserved.
    RationalFn frob() const {
        RationalFn r;
        r.num_ = num_.frobenius();
        r.den_ = den_.frobenius();
        return r;
    }

    RationalFn pow(std::int64_t e) const {
        if (e < 0) return inverse().pow(-e);
        RationalFn r;
        r.num_ = num_.pow(static_cast<std::uint64_t>(e));
        r.den_ = den_.pow(static_cast<std::uint64_t>(e));
        return r;
    }

    // Normalized valuation at a place; nullopt for zero (+infinity).
    std::optional<std::int64_t> valuation(const PrimePlace& place) const {
        if (is_zero()) return std::nullopt;
        if (place.is_infinite()) return den_.degree().value() - num_.degree().value();
        return multiplicity(num_, place.generator()) - multiplicity(den_, place.generator());
    }

    std::string to_string() const {
        std::string n = num_.to_string();
        if (is_polynomial()) return n;
        if (num_.coeffs().size() > 1 || n.find_first_of("+*^") != std::string::npos) n = "(" + n + ")";
        std::string d = den_.to_string();
        if (d.find_first_of("+*^") != std::string::npos) d = "(" + d + ")";
        return n + "/" + d;
    }

private:
    void normalize() {
        if (den_.is_zero()) throw DomainError("rational function with zero denominator");
        if (num_.is_zero()) {
            den_ = PolyA::constant(den_.field(), 1);
            return;
        }
        PolyA g = gcd(num_, den_);
        if (!g.is_one()) {
            num_ = num_ / g;
            den_ = den_ / g;
        }
        fix_sign();
    }
    void fix_sign() {
        FqCode l = den_.leading();
        if (l != 1) {
            FqCode li = den_.field()->inv(l);
            num_ = num_.scaled(li);
            den_ = den_.scaled(li);
        }
    }

    PolyA num_;
    PolyA den_;
};

} // namespace dkf
