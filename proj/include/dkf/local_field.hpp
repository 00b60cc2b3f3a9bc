#pragma once

#include <algorithm>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "base_algebra.hpp"
#include "errors.hpp"
#include "parse.hpp"

namespace dkf {

// Absolute precision of an exactly known element (a finite Laurent polynomial
// in the uniformizer). Any precision at or above kExactThreshold is exact.
inline constexpr std::int64_t kExactPrecision = std::int64_t{1} << 61;
inline constexpr std::int64_t kExactThreshold = kExactPrecision / 2;
inline constexpr std::int64_t kDefaultPrecision = 30;

namespace detail {

inline bool exact_prec(std::int64_t p) noexcept { return p >= kExactThreshold; }
inline std::int64_t prec_add(std::int64_t a, std::int64_t b) noexcept {
    return exact_prec(a) || exact_prec(b) ? kExactPrecision : a + b;
}
inline constexpr std::int64_t kMaxExponent = std::int64_t{1} << 58;
inline std::int64_t scale_exponent(std::int64_t a, std::int64_t k) {
    if (a > kMaxExponent / k || a < -kMaxExponent / k) throw ResourceLimitError("series exponent overflow");
    return a * k;
}
inline std::int64_t prec_scale(std::int64_t a, std::int64_t k) {
    return exact_prec(a) ? kExactPrecision : scale_exponent(a, k);
}

} // namespace detail

class LocalElem;

// The completion K_l = F_{q^d}((u)) of F_q(t) at a place l, with u = l(t) for
// a finite place and u = 1/t at infinity. The residue field F_q[t]/(l) has
// its generator printed as "t"; its class is the distinguished root alpha.
class LocalField : public std::enable_shared_from_this<LocalField> {
public:
    static std::shared_ptr<const LocalField> make(const PrimePlace& place) {
        auto K = std::shared_ptr<LocalField>(new LocalField(place));
        return K;
    }

    const PrimePlace& place() const noexcept { return place_; }
    const FieldPtr& base() const noexcept { return base_; }
    const FieldPtr& residue() const noexcept { return residue_; }
    std::uint32_t q() const noexcept { return base_->order(); }
    FqCode alpha() const noexcept { return alpha_; }

    LocalElem zero(std::int64_t precision = kExactPrecision) const;
    LocalElem one() const;
    LocalElem constant(FqCode residue_code) const;
    LocalElem uniformizer() const;
    LocalElem monomial(FqCode residue_code, std::int64_t exponent) const;

    // Expansion T of t: T = alpha + u/l'(alpha) + ..., with l(T) = u.
    LocalElem t_expansion(std::int64_t precision) const;

    LocalElem complete(const PolyA& a, std::int64_t precision) const;
    LocalElem complete(const RationalFn& x, std::int64_t precision) const;

    // Residue-field element written as a polynomial in t reduced mod l.
    FqCode residue_from_poly(const PolyA& p) const {
        if (place_.is_infinite() || place_.degree() == 1) {
            PolyA r = place_.is_infinite() ? p : p % place_.generator();
            if (place_.is_infinite() && p.degree() > Degree(0)) throw InputError("residue at infinity must be a constant");
            return place_.is_infinite() ? p.coeff(0) : r.eval(alpha_);
        }
        PolyA r = p % place_.generator();
        FqCode code = 0;
        for (std::size_t i = r.coeffs().size(); i-- > 0;) code = code * base_->order() + r.coeffs()[i];
        return code;
    }

private:
    explicit LocalField(const PrimePlace& place) : place_(place), base_(place.base_field()) {
        if (place_.is_infinite() || place_.degree() == 1) {
            residue_ = base_;
            alpha_ = place_.is_infinite() ? 0 : base_->neg(place_.generator().coeff(0));
        } else {
            residue_ = FiniteField::extension(base_, place_.generator().coeffs(), "t");
            alpha_ = residue_->generator();
        }
    }

    PrimePlace place_;
    FieldPtr base_;
    FieldPtr residue_;
    FqCode alpha_ = 0;
};

using LocalFieldPtr = std::shared_ptr<const LocalField>;

// Truncated Laurent series sum_{e >= val} c_e u^e + O(u^prec) over the
// residue field of a completion. Stored coefficients are those of exponents
// val, val+1, ..., all below prec; c_val != 0 unless the element is zero to
// precision, in which case val == prec.
class LocalElem {
public:
    LocalElem() = default;

    static LocalElem from_coeffs(LocalFieldPtr K, std::int64_t start, std::vector<FqCode> coeffs, std::int64_t prec) {
        LocalElem x;
        x.K_ = std::move(K);
        x.prec_ = prec;
        x.val_ = start;
        x.c_ = std::move(coeffs);
        x.normalize();
        return x;
    }

    const LocalFieldPtr& local_field() const noexcept { return K_; }
    const FieldPtr& field() const noexcept { return K_->base(); }
    std::int64_t precision() const noexcept { return prec_; }
    bool is_exact() const noexcept { return detail::exact_prec(prec_); }
    bool is_zero() const noexcept { return c_.empty(); }
    bool is_exact_zero() const noexcept { return c_.empty() && is_exact(); }
    const std::vector<FqCode>& coefficients() const noexcept { return c_; }

    // Valuation; throws if the element is zero to its precision.
    std::int64_t valuation() const {
        if (is_zero()) {
            if (is_exact()) throw DomainError("valuation of zero");
            throw PrecisionError("valuation of an element that is zero to precision " + std::to_string(prec_));
        }
        return val_;
    }
    // Valuation, or the precision for an element that is zero to precision.
    std::int64_t valuation_floor() const noexcept { return val_; }

    FqCode coeff(std::int64_t e) const {
        if (e >= prec_) throw PrecisionError("coefficient beyond known precision");
        if (e < val_ || e >= val_ + static_cast<std::int64_t>(c_.size())) return 0;
        return c_[static_cast<std::size_t>(e - val_)];
    }

    LocalElem zero_like() const { return K_->zero(); }
    LocalElem one_like() const { return K_->one(); }

    friend LocalElem operator+(const LocalElem& a, const LocalElem& b) { return combine(a, b, false); }
    friend LocalElem operator-(const LocalElem& a, const LocalElem& b) { return combine(a, b, true); }
    LocalElem operator-() const {
        LocalElem r = *this;
        for (auto& c : r.c_) c = K_->residue()->neg(c);
        return r;
    }

    friend LocalElem operator*(const LocalElem& a, const LocalElem& b) {
        check_same(a, b);
        const std::int64_t prec = std::min(detail::prec_add(a.val_, b.prec_), detail::prec_add(b.val_, a.prec_));
        if (a.is_zero() || b.is_zero()) return a.K_->zero(prec);
        const std::int64_t start = a.val_ + b.val_;
        std::size_t n = a.c_.size() + b.c_.size() - 1;
        if (!detail::exact_prec(prec)) n = static_cast<std::size_t>(std::clamp<std::int64_t>(prec - start, 0, static_cast<std::int64_t>(n)));
        std::vector<FqCode> out(n, 0);
        const FiniteField& R = *a.K_->residue();
        for (std::size_t i = 0; i < a.c_.size() && i < n; ++i) {
            FqCode x = a.c_[i];
            if (x == 0) continue;
            const std::size_t lim = std::min(b.c_.size(), n - i);
            for (std::size_t j = 0; j < lim; ++j) {
                if (b.c_[j] != 0) out[i + j] = R.add(out[i + j], R.mul(x, b.c_[j]));
            }
        }
        return from_coeffs(a.K_, start, std::move(out), prec);
    }
    LocalElem& operator+=(const LocalElem& o) { return *this = *this + o; }
    LocalElem& operator-=(const LocalElem& o) { return *this = *this - o; }
    LocalElem& operator*=(const LocalElem& o) { return *this = *this * o; }

    // Inverse known to absolute precision `target` when this element is exact,
    // otherwise to the precision it supports (capped at `target`).
    LocalElem inverse(std::int64_t target = kDefaultPrecision) const {
        if (is_zero()) {
            if (is_exact()) throw DomainError("inverse of zero");
            throw PrecisionError("inverse of an element that is zero to precision " + std::to_string(prec_));
        }
        const FiniteField& R = *K_->residue();
        if (is_exact() && c_.size() == 1) return from_coeffs(K_, -val_, {R.inv(c_[0])}, kExactPrecision);
        std::int64_t rel = target + val_;
        if (!is_exact()) rel = std::min(rel, prec_ - val_);
        if (rel < 1) throw PrecisionError("inverse requested below its leading term");
        const auto n = static_cast<std::size_t>(rel);
        std::vector<FqCode> b(n, 0);
        const FqCode c0inv = R.inv(c_[0]);
        b[0] = c0inv;
        for (std::size_t k = 1; k < n; ++k) {
            FqCode s = 0;
            const std::size_t lim = std::min(k, c_.size() - 1);
            for (std::size_t i = 1; i <= lim; ++i) s = R.add(s, R.mul(c_[i], b[k - i]));
            b[k] = R.neg(R.mul(c0inv, s));
        }
        return from_coeffs(K_, -val_, std::move(b), -val_ + rel);
    }

    LocalElem divided_by(const LocalElem& d, std::int64_t target = kDefaultPrecision) const {
        std::int64_t va = is_zero() ? 0 : val_;
        return *this * d.inverse(target - va);
    }

    // x^q for q = |F_q|.
    LocalElem frob() const {
        const std::int64_t q = K_->q();
        const FiniteField& R = *K_->residue();
        LocalElem r;
        r.K_ = K_;
        r.prec_ = detail::prec_scale(prec_, q);
        if (c_.empty()) {
            r.val_ = r.prec_;
            return r;
        }
        r.val_ = detail::scale_exponent(val_, q);
        r.c_.assign((c_.size() - 1) * static_cast<std::size_t>(q) + 1, 0);
        for (std::size_t i = 0; i < c_.size(); ++i) r.c_[i * static_cast<std::size_t>(q)] = R.pow(c_[i], static_cast<std::uint64_t>(q));
        r.normalize();
        return r;
    }

    LocalElem pow(std::uint64_t e) const {
        LocalElem result = K_->one();
        LocalElem base = *this;
        while (e != 0) {
            if (e & 1U) result *= base;
            e >>= 1U;
            if (e != 0) base *= base;
        }
        return result;
    }

    LocalElem truncated(std::int64_t prec) const {
        if (prec >= prec_) return *this;
        LocalElem r = *this;
        r.prec_ = prec;
        r.normalize();
        return r;
    }

    // Equality of the two elements modulo u^{min precision}.
    bool agrees_with(const LocalElem& o) const { return (*this - o).is_zero(); }

    friend bool operator==(const LocalElem& a, const LocalElem& b) noexcept {
        return a.val_ == b.val_ && a.prec_ == b.prec_ && a.c_ == b.c_;
    }

    // "place=<poly|inf> prec=<P|exact> val=<v> coeffs=[c_v,...]"
    std::string to_string() const {
        std::ostringstream os;
        os << "place=" << K_->place().to_string() << " prec=";
        if (is_exact()) os << "exact"; else os << prec_;
        os << " val=";
        if (is_zero()) os << (is_exact() ? std::string("inf") : std::to_string(prec_)); else os << val_;
        os << " coeffs=[";
        for (std::size_t i = 0; i < c_.size(); ++i) {
            if (i) os << ",";
            os << K_->residue()->to_string(c_[i]);
        }
        os << "]";
        return os.str();
    }

private:
    static void check_same(const LocalElem& a, const LocalElem& b) {
        if (a.K_ != b.K_ && !(a.K_ && b.K_ && a.K_->place() == b.K_->place()))
            throw InputError("arithmetic between elements of different completions");
    }

    static LocalElem combine(const LocalElem& a, const LocalElem& b, bool subtract) {
        check_same(a, b);
        const std::int64_t prec = std::min(a.prec_, b.prec_);
        const std::int64_t lo = std::min(a.val_, b.val_);
        const std::int64_t end_a = a.val_ + static_cast<std::int64_t>(a.c_.size());
        const std::int64_t end_b = b.val_ + static_cast<std::int64_t>(b.c_.size());
        std::int64_t hi = std::max(a.c_.empty() ? lo : end_a, b.c_.empty() ? lo : end_b);
        hi = std::min(hi, prec);
        if (hi <= lo) return a.K_->zero(prec);
        const FiniteField& R = *a.K_->residue();
        std::vector<FqCode> out(static_cast<std::size_t>(hi - lo), 0);
        for (std::size_t i = 0; i < a.c_.size(); ++i) {
            std::int64_t e = a.val_ + static_cast<std::int64_t>(i);
            if (e >= hi) break;
            out[static_cast<std::size_t>(e - lo)] = a.c_[i];
        }
        for (std::size_t i = 0; i < b.c_.size(); ++i) {
            std::int64_t e = b.val_ + static_cast<std::int64_t>(i);
            if (e >= hi) break;
            auto& slot = out[static_cast<std::size_t>(e - lo)];
            slot = subtract ? R.sub(slot, b.c_[i]) : R.add(slot, b.c_[i]);
        }
        return from_coeffs(a.K_, lo, std::move(out), prec);
    }

    void normalize() {
        if (!detail::exact_prec(prec_)) {
            std::int64_t keep = prec_ - val_;
            if (keep < 0) keep = 0;
            if (static_cast<std::int64_t>(c_.size()) > keep) c_.resize(static_cast<std::size_t>(keep));
        } else {
            prec_ = kExactPrecision;
        }
        std::size_t lead = 0;
        while (lead < c_.size() && c_[lead] == 0) ++lead;
        if (lead == c_.size()) {
            c_.clear();
            val_ = prec_;
            return;
        }
        if (lead > 0) {
            c_.erase(c_.begin(), c_.begin() + static_cast<std::ptrdiff_t>(lead));
            val_ += static_cast<std::int64_t>(lead);
        }
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }

    LocalFieldPtr K_;
    std::int64_t val_ = kExactPrecision;
    std::int64_t prec_ = kExactPrecision;
    std::vector<FqCode> c_;
};

inline LocalElem LocalField::zero(std::int64_t precision) const {
    return LocalElem::from_coeffs(shared_from_this(), precision, {}, precision);
}
inline LocalElem LocalField::one() const { return constant(1); }
inline LocalElem LocalField::constant(FqCode c) const {
    return LocalElem::from_coeffs(shared_from_this(), 0, {c}, kExactPrecision);
}
inline LocalElem LocalField::uniformizer() const { return monomial(1, 1); }
inline LocalElem LocalField::monomial(FqCode c, std::int64_t e) const {
    return LocalElem::from_coeffs(shared_from_this(), e, {c}, kExactPrecision);
}

namespace detail {

// Horner evaluation of a polynomial over F_q at a local element.
inline LocalElem horner(const PolyA& a, const LocalElem& x) {
    const LocalField& K = *x.local_field();
    LocalElem acc = K.zero();
    for (std::size_t i = a.coeffs().size(); i-- > 0;) {
        acc = acc * x;
        if (a.coeffs()[i] != 0) acc = acc + K.constant(a.coeffs()[i]);
    }
    return acc;
}

} // namespace detail

inline LocalElem LocalField::t_expansion(std::int64_t precision) const {
    if (place_.is_infinite()) return monomial(1, -1);
    if (precision < 1) throw PrecisionError("expansion of t needs precision >= 1");
    if (place_.degree() == 1) return constant(alpha_) + uniformizer();
    const PolyA& l = place_.generator();
    const PolyA dl = l.derivative();
    const LocalElem u = uniformizer();
    LocalElem T = constant(alpha_);
    for (int iter = 0; iter < 64; ++iter) {
        LocalElem residual = detail::horner(l, T) - u;
        LocalElem next = (T - residual * detail::horner(dl, T).inverse(precision)).truncated(precision);
        if (next == T) return T;
        T = std::move(next);
    }
    throw PrecisionError("Newton iteration for the expansion of t did not stabilize");
}

inline LocalElem LocalField::complete(const PolyA& a, std::int64_t precision) const {
    return complete(RationalFn(a), precision);
}

inline LocalElem LocalField::complete(const RationalFn& x, std::int64_t precision) const {
    if (x.is_zero()) return zero(precision);
    if (place_.is_infinite()) {
        const std::int64_t m = x.num().degree().value();
        const std::int64_t n = x.den().degree().value();
        const std::int64_t v = n - m;
        if (precision <= v) throw PrecisionError("requested precision does not exceed the valuation");
        std::vector<FqCode> A(x.num().coeffs().rbegin(), x.num().coeffs().rend());
        std::vector<FqCode> B(x.den().coeffs().rbegin(), x.den().coeffs().rend());
        LocalElem num = LocalElem::from_coeffs(shared_from_this(), 0, std::move(A), kExactPrecision);
        LocalElem den = LocalElem::from_coeffs(shared_from_this(), 0, std::move(B), kExactPrecision);
        return (monomial(1, v) * num * den.inverse(precision - v)).truncated(precision);
    }
    const PolyA& l = place_.generator();
    const std::int64_t k1 = multiplicity(x.num(), l);
    const std::int64_t k2 = multiplicity(x.den(), l);
    const std::int64_t v = k1 - k2;
    if (precision <= v) throw PrecisionError("requested precision does not exceed the valuation");
    const std::int64_t rel = precision - v;
    const PolyA a = x.num() / l.pow(static_cast<std::uint64_t>(k1));
    const PolyA b = x.den() / l.pow(static_cast<std::uint64_t>(k2));
    const LocalElem T = t_expansion(rel);
    LocalElem num = detail::horner(a, T);
    LocalElem den = detail::horner(b, T);
    return (monomial(1, v) * num * den.inverse(rel)).truncated(precision);
}

namespace detail {

// Sum_i c_i x^{q^i}; the result may be zero to precision.
inline LocalElem additive_sum(std::span<const LocalElem> coeffs, const LocalElem& x) {
    const LocalField& K = *x.local_field();
    LocalElem acc = K.zero();
    LocalElem power = x;
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        if (i > 0) power = power.frob();
        if (coeffs[i].local_field()->place() != K.place()) throw InputError("coefficient from a different completion");
        acc = acc + coeffs[i] * power;
    }
    return acc;
}

} // namespace detail

// Sum_i c_i x^{q^i} for additive coefficients c_0, c_1, ... in the completion.
inline LocalElem local_eval_additive(std::span<const LocalElem> coeffs, const LocalElem& x) {
    LocalElem acc = detail::additive_sum(coeffs, x);
    if (acc.is_zero() && !acc.is_exact())
        throw PrecisionError("additive evaluation is zero to precision " + std::to_string(acc.precision()) + " but not provably zero");
    return acc;
}

// Parses the serialized form produced by LocalElem::to_string.
inline LocalElem parse_local(const LocalFieldPtr& K, std::string_view text) {
    auto field_of = [&](const std::string& key) -> std::pair<std::string, std::size_t> {
        std::size_t at = text.find(key + "=");
        if (at == std::string_view::npos) throw ParseError("missing '" + key + "='", 0);
        std::size_t start = at + key.size() + 1;
        std::size_t end = start;
        if (key == "coeffs") {
            end = text.find(']', start);
            if (end == std::string_view::npos) throw ParseError("unterminated coefficient list", start);
            ++end;
        } else {
            while (end < text.size() && text[end] != ' ') ++end;
        }
        return {std::string(text.substr(start, end - start)), start};
    };
    auto [place, place_at] = field_of("place");
    if (place != K->place().to_string()) throw ParseError("place does not match the completion", place_at);
    auto [prec_s, prec_at] = field_of("prec");
    auto [val_s, val_at] = field_of("val");
    auto [coeff_s, coeff_at] = field_of("coeffs");
    std::int64_t prec = 0;
    try {
        prec = prec_s == "exact" ? kExactPrecision : std::stoll(prec_s);
    } catch (const std::exception&) {
        throw ParseError("bad precision", prec_at);
    }
    if (coeff_s.size() < 2 || coeff_s.front() != '[') throw ParseError("expected '[...]'", coeff_at);
    std::vector<FqCode> coeffs;
    std::string body = coeff_s.substr(1, coeff_s.size() - 2);
    std::size_t s = 0;
    while (!body.empty() && s <= body.size()) {
        std::size_t e = body.find(',', s);
        if (e == std::string::npos) e = body.size();
        PolyA r = parse_poly(K->base(), std::string_view(body).substr(s, e - s), coeff_at + 1 + s);
        coeffs.push_back(K->residue_from_poly(r));
        s = e + 1;
    }
    std::int64_t val = 0;
    if (coeffs.empty()) val = prec;
    else {
        try {
            val = std::stoll(val_s);
        } catch (const std::exception&) {
            throw ParseError("bad valuation", val_at);
        }
    }
    return LocalElem::from_coeffs(K, val, std::move(coeffs), prec);
}

} // namespace dkf
