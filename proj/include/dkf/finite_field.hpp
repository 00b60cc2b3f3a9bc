#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace dkf {

// Element of a finite field, stored as an index into the field's tables.
// The code of an element of an extension K[w]/(f) of degree d over K is
// sum_i c_i * |K|^i, where c_i are the codes of its coordinates in the
// power basis 1, w, ..., w^{d-1}. Codes below |K| are exactly the elements
// of K, so a subfield embeds into its extensions as the identity on codes.
using FqCode = std::uint32_t;

class FiniteField;
using FieldPtr = std::shared_ptr<const FiniteField>;

class FiniteField {
public:
    static constexpr std::uint32_t kMaxOrder = 1U << 20;

    static FieldPtr prime(std::uint32_t p) {
        if (p < 2 || !is_prime(p)) throw InputError("characteristic " + std::to_string(p) + " is not prime");
        auto f = std::shared_ptr<FiniteField>(new FiniteField());
        f->p_ = p;
        f->order_ = p;
        f->prime_degree_ = 1;
        f->build_tables([p](FqCode a, FqCode b) {
            return static_cast<FqCode>((static_cast<std::uint64_t>(a) * b) % p);
        });
        return f;
    }

    // Extension base[w]/(modulus). `modulus` is monic over `base`, coefficients
    // listed from the constant term up. Irreducibility is the caller's
    // responsibility (checked by construction of a field: a zero divisor
    // means no primitive element exists).
    static FieldPtr extension(FieldPtr base, std::vector<FqCode> modulus, std::string symbol) {
        if (modulus.size() < 2) throw InputError("extension modulus must have degree >= 1");
        if (modulus.back() != 1) throw InputError("extension modulus must be monic");
        const std::size_t d = modulus.size() - 1;
        if (d == 1) return base;
        std::uint64_t order = 1;
        for (std::size_t i = 0; i < d; ++i) {
            order *= base->order();
            if (order > kMaxOrder) throw ResourceLimitError("finite field order exceeds table cap");
        }
        auto f = std::shared_ptr<FiniteField>(new FiniteField());
        f->p_ = base->p_;
        f->order_ = static_cast<std::uint32_t>(order);
        f->prime_degree_ = base->prime_degree_ * static_cast<std::uint32_t>(d);
        f->base_ = base;
        f->modulus_ = std::move(modulus);
        f->symbol_ = std::move(symbol);
        const FiniteField& K = *base;
        const std::vector<FqCode>& mod = f->modulus_;
        auto unpack = [&K, d](FqCode x) {
            std::vector<FqCode> v(d);
            for (std::size_t i = 0; i < d; ++i) { v[i] = x % K.order(); x /= K.order(); }
            return v;
        };
        auto pack = [&K, d](const std::vector<FqCode>& v) {
            FqCode x = 0;
            for (std::size_t i = d; i-- > 0;) x = x * K.order() + v[i];
            return x;
        };
        f->build_tables([&](FqCode a, FqCode b) {
            auto va = unpack(a);
            auto vb = unpack(b);
            std::vector<FqCode> prod(2 * d - 1, 0);
            for (std::size_t i = 0; i < d; ++i)
                for (std::size_t j = 0; j < d; ++j)
                    prod[i + j] = K.add(prod[i + j], K.mul(va[i], vb[j]));
            for (std::size_t k = prod.size(); k-- > d;) {
                FqCode c = prod[k];
                if (c == 0) continue;
                for (std::size_t i = 0; i <= d; ++i)
                    prod[k - d + i] = K.sub(prod[k - d + i], K.mul(c, mod[i]));
            }
            prod.resize(d);
            return pack(prod);
        });
        return f;
    }

    std::uint32_t characteristic() const noexcept { return p_; }
    std::uint32_t order() const noexcept { return order_; }
    std::uint32_t prime_degree() const noexcept { return prime_degree_; }
    const FieldPtr& base() const noexcept { return base_; }
    const std::vector<FqCode>& modulus() const noexcept { return modulus_; }
    const std::string& symbol() const noexcept { return symbol_; }
    bool is_prime_field() const noexcept { return base_ == nullptr; }

    FqCode add(FqCode a, FqCode b) const {
        if (!add_table_.empty()) return add_table_[static_cast<std::size_t>(a) * order_ + b];
        return digitwise(a, b, false);
    }
    FqCode neg(FqCode a) const { return digitwise(0, a, true); }
    FqCode sub(FqCode a, FqCode b) const {
        if (!add_table_.empty()) return add_table_[static_cast<std::size_t>(a) * order_ + neg_table_[b]];
        return digitwise(a, b, true);
    }
    FqCode mul(FqCode a, FqCode b) const {
        if (a == 0 || b == 0) return 0;
        std::uint32_t s = log_[a] + log_[b];
        if (s >= order_ - 1) s -= order_ - 1;
        return exp_[s];
    }
    FqCode inv(FqCode a) const {
        if (a == 0) throw DomainError("inverse of zero in a finite field");
        return exp_[(order_ - 1 - log_[a]) % (order_ - 1)];
    }
    FqCode div(FqCode a, FqCode b) const { return mul(a, inv(b)); }
    FqCode pow(FqCode a, std::uint64_t e) const {
        if (e == 0) return 1;
        if (a == 0) return 0;
        return exp_[static_cast<std::uint32_t>((static_cast<std::uint64_t>(log_[a]) * (e % (order_ - 1))) % (order_ - 1))];
    }
    // The element of integer value n in the prime field.
    FqCode from_int(std::int64_t n) const {
        std::int64_t r = n % static_cast<std::int64_t>(p_);
        if (r < 0) r += p_;
        return static_cast<FqCode>(r);
    }
    FqCode primitive_element() const noexcept { return exp_.size() > 1 ? exp_[1] : 1; }
    // Class of the adjoined generator w (only for proper extensions).
    FqCode generator() const noexcept { return base_ ? base_->order() : 0; }

    // Coordinates over the immediate base field.
    std::vector<FqCode> coordinates(FqCode x) const {
        if (!base_) return {x};
        std::size_t d = modulus_.size() - 1;
        std::vector<FqCode> v(d);
        for (std::size_t i = 0; i < d; ++i) { v[i] = x % base_->order(); x /= base_->order(); }
        return v;
    }

    // Polynomial text in the generator symbol: "w^2+2*w+1". Base-field
    // coefficients that are not prime-field elements are parenthesized.
    std::string to_string(FqCode x) const {
        if (!base_) return std::to_string(x);
        auto v = coordinates(x);
        std::string out;
        for (std::size_t i = v.size(); i-- > 0;) {
            if (v[i] == 0) continue;
            std::string c = base_->to_string(v[i]);
            if (c.find_first_of("+*^") != std::string::npos) c = "(" + c + ")";
            std::string term;
            if (i == 0) term = c;
            else {
                std::string mono = i == 1 ? symbol_ : symbol_ + "^" + std::to_string(i);
                term = (v[i] == 1) ? mono : c + "*" + mono;
            }
            if (!out.empty()) out += "+";
            out += term;
        }
        return out.empty() ? "0" : out;
    }

private:
    FiniteField() = default;

    static bool is_prime(std::uint32_t n) {
        if (n < 2) return false;
        for (std::uint32_t d = 2; static_cast<std::uint64_t>(d) * d <= n; ++d)
            if (n % d == 0) return false;
        return true;
    }

    FqCode digitwise(FqCode a, FqCode b, bool subtract) const {
        FqCode result = 0;
        FqCode scale = 1;
        for (std::uint32_t i = 0; i < prime_degree_; ++i) {
            std::uint32_t da = a % p_;
            std::uint32_t db = b % p_;
            a /= p_;
            b /= p_;
            std::uint32_t r = subtract ? (da + p_ - db) % p_ : (da + db) % p_;
            result += r * scale;
            scale *= p_;
        }
        return result;
    }

    template <class SlowMul>
    void build_tables(SlowMul slow_mul) {
        if (order_ <= 512) {
            add_table_.resize(static_cast<std::size_t>(order_) * order_);
            neg_table_.resize(order_);
            for (FqCode a = 0; a < order_; ++a) {
                neg_table_[a] = digitwise(0, a, true);
                for (FqCode b = 0; b < order_; ++b)
                    add_table_[static_cast<std::size_t>(a) * order_ + b] = digitwise(a, b, false);
            }
        }
        exp_.assign(order_, 0);
        log_.assign(order_, 0);
        if (order_ == 2) {
            exp_[0] = 1;
            log_[1] = 0;
            return;
        }
        const std::uint32_t n = order_ - 1;
        std::vector<std::uint32_t> prime_factors;
        {
            std::uint32_t m = n;
            for (std::uint32_t d = 2; static_cast<std::uint64_t>(d) * d <= m; ++d) {
                if (m % d == 0) {
                    prime_factors.push_back(d);
                    while (m % d == 0) m /= d;
                }
            }
            if (m > 1) prime_factors.push_back(m);
        }
        auto slow_pow = [&](FqCode a, std::uint64_t e) {
            FqCode r = 1;
            while (e != 0) {
                if (e & 1U) r = slow_mul(r, a);
                a = slow_mul(a, a);
                e >>= 1U;
            }
            return r;
        };
        for (FqCode g = 2; g < order_; ++g) {
            if (slow_pow(g, n) != 1) continue;
            bool primitive = true;
            for (auto l : prime_factors) {
                if (slow_pow(g, n / l) == 1) { primitive = false; break; }
            }
            if (!primitive) continue;
            FqCode x = 1;
            for (std::uint32_t i = 0; i < n; ++i) {
                exp_[i] = x;
                log_[x] = i;
                x = slow_mul(x, g);
            }
            return;
        }
        throw InputError("modulus is not irreducible: no primitive element");
    }

    std::uint32_t p_ = 0;
    std::uint32_t order_ = 0;
    std::uint32_t prime_degree_ = 0;
    FieldPtr base_;
    std::vector<FqCode> modulus_;
    std::string symbol_;
    std::vector<FqCode> add_table_;
    std::vector<FqCode> neg_table_;
    std::vector<FqCode> exp_;
    std::vector<std::uint32_t> log_;
};

// Structural equality: same characteristic, same tower of defining polynomials.
inline bool same_field(const FieldPtr& a, const FieldPtr& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    if (a->order() != b->order() || a->characteristic() != b->characteristic()) return false;
    if (a->is_prime_field() || b->is_prime_field()) return a->is_prime_field() && b->is_prime_field();
    return a->modulus() == b->modulus() && same_field(a->base(), b->base());
}

} // namespace dkf
