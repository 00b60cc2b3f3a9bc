#pragma once

#include <cctype>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "base_algebra.hpp"
#include "errors.hpp"
#include "ore.hpp"

namespace dkf {

using OreF = OrePoly<RationalFn>;

namespace detail {

// Recursive-descent parser for expressions over F_q(t){tau}:
//   expr  := ['-'] term (('+'|'-') term)*
//   term  := power (('*'|'/') power)*      division only by tau-free values
//   power := atom ['^' ['-'] integer]      negative exponents only tau-free
//   atom  := integer | 't' | 'w' | 'tau' | '(' expr ')'
// Integers denote elements of the prime field.
class ExprParser {
public:
    ExprParser(FieldPtr F, std::string_view text, std::size_t offset)
        : F_(std::move(F)), s_(text), offset_(offset) {}

    OreF parse() {
        OreF e = expr();
        skip_ws();
        if (pos_ != s_.size()) fail("unexpected character '" + std::string(1, s_[pos_]) + "'");
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, offset_ + pos_); }

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool eat(char c) {
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == c) { ++pos_; return true; }
        return false;
    }

    OreF scalar(const RationalFn& x) const { return OreF(RationalFn::constant(F_, 0), {x}); }
    RationalFn one() const { return RationalFn::constant(F_, 1); }

    OreF expr() {
        skip_ws();
        bool negate = eat('-');
        OreF acc = term();
        if (negate) acc = scalar(RationalFn::constant(F_, 0)) - acc;
        while (true) {
            if (eat('+')) acc = acc + term();
            else if (eat('-')) acc = acc - term();
            else return acc;
        }
    }

    OreF term() {
        OreF acc = power();
        while (true) {
            if (eat('*')) acc = acc * power();
            else if (eat('/')) {
                std::size_t at = pos_;
                OreF d = power();
                if (d.degree() > Degree(0)) { pos_ = at; fail("division by an expression containing tau"); }
                if (d.is_zero()) { pos_ = at; fail("division by zero"); }
                acc = acc.scaled_left(d.coeff(0).inverse());
            } else return acc;
        }
    }

    std::int64_t integer() {
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (start == pos_) fail("expected an integer");
        if (pos_ - start > 12) { pos_ = start; fail("integer literal too long"); }
        return std::stoll(std::string(s_.substr(start, pos_ - start)));
    }

    OreF power() {
        OreF base = atom();
        if (!eat('^')) return base;
        bool neg = eat('-');
        std::size_t at = pos_;
        std::int64_t e = integer();
        if (neg) {
            if (base.degree() > Degree(0)) { pos_ = at; fail("negative power of an expression containing tau"); }
            if (base.is_zero()) { pos_ = at; fail("negative power of zero"); }
            return scalar(base.coeff(0).pow(-e));
        }
        if (e > 4096) { pos_ = at; fail("exponent too large"); }
        OreF r = scalar(one());
        for (std::int64_t i = 0; i < e; ++i) r = r * base;
        return r;
    }

    OreF atom() {
        skip_ws();
        if (pos_ >= s_.size()) fail("unexpected end of input");
        char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            OreF e = expr();
            if (!eat(')')) fail("expected ')'");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::int64_t n = integer();
            return scalar(RationalFn::constant(F_, F_->from_int(n)));
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
            std::string_view id = s_.substr(start, pos_ - start);
            if (id == "t") return scalar(RationalFn::t(F_));
            if (id == "tau") return OreF::tau_power(one(), 1);
            if (id == "w" && !F_->is_prime_field()) return scalar(RationalFn::constant(F_, F_->generator()));
            pos_ = start;
            fail("unknown symbol '" + std::string(id) + "'");
        }
        fail("unexpected character '" + std::string(1, c) + "'");
    }

    FieldPtr F_;
    std::string_view s_;
    std::size_t offset_;
    std::size_t pos_ = 0;
};

} // namespace detail

inline OreF parse_ore(const FieldPtr& F, std::string_view text, std::size_t offset = 0) {
    return detail::ExprParser(F, text, offset).parse();
}

inline RationalFn parse_rational(const FieldPtr& F, std::string_view text, std::size_t offset = 0) {
    OreF e = parse_ore(F, text, offset);
    if (e.degree() > Degree(0)) throw ParseError("tau is not allowed in a rational function", offset);
    return e.coeff(0).is_zero() ? RationalFn::constant(F, 0) : e.coeff(0);
}

inline PolyA parse_poly(const FieldPtr& F, std::string_view text, std::size_t offset = 0) {
    RationalFn x = parse_rational(F, text, offset);
    if (!x.is_polynomial()) throw ParseError("expected a polynomial in t", offset);
    return x.num();
}

// "key=value; key=value; ..." with positions of each value kept for errors.
struct KeyValueLine {
    struct Entry {
        std::string value;
        std::size_t offset = 0;
    };
    std::map<std::string, Entry> entries;

    bool has(const std::string& k) const { return entries.count(k) != 0; }
    const Entry& at(const std::string& k) const {
        auto it = entries.find(k);
        if (it == entries.end()) throw InputError("missing key '" + k + "'");
        return it->second;
    }
    std::int64_t integer(const std::string& k) const {
        const Entry& e = at(k);
        std::size_t used = 0;
        std::int64_t v = 0;
        try {
            v = std::stoll(e.value, &used);
        } catch (const std::exception&) {
            throw ParseError("expected an integer for '" + k + "'", e.offset);
        }
        if (used != e.value.size()) throw ParseError("expected an integer for '" + k + "'", e.offset + used);
        return v;
    }
};

inline std::string trim_copy(std::string_view s, std::size_t* lead = nullptr) {
    std::size_t a = 0;
    while (a < s.size() && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    std::size_t b = s.size();
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    if (lead) *lead = a;
    return std::string(s.substr(a, b - a));
}

inline KeyValueLine parse_key_values(std::string_view line) {
    KeyValueLine out;
    std::size_t start = 0;
    while (start <= line.size()) {
        std::size_t end = line.find(';', start);
        if (end == std::string_view::npos) end = line.size();
        std::string_view item = line.substr(start, end - start);
        std::size_t lead = 0;
        std::string trimmed = trim_copy(item, &lead);
        if (!trimmed.empty()) {
            std::size_t eq = item.find('=');
            if (eq == std::string_view::npos) throw ParseError("expected key=value", start + lead);
            std::size_t vlead = 0;
            std::string key = trim_copy(item.substr(0, eq));
            std::string value = trim_copy(item.substr(eq + 1), &vlead);
            if (key.empty()) throw ParseError("empty key", start + lead);
            if (out.entries.count(key)) throw ParseError("duplicate key '" + key + "'", start + lead);
            out.entries[key] = {value, start + eq + 1 + vlead};
        }
        start = end + 1;
    }
    return out;
}

// Header line "Fq: p=2 e=2 mod=w^2+w+1".
inline FieldPtr parse_fq_header(std::string_view line) {
    std::size_t lead = 0;
    std::string s = trim_copy(line, &lead);
    if (s.rfind("Fq:", 0) != 0) throw ParseError("expected 'Fq:' header", lead);
    std::map<std::string, std::pair<std::string, std::size_t>> kv;
    std::size_t i = 3;
    while (i < s.size()) {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
        if (i >= s.size()) break;
        std::size_t j = i;
        while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
        std::string tok = s.substr(i, j - i);
        auto eq = tok.find('=');
        if (eq == std::string::npos) throw ParseError("expected key=value in Fq header", lead + i);
        kv[tok.substr(0, eq)] = {tok.substr(eq + 1), lead + i + eq + 1};
        i = j;
    }
    if (!kv.count("p")) throw ParseError("Fq header needs p=", lead);
    auto p = static_cast<std::uint32_t>(std::stoul(kv["p"].first));
    std::uint32_t e = kv.count("e") ? static_cast<std::uint32_t>(std::stoul(kv["e"].first)) : 1;
    if (e == 1 || !kv.count("mod")) return make_fq(p, e);
    FieldPtr Fp = FiniteField::prime(p);
    // The modulus is written in w; read it as a polynomial in t over F_p.
    std::string mod = kv["mod"].first;
    for (auto& ch : mod) if (ch == 'w') ch = 't';
    PolyA m = parse_poly(Fp, mod, kv["mod"].second);
    if (m.degree() != Degree(e)) throw ParseError("modulus degree does not match e", kv["mod"].second);
    return make_fq_with_modulus(p, m.coeffs());
}

} // namespace dkf
