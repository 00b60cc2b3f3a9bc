#pragma once

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "base_algebra.hpp"
#include "bounds.hpp"
#include "drinfeld.hpp"
#include "errors.hpp"
#include "lattice.hpp"
#include "parse.hpp"
#include "ramification.hpp"
#include "tate.hpp"

namespace dkf::cli {

using Json = nlohmann::ordered_json;

enum ExitCode : int { kOk = 0, kVerdictFalse = 1, kInputError = 2, kPrecisionError = 3 };

// Carlitz levels followed by rank-2 Tate data; mirrors data/carlitz.txt and
// data/tate_rank2.txt.
inline const char* const kBuiltinCorpus = R"(# Carlitz torsion levels. place is the completion l, p^m the torsion level.
kind=module; q=2; phi_t=carlitz; place=t; p=t; m=1
kind=module; q=2; phi_t=carlitz; place=t; p=t; m=2
kind=module; q=2; phi_t=carlitz; place=t; p=t; m=3
kind=module; q=3; phi_t=carlitz; place=t; p=t; m=1
kind=module; q=3; phi_t=carlitz; place=t; p=t; m=2
kind=module; q=3; phi_t=carlitz; place=t+1; p=t+1; m=2
kind=module; q=4; phi_t=carlitz; place=t; p=t; m=2
kind=module; q=5; phi_t=carlitz; place=t; p=t; m=1
kind=module; q=2; phi_t=carlitz; place=t^2+t+1; p=t^2+t+1; m=2
# l and p coprime
kind=module; q=3; phi_t=carlitz; place=t; p=t+1; m=1
# Tate data (psi, gamma) at l; gamma given directly or as psi_{p^m}(s).
kind=tate; q=2; phi_t=carlitz; place=t; gamma=1/t+1; p=t; m=1; N=1
kind=tate; q=2; phi_t=carlitz; place=t; gamma=1/t^2+1; p=t; m=1; N=2
kind=tate; q=3; phi_t=carlitz; place=t; gamma=1/t+1; p=t; m=1
kind=tate; q=3; phi_t=carlitz; place=t; gamma=2/t^2+t; p=t+1; m=1
kind=tate; q=2; phi_t=carlitz; place=t; s=(t+1)/t^2; p=t; m=1
kind=tate; q=2; phi_t=carlitz; place=t; s=1/t; p=t+1; m=1
kind=tate; q=3; phi_t=carlitz; place=t; s=1/t; p=t+2; m=1
kind=tate; q=2; phi_t=carlitz; place=t; gamma=1/t+1; p=t^2+t+1; m=1
)";

struct RunConfig {
    std::string subcommand;
    std::uint32_t q = 2;
    std::string prime = "t";
    std::int64_t level = 1;
    std::int64_t precision = kDefaultPrecision;
    std::size_t tau_degree = 8;
    std::uint64_t seed = 0;
    std::string format = "json";
    std::string corpus = "builtin";
    std::uint64_t cap_factorial = kDefaultFactorialCap;
    std::uint64_t cap_enum = 4096;
    std::string phi = "carlitz";
    std::string a = "t";
    std::string lattice;
    std::string gamma;
    std::string s;
    std::string place;
    std::int64_t degree = 1;
    std::int64_t rank = 2;
    std::int64_t rank_cap = 3;
};

// An error tied to one flag or corpus line, reported with a caret under the
// offending position.
class AnnotatedError : public InputError {
public:
    AnnotatedError(const std::string& where, const std::string& text, const ParseError& e)
        : InputError(where + ": " + e.what() + "\n  " + text + "\n  " + std::string(std::min(e.position(), text.size()), ' ') + "^") {}
};

namespace detail {

template <class F>
auto annotated(const std::string& where, const std::string& text, F&& f) {
    try {
        return f();
    } catch (const ParseError& e) {
        throw AnnotatedError(where, text, e);
    }
}

inline std::string str(const Rational& x) { return to_string(x); }
inline std::string str(const BigInt& x) { return x.str(); }

inline std::string norm_str(const NormValue& n) {
    if (auto r = n.rational_value()) return to_string(*r);
    return to_string(n.base()) + "^(1/" + std::to_string(n.root_index()) + ")";
}

inline Json local_json(const LocalElem& x) {
    Json j;
    j["valuation"] = x.is_zero() ? Json(nullptr) : Json(x.valuation());
    j["precision"] = x.is_exact() ? Json("exact") : Json(x.precision());
    Json digits = Json::array();
    for (FqCode c : x.coefficients()) digits.push_back(x.local_field()->residue()->to_string(c));
    j["digits"] = std::move(digits);
    return j;
}

inline FieldPtr field_of(std::uint32_t q) { return make_fq_of_order(q); }

inline DrinfeldModule<RationalFn> module_of(const FieldPtr& F, const std::string& phi) {
    if (phi == "carlitz") return carlitz(F);
    OreF f = annotated("--phi", phi, [&] { return parse_ore(F, phi); });
    if (f.is_zero() || !(f.coeff(0) == RationalFn::t(F))) throw InputError("--phi: phi_t must have constant term t");
    return make_drinfeld(F, f.coeffs());
}

inline PolyA poly_flag(const FieldPtr& F, const char* name, const std::string& text) {
    return annotated(name, text, [&] { return parse_poly(F, text); });
}

inline PrimePlace prime_flag(const FieldPtr& F, const char* name, const std::string& text) {
    PolyA p = poly_flag(F, name, text);
    if (p.degree() < Degree(1) || !is_irreducible(p)) throw DomainError(std::string(name) + ": " + text + " is not irreducible");
    return PrimePlace::finite(p.monic());
}

inline Json newton_json(const NewtonPolygon& np) {
    Json segs = Json::array();
    for (const auto& s : np.segments) segs.push_back({{"slope", str(s.slope)}, {"length", s.length}, {"root_valuation", str(-s.slope)}});
    Json verts = Json::array();
    for (const auto& v : np.vertices) verts.push_back({v.x, str(v.y)});
    return {{"vertices", verts}, {"segments", segs}};
}

inline Json break_json(const BreakReport& r) {
    Json lower = Json::array(), upper = Json::array();
    for (auto b : r.lower_breaks) lower.push_back(b);
    for (const auto& b : r.upper_breaks) upper.push_back(str(b));
    return {{"lower_breaks", lower},         {"upper_breaks", upper},         {"maximal_break", str(r.maximal_break)},
            {"group_order", r.group_order}, {"tame_order", r.tame_order},    {"wild_order", r.wild_order},
            {"different", r.different}};
}

inline Json opt_str(const std::optional<Rational>& x) { return x ? Json(str(*x)) : Json(nullptr); }
inline Json opt_str(const std::optional<BigInt>& x) { return x ? Json(str(*x)) : Json(nullptr); }

inline Json report_json(const BoundReport& r) {
    Json j;
    j["kind"] = r.kind;
    j["q"] = r.q;
    j["place"] = r.place;
    j["prime"] = r.prime;
    j["m"] = r.m;
    j["rank"] = r.rank;
    j["v_pm"] = str(r.v_pm);
    j["v_a"] = r.v_a ? Json{{"value", str(r.v_a->value)}, {"provenance", r.v_a->provenance}} : Json(nullptr);
    j["e"] = {{"value", str(r.e.value)}, {"provenance", r.e.provenance}};
    j["prop1_bound"] = str(r.prop1_bound);
    j["prop1_bound_obvious_e"] = opt_str(r.prop1_bound_obvious);
    j["prop2_bound"] = opt_str(r.prop2_bound);
    j["N"] = opt_str(r.N);
    j["mythm_e_bound"] = opt_str(r.mythm_e);
    j["mythm_break_bound"] = opt_str(r.mythm_break);
    j["mythm_exponent"] = r.mythm_rule ? Json{{"value", r.mythm_rule->value}, {"rule", r.mythm_rule->ceiling ? "ceiling" : "exact"}} : Json(nullptr);
    j["gardeyn_different_bound"] = opt_str(r.gardeyn_bound);
    j["exact_break"] = r.exact_break ? Json(str(*r.exact_break)) : Json("not computed");
    j["breaks"] = r.breaks ? break_json(*r.breaks) : Json(nullptr);
    Json checks = Json::array();
    for (const auto& c : r.checks) checks.push_back({{"name", c.name}, {"detail", c.detail}, {"holds", c.holds}});
    j["checks"] = std::move(checks);
    j["verdict"] = r.verdict;
    return j;
}

inline void flatten(const Json& j, const std::string& prefix, std::ostream& out) {
    if (j.is_object()) {
        for (auto it = j.begin(); it != j.end(); ++it) flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
    } else if (j.is_array()) {
        if (j.empty()) out << prefix << " = []\n";
        for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "[" + std::to_string(i) + "]", out);
    } else {
        out << prefix << " = " << (j.is_string() ? j.get<std::string>() : j.dump()) << "\n";
    }
}

} // namespace detail

inline void emit(const Json& j, const RunConfig& cfg, std::ostream& out) {
    if (cfg.format == "table") detail::flatten(j, "", out);
    else out << j.dump(2) << "\n";
}

inline Json header(const RunConfig& cfg) {
    Json j;
    j["command"] = cfg.subcommand;
    j["seed"] = cfg.seed;
    return j;
}

inline Json cmd_irreducibles(const RunConfig& cfg) {
    FieldPtr F = detail::field_of(cfg.q);
    Json j = header(cfg);
    j["q"] = cfg.q;
    j["degree"] = cfg.degree;
    Json list = Json::array();
    for (const auto& f : enumerate_irreducibles(F, cfg.degree, cfg.cap_enum)) list.push_back(f.to_string());
    j["count"] = list.size();
    j["irreducibles"] = std::move(list);
    return j;
}

inline Json cmd_torsion(const RunConfig& cfg, bool newton_only) {
    FieldPtr F = detail::field_of(cfg.q);
    const auto phi = detail::module_of(F, cfg.phi);
    const PolyA a = detail::poly_flag(F, "--a", cfg.a);
    if (a.is_zero()) throw DomainError("--a must be nonzero");
    const auto tp = torsion_poly(phi, a);
    Json j = header(cfg);
    j["q"] = cfg.q;
    j["phi_t"] = phi.to_string();
    j["rank"] = phi.rank();
    j["a"] = a.to_string();
    if (!newton_only) {
        Json coeffs = Json::array();
        BigInt e = 1;
        for (const auto& c : tp.coeffs) {
            coeffs.push_back({{"exponent", e.str()}, {"coefficient", c.to_string()}});
            e *= cfg.q;
        }
        j["coefficients"] = std::move(coeffs);
        j["leading"] = tp.leading().to_string();
    }
    if (newton_only || !cfg.place.empty()) {
        const PrimePlace l = detail::prime_flag(F, "--place", cfg.place.empty() ? "t" : cfg.place);
        j["place"] = l.to_string();
        j["newton"] = detail::newton_json(torsion_newton_polygon(tp, l));
    }
    return j;
}

inline AmbientLattice random_lattice(const FieldPtr& F, std::int64_t rank, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    for (int attempt = 0; attempt < 1000; ++attempt) {
        std::vector<LatticeVector> cols(static_cast<std::size_t>(rank));
        for (auto& c : cols)
            for (std::int64_t i = 0; i < rank; ++i) {
                std::vector<FqCode> co(1 + rng() % 4);
                for (auto& x : co) x = static_cast<FqCode>(rng() % F->order());
                c.emplace_back(PolyA(F, std::move(co)));
            }
        try {
            return AmbientLattice(F, std::move(cols));
        } catch (const InputError&) {
        }
    }
    throw DomainError("could not draw an independent random lattice");
}

inline Json cmd_minima(const RunConfig& cfg) {
    FieldPtr F = detail::field_of(cfg.q);
    if (cfg.lattice.empty() && cfg.rank < 1) throw DomainError("--rank must be positive");
    const AmbientLattice L = cfg.lattice.empty() ? random_lattice(F, cfg.rank, cfg.seed)
                                                 : detail::annotated("--lattice", cfg.lattice, [&] { return parse_lattice(F, cfg.lattice); });
    const SuccessiveMinima sm = reduce_basis(L);
    Json j = header(cfg);
    j["q"] = cfg.q;
    j["rank"] = L.rank();
    j["dimension"] = L.dimension();
    j["source"] = cfg.lattice.empty() ? "random" : "given";
    Json ex = Json::array(), mins = Json::array(), basis = Json::array();
    for (auto e : sm.exponents) ex.push_back(e);
    for (const auto& m : sm.minima) mins.push_back(detail::norm_str(m));
    for (const auto& v : sm.basis) {
        Json col = Json::array();
        for (const auto& x : v) col.push_back(x.to_string());
        basis.push_back(std::move(col));
    }
    j["exponents"] = ex;
    j["minima"] = mins;
    j["covolume"] = detail::norm_str(covolume(sm.minima));
    j["reduced_basis"] = basis;
    j["smb_verified"] = is_smb(L, sm.basis);
    return j;
}

inline Json cmd_tate(const RunConfig& cfg) {
    FieldPtr F = detail::field_of(cfg.q);
    const auto psi = detail::module_of(F, cfg.phi);
    const PrimePlace l = detail::prime_flag(F, "--place", cfg.place.empty() ? "t" : cfg.place);
    std::optional<TateDatum> d;
    std::optional<PolyA> p;
    if (!cfg.s.empty()) {
        const RationalFn s = detail::annotated("--s", cfg.s, [&] { return parse_rational(F, cfg.s); });
        p = detail::prime_flag(F, "--prime", cfg.prime).generator();
        d = TateDatum::from_seed(psi, l, *p, cfg.level, s);
    } else {
        if (cfg.gamma.empty()) throw InputError("tate needs --gamma or --s");
        d = TateDatum(psi, l, detail::annotated("--gamma", cfg.gamma, [&] { return parse_rational(F, cfg.gamma); }));
    }
    const Reconstruction rec = reconstruct_phi(*d, cfg.precision, cfg.tau_degree);
    Json j = header(cfg);
    j["q"] = cfg.q;
    j["psi_t"] = psi.to_string();
    j["place"] = l.to_string();
    j["gamma"] = d->gamma().to_string();
    j["gamma_valuation"] = d->gamma_valuation();
    j["covolume"] = detail::norm_str(covolume_of_phi(*d));
    j["precision"] = cfg.precision;
    j["tau_degree"] = cfg.tau_degree;
    Json phi = Json::array();
    for (std::int64_t i = 0; i <= rec.phi.rank(); ++i) phi.push_back(detail::local_json(rec.phi.g(static_cast<std::size_t>(i)).truncated(rec.precision)));
    j["reconstruction"] = {{"rank", rec.phi.rank()},
                           {"phi_t", phi},
                           {"defect", rec.defect},
                           {"layers", rec.series.layers},
                           {"norm_bound", detail::norm_str(rec.series.norm_bound)}};
    const ReductionData rd = stable_model(rec.phi, l);
    j["stable_model"] = {{"type", ReductionData::type_name(rd.type)}, {"r_psi", rd.r_psi}, {"mu", detail::str(rd.mu)}};
    if (p) {
        const auto pf = product_formula_check(*d, *p, cfg.level, cfg.precision, cfg.tau_degree);
        j["product_formula"] = {{"prime", p->to_string()},
                                {"level", cfg.level},
                                {"representatives", pf.representatives},
                                {"valuation_floor", detail::str(pf.valuation_floor)},
                                {"floor_holds", pf.floor_holds},
                                {"lhs", detail::local_json(pf.lhs.truncated(cfg.precision))},
                                {"rhs", detail::local_json(pf.rhs.truncated(cfg.precision))},
                                {"defect", pf.defect}};
    } else {
        j["product_formula"] = "not computed (no seed)";
    }
    return j;
}

inline Json cmd_breaks(const RunConfig& cfg) {
    FieldPtr F = detail::field_of(cfg.q);
    const PrimePlace p = detail::prime_flag(F, "--prime", cfg.prime);
    const auto P = carlitz_local(F, p.generator(), cfg.level, cfg.cap_enum);
    const auto f = lower_filtration(P);
    const BreakReport r = break_report(f);
    Json j = header(cfg);
    j["q"] = cfg.q;
    j["prime"] = p.to_string();
    j["level"] = cfg.level;
    j["h"] = P.h.to_string();
    j["report"] = detail::break_json(r);
    j["maximal_break_by_sum"] = detail::str(maximal_break_by_sum(P));
    j["hasse_arf"] = hasse_arf_holds(r);
    Json iv = Json::array();
    for (std::size_t k = 0; k < P.order(); ++k)
        iv.push_back({{"sigma", P.labels[k]}, {"i", f.i_values[k] ? Json(*f.i_values[k]) : Json("inf")}});
    j["i_values"] = std::move(iv);
    return j;
}

inline std::string read_corpus(const std::string& name) {
    if (name == "builtin") return kBuiltinCorpus;
    std::ifstream in(name);
    if (!in) throw InputError("cannot open corpus file '" + name + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

struct CorpusCase {
    std::size_t line = 0;
    std::string text;
    CertInput input;
    CertificationProfile profile;
};

inline CorpusCase parse_corpus_line(const std::string& text, std::size_t lineno, const FieldPtr& header_field, std::int64_t rank_cap) {
    const std::string where = "line " + std::to_string(lineno);
    return detail::annotated(where, text, [&]() -> CorpusCase {
        KeyValueLine kv = parse_key_values(text);
        const std::string kind = kv.at("kind").value;
        CertificationProfile prof;
        prof.r = rank_cap;
        auto level = [&] {
            const std::int64_t m = kv.has("m") ? kv.integer("m") : 1;
            if (m < 1) throw ParseError("m must be positive", kv.at("m").offset);
            return m;
        };
        auto prime = [&](const char* key) {
            const auto& e = kv.at(key);
            PolyA p = parse_poly(header_field ? header_field : make_fq_of_order(static_cast<std::uint32_t>(kv.integer("q"))), e.value, e.offset);
            return p;
        };
        if (kind == "module") {
            ModuleSpec ms = parse_module_line(text, header_field);
            const auto& pe = kv.at("place");
            PolyA l = parse_poly(ms.field, pe.value, pe.offset);
            if (l.degree() < Degree(1) || !is_irreducible(l)) throw ParseError("place must be an irreducible polynomial", pe.offset);
            PolyA p = parse_poly(ms.field, kv.at("p").value, kv.at("p").offset);
            if (p.degree() < Degree(1) || !is_irreducible(p)) throw ParseError("p must be an irreducible polynomial", kv.at("p").offset);
            const PrimePlace place = PrimePlace::finite(l.monic());
            if (kv.has("N")) prof.N.emplace_back(place, kv.integer("N"));
            return {lineno, text, ModuleCase{ms.phi, place, p.monic(), level()}, prof};
        }
        if (kind == "tate") {
            TateSpec ts = parse_tate_line(text, header_field);
            PolyA p = ts.p ? *ts.p : prime("p");
            if (p.degree() < Degree(1) || !is_irreducible(p)) throw ParseError("p must be an irreducible polynomial", kv.at("p").offset);
            const std::int64_t m = ts.p ? ts.m : level();
            if (kv.has("N")) prof.N.emplace_back(ts.datum.place(), kv.integer("N"));
            return {lineno, text, TateCase{ts.datum, p.monic(), m}, prof};
        }
        throw ParseError("kind must be 'module' or 'tate'", kv.at("kind").offset);
    });
}

inline std::vector<CorpusCase> parse_corpus(const std::string& body, std::int64_t rank_cap) {
    std::vector<CorpusCase> out;
    FieldPtr header_field;
    std::istringstream in(body);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim_copy(line);
        if (t.empty() || t[0] == '#') continue;
        if (t.rfind("Fq:", 0) == 0) {
            header_field = detail::annotated("line " + std::to_string(lineno), t, [&] { return parse_fq_header(t); });
            continue;
        }
        out.push_back(parse_corpus_line(t, lineno, header_field, rank_cap));
    }
    if (out.empty()) throw InputError("corpus has no cases");
    return out;
}

inline Json cmd_certify(const RunConfig& cfg, bool& all_true) {
    const auto cases = parse_corpus(read_corpus(cfg.corpus), cfg.rank_cap);
    CertifyOptions opt;
    opt.cap_factorial = cfg.cap_factorial;
    opt.cap_enum = cfg.cap_enum;
    opt.precision = cfg.precision;
    opt.tau_degree = cfg.tau_degree;
    Json reports = Json::array();
    all_true = true;
    for (const auto& c : cases) {
        BoundReport r;
        try {
            r = certify(c.input, c.profile, opt);
        } catch (const PrecisionError& e) {
            throw PrecisionError("line " + std::to_string(c.line) + ": " + e.what());
        } catch (const InputError& e) {
            throw InputError("line " + std::to_string(c.line) + ": " + e.what());
        }
        Json j;
        j["line"] = c.line;
        j["input"] = c.text;
        j.update(detail::report_json(r));
        all_true = all_true && r.verdict;
        reports.push_back(std::move(j));
    }
    Json j = header(cfg);
    j["corpus"] = cfg.corpus;
    j["precision"] = cfg.precision;
    j["tau_degree"] = cfg.tau_degree;
    j["rank_cap"] = cfg.rank_cap;
    j["cases"] = reports.size();
    j["all_verdicts_true"] = all_true;
    j["reports"] = std::move(reports);
    return j;
}

inline void build_app(CLI::App& app, RunConfig& cfg) {
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--q", cfg.q, "field size q")->envname("DKF_Q")->check(CLI::Range(2U, 1U << 20));
    app.add_option("--prime", cfg.prime, "torsion prime p in t")->envname("DKF_PRIME");
    app.add_option("--level", cfg.level, "torsion level m")->envname("DKF_LEVEL")->check(CLI::PositiveNumber);
    app.add_option("--precision", cfg.precision, "absolute precision of local computations")->envname("DKF_PRECISION")->check(CLI::Range(4, 100000));
    app.add_option("--tau-degree", cfg.tau_degree, "tau-degree of the exponential series")->envname("DKF_TAU_DEGREE")->check(CLI::Range(1, 64));
    app.add_option("--seed", cfg.seed, "seed for random inputs")->envname("DKF_SEED");
    app.add_option("--format", cfg.format, "output format")->envname("DKF_FORMAT")->check(CLI::IsMember({"json", "table"}));
    app.add_option("--corpus", cfg.corpus, "corpus file or 'builtin'")->envname("DKF_CORPUS");
    app.add_option("--cap-factorial", cfg.cap_factorial, "largest n for n!")->envname("DKF_CAP_FACTORIAL")->check(CLI::PositiveNumber);
    app.add_option("--cap-enum", cfg.cap_enum, "largest enumeration or group size")->envname("DKF_CAP_ENUM")->check(CLI::PositiveNumber);
    app.add_option("--phi", cfg.phi, "phi_t as an Ore polynomial in tau, or 'carlitz'")->envname("DKF_PHI");
    app.add_option("--a", cfg.a, "element a of F_q[t]");
    app.add_option("--lattice", cfg.lattice, "lattice matrix, rows ';', entries ','");
    app.add_option("--gamma", cfg.gamma, "lattice generator gamma");
    app.add_option("--s", cfg.s, "seed s with gamma = psi_{p^m}(s)");
    app.add_option("--place", cfg.place, "completion place l")->envname("DKF_PLACE");
    app.add_option("--degree", cfg.degree, "degree for irreducibles")->check(CLI::PositiveNumber);
    app.add_option("--rank", cfg.rank, "rank of a random lattice")->check(CLI::Range(1, 6));
    app.add_option("--rank-cap", cfg.rank_cap, "profile rank cap r")->envname("DKF_RANK_CAP")->check(CLI::PositiveNumber);
    app.add_subcommand("irreducibles", "monic irreducibles of a degree");
    app.add_subcommand("torsion", "torsion polynomial phi_a");
    app.add_subcommand("newton", "Newton polygon of phi_a at a place");
    app.add_subcommand("minima", "successive minima of a lattice");
    app.add_subcommand("tate", "Tate reconstruction and product formula");
    app.add_subcommand("breaks", "ramification breaks of Carlitz torsion");
    app.add_subcommand("certify", "bound comparison over a corpus");
}

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    CLI::App app{"Drinfeld module torsion, Tate data and ramification bounds", "dkf"};
    build_app(app, cfg);
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kInputError;
    }
    cfg.subcommand = app.get_subcommands().front()->get_name();
    try {
        bool all_true = true;
        Json j;
        if (cfg.subcommand == "irreducibles") j = cmd_irreducibles(cfg);
        else if (cfg.subcommand == "torsion") j = cmd_torsion(cfg, false);
        else if (cfg.subcommand == "newton") j = cmd_torsion(cfg, true);
        else if (cfg.subcommand == "minima") j = cmd_minima(cfg);
        else if (cfg.subcommand == "tate") j = cmd_tate(cfg);
        else if (cfg.subcommand == "breaks") j = cmd_breaks(cfg);
        else j = cmd_certify(cfg, all_true);
        emit(j, cfg, out);
        return all_true ? kOk : kVerdictFalse;
    } catch (const PrecisionError& e) {
        err << "precision error: " << e.what() << "\n";
        return kPrecisionError;
    } catch (const InputError& e) {
        err << "error: " << e.what() << "\n";
        return kInputError;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kInputError;
    }
}

} // namespace dkf::cli
