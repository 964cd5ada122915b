#include "boxlab/generators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <type_traits>
#include <numbers>

#include "boxlab/error.hpp"

namespace boxlab {

namespace {

Box pr_box() {
    const std::vector<WeightedBox> terms{
        {Rational(1, 2), DeterministicBox::from_id(strategy_id("d0_1")).to_box()},
        {Rational(1, 2), DeterministicBox::from_id(strategy_id("d3_1")).to_box()},
    };
    return mix(terms);
}

}  // namespace

Box canonical(std::string_view name) {
    if (name == "pr") return pr_box();
    if (name == "noise") return Box::uniform();
    return DeterministicBox::from_id(strategy_id(name)).to_box();
}

std::vector<std::string> canonical_names() {
    std::vector<std::string> out;
    for (const auto& s : named_strategies()) out.emplace_back(s.name);
    out.emplace_back("pr");
    out.emplace_back("noise");
    return out;
}

Box isotropic(const Rational& v) {
    if (sgn(v) < 0 || v > 1) throw Error(ErrorCode::BadParameter, "visibility must lie in [0,1], got " + to_string(v));
    const std::vector<WeightedBox> terms{{v, pr_box()}, {Rational(1 - v), Box::uniform()}};
    return mix(terms);
}

Angles tsirelson_angles() { return {0.0, std::numbers::pi / 2, std::numbers::pi / 4, -std::numbers::pi / 4}; }

Rational nearest_rational(double x, long max_den) {
    if (max_den < 1) throw Error(ErrorCode::BadParameter, "denominator bound must be at least 1");
    if (!std::isfinite(x)) throw Error(ErrorCode::BadParameter, "cannot rationalize a non-finite value");
    const Rational target(x);
    const mpz_class bound(max_den);
    if (target.get_den() <= bound) return target;

    // Continued-fraction convergents, then the best semiconvergent.
    mpz_class p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    mpz_class n = target.get_num(), d = target.get_den();
    for (;;) {
        mpz_class a;
        mpz_fdiv_q(a.get_mpz_t(), n.get_mpz_t(), d.get_mpz_t());
        mpz_class q2 = q0 + a * q1;
        if (q2 > bound) break;
        mpz_class p2 = p0 + a * p1;
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
        mpz_class r = n - a * d;
        n = d;
        d = r;
    }
    mpz_class k;
    mpz_fdiv_q(k.get_mpz_t(), mpz_class(bound - q0).get_mpz_t(), q1.get_mpz_t());
    Rational semi(mpz_class(p0 + k * p1), mpz_class(q0 + k * q1));
    Rational conv(p1, q1);
    semi.canonicalize();
    conv.canonicalize();
    const Rational e_semi = abs_value(semi - target);
    const Rational e_conv = abs_value(conv - target);
    if (e_conv < e_semi) return conv;
    if (e_semi < e_conv) return semi;
    return conv.get_den() <= semi.get_den() ? conv : semi;
}

Box quantum_box(const Angles& angles, long max_den) {
    if (max_den < 1) throw Error(ErrorCode::BadParameter, "denominator bound must be at least 1");
    Box::Entries e;
    for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
            Rational E = nearest_rational(std::cos(angles[a] - angles[2 + b]), max_den);
            if (E > 1) E = 1;
            if (E < -1) E = -1;
            for (int A = 0; A < 2; ++A) {
                for (int B = 0; B < 2; ++B) {
                    e[entry_index(a, b, A, B)] = (A == B ? Rational(1 + E) : Rational(1 - E)) / 4;
                }
            }
        }
    }
    return Box::from_table(std::move(e));
}

std::string_view to_string(RandomFamily family) {
    switch (family) {
        case RandomFamily::general: return "general";
        case RandomFamily::no_signaling: return "no_signaling";
        case RandomFamily::chsh16_mixture: return "chsh16_mixture";
        case RandomFamily::oneway_slice: return "oneway_slice";
    }
    return "general";
}

RandomFamily parse_random_family(std::string_view text) {
    for (RandomFamily f : {RandomFamily::general, RandomFamily::no_signaling, RandomFamily::chsh16_mixture,
                           RandomFamily::oneway_slice}) {
        if (text == to_string(f)) return f;
    }
    throw Error(ErrorCode::BadParameter, "unknown random family '" + std::string(text) + "'");
}

std::vector<Box> pr_variants() {
    const Box pr = pr_box();
    std::vector<Box> out;
    for (const auto& r : Relabeling::all()) {
        Box candidate = relabel(pr, r);
        if (std::find(out.begin(), out.end(), candidate) == out.end()) out.push_back(std::move(candidate));
    }
    return out;
}

const std::vector<Box>& no_signaling_vertices() {
    static const std::vector<Box> vertices = [] {
        std::vector<Box> out;
        for (const auto& d : enumerate_deterministic()) {
            if (d.cost_bits() == 0) out.push_back(d.to_box());
        }
        for (auto& b : pr_variants()) out.push_back(std::move(b));
        return out;
    }();
    return vertices;
}

std::vector<int> chsh16_generator_ids() {
    std::vector<int> out;
    for (const auto& s : named_strategies()) out.push_back(s.id);
    return out;
}

std::vector<int> oneway_generator_ids() {
    std::vector<int> out;
    for (std::string_view name : {"d0_0", "d1_0", "d2_0", "d3_0", "d4_0", "d5_0", "d6_0", "d7_0", "d0_1", "d1_1",
                                  "d2_1", "d3_1"}) {
        out.push_back(strategy_id(name));
    }
    return out;
}

namespace {

std::vector<Box> boxes_of(const std::vector<int>& ids) {
    std::vector<Box> out;
    for (int id : ids) out.push_back(DeterministicBox::from_id(id).to_box());
    return out;
}

const std::vector<Box>& chsh16_generators() {
    static const std::vector<Box> g = boxes_of(chsh16_generator_ids());
    return g;
}

const std::vector<Box>& oneway_generators() {
    static const std::vector<Box> g = boxes_of(oneway_generator_ids());
    return g;
}

}  // namespace

Sampler::Sampler(RandomFamily family, std::uint64_t seed) : family_(family), rng_(seed) {}

// Uniform on [lo, hi] by rejection, so streams do not depend on the
// standard library's distribution implementation.
std::uint64_t Sampler::draw(std::uint64_t lo, std::uint64_t hi) {
    const std::uint64_t span = hi - lo + 1;
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % span;
    for (;;) {
        const std::uint64_t v = rng_();
        if (v < limit) return lo + v % span;
    }
}

Box Sampler::next_general() {
    Box::Entries e;
    for (int s = 0; s < kSettings; ++s) {
        std::array<std::uint64_t, kOutcomes> raw{};
        std::uint64_t total = 0;
        while (total == 0) {
            total = 0;
            for (auto& r : raw) {
                r = draw(0, kSampleRange);
                total += r;
            }
        }
        for (int o = 0; o < kOutcomes; ++o) {
            Rational q{mpz_class(static_cast<unsigned long>(raw[o])), mpz_class(static_cast<unsigned long>(total))};
            q.canonicalize();
            e[kOutcomes * s + o] = std::move(q);
        }
    }
    return Box::from_table(std::move(e));
}

Box Sampler::next_mixture(const std::vector<Box>& generators) {
    const std::size_t n = generators.size();
    const std::size_t k = draw(1, n);
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    for (std::size_t i = 0; i < k; ++i) std::swap(order[i], order[draw(i, n - 1)]);

    std::vector<std::uint64_t> raw(k);
    std::uint64_t total = 0;
    for (auto& w : raw) {
        w = draw(1, kSampleRange);
        total += w;
    }
    std::vector<WeightedBox> terms;
    terms.reserve(k);
    for (std::size_t i = 0; i < k; ++i) {
        Rational w{mpz_class(static_cast<unsigned long>(raw[i])), mpz_class(static_cast<unsigned long>(total))};
        w.canonicalize();
        terms.push_back({std::move(w), generators[order[i]]});
    }
    return mix(terms);
}

Box Sampler::next() {
    switch (family_) {
        case RandomFamily::general: return next_general();
        case RandomFamily::no_signaling: return next_mixture(no_signaling_vertices());
        case RandomFamily::chsh16_mixture: return next_mixture(chsh16_generators());
        case RandomFamily::oneway_slice: return next_mixture(oneway_generators());
    }
    return next_general();
}

std::vector<Box> sample(RandomFamily family, std::uint64_t seed, long count) {
    if (count < 1) throw Error(ErrorCode::BadParameter, "sample count must be at least 1");
    Sampler sampler(family, seed);
    std::vector<Box> out;
    out.reserve(static_cast<std::size_t>(count));
    for (long i = 0; i < count; ++i) out.push_back(sampler.next());
    return out;
}

namespace {

const nlohmann::json& require(const nlohmann::json& doc, const char* key) {
    if (!doc.contains(key)) throw Error(ErrorCode::ParseError, std::string("family spec is missing \"") + key + "\"");
    return doc[key];
}

std::string require_string(const nlohmann::json& doc, const char* key) {
    const auto& v = require(doc, key);
    if (!v.is_string()) throw Error(ErrorCode::ParseError, std::string("\"") + key + "\" must be a string");
    return v.get<std::string>();
}

}  // namespace

nlohmann::json family_to_json(const FamilySpec& spec) {
    return std::visit(
        [](const auto& s) -> nlohmann::json {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, CanonicalSpec>) {
                return {{"kind", "canonical"}, {"name", s.name}};
            } else if constexpr (std::is_same_v<S, IsotropicSpec>) {
                return {{"kind", "isotropic"}, {"v", to_string(s.v)}};
            } else if constexpr (std::is_same_v<S, QuantumSpec>) {
                return {{"kind", "quantum"},
                        {"angles", {s.angles[0], s.angles[1], s.angles[2], s.angles[3]}},
                        {"denom", s.max_den}};
            } else {
                return {{"kind", "random"}, {"sub", to_string(s.family)}, {"seed", s.seed}};
            }
        },
        spec);
}

FamilySpec family_from_json(const nlohmann::json& doc) {
    if (!doc.is_object()) throw Error(ErrorCode::ParseError, "family spec must be an object");
    const std::string kind = require_string(doc, "kind");
    if (kind == "canonical") {
        CanonicalSpec s{require_string(doc, "name")};
        canonical(s.name);
        return s;
    }
    if (kind == "isotropic") {
        IsotropicSpec s{parse_rational(require_string(doc, "v"))};
        if (sgn(s.v) < 0 || s.v > 1) throw Error(ErrorCode::BadParameter, "visibility must lie in [0,1]");
        return s;
    }
    if (kind == "quantum") {
        QuantumSpec s;
        const auto& angles = require(doc, "angles");
        if (angles.is_string() && angles.get<std::string>() == "tsirelson") {
            s.angles = tsirelson_angles();
        } else if (angles.is_array() && angles.size() == 4 &&
                   std::all_of(angles.begin(), angles.end(), [](const auto& a) { return a.is_number(); })) {
            for (std::size_t i = 0; i < 4; ++i) s.angles[i] = angles[i].template get<double>();
        } else {
            throw Error(ErrorCode::ParseError, "\"angles\" must be four numbers or \"tsirelson\"");
        }
        if (doc.contains("denom")) {
            if (!doc["denom"].is_number_integer()) throw Error(ErrorCode::ParseError, "\"denom\" must be an integer");
            s.max_den = doc["denom"].get<long>();
        }
        if (s.max_den < 1) throw Error(ErrorCode::BadParameter, "denominator bound must be at least 1");
        return s;
    }
    if (kind == "random") {
        RandomSpec s;
        s.family = parse_random_family(require_string(doc, "sub"));
        const auto& seed = require(doc, "seed");
        if (!seed.is_number_unsigned() && !(seed.is_number_integer() && seed.get<long long>() >= 0)) {
            throw Error(ErrorCode::ParseError, "\"seed\" must be a nonnegative integer");
        }
        s.seed = seed.get<std::uint64_t>();
        return s;
    }
    throw Error(ErrorCode::ParseError, "unknown family kind '" + kind + "'");
}

std::vector<Box> generate(const FamilySpec& spec, long count) {
    if (count < 1) throw Error(ErrorCode::BadParameter, "count must be at least 1");
    return std::visit(
        [count](const auto& s) -> std::vector<Box> {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, CanonicalSpec>) {
                return {canonical(s.name)};
            } else if constexpr (std::is_same_v<S, IsotropicSpec>) {
                return {isotropic(s.v)};
            } else if constexpr (std::is_same_v<S, QuantumSpec>) {
                return {quantum_box(s.angles, s.max_den)};
            } else {
                return sample(s.family, s.seed, count);
            }
        },
        spec);
}

}  // namespace boxlab
