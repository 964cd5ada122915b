#include "boxlab/verify.hpp"

#include <algorithm>
#include <array>
#include <iterator>
#include <cmath>
#include <cstdio>

#include "boxlab/box_json.hpp"
#include "boxlab/cost.hpp"
#include "boxlab/error.hpp"
#include "boxlab/measures.hpp"

namespace boxlab {

namespace {

constexpr std::array<std::pair<PropertyId, std::string_view>, 9> kPropertyNames = {{
    {PropertyId::S_LE_C, "S_LE_C"},
    {PropertyId::S_2I_GE_C, "S_2I_GE_C"},
    {PropertyId::I_GE_HALF_ETA, "I_GE_HALF_ETA"},
    {PropertyId::S_2U_GE_C, "S_2U_GE_C"},
    {PropertyId::U_GE_HALF_ETA, "U_GE_HALF_ETA"},
    {PropertyId::OW_BOUND, "OW_BOUND"},
    {PropertyId::NONUNIQUE_DECOMP, "NONUNIQUE_DECOMP"},
    {PropertyId::MIX_COST, "MIX_COST"},
    {PropertyId::MIX_SIGNAL, "MIX_SIGNAL"},
}};

}  // namespace

std::string_view to_string(PropertyId id) {
    for (const auto& [k, name] : kPropertyNames) {
        if (k == id) return name;
    }
    return "S_LE_C";
}

PropertyId parse_property_id(std::string_view text) {
    for (const auto& [k, name] : kPropertyNames) {
        if (name == text) return k;
    }
    throw Error(ErrorCode::ParseError, "unknown property '" + std::string(text) + "'");
}

std::string_view to_string(Domain domain) {
    switch (domain) {
        case Domain::oneway_slice: return "oneway_slice";
        case Domain::chsh16: return "chsh16";
        case Domain::general: return "general";
    }
    return "general";
}

Domain parse_domain(std::string_view text) {
    for (Domain d : {Domain::oneway_slice, Domain::chsh16, Domain::general}) {
        if (to_string(d) == text) return d;
    }
    throw Error(ErrorCode::ParseError, "unknown domain '" + std::string(text) + "'");
}

Domain domain_of(RandomFamily family) {
    switch (family) {
        case RandomFamily::chsh16_mixture: return Domain::chsh16;
        case RandomFamily::oneway_slice: return Domain::oneway_slice;
        case RandomFamily::general:
        case RandomFamily::no_signaling: return Domain::general;
    }
    return Domain::general;
}

std::string_view to_string(Strictness strictness) {
    return strictness == Strictness::asserted ? "asserted" : "exploratory";
}

std::string PropertyResult::label() const {
    std::string out(to_string(id));
    if (!variant.empty()) out += "[" + variant + "]";
    return out;
}

nlohmann::json result_to_json(const PropertyResult& r) {
    nlohmann::json j = {{"property", r.label()},
                        {"holds", r.holds},
                        {"slack", to_string(r.slack)},
                        {"strictness", to_string(r.strictness)}};
    if (r.chsh16_slack) j["chsh16_slack"] = to_string(*r.chsh16_slack);
    return j;
}

namespace {

PropertyResult inequality(PropertyId id, std::string variant, Rational slack, bool asserted) {
    PropertyResult r;
    r.id = id;
    r.variant = std::move(variant);
    r.holds = sgn(slack) >= 0;
    r.slack = std::move(slack);
    r.strictness = asserted ? Strictness::asserted : Strictness::exploratory;
    return r;
}

PropertyResult equality(PropertyId id, std::string variant, Rational difference) {
    PropertyResult r;
    r.id = id;
    r.variant = std::move(variant);
    r.holds = sgn(difference) == 0;
    r.slack = std::move(difference);
    r.strictness = Strictness::asserted;
    return r;
}

}  // namespace

std::vector<PropertyResult> check_box(const Box& box, Domain domain) {
    const CostReport cost = communication_cost(box, Basis::full256);
    std::optional<CostReport> cost16;
    if (domain == Domain::chsh16) cost16 = try_communication_cost(box, Basis::chsh16);
    const Rational& c = cost.c;
    const Rational& s = cost.s;
    const Rational& eta = cost.eta;
    const bool sliced = domain != Domain::general;

    std::vector<PropertyResult> out;
    out.push_back(inequality(PropertyId::S_LE_C, "", c - s, true));

    const std::array<std::pair<UnpredictabilityVariant, const char*>, 2> variants = {{
        {UnpredictabilityVariant::formula, "formula"},
        {UnpredictabilityVariant::per_party, "per_party"},
    }};
    std::array<Rational, 2> I;
    for (std::size_t k = 0; k < 2; ++k) I[k] = unpredictability(box, variants[k].first);
    for (std::size_t k = 0; k < 2; ++k) {
        out.push_back(inequality(PropertyId::S_2I_GE_C, variants[k].second, s + 2 * I[k] - c, sliced));
    }
    for (std::size_t k = 0; k < 2; ++k) {
        out.push_back(inequality(PropertyId::I_GE_HALF_ETA, variants[k].second, I[k] - eta / 2, sliced));
    }

    const UncertaintyReport u = uncertainty(box);
    const std::array<std::pair<Party, const char*>, 2> parties = {{{Party::A, "A"}, {Party::B, "B"}}};
    auto u_asserted = [domain](Party p) {
        return domain == Domain::chsh16 || (domain == Domain::oneway_slice && p == Party::A);
    };
    for (const auto& [party, name] : parties) {
        PropertyResult r = inequality(PropertyId::S_2U_GE_C, name, s + 2 * u.u(party) - c, u_asserted(party));
        if (cost16) r.chsh16_slack = s + 2 * u.u(party) - cost16->c;
        out.push_back(std::move(r));
    }
    for (const auto& [party, name] : parties) {
        PropertyResult r = inequality(PropertyId::U_GE_HALF_ETA, name, u.u(party) - eta / 2, u_asserted(party));
        if (cost16) r.chsh16_slack = u.u(party) - (cost16->c - s) / 2;
        out.push_back(std::move(r));
    }
    for (const auto& [party, name] : parties) {
        out.push_back(inequality(PropertyId::OW_BOUND, name, u.u(party) - c / 2, sgn(s) == 0));
    }
    return out;
}

std::vector<PropertyResult> check_mixture_identities(const Rational& p) {
    const Rational q = 1 - p;
    std::vector<PropertyResult> out;
    for (std::string_view second : {"d2_1", "d3_1"}) {
        const std::vector<WeightedBox> terms{{p, canonical("d0_1")}, {q, canonical(second)}};
        const Box box = mix(terms);
        const std::string variant = "d0_1+" + std::string(second);
        for (Basis basis : {Basis::chsh16, Basis::full256}) {
            PropertyResult r = equality(PropertyId::MIX_COST, variant + "," + std::string(to_string(basis)),
                                        communication_cost(box, basis).c - (p + q));
            out.push_back(std::move(r));
        }
        const Rational expected = second == "d2_1" ? max_of(p, q) : abs_value(p - q);
        out.push_back(equality(PropertyId::MIX_SIGNAL, variant, signal(box).s - expected));
    }
    return out;
}

PropertyResult check_nonunique(const Box& box, Basis basis) {
    PropertyResult r;
    r.id = PropertyId::NONUNIQUE_DECOMP;
    r.variant = std::string(to_string(basis));
    r.strictness = Strictness::exploratory;
    const auto pair = find_distinct_decompositions(box, basis);
    r.holds = pair.has_value();
    r.slack = pair ? Rational(pair->first.cost - pair->second.cost) : Rational(0);
    return r;
}

FindingsReport fuzz(const RandomSpec& spec, long count, const FuzzOptions& options) {
    if (count < 1) throw Error(ErrorCode::BadParameter, "sample count must be at least 1");
    FindingsReport report;
    report.family = spec;
    report.requested = count;
    Sampler sampler(spec.family, spec.seed);
    const Domain domain = domain_of(spec.family);
    std::map<std::string, std::size_t> kept;

    for (long i = 0; i < count; ++i) {
        LabeledBox item = options.sampler_hook ? options.sampler_hook(sampler) : LabeledBox{sampler.next(), domain};
        bool abort = false;
        for (auto& r : check_box(item.box, item.domain)) {
            const std::string key = r.label();
            PropertyCounts& counts = report.per_property[key];
            ++counts.checked;
            if (r.holds) {
                ++counts.held;
                continue;
            }
            ++counts.violated;
            if (r.strictness == Strictness::asserted) {
                report.asserted_violations.push_back({i, std::move(r), item.box, item.domain});
                abort = true;
            } else if (kept[key]++ < options.exploratory_witness_limit) {
                report.exploratory_violations.push_back({i, std::move(r), item.box, item.domain});
            }
        }
        report.samples = i + 1;
        if (abort) {
            report.aborted = true;
            break;
        }
    }
    return report;
}

nlohmann::json witness_to_json(const Witness& w) {
    nlohmann::json j = result_to_json(w.result);
    j["sample"] = w.sample;
    j["domain"] = to_string(w.domain);
    j["box"] = box_to_json(w.box);
    return j;
}

nlohmann::json findings_to_json(const FindingsReport& report) {
    nlohmann::json per = nlohmann::json::object();
    for (const auto& [key, c] : report.per_property) {
        per[key] = {{"checked", c.checked}, {"held", c.held}, {"violated", c.violated}};
    }
    nlohmann::json asserted = nlohmann::json::array();
    for (const auto& w : report.asserted_violations) asserted.push_back(witness_to_json(w));
    nlohmann::json exploratory = nlohmann::json::array();
    for (const auto& w : report.exploratory_violations) exploratory.push_back(witness_to_json(w));
    return {{"format", kFindingsFormat},
            {"family", family_to_json(report.family)},
            {"domain", to_string(domain_of(report.family.family))},
            {"seed", report.family.seed},
            {"requested", report.requested},
            {"samples", report.samples},
            {"aborted", report.aborted},
            {"passed", report.passed()},
            {"per_property", std::move(per)},
            {"asserted_violations", std::move(asserted)},
            {"exploratory_violations", std::move(exploratory)}};
}

bool ReproReport::passed() const {
    for (const auto& c : checks) {
        if (!c.passed) return false;
    }
    return true;
}

namespace {

class ReproBuilder {
public:
    void exact(const std::string& section, const std::string& name, const Rational& expected, const Rational& actual) {
        report_.checks.push_back({section, name, to_string(expected), to_string(actual), expected == actual});
    }
    void flag(const std::string& section, const std::string& name, const std::string& expected,
              const std::string& actual) {
        report_.checks.push_back({section, name, expected, actual, expected == actual});
    }
    void approx(const std::string& section, const std::string& name, double expected, double actual,
                double tolerance) {
        char e[64], a[64];
        std::snprintf(e, sizeof e, "%.12g +- %.1e", expected, tolerance);
        std::snprintf(a, sizeof a, "%.12g", actual);
        report_.checks.push_back({section, name, e, a, std::fabs(actual - expected) <= tolerance});
    }
    void discrepancy(Discrepancy d) { report_.discrepancies.push_back(std::move(d)); }

    ReproReport take() { return std::move(report_); }

private:
    ReproReport report_;
};

Box mixture(const Rational& p, std::string_view first, std::string_view second) {
    const std::vector<WeightedBox> terms{{p, canonical(first)}, {Rational(1 - p), canonical(second)}};
    return mix(terms);
}

std::string tenths(int k) { return to_string(ratio(k, 10)); }

std::string bool_text(bool b) { return b ? "true" : "false"; }

void tables(ReproBuilder& out) {
    for (const auto& s : named_strategies()) {
        const Box box = DeterministicBox::from_id(s.id).to_box();
        const bool one_bit = s.name.ends_with("_1");
        const std::string name(s.name);
        out.exact("tables", name + " CHSH", Rational(one_bit ? 4 : 2), chsh(box).standard());
        if (one_bit) {
            out.exact("tables", name + " s", Rational(1), signal(box).s);
            out.exact("tables", name + " cost_bits", Rational(1), Rational(DeterministicBox::from_id(s.id).cost_bits()));
        }
    }
}

void census(ReproBuilder& out) {
    std::map<Direction, int> counts;
    for (const auto& d : enumerate_deterministic()) ++counts[d.direction()];
    out.exact("census", "deterministic boxes", Rational(256), Rational(static_cast<long>(enumerate_deterministic().size())));
    out.exact("census", "local", Rational(16), Rational(counts[Direction::none]));
    out.exact("census", "one-way A to B", Rational(48), Rational(counts[Direction::AtoB]));
    out.exact("census", "one-way B to A", Rational(48), Rational(counts[Direction::BtoA]));
    out.exact("census", "two-way", Rational(144), Rational(counts[Direction::both]));
    const auto& vertices = no_signaling_vertices();
    out.exact("census", "no-signaling vertices", Rational(24), Rational(static_cast<long>(vertices.size())));
    const auto variants = pr_variants();
    out.exact("census", "PR variants", Rational(8), Rational(static_cast<long>(variants.size())));
    bool all_four = true;
    for (const auto& v : variants) all_four = all_four && chsh(v).lambda_max == 4;
    out.flag("census", "every PR variant reaches 4", "true", bool_text(all_four));
}

void mixtures(ReproBuilder& out) {
    for (int k = 0; k <= 10; ++k) {
        const Rational p = ratio(k, 10);
        const Rational q = 1 - p;
        const Box b02 = mixture(p, "d0_1", "d2_1");
        const Box b03 = mixture(p, "d0_1", "d3_1");
        const std::string at = " p=" + tenths(k);
        out.exact("mixtures", "C(d0_1,d2_1; chsh16)" + at, p + q, communication_cost(b02, Basis::chsh16).c);
        out.exact("mixtures", "C(d0_1,d2_1; full256)" + at, p + q, communication_cost(b02, Basis::full256).c);
        out.exact("mixtures", "s(d0_1,d2_1)" + at, max_of(p, q), signal(b02).s);
        out.exact("mixtures", "C(d0_1,d3_1; chsh16)" + at, p + q, communication_cost(b03, Basis::chsh16).c);
        out.exact("mixtures", "C(d0_1,d3_1; full256)" + at, p + q, communication_cost(b03, Basis::full256).c);
        out.exact("mixtures", "s(d0_1,d3_1)" + at, abs_value(p - q), signal(b03).s);
    }
}

void pr_panel(ReproBuilder& out) {
    const Box pr = canonical("pr");
    const CostReport cost = communication_cost(pr);
    const Rational i_formula = unpredictability(pr, UnpredictabilityVariant::formula);
    const Rational i_party = unpredictability(pr, UnpredictabilityVariant::per_party);
    const UncertaintyReport u = uncertainty(pr);
    out.exact("pr_panel", "s", Rational(0), cost.s);
    out.exact("pr_panel", "C", Rational(1), cost.c);
    out.exact("pr_panel", "C (chsh16)", Rational(1), communication_cost(pr, Basis::chsh16).c);
    out.exact("pr_panel", "eta", Rational(1), cost.eta);
    out.exact("pr_panel", "I (formula)", Rational(1, 2), i_formula);
    out.exact("pr_panel", "I (per_party)", Rational(1, 2), i_party);
    out.exact("pr_panel", "I - eta/2 (formula)", Rational(0), i_formula - cost.eta / 2);
    out.exact("pr_panel", "I - eta/2 (per_party)", Rational(0), i_party - cost.eta / 2);
    for (Party party : {Party::A, Party::B}) {
        const std::string p = party == Party::A ? "A" : "B";
        for (int x = 0; x < 2; ++x) {
            out.exact("pr_panel", "delta_" + p + " setting " + std::to_string(x), Rational(1, 2), u.delta(party, x));
        }
        out.flag("pr_panel", "U_" + p + " >= eta/2", "true", bool_text(u.u(party) >= cost.eta / 2));
        out.flag("pr_panel", "U_" + p + " >= C/2", "true", bool_text(u.u(party) >= cost.c / 2));
        if (u.u(party) != Rational(1, 2)) {
            out.discrepancy({"PR uncertainty U_" + p, "1/2", to_string(u.u(party)),
                             "U is the sum of the two per-setting uncertainties, each 1/2 for uniform marginals; "
                             "1/2 is the value of the bound U >= eta/2, not of U"});
        }
    }
}

void isotropic_sweep(ReproBuilder& out) {
    for (int k = 0; k <= 10; ++k) {
        const Rational v = ratio(k, 10);
        const CostReport cost = communication_cost(isotropic(v));
        Rational expected = 2 * v - 1;
        if (sgn(expected) < 0) expected = 0;
        out.exact("isotropic", "C v=" + tenths(k), expected, cost.c);
        out.exact("isotropic", "lower bound tight v=" + tenths(k), cost.c, cost.lower_bound);
    }
}

void tsirelson(ReproBuilder& out) {
    const Box box = quantum_box(tsirelson_angles(), 1000000);
    out.approx("tsirelson", "lambda_max", 2 * std::sqrt(2.0), to_double(chsh(box).lambda_max), 4e-6);
    out.approx("tsirelson", "C", std::sqrt(2.0) - 1, to_double(communication_cost(box).c), 3e-6);
}

void nonuniqueness(ReproBuilder& out) {
    const auto pair = find_distinct_decompositions(Box::uniform(), Basis::full256);
    out.flag("nonuniqueness", "noise has two optimal decompositions", "true", bool_text(pair.has_value()));
    if (pair) {
        const auto first = pair->first.support();
        const auto second = pair->second.support();
        std::vector<int> common;
        std::set_intersection(first.begin(), first.end(), second.begin(), second.end(), std::back_inserter(common));
        out.flag("nonuniqueness", "supports disjoint", "true", bool_text(common.empty()));
        out.exact("nonuniqueness", "first support size", Rational(4), Rational(static_cast<long>(first.size())));
        out.exact("nonuniqueness", "second support size", Rational(4), Rational(static_cast<long>(second.size())));
        out.exact("nonuniqueness", "first cost", Rational(0), pair->first.cost);
        out.exact("nonuniqueness", "second cost", Rational(0), pair->second.cost);
        out.flag("nonuniqueness", "first reconstructs noise", "true",
                 bool_text(pair->first.reconstruct() == Box::uniform()));
        out.flag("nonuniqueness", "second reconstructs noise", "true",
                 bool_text(pair->second.reconstruct() == Box::uniform()));
    }

    const Rational half(1, 2);
    const std::vector<WeightedBox> left{{half, canonical("d0_0")}, {half, canonical("d7_0")}};
    const std::vector<WeightedBox> right{{half, canonical("d3_0")}, {half, canonical("d4_0")}};
    const Box l = mix(left);
    const Box r = mix(right);
    std::string first_mismatch;
    for (int s = 0; s < kSettings && first_mismatch.empty(); ++s) {
        for (int o = 0; o < kOutcomes; ++o) {
            if (l.at(s, o) != r.at(s, o)) {
                first_mismatch = "(a,b)=(" + std::to_string(s >> 1) + "," + std::to_string(s & 1) + ")";
                break;
            }
        }
    }
    if (!first_mismatch.empty()) {
        out.discrepancy({"1/2(d0_0 + d7_0) = 1/2(d3_0 + d4_0)", "equal boxes",
                         "first differs at input " + first_mismatch,
                         "the left side puts its weight on outcomes 00 and 11 there, the right side on 10 and 01; "
                         "non-uniqueness itself is confirmed by the noise decompositions"});
    }
}

void equality_cases(ReproBuilder& out) {
    const std::vector<WeightedBox> terms{{Rational(2, 5), canonical("d0_1")},
                                         {Rational(2, 5), canonical("d3_1")},
                                         {Rational(1, 5), canonical("d0_0")}};
    const Box box = mix(terms);
    const CostReport cost = communication_cost(box);
    out.exact("equality_cases", "I - eta/2 at 2/5 d0_1 + 2/5 d3_1 + 1/5 d0_0", Rational(0),
              unpredictability(box) - cost.eta / 2);
    const Box edge = canonical("d2_1");
    const CostReport edge_cost = communication_cost(edge);
    out.exact("equality_cases", "s + 2U_A - C at d2_1", Rational(0),
              edge_cost.s + 2 * uncertainty(edge).u_A - edge_cost.c);
}

}  // namespace

ReproReport reproduce_reference() {
    ReproBuilder out;
    tables(out);
    census(out);
    mixtures(out);
    pr_panel(out);
    isotropic_sweep(out);
    tsirelson(out);
    nonuniqueness(out);
    equality_cases(out);
    return out.take();
}

nlohmann::json repro_to_json(const ReproReport& report) {
    nlohmann::json checks = nlohmann::json::array();
    for (const auto& c : report.checks) {
        checks.push_back({{"section", c.section},
                          {"name", c.name},
                          {"expected", c.expected},
                          {"actual", c.actual},
                          {"passed", c.passed}});
    }
    nlohmann::json discrepancies = nlohmann::json::array();
    for (const auto& d : report.discrepancies) {
        discrepancies.push_back({{"name", d.name}, {"stated", d.stated}, {"computed", d.computed}, {"note", d.note}});
    }
    return {{"format", "repro-v1"},
            {"passed", report.passed()},
            {"checks", std::move(checks)},
            {"discrepancies", std::move(discrepancies)}};
}

}  // namespace boxlab
