#include "boxlab/cli.hpp"

#include <algorithm>
#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "boxlab/box_json.hpp"
#include "boxlab/error.hpp"
#include "boxlab/generators.hpp"
#include "boxlab/verify.hpp"

namespace boxlab {

AnalysisReport analyze(const Box& box, std::optional<int> dim) {
    AnalysisReport r{box,
                     chsh(box),
                     signal(box),
                     communication_cost(box, Basis::full256),
                     try_communication_cost(box, Basis::chsh16),
                     unpredictability(box, UnpredictabilityVariant::formula),
                     unpredictability(box, UnpredictabilityVariant::per_party),
                     uncertainty(box),
                     {}};
    r.flags.no_signaling = is_no_signaling(box);
    r.flags.lhv = lhv_admissible(box);
    r.flags.weakly_nonclassical = sgn(r.unpredictability_formula) > 0;
    r.flags.strongly_nonclassical = sgn(r.cost_full.eta) > 0;
    if (dim) {
        if (*dim < 2) throw Error(ErrorCode::BadDimension, "dimension must be at least 2, got " + std::to_string(*dim));
        r.flags.dim = dim;
        r.flags.eta_star = to_double(r.cost_full.c) - std::log2(static_cast<double>(*dim));
    }
    return r;
}

std::string format_eta_star(double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", value == 0.0 ? 0.0 : value);
    return buf;
}

namespace {

nlohmann::json cost_to_json(const CostReport& c) {
    return {{"c", to_string(c.c)},
            {"eta", to_string(c.eta)},
            {"s", to_string(c.s)},
            {"lower_bound", to_string(c.lower_bound)},
            {"decomposition", decomposition_to_json(c.decomposition)}};
}

nlohmann::json pair_json(const std::array<Rational, 2>& v) { return {to_string(v[0]), to_string(v[1])}; }

}  // namespace

nlohmann::json analysis_to_json(const AnalysisReport& r) {
    nlohmann::json values = nlohmann::json::array();
    for (const auto& v : r.chsh.values) values.push_back(to_string(v));
    nlohmann::json flags = {{"no_signaling", r.flags.no_signaling},
                            {"lhv", r.flags.lhv},
                            {"weakly_nonclassical", r.flags.weakly_nonclassical},
                            {"strongly_nonclassical", r.flags.strongly_nonclassical},
                            {"contextual", "not-computable"}};
    if (r.flags.eta_star) {
        flags["eta_star"] = {{"value", format_eta_star(*r.flags.eta_star)}, {"dim", *r.flags.dim}, {"approximate", true}};
    }
    return {{"box", box_to_json(r.box)},
            {"chsh", {{"values", std::move(values)}, {"lambda_max", to_string(r.chsh.lambda_max)}, {"standard", to_string(r.chsh.standard())}}},
            {"signal", {{"s_AtoB", to_string(r.signal.s_AtoB)}, {"s_BtoA", to_string(r.signal.s_BtoA)}, {"s", to_string(r.signal.s)}}},
            {"cost_full256", cost_to_json(r.cost_full)},
            {"cost_chsh16", r.cost_chsh16 ? cost_to_json(*r.cost_chsh16) : nlohmann::json{{"status", "not-in-hull"}}},
            {"unpredictability", {{"formula", to_string(r.unpredictability_formula)}, {"per_party", to_string(r.unpredictability_per_party)}}},
            {"uncertainty",
             {{"delta_A", pair_json(r.uncertainty.delta_A)},
              {"delta_B", pair_json(r.uncertainty.delta_B)},
              {"u_A", to_string(r.uncertainty.u_A)},
              {"u_B", to_string(r.uncertainty.u_B)}}},
            {"flags", std::move(flags)}};
}

namespace {

void line(std::ostringstream& os, const std::string& name, const Rational& v) {
    os << "  " << name << std::string(name.size() < 22 ? 22 - name.size() : 1, ' ') << to_string(v) << "  ("
       << to_decimal(v) << ")\n";
}

}  // namespace

std::string analysis_to_text(const AnalysisReport& r) {
    std::ostringstream os;
    os << "CHSH\n";
    for (int k = 0; k < 4; ++k) line(os, "value[" + std::to_string(k) + "]", r.chsh.values[k]);
    line(os, "lambda_max", r.chsh.lambda_max);
    os << "signal\n";
    line(os, "s_AtoB", r.signal.s_AtoB);
    line(os, "s_BtoA", r.signal.s_BtoA);
    line(os, "s", r.signal.s);
    os << "cost (full256)\n";
    line(os, "C", r.cost_full.c);
    line(os, "eta", r.cost_full.eta);
    line(os, "lower bound", r.cost_full.lower_bound);
    os << "  support               ";
    for (int id : r.cost_full.decomposition.support()) os << ' ' << id;
    os << '\n';
    os << "cost (chsh16)\n";
    if (r.cost_chsh16) {
        line(os, "C", r.cost_chsh16->c);
        line(os, "eta", r.cost_chsh16->eta);
    } else {
        os << "  not in hull\n";
    }
    os << "unpredictability\n";
    line(os, "I (formula)", r.unpredictability_formula);
    line(os, "I (per_party)", r.unpredictability_per_party);
    os << "uncertainty\n";
    for (int x = 0; x < 2; ++x) line(os, "delta_A[" + std::to_string(x) + "]", r.uncertainty.delta_A[x]);
    for (int x = 0; x < 2; ++x) line(os, "delta_B[" + std::to_string(x) + "]", r.uncertainty.delta_B[x]);
    line(os, "U_A", r.uncertainty.u_A);
    line(os, "U_B", r.uncertainty.u_B);
    os << "flags\n";
    os << "  no_signaling          " << (r.flags.no_signaling ? "true" : "false") << '\n';
    os << "  lhv                   " << (r.flags.lhv ? "true" : "false") << '\n';
    os << "  weakly_nonclassical   " << (r.flags.weakly_nonclassical ? "true" : "false") << '\n';
    os << "  strongly_nonclassical " << (r.flags.strongly_nonclassical ? "true" : "false") << '\n';
    os << "  contextual            not-computable\n";
    if (r.flags.eta_star) {
        std::string key = "eta_star (d=" + std::to_string(*r.flags.dim) + ")";
        key.resize(std::max<std::size_t>(key.size() + 1, 22), ' ');
        os << "  " << key << format_eta_star(*r.flags.eta_star) << " (approximate)\n";
    }
    return os.str();
}

std::string_view to_string(SweepFamily family) {
    switch (family) {
        case SweepFamily::isotropic: return "isotropic";
        case SweepFamily::mix_d0_1_d2_1: return "mix02";
        case SweepFamily::mix_d0_1_d3_1: return "mix03";
    }
    return "isotropic";
}

SweepFamily parse_sweep_family(std::string_view text) {
    for (SweepFamily f : {SweepFamily::isotropic, SweepFamily::mix_d0_1_d2_1, SweepFamily::mix_d0_1_d3_1}) {
        if (text == to_string(f)) return f;
    }
    throw Error(ErrorCode::BadParameter, "unknown sweep family '" + std::string(text) + "'");
}

Box sweep_box(SweepFamily family, const Rational& t) {
    if (family == SweepFamily::isotropic) return isotropic(t);
    const std::vector<WeightedBox> terms{
        {t, canonical("d0_1")},
        {Rational(1 - t), canonical(family == SweepFamily::mix_d0_1_d2_1 ? "d2_1" : "d3_1")}};
    return mix(terms);
}

std::string sweep_csv(SweepFamily family, int steps) {
    if (steps < 1) throw Error(ErrorCode::BadParameter, "steps must be at least 1");
    static constexpr const char* kColumns[] = {"param", "lambda_max", "s", "C", "eta", "I", "U_A", "U_B"};
    std::ostringstream os;
    for (const char* c : kColumns) os << c << ',';
    for (std::size_t k = 0; k < std::size(kColumns); ++k) os << kColumns[k] << "_exact" << (k + 1 < std::size(kColumns) ? "," : "\n");
    for (int k = 0; k <= steps; ++k) {
        const Rational t = ratio(k, steps);
        const Box box = sweep_box(family, t);
        const CostReport cost = communication_cost(box);
        const UncertaintyReport u = uncertainty(box);
        const std::array<Rational, 8> values = {t, chsh(box).lambda_max, cost.s, cost.c, cost.eta,
                                                unpredictability(box), u.u_A, u.u_B};
        for (const auto& v : values) os << to_decimal(v) << ',';
        for (std::size_t i = 0; i < values.size(); ++i) os << to_string(values[i]) << (i + 1 < values.size() ? "," : "\n");
    }
    return os.str();
}

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A box named on the command line: a box-v1 file, a canonical name, or an
// isotropic visibility.
struct BoxInput {
    std::string path;
    std::string canonical_name;
    std::string visibility;

    void attach(CLI::App* app) {
        app->add_option("box", path, "box-v1 JSON file");
        app->add_option("--canonical", canonical_name, "named box (d0_0..d7_1, pr, noise)");
        app->add_option("--isotropic", visibility, "isotropic box with visibility v (num/den)");
    }

    Box load() const {
        const int given = !path.empty() + !canonical_name.empty() + !visibility.empty();
        if (given != 1) throw UsageError("give exactly one of a box file, --canonical or --isotropic");
        if (!canonical_name.empty()) return canonical(canonical_name);
        if (!visibility.empty()) return isotropic(parse_rational(visibility));
        std::ifstream in(path);
        if (!in) throw UsageError("cannot read '" + path + "'");
        std::ostringstream text;
        text << in.rdbuf();
        return parse_box(text.str());
    }
};

void write_file(const std::string& path, const std::string& content) {
    const std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    if (!out) throw UsageError("cannot write '" + path + "'");
    out << content;
    if (!out) throw UsageError("failed writing '" + path + "'");
}

std::string pretty(const nlohmann::json& j) { return j.dump(2) + "\n"; }

Angles parse_angles(const std::string& text) {
    if (text == "tsirelson") return tsirelson_angles();
    Angles angles{};
    std::stringstream ss(text);
    std::string item;
    std::size_t k = 0;
    while (std::getline(ss, item, ',')) {
        if (k == 4) throw Error(ErrorCode::BadParameter, "--angles takes four comma-separated values");
        std::size_t used = 0;
        try {
            angles[k] = std::stod(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != item.size() || !std::isfinite(angles[k])) {
            throw Error(ErrorCode::BadParameter, "bad angle '" + item + "'");
        }
        ++k;
    }
    if (k != 4) throw Error(ErrorCode::BadParameter, "--angles takes four comma-separated values or 'tsirelson'");
    return angles;
}

// The failure-path hook for fuzz: two-way boxes presented as members of the
// one-way slice, where I >= eta/2 is asserted and fails.
LabeledBox corrupt_sample(Sampler&) {
    return {DeterministicBox::from_tables(0b0101, 0b0011).to_box(), Domain::oneway_slice};
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exact analysis of two-input two-output correlation boxes", "boxlab"};
    app.require_subcommand(1);

    BoxInput analyze_input;
    std::optional<int> dim;
    bool as_text = false;
    bool as_json = false;
    auto* analyze_cmd = app.add_subcommand("analyze", "all measures, costs and flags of one box");
    analyze_input.attach(analyze_cmd);
    analyze_cmd->add_option("--dim", dim, "dimension d for eta* = C - log2 d");
    auto* json_flag = analyze_cmd->add_flag("--json", as_json, "JSON report (default)");
    analyze_cmd->add_flag("--text", as_text, "human-readable report")->excludes(json_flag);

    std::string kind, name, v, angles_text, sub = "general", gen_out;
    long denom = 1000000;
    std::uint64_t seed = 0;
    long count = 1;
    auto* gen_cmd = app.add_subcommand("gen", "write box-v1 files");
    gen_cmd->add_option("--kind", kind, "canonical, pr, noise, isotropic, quantum or random")->required();
    gen_cmd->add_option("--name", name, "canonical box name");
    gen_cmd->add_option("--v", v, "isotropic visibility (num/den)");
    gen_cmd->add_option("--angles", angles_text, "'tsirelson' or four comma-separated radians");
    gen_cmd->add_option("--denom", denom, "correlator denominator bound for quantum boxes");
    gen_cmd->add_option("--sub", sub, "random family: general, no_signaling, chsh16_mixture, oneway_slice");
    gen_cmd->add_option("--seed", seed, "random seed");
    gen_cmd->add_option("--count", count, "number of random boxes");
    gen_cmd->add_option("--out", gen_out, "output file (one box) or directory (several)");

    BoxInput decompose_input;
    std::string basis_text = "full256";
    bool alt = false;
    auto* decompose_cmd = app.add_subcommand("decompose", "optimal decomposition into deterministic strategies");
    decompose_input.attach(decompose_cmd);
    decompose_cmd->add_option("--basis", basis_text, "full256 or chsh16");
    decompose_cmd->add_flag("--alt", alt, "also search for an alternative optimal decomposition");

    std::string family_text, fuzz_out, witness_out;
    std::uint64_t fuzz_seed = 0;
    long fuzz_count = 1000;
    bool corrupt = false;
    auto* fuzz_cmd = app.add_subcommand("fuzz", "check the inequality suite on sampled boxes");
    fuzz_cmd->add_option("--family", family_text, "general, no_signaling, chsh16_mixture or oneway_slice")->required();
    fuzz_cmd->add_option("--seed", fuzz_seed, "random seed");
    fuzz_cmd->add_option("--count", fuzz_count, "number of samples");
    fuzz_cmd->add_option("--out", fuzz_out, "findings report file (stdout if omitted)");
    fuzz_cmd->add_option("--witness", witness_out, "box file for the first asserted violation");
    fuzz_cmd->add_flag("--inject-corrupt-sampler", corrupt)->group("");

    std::string repro_out;
    auto* repro_cmd = app.add_subcommand("repro", "reproduce the tables, counts and panels");
    repro_cmd->add_option("--out", repro_out, "report file (stdout if omitted)");

    std::string sweep_family = "isotropic", csv_out;
    int steps = 10;
    auto* sweep_cmd = app.add_subcommand("sweep", "measures along a one-parameter family as CSV");
    sweep_cmd->add_option("--family", sweep_family, "isotropic, mix02 or mix03");
    sweep_cmd->add_option("--steps", steps, "grid k/steps for k = 0..steps");
    sweep_cmd->add_option("--csv", csv_out, "CSV file (stdout if omitted)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        if (analyze_cmd->parsed()) {
            const AnalysisReport report = analyze(analyze_input.load(), dim);
            out << (as_text ? analysis_to_text(report) : pretty(analysis_to_json(report)));
            return 0;
        }
        if (gen_cmd->parsed()) {
            FamilySpec spec;
            if (kind == "canonical") {
                if (name.empty()) throw UsageError("--kind canonical needs --name");
                canonical(name);
                spec = CanonicalSpec{name};
            } else if (kind == "pr" || kind == "noise") {
                spec = CanonicalSpec{kind};
            } else if (kind == "isotropic") {
                if (v.empty()) throw UsageError("--kind isotropic needs --v");
                spec = IsotropicSpec{parse_rational(v)};
            } else if (kind == "quantum") {
                if (angles_text.empty()) throw UsageError("--kind quantum needs --angles");
                if (denom < 1) throw Error(ErrorCode::BadParameter, "--denom must be at least 1");
                spec = QuantumSpec{parse_angles(angles_text), denom};
            } else if (kind == "random") {
                spec = RandomSpec{parse_random_family(sub), seed};
            } else {
                throw UsageError("unknown --kind '" + kind + "'");
            }
            if (count < 1) throw Error(ErrorCode::BadParameter, "--count must be at least 1");
            if (!std::holds_alternative<RandomSpec>(spec) && count != 1) {
                throw UsageError("--count applies to --kind random only");
            }
            const std::vector<Box> boxes = generate(spec, count);
            if (gen_out.empty()) {
                for (const auto& b : boxes) out << serialize_box(b) << '\n';
            } else if (boxes.size() == 1) {
                write_file(gen_out, pretty(box_to_json(boxes.front())));
            } else {
                for (std::size_t i = 0; i < boxes.size(); ++i) {
                    char file[32];
                    std::snprintf(file, sizeof file, "box-%06zu.json", i);
                    write_file((std::filesystem::path(gen_out) / file).string(), pretty(box_to_json(boxes[i])));
                }
            }
            return 0;
        }
        if (decompose_cmd->parsed()) {
            const Box box = decompose_input.load();
            const Basis basis = parse_basis(basis_text);
            nlohmann::json doc = {{"basis", to_string(basis)}};
            const auto report = try_communication_cost(box, basis);
            if (!report) {
                doc["status"] = "not-in-hull";
            } else {
                doc["status"] = "optimal";
                doc["decomposition"] = decomposition_to_json(report->decomposition);
                if (alt) {
                    const auto pair = find_distinct_decompositions(box, basis);
                    doc["alternative"] = pair ? decomposition_to_json(pair->second) : nlohmann::json("unique");
                }
            }
            out << pretty(doc);
            return 0;
        }
        if (fuzz_cmd->parsed()) {
            const RandomSpec spec{parse_random_family(family_text), fuzz_seed};
            FuzzOptions options;
            if (corrupt) options.sampler_hook = corrupt_sample;
            const FindingsReport report = fuzz(spec, fuzz_count, options);
            const std::string text = pretty(findings_to_json(report));
            if (fuzz_out.empty()) {
                out << text;
            } else {
                write_file(fuzz_out, text);
                out << "fuzz " << to_string(spec.family) << " seed " << spec.seed << ": " << report.samples
                    << " samples, " << report.asserted_violations.size() << " asserted violations, "
                    << report.exploratory_violations.size() << " exploratory witnesses kept\n";
            }
            if (report.passed()) return 0;
            std::string path = witness_out;
            if (path.empty()) path = fuzz_out.empty() ? "fuzz-witness.json" : fuzz_out + ".witness.json";
            const Witness& w = report.asserted_violations.front();
            write_file(path, pretty(witness_to_json(w)));
            err << "asserted violation " << w.result.label() << " at sample " << w.sample << " (slack "
                << to_string(w.result.slack) << "); witness written to " << path << '\n';
            return 1;
        }
        if (repro_cmd->parsed()) {
            const ReproReport report = reproduce_reference();
            const std::string text = pretty(repro_to_json(report));
            if (repro_out.empty()) {
                out << text;
            } else {
                write_file(repro_out, text);
                long failed = 0;
                for (const auto& c : report.checks) failed += !c.passed;
                out << "repro: " << report.checks.size() - failed << "/" << report.checks.size() << " checks passed, "
                    << report.discrepancies.size() << " documented discrepancies\n";
            }
            for (const auto& c : report.checks) {
                if (!c.passed) err << "FAILED " << c.section << ": " << c.name << " expected " << c.expected << " got " << c.actual << '\n';
            }
            return report.passed() ? 0 : 1;
        }
        if (sweep_cmd->parsed()) {
            const std::string csv = sweep_csv(parse_sweep_family(sweep_family), steps);
            if (csv_out.empty()) {
                out << csv;
            } else {
                write_file(csv_out, csv);
            }
            return 0;
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}

}  // namespace boxlab
