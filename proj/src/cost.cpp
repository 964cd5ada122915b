#include "boxlab/cost.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "boxlab/error.hpp"
#include "boxlab/measures.hpp"

namespace boxlab {

std::string_view to_string(Basis basis) { return basis == Basis::full256 ? "full256" : "chsh16"; }

Basis parse_basis(std::string_view text) {
    if (text == "full256") return Basis::full256;
    if (text == "chsh16") return Basis::chsh16;
    throw Error(ErrorCode::BadParameter, "unknown basis '" + std::string(text) + "'");
}

namespace {

const std::array<int, 256>& full_ids() {
    static const std::array<int, 256> ids = [] {
        std::array<int, 256> out{};
        for (int i = 0; i < 256; ++i) out[i] = i;
        return out;
    }();
    return ids;
}

const std::array<int, 16>& chsh_ids() {
    static const std::array<int, 16> ids = [] {
        std::array<int, 16> out{};
        std::size_t k = 0;
        for (const auto& s : named_strategies()) out[k++] = s.id;
        return out;
    }();
    return ids;
}

LinearProgram make_template(Basis basis) {
    const auto ids = basis_ids(basis);
    std::vector<std::vector<LinearProgram::SparseEntry>> columns;
    std::vector<Rational> objective;
    columns.reserve(ids.size());
    for (int id : ids) {
        const DeterministicBox d = DeterministicBox::from_id(id);
        std::vector<LinearProgram::SparseEntry> column;
        for (int s = 0; s < kSettings; ++s) {
            column.push_back({static_cast<std::size_t>(kOutcomes * s + d.outcome(s)), Rational(1)});
        }
        columns.push_back(std::move(column));
        objective.emplace_back(basis_cost(basis, id));
    }
    return LinearProgram::from_columns(kEntries, columns, std::vector<Rational>(kEntries), std::move(objective));
}

const LinearProgram& program_template(Basis basis) {
    static const LinearProgram full = make_template(Basis::full256);
    static const LinearProgram chsh = make_template(Basis::chsh16);
    return basis == Basis::full256 ? full : chsh;
}

Decomposition to_decomposition(Basis basis, const LpSolution& sol) {
    Decomposition d;
    d.basis = basis;
    const auto ids = basis_ids(basis);
    for (std::size_t j = 0; j < sol.point.size(); ++j) {
        if (sgn(sol.point[j]) > 0) d.weights.emplace(ids[j], sol.point[j]);
    }
    d.cost = sol.value;
    return d;
}

}  // namespace

std::span<const int> basis_ids(Basis basis) {
    if (basis == Basis::full256) return full_ids();
    return chsh_ids();
}

int basis_cost(Basis basis, int id) {
    const int bits = DeterministicBox::from_id(id).cost_bits();
    if (basis == Basis::chsh16) {
        const auto& ids = chsh_ids();
        if (std::find(ids.begin(), ids.end(), id) == ids.end()) {
            throw Error(ErrorCode::BadParameter, "strategy " + std::to_string(id) + " is not in the chsh16 basis");
        }
    }
    return bits;
}

Box Decomposition::reconstruct() const {
    std::vector<WeightedBox> terms;
    terms.reserve(weights.size());
    for (const auto& [id, w] : weights) terms.push_back({w, DeterministicBox::from_id(id).to_box()});
    return mix(terms);
}

std::vector<int> Decomposition::support() const {
    std::vector<int> out;
    for (const auto& [id, w] : weights) out.push_back(id);
    return out;
}

nlohmann::json decomposition_to_json(const Decomposition& d) {
    nlohmann::json weights = nlohmann::json::object();
    for (const auto& [id, w] : d.weights) weights[std::to_string(id)] = to_string(w);
    return {{"basis", to_string(d.basis)}, {"cost", to_string(d.cost)}, {"weights", std::move(weights)}};
}

Decomposition decomposition_from_json(const nlohmann::json& doc) {
    if (!doc.is_object() || !doc.contains("basis") || !doc.contains("cost") || !doc.contains("weights") ||
        !doc["basis"].is_string() || !doc["cost"].is_string() || !doc["weights"].is_object()) {
        throw Error(ErrorCode::ParseError, "decomposition needs string \"basis\", \"cost\" and object \"weights\"");
    }
    Decomposition d;
    d.basis = parse_basis(doc["basis"].get<std::string>());
    d.cost = parse_rational(doc["cost"].get<std::string>());
    for (const auto& [key, value] : doc["weights"].items()) {
        if (!value.is_string()) throw Error(ErrorCode::ParseError, "weights are \"num/den\" strings");
        int id = 0;
        try {
            id = std::stoi(key);
        } catch (const std::exception&) {
            throw Error(ErrorCode::ParseError, "weight key '" + key + "' is not a strategy id");
        }
        d.weights.emplace(id, parse_rational(value.get<std::string>()));
    }
    return d;
}

LinearProgram cost_program(const Box& box, Basis basis) {
    return program_template(basis).with_rhs(std::vector<Rational>(box.entries().begin(), box.entries().end()));
}

std::optional<CostReport> try_communication_cost(const Box& box, Basis basis) {
    const LpSolution sol = solve(cost_program(box, basis));
    if (sol.status != LpStatus::optimal) return std::nullopt;
    CostReport report;
    report.decomposition = to_decomposition(basis, sol);
    report.c = sol.value;
    report.s = signal(box).s;
    report.eta = report.c - report.s;
    Rational bound = (chsh(box).lambda_max - 2) / 2;
    report.lower_bound = sgn(bound) > 0 ? bound : Rational(0);
    return report;
}

CostReport communication_cost(const Box& box, Basis basis) {
    auto report = try_communication_cost(box, basis);
    if (!report) throw Error(ErrorCode::NotInHull, "box is outside the hull of the " + std::string(to_string(basis)) + " strategies");
    return *std::move(report);
}

double eta_star(const Box& box, int dim) {
    if (dim < 2) throw Error(ErrorCode::BadDimension, "dimension must be at least 2, got " + std::to_string(dim));
    return to_double(communication_cost(box, Basis::full256).c) - std::log2(static_cast<double>(dim));
}

std::optional<std::pair<Decomposition, Decomposition>> find_distinct_decompositions(const Box& box, Basis basis) {
    const LinearProgram lp = cost_program(box, basis);
    const LpSolution first = solve(lp);
    if (first.status != LpStatus::optimal) {
        throw Error(ErrorCode::NotInHull, "box is outside the hull of the " + std::string(to_string(basis)) + " strategies");
    }
    auto second = find_alternative_vertex(lp, first);
    if (!second) return std::nullopt;
    return std::make_pair(to_decomposition(basis, first), to_decomposition(basis, *second));
}

}  // namespace boxlab
