#pragma once

#include <map>
#include <optional>
#include <span>
#include <string_view>
#include <utility>

#include <json.hpp>

#include "boxlab/box.hpp"
#include "boxlab/lp.hpp"

namespace boxlab {

/// Strategy family a decomposition may use.
///   full256: every deterministic strategy, costed 0/1/2 bits by classify().
///   chsh16:  the eight local and eight one-bit CHSH strategies (d0_0..d7_0,
///            d0_1..d7_1), costed 0 and 1.
enum class Basis { full256, chsh16 };

std::string_view to_string(Basis basis);
Basis parse_basis(std::string_view text);

/// Strategy ids of a basis in LP column order.
std::span<const int> basis_ids(Basis basis);

/// Per-strategy bit cost used for that basis.
int basis_cost(Basis basis, int id);

struct Decomposition {
    Basis basis = Basis::full256;
    /// Strategy id -> weight; only positive weights are stored.
    std::map<int, Rational> weights;
    Rational cost;

    Box reconstruct() const;
    std::vector<int> support() const;
};

nlohmann::json decomposition_to_json(const Decomposition& d);
Decomposition decomposition_from_json(const nlohmann::json& doc);

struct CostReport {
    Rational c;
    Rational eta;
    Rational s;
    Rational lower_bound;
    Decomposition decomposition;
};

/// The program  min sum cost_bits q  s.t.  sum q d = P,  q >= 0  over the basis.
LinearProgram cost_program(const Box& box, Basis basis);

/// Minimum expected communication over exact decompositions of the box.
/// Throws Error(NotInHull) when the chsh16 strategies cannot reproduce it.
CostReport communication_cost(const Box& box, Basis basis = Basis::full256);

/// Same as communication_cost but reports NotInHull as nullopt.
std::optional<CostReport> try_communication_cost(const Box& box, Basis basis);

/// C(P, full256) - log2(dim). Throws Error(BadDimension) for dim < 2.
double eta_star(const Box& box, int dim);

/// Two optimal decompositions with different supports, or nullopt when the
/// optimal decomposition is unique. Throws Error(NotInHull) like communication_cost.
std::optional<std::pair<Decomposition, Decomposition>> find_distinct_decompositions(const Box& box, Basis basis);

}  // namespace boxlab
