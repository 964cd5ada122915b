#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

#include "boxlab/box.hpp"

namespace boxlab {

inline constexpr std::string_view kBoxFormat = "box-v1";

/// {"format":"box-v1","p":[[...],...]} with p[2a+b][2A+B] as "num/den".
nlohmann::json box_to_json(const Box& box);

/// Throws Error(ParseError) on schema problems, and the Box validation
/// errors (NegativeEntry, NotNormalized) for well-formed but invalid tables.
Box box_from_json(const nlohmann::json& doc);

std::string serialize_box(const Box& box);
Box parse_box(std::string_view text);

}  // namespace boxlab
