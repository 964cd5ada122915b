#include "boxlab/box_json.hpp"

#include "boxlab/error.hpp"

namespace boxlab {

nlohmann::json box_to_json(const Box& box) {
    nlohmann::json p = nlohmann::json::array();
    for (int s = 0; s < kSettings; ++s) {
        nlohmann::json column = nlohmann::json::array();
        for (int o = 0; o < kOutcomes; ++o) column.push_back(to_string(box.at(s, o)));
        p.push_back(std::move(column));
    }
    return {{"format", kBoxFormat}, {"p", std::move(p)}};
}

Box box_from_json(const nlohmann::json& doc) {
    if (!doc.is_object()) throw Error(ErrorCode::ParseError, "box document must be a JSON object");
    auto format = doc.find("format");
    if (format == doc.end() || !format->is_string() || format->get<std::string>() != kBoxFormat) {
        throw Error(ErrorCode::ParseError, "expected \"format\": \"box-v1\"");
    }
    auto p = doc.find("p");
    if (p == doc.end() || !p->is_array() || p->size() != kSettings) {
        throw Error(ErrorCode::ParseError, "\"p\" must be an array of 4 setting columns");
    }
    Box::Entries entries;
    for (int s = 0; s < kSettings; ++s) {
        const auto& column = (*p)[s];
        if (!column.is_array() || column.size() != kOutcomes) {
            throw Error(ErrorCode::ParseError, "each setting column must hold 4 rational strings");
        }
        for (int o = 0; o < kOutcomes; ++o) {
            if (!column[o].is_string()) throw Error(ErrorCode::ParseError, "probabilities are \"num/den\" strings");
            entries[kOutcomes * s + o] = parse_rational(column[o].get<std::string>());
        }
    }
    return Box::from_table(std::move(entries));
}

std::string serialize_box(const Box& box) { return box_to_json(box).dump(); }

Box parse_box(std::string_view text) {
    nlohmann::json doc = nlohmann::json::parse(text, nullptr, false);
    if (doc.is_discarded()) throw Error(ErrorCode::ParseError, "malformed JSON");
    return box_from_json(doc);
}

}  // namespace boxlab
