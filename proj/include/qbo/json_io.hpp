#pragma once

#include <json.hpp>
#include <string>

#include "qbo/builder.hpp"
#include "qbo/channel.hpp"
#include "qbo/extractor.hpp"
#include "qbo/game.hpp"
#include "qbo/model.hpp"
#include "qbo/rational.hpp"

namespace qbo {

// All parsers raise ParseError with a JSON-pointer-style location in the
// message. Numeric entries accept JSON numbers and exact "p/q" strings.

nlohmann::json load_json_file(const std::string& path);

Rat rat_from_json(const nlohmann::json& j, const std::string& where);

// {"N","M","A", optional "a","b","c","G","K","bound_C"}; constraint objects
// are {"coeffs": [1+N+M numbers], "sense": "nonneg"|"zero"}.
RatProblem rat_problem_from_json(const nlohmann::json& j);
BilinearProblem problem_from_json(const nlohmann::json& j);

// {"Q1","Q2","A1","A2","pi" (Q1 x Q2), "V" ([q1][q2][a1][a2] 0/1)}.
Game game_from_json(const nlohmann::json& j);

// {"W" (Y x X row-major, or {"X","Y","entries":[[y,x,val],...]}), "k"}.
Channel channel_from_json(const nlohmann::json& j);

// {"n","d","m","table" ([2^d][2^n]), optional "k"}.
Extractor extractor_from_json(const nlohmann::json& j);

// {"N","K"} for membership, or {"N","A", optional "constraints":
// [{"F","g"}...], optional "bound"} for optimization.
CSPlusQuery csplus_from_json(const nlohmann::json& j);

}  // namespace qbo
