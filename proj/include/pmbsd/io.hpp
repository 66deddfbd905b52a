#pragma once

#include <json.hpp>

#include "pmbsd/lfunction.hpp"

namespace pmbsd {

nlohmann::ordered_json to_json(const TruncatedSeries& f);
// array of coefficient strings
TruncatedSeries series_from_json(const nlohmann::json& j);

nlohmann::ordered_json to_json(const SignedPair& s);
SignedPair signed_pair_from_json(const nlohmann::json& j);

nlohmann::ordered_json to_json(const Valuation& v);

}  // namespace pmbsd
