#include "pmbsd/io.hpp"

#include <stdexcept>

namespace pmbsd {

using nlohmann::ordered_json;

ordered_json to_json(const TruncatedSeries& f) {
  ordered_json a = ordered_json::array();
  for (const auto& c : f.coeffs()) a.push_back(c.str());
  return a;
}

TruncatedSeries series_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.empty()) throw std::invalid_argument("series: expected a non-empty array of coefficients");
  std::vector<PadicElement> c;
  for (const auto& e : j) c.push_back(PadicElement::parse(e.get<std::string>()));
  long p = c.front().p();
  for (const auto& x : c)
    if (x.p() != p) throw std::invalid_argument("series: coefficients over different primes");
  return TruncatedSeries(p, std::move(c));
}

ordered_json to_json(const SignedPair& s) {
  ordered_json j;
  j["minus"] = to_json(s.minus);
  j["plus"] = to_json(s.plus);
  if (s.level) j["level"] = s.level;
  return j;
}

SignedPair signed_pair_from_json(const nlohmann::json& j) {
  SignedPair s{series_from_json(j.at("minus")), series_from_json(j.at("plus"))};
  s.level = j.value("level", 0L);
  return s;
}

ordered_json to_json(const Valuation& v) {
  if (v.decided() && v.twice % 2 == 0) return v.twice / 2;
  return v.str();
}

}  // namespace pmbsd
