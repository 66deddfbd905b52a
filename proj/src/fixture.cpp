#include <fstream>
#include <json.hpp>
#include <sstream>

#include "pmbsd/curve.hpp"
#include "pmbsd/dieudonne.hpp"

namespace pmbsd {

using nlohmann::ordered_json;

namespace {

Point point_from(const ordered_json& j) {
  return Point::at(parse_rational(j.at(0).get<std::string>()),
                   parse_rational(j.at(1).get<std::string>()));
}

ordered_json point_to(const Point& P) { return ordered_json::array({P.x.get_str(), P.y.get_str()}); }

bool is_prime(long n) {
  if (n < 2) return false;
  for (long d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

}  // namespace

CurveFixture fixture_from_json_text(const std::string& text) {
  auto j = ordered_json::parse(text);
  CurveFixture fx;
  fx.label = j.at("label").get<std::string>();
  fx.a1 = j.at("a1");
  fx.a2 = j.at("a2");
  fx.a3 = j.at("a3");
  fx.a4 = j.at("a4");
  fx.a6 = j.at("a6");
  fx.conductor = j.at("conductor");
  fx.p = j.at("p");
  fx.rank = j.at("rank");
  for (const auto& g : j.at("generators")) fx.generators.push_back(point_from(g));
  fx.torsion_order = j.at("torsion_order");
  if (j.contains("torsion_points"))
    for (const auto& g : j.at("torsion_points")) fx.torsion_points.push_back(point_from(g));
  fx.tamagawa_product = j.at("tamagawa_product");
  fx.sha_order = j.at("sha_order");
  fx.frob_u = PadicElement::parse(j.at("frobenius_on_omega").at("u").get<std::string>());
  fx.frob_v = PadicElement::parse(j.at("frobenius_on_omega").at("v").get<std::string>());
  if (j.contains("periods") && !j.at("periods").is_null())
    fx.periods = std::make_pair(j.at("periods").at("omega_plus").get<std::string>(),
                                j.at("periods").at("omega_minus").get<std::string>());
  fx.precision = j.at("precision");
  if (j.contains("reduction_types"))
    for (const auto& r : j.at("reduction_types"))
      fx.reduction_types.push_back({r.at("prime").get<long>(), r.at("type").get<std::string>()});
  if (j.contains("provenance")) fx.provenance = j.at("provenance").get<std::string>();
  return fx;
}

CurveFixture load_fixture(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open fixture " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return fixture_from_json_text(ss.str());
}

std::string fixture_to_json_text(const CurveFixture& fx) {
  ordered_json j;
  j["label"] = fx.label;
  j["a1"] = fx.a1;
  j["a2"] = fx.a2;
  j["a3"] = fx.a3;
  j["a4"] = fx.a4;
  j["a6"] = fx.a6;
  j["conductor"] = fx.conductor;
  j["p"] = fx.p;
  j["rank"] = fx.rank;
  j["generators"] = ordered_json::array();
  for (const auto& g : fx.generators) j["generators"].push_back(point_to(g));
  j["torsion_order"] = fx.torsion_order;
  j["torsion_points"] = ordered_json::array();
  for (const auto& g : fx.torsion_points) j["torsion_points"].push_back(point_to(g));
  j["tamagawa_product"] = fx.tamagawa_product;
  j["sha_order"] = fx.sha_order;
  j["frobenius_on_omega"] = {{"u", fx.frob_u.str()}, {"v", fx.frob_v.str()}};
  if (fx.periods)
    j["periods"] = {{"omega_plus", fx.periods->first}, {"omega_minus", fx.periods->second}};
  j["reduction_types"] = ordered_json::array();
  for (const auto& r : fx.reduction_types)
    j["reduction_types"].push_back({{"prime", r.prime}, {"type", r.type}});
  j["precision"] = fx.precision;
  j["provenance"] = fx.provenance;
  return j.dump(2) + "\n";
}

std::vector<std::string> validate_fixture(const CurveFixture& fx) {
  std::vector<std::string> bad;
  Curve E;
  try {
    E = fx.curve();
  } catch (const std::exception& e) {
    return {e.what()};
  }
  if (!is_prime(fx.p) || fx.p < 5) bad.push_back("p must be a prime >= 5");
  if (fx.conductor % fx.p == 0) bad.push_back("bad reduction at p");
  for (const auto& r : fx.reduction_types) {
    if (fx.conductor % r.prime != 0) bad.push_back("reduction type given for a good prime");
    if (r.type != "split" && r.type != "nonsplit" && r.type != "additive")
      bad.push_back("unknown reduction type " + r.type);
  }
  for (long l = 2; l <= fx.conductor; ++l) {
    if (!is_prime(l) || fx.conductor % l) continue;
    if (E.disc % l != 0) bad.push_back("conductor prime does not divide the discriminant");
    bool listed = false;
    for (const auto& r : fx.reduction_types) listed |= r.prime == l;
    if (!listed) bad.push_back("missing reduction type at " + std::to_string(l));
  }
  if (fx.conductor % fx.p != 0) {
    try {
      if (count_ap(E, fx.p) != 0) bad.push_back("a_p != 0");
    } catch (const std::exception& e) {
      bad.push_back(e.what());
    }
  }
  if (static_cast<long>(fx.generators.size()) != fx.rank) bad.push_back("generator count != rank");
  for (const auto& g : fx.generators)
    if (!E.on_curve(g)) bad.push_back("generator not on curve");
  for (const auto& t : fx.torsion_points) {
    if (!E.on_curve(t)) bad.push_back("torsion point not on curve");
    if (!E.mul(t, fx.torsion_order).inf) bad.push_back("torsion point order does not divide torsion_order");
  }
  if (fx.torsion_order < 1 || fx.tamagawa_product < 1 || fx.sha_order < 1)
    bad.push_back("non-positive invariant");
  if (fx.frob_u.p() != fx.p || fx.frob_v.p() != fx.p) bad.push_back("Frobenius datum over the wrong prime");
  try {
    Dieudonne<PadicElement> D(fx.p, fx.frob_u, fx.frob_v, PadicElement(fx.p, 1));
    Mat2<PadicElement> F = D.frobenius();
    Mat2<PadicElement> F2 = F * F;
    PadicElement mip = -(PadicElement(fx.p, 1) / PadicElement(fx.p, fx.p));
    if (!F2.a.agrees(mip) || !F2.d.agrees(mip) || !F2.b.is_zero() || !F2.c.is_zero())
      bad.push_back("phi^2 != -1/p");
    PadicElement lhs = D.pair(D.phi(D.omega()), D.phi(D.eta()));
    PadicElement rhs = D.pair(D.omega(), D.eta()) / PadicElement(fx.p, fx.p);
    if (!lhs.agrees(rhs)) bad.push_back("[phi x, phi y] != [x, y]/p");
    // p*phi preserves the integral lattice: v must be a unit
    if (!fx.frob_v.valuation().decided() || fx.frob_v.valuation().twice != 0)
      bad.push_back("phi(omega) has a non-unit eta coordinate");
    if (fx.frob_u.valuation().bound2() < 0) bad.push_back("phi(omega) not integral");
  } catch (const std::exception& e) {
    bad.push_back(std::string("Frobenius datum: ") + e.what());
  }
  return bad;
}

}  // namespace pmbsd
