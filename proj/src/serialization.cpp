#include <json.hpp>

#include "soliton/error.hpp"
#include "soliton/loop_algebra.hpp"

namespace soliton {

namespace {

using nlohmann::json;

json to_json(cplx c) { return json::array({c.real(), c.imag()}); }

cplx cplx_from(const json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }

json to_json(const Gl2Vector& v) {
  return json::array({to_json(v.id), to_json(v.h), to_json(v.f), to_json(v.e)});
}

Gl2Vector gl2_from(const json& j) {
  return {cplx_from(j.at(0)), cplx_from(j.at(1)), cplx_from(j.at(2)), cplx_from(j.at(3))};
}

}  // namespace

std::string serialize(const LoopElement& x) {
  json doc;
  doc["format"] = "loop-element/1";
  doc["max_order"] = x.max_order;
  doc["merge_tol"] = x.merge_tol;
  doc["basis"] = json::array({"I", "H", "F", "E"});
  json poly = json::array();
  for (const auto& c : x.poly) poly.push_back(to_json(c));
  doc["poly"] = poly;
  json poles = json::array();
  for (const auto& p : x.poles) {
    json coeffs = json::array();
    for (const auto& c : p.coeffs) coeffs.push_back(to_json(c));
    poles.push_back({{"alpha", to_json(p.alpha)}, {"coeffs", coeffs}});
  }
  doc["poles"] = poles;
  return doc.dump(2);
}

LoopElement deserialize_loop(const std::string& text) {
  try {
    const json doc = json::parse(text);
    LoopElement x(doc.at("max_order").get<int>(), doc.value("merge_tol", kDefaultMergeTol));
    for (const auto& c : doc.at("poly")) x.poly.push_back(gl2_from(c));
    for (const auto& p : doc.at("poles")) {
      PoleTerm t{cplx_from(p.at("alpha")), {}};
      for (const auto& c : p.at("coeffs")) t.coeffs.push_back(gl2_from(c));
      x.poles.push_back(std::move(t));
    }
    return x;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::InvalidArgument, std::string("malformed loop document: ") + e.what());
  }
}

}  // namespace soliton
