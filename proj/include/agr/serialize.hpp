#pragma once

// JSON forms of the library results. Integers from the field layer are
// written as decimal strings.

#include "agr/asymptotics.hpp"
#include "agr/empirics.hpp"
#include "agr/reductions.hpp"

#include <json.hpp>

namespace agr {

using Json = nlohmann::ordered_json;

inline Json to_json(const GrainForm& gf) {
  Json terms = Json::array();
  for (const auto& t : gf.terms)
    terms.push_back({{"coeff", t.coeff.str()},
                     {"pow_x", t.mono.x.str()},
                     {"pow_logx", t.mono.logx.str()},
                     {"pow_log2x", t.mono.log2x.str()},
                     {"pow_invx", t.mono.invx.str()}});
  Json dropped = Json::array();
  for (const auto& d : gf.dropped) dropped.push_back(render(d));
  return {{"mode", to_string(gf.mode)}, {"k", gf.k}, {"terms", terms}, {"dropped", dropped}, {"exact", gf.exact}};
}

inline Json to_json(const LimitVerdict& l) {
  using K = LimitVerdict::Kind;
  Json lim = {{"kind", to_string(l.kind)}, {"lo", nullptr}, {"hi", nullptr}, {"const", nullptr}};
  switch (l.kind) {
    case K::Zero: lim["const"] = "0"; break;
    case K::Const: lim["const"] = l.value.str(); break;
    case K::ConstInterval:
      lim["lo"] = l.lo.str();
      lim["hi"] = l.hi.str();
      break;
    case K::Infinity: lim["const"] = "inf"; break;
    case K::OscZeroConst:
      lim["lo"] = "0";
      lim["hi"] = l.value.str();
      break;
    case K::OscConstInf:
      lim["lo"] = l.value.str();
      lim["hi"] = "inf";
      break;
  }
  return lim;
}

inline Json to_json(const ComparisonResult& r) {
  Json cases = Json::array();
  for (const auto& c : r.limit.cases) cases.push_back({{"assignment", c.assignment}, {"limit", c.limit.str()}});
  return {{"verdict", to_string(r.verdict)}, {"k", r.k},
          {"mode", to_string(r.mode)},       {"limit", to_json(r.limit)},
          {"cases", cases},                  {"grain_f", to_json(r.grain_f)},
          {"grain_h", to_json(r.grain_h)}};
}

inline Json to_json(const Tendency& t) {
  using K = Tendency::Kind;
  switch (t.kind) {
    case K::ToZero: return {{"kind", "ToZero"}};
    case K::ToConst: return {{"kind", "ToConst"}, {"value", t.value.str()}};
    case K::ToInfinity: return {{"kind", "ToInfinity"}};
    case K::Oscillates: return {{"kind", "Oscillates"}, {"lo", t.lo.str()}, {"hi", t.hi.str()}};
  }
  return {};
}

inline Json to_json(const FieldParams& f) {
  Json tower = Json::array();
  for (u64 v : f.phi_tower) tower.push_back(std::to_string(v));
  return {{"p", std::to_string(f.p)}, {"g", std::to_string(f.g)}, {"g1", std::to_string(f.g1)}, {"phi_tower", tower}};
}

inline Json to_json(const ProblemInstance& inst) {
  Json C = Json::array();
  for (u64 c : inst.C) C.push_back(std::to_string(c));
  return {{"family", to_string(inst.family)},
          {"p", std::to_string(inst.field.p)},
          {"g", std::to_string(inst.field.g)},
          {"g1", std::to_string(inst.field.g1)},
          {"n", std::to_string(inst.n)},
          {"y", std::to_string(inst.y)},
          {"C", C}};
}

inline Json to_json(const std::set<u64>& s) {
  Json a = Json::array();
  for (u64 v : s) a.push_back(std::to_string(v));
  return a;
}

inline Json to_json(const ReductionTrace& t) {
  Json steps = Json::array();
  for (const auto& s : t.steps) {
    Json values = Json::object();
    for (const auto& [k, v] : s.values) values[k] = v;
    steps.push_back({{"description", s.description}, {"values", values}});
  }
  return steps;
}

inline Json to_json(const ReductionResult& r) { return {{"solutions", to_json(r.solutions)}, {"trace", to_json(r.trace)}}; }

inline Json to_json(const Census& c) {
  Json hist = Json::object();
  for (const auto& [k, v] : c.histogram) hist[std::to_string(k)] = std::to_string(v);
  return {{"histogram", hist},
          {"avg_preimage", c.avg_preimage},
          {"max_preimage", std::to_string(c.max_preimage)},
          {"solvable_fraction", c.solvable_fraction},
          {"ops", std::to_string(c.ops)}};
}

}  // namespace agr
