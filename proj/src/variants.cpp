#include "offo/variants.hpp"

#include <map>

namespace offo {

namespace {

ScalingRule adagrad_rule() { return ScalingRule{}; }

ScalingRule adam_rule() {
  ScalingRule r;
  r.variant = ScalingVariant::AdamLike;
  return r;
}

ScalingRule maxg_rule() {
  ScalingRule r;
  r.variant = ScalingVariant::DiminishingMax;
  r.nu = 0.1;
  return r;
}

ScalingRule avgg_rule() {
  ScalingRule r = maxg_rule();
  r.variant = ScalingVariant::DiminishingAvg;
  return r;
}

Method base(const std::string& name, ScalingRule rule, ModelKind model = ModelKind::Zero) {
  Method m;
  m.name = name;
  m.scaling = rule;
  m.model = model;
  return m;
}

Method normed(Method m) {
  m.scaling.aggregated = true;
  m.geometry = Geometry::Ball;
  return m;
}

Method scaled(Method m) {
  m.scaling.theta_auto = true;
  return m;
}

const std::map<std::string, Method>& catalog() {
  static const std::map<std::string, Method> table = [] {
    std::map<std::string, Method> t;
    auto add = [&](Method m) { t.emplace(m.name, std::move(m)); };
    add(base("adagrad", adagrad_rule()));
    add(normed(base("adagnorm", adagrad_rule())));
    add(base("adam", adam_rule()));
    add(normed(base("adamnorm", adam_rule())));
    add(base("maxg", maxg_rule()));
    add(normed(base("maxgnorm", maxg_rule())));
    add(base("avgg", avgg_rule()));
    add(normed(base("avggnorm", avgg_rule())));
    add(base("adagbb", adagrad_rule(), ModelKind::BBDiag));
    add(base("adagbfgs3", adagrad_rule(), ModelKind::LBFGS));
    add(base("adagH", adagrad_rule(), ModelKind::Exact));
    add(scaled(base("adagrads", adagrad_rule())));
    add(scaled(base("adams", adam_rule())));
    add(scaled(base("maxgs", maxg_rule())));
    add(scaled(base("adagbbs", adagrad_rule(), ModelKind::BBDiag)));
    add(scaled(base("adagbfgs3s", adagrad_rule(), ModelKind::LBFGS)));
    add(scaled(base("adagHs", adagrad_rule(), ModelKind::Exact)));
    Method sd;
    sd.name = "sdba";
    sd.is_sdba = true;
    add(sd);
    return t;
  }();
  return table;
}

}  // namespace

Method make_method(const std::string& name) {
  const auto& t = catalog();
  auto it = t.find(name);
  if (it == t.end()) throw CatalogError("unknown method: " + name);
  return it->second;
}

const std::vector<std::string>& method_names() {
  static const std::vector<std::string> names = {
      "adagnorm", "adagrad",  "adamnorm", "adam",    "maxgnorm",   "maxg",
      "adagbb",   "adagbfgs3", "adagH",   "adagrads", "adams",     "maxgs",
      "adagbbs",  "adagbfgs3s", "adagHs", "sdba",     "avgg",      "avggnorm"};
  return names;
}

Astr1Config configure(const Method& method, Astr1Config base) {
  if (method.is_sdba) throw CapabilityError("sdba is not an ASTR1 variant");
  base.scaling = method.scaling;
  base.model = method.model;
  base.lbfgs_memory = method.lbfgs_memory;
  base.geometry = method.geometry;
  return base;
}

bool is_offo(const Method& method) { return !method.is_sdba; }

}  // namespace offo
