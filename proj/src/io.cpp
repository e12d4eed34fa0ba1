#include "rcbbo/io.hpp"

#include <fstream>
#include <set>

#include "rcbbo/csv.hpp"
#include "rcbbo/errors.hpp"

namespace rcbbo {

namespace {

[[noreturn]] void bad(const std::string& path, const std::string& what) { throw ConfigError(path + ": " + what); }

const Json& field(const Json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) bad(path, "expected an object");
  const auto it = j.find(key);
  if (it == j.end()) bad(path + "." + key, "missing");
  return *it;
}

double number(const Json& j, const std::string& path) {
  if (!j.is_number()) bad(path, "expected a number");
  return j.get<double>();
}

double number(const Json& j, const std::string& key, const std::string& path) {
  return number(field(j, key, path), path + "." + key);
}

double number_or(const Json& j, const std::string& key, double fallback, const std::string& path) {
  return j.contains(key) ? number(j[key], path + "." + key) : fallback;
}

int integer(const Json& j, const std::string& path) {
  if (!j.is_number_integer()) bad(path, "expected an integer");
  return j.get<int>();
}

std::string text(const Json& j, const std::string& path) {
  if (!j.is_string()) bad(path, "expected a string");
  return j.get<std::string>();
}

const Json& array(const Json& j, const std::string& key, const std::string& path) {
  const auto& a = field(j, key, path);
  if (!a.is_array()) bad(path + "." + key, "expected an array");
  return a;
}

template <std::size_t N>
std::array<double, N> numbers(const Json& j, const std::string& path) {
  if (!j.is_array() || j.size() != N) bad(path, "expected " + std::to_string(N) + " numbers");
  std::array<double, N> out{};
  for (std::size_t i = 0; i < N; ++i) out[i] = number(j[i], path + "[" + std::to_string(i) + "]");
  return out;
}

std::string at(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

void reject_unknown(const Json& j, const std::set<std::string>& known, const std::string& path) {
  for (const auto& [key, value] : j.items())
    if (!known.count(key)) bad(path + "." + key, "unknown field");
}

ValueRef value_ref(const Json& j, const std::string& path) {
  ValueRef r;
  if (j.is_string())
    r.variable = j.get<std::string>();
  else
    r.fixed = number(j, path);
  return r;
}

CombinationKind combination_kind(const std::string& s, const std::string& path) {
  if (s == "strength") return CombinationKind::strength;
  if (s == "service") return CombinationKind::service;
  if (s == "wind") return CombinationKind::wind;
  bad(path, "unknown combination kind '" + s + "'");
}

}  // namespace

Json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string() + ": cannot open file");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigError(path.string() + ": invalid JSON (" + e.what() + ")");
  }
}

StructuralModel parse_model(const Json& j) {
  const std::string root = "model";
  StructuralModel m;
  m.height = number(j, "height", root);
  if (j.contains("self_weight_case")) m.self_weight_case = text(j["self_weight_case"], root + ".self_weight_case");
  m.concrete_unit_weight = number_or(j, "concrete_unit_weight", m.concrete_unit_weight, root);

  const auto& nodes = array(j, "nodes", root);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const auto p = at(root + ".nodes", i);
    m.nodes.push_back({integer(field(nodes[i], "id", p), p + ".id"), numbers<3>(field(nodes[i], "xyz", p), p + ".xyz")});
  }

  const auto& members = array(j, "members", root);
  for (std::size_t i = 0; i < members.size(); ++i) {
    const auto& e = members[i];
    const auto p = at(root + ".members", i);
    Member mem;
    mem.id = integer(field(e, "id", p), p + ".id");
    mem.start = integer(field(e, "start", p), p + ".start");
    mem.end = integer(field(e, "end", p), p + ".end");
    const auto role = text(field(e, "role", p), p + ".role");
    if (role == "beam")
      mem.role = MemberRole::beam;
    else if (role == "column")
      mem.role = MemberRole::column;
    else
      bad(p + ".role", "expected 'beam' or 'column'");
    mem.group = text(field(e, "group", p), p + ".group");
    if (e.contains("depth_direction")) mem.depth_direction = numbers<3>(e["depth_direction"], p + ".depth_direction");
    m.members.push_back(std::move(mem));
  }

  const auto& supports = array(j, "supports", root);
  for (std::size_t i = 0; i < supports.size(); ++i) {
    const auto& e = supports[i];
    const auto p = at(root + ".supports", i);
    Support s;
    s.node = integer(field(e, "node", p), p + ".node");
    const auto kind = e.contains("kind") ? text(e["kind"], p + ".kind") : std::string("fixed");
    if (kind == "fixed")
      s.kind = SupportKind::fixed;
    else if (kind == "pinned")
      s.kind = SupportKind::pinned;
    else if (kind == "spring")
      s.kind = SupportKind::spring;
    else
      bad(p + ".kind", "expected 'fixed', 'pinned' or 'spring'");
    if (e.contains("springs")) s.springs = numbers<6>(e["springs"], p + ".springs");
    if (e.contains("restrained")) {
      const auto& r = e["restrained"];
      if (!r.is_array() || r.size() != 6) bad(p + ".restrained", "expected 6 booleans");
      for (std::size_t k = 0; k < 6; ++k) {
        if (!r[k].is_boolean()) bad(at(p + ".restrained", k), "expected a boolean");
        s.restrained[k] = r[k].get<bool>();
      }
    }
    if (e.contains("footing_group")) s.footing_group = text(e["footing_group"], p + ".footing_group");
    m.supports.push_back(std::move(s));
  }

  const auto& cases = array(j, "load_cases", root);
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const auto& e = cases[i];
    const auto p = at(root + ".load_cases", i);
    LoadCase lc;
    lc.name = text(field(e, "name", p), p + ".name");
    if (e.contains("member_loads")) {
      const auto& a = e["member_loads"];
      for (std::size_t k = 0; k < a.size(); ++k) {
        const auto q = at(p + ".member_loads", k);
        lc.member_loads.push_back(
            {integer(field(a[k], "member", q), q + ".member"), numbers<3>(field(a[k], "w", q), q + ".w")});
      }
    }
    if (e.contains("nodal_loads")) {
      const auto& a = e["nodal_loads"];
      for (std::size_t k = 0; k < a.size(); ++k) {
        const auto q = at(p + ".nodal_loads", k);
        lc.nodal_loads.push_back(
            {integer(field(a[k], "node", q), q + ".node"), numbers<6>(field(a[k], "f", q), q + ".f")});
      }
    }
    m.load_cases.push_back(std::move(lc));
  }

  if (j.contains("combinations")) {
    const auto& combos = j["combinations"];
    for (std::size_t i = 0; i < combos.size(); ++i) {
      const auto& e = combos[i];
      const auto p = at(root + ".combinations", i);
      Combination c;
      c.name = text(field(e, "name", p), p + ".name");
      c.kind = combination_kind(text(field(e, "kind", p), p + ".kind"), p + ".kind");
      const auto& f = field(e, "factors", p);
      if (!f.is_object()) bad(p + ".factors", "expected an object");
      for (const auto& [name, v] : f.items()) c.factors[name] = number(v, p + ".factors." + name);
      m.combinations.push_back(std::move(c));
    }
  } else {
    const bool live = m.load_case("live") != nullptr;
    Combination u{"1.2D+1.6L", CombinationKind::strength, {{"dead", 1.2}}};
    Combination s{"D+L", CombinationKind::service, {{"dead", 1.0}}};
    if (live) {
      u.factors["live"] = 1.6;
      s.factors["live"] = 1.0;
    }
    m.combinations = {u, s};
  }

  if (auto errors = validate_model(m); !errors.empty()) throw ConfigError(root + ": " + errors.front());
  return m;
}

DesignVariableSpec parse_spec(const Json& j) {
  const std::string root = "spec";
  DesignVariableSpec spec;
  const auto& vars = array(j, "variables", root);
  for (std::size_t i = 0; i < vars.size(); ++i) {
    const auto& e = vars[i];
    const auto p = at(root + ".variables", i);
    DesignVariable v;
    v.name = text(field(e, "name", p), p + ".name");
    const auto kind = text(field(e, "kind", p), p + ".kind");
    if (kind == "dimension")
      v.kind = VariableKind::dimension;
    else if (kind == "rectangularity")
      v.kind = VariableKind::rectangularity;
    else if (kind == "grade")
      v.kind = VariableKind::grade;
    else if (kind == "real")
      v.kind = VariableKind::real;
    else
      bad(p + ".kind", "unknown variable kind '" + kind + "'");
    const auto& values = array(e, "values", p);
    for (std::size_t k = 0; k < values.size(); ++k) v.values.push_back(number(values[k], at(p + ".values", k)));
    spec.variables.push_back(std::move(v));
  }
  if (j.contains("section_groups")) {
    const auto& groups = j["section_groups"];
    for (std::size_t i = 0; i < groups.size(); ++i) {
      const auto& e = groups[i];
      const auto p = at(root + ".section_groups", i);
      spec.section_groups.push_back({text(field(e, "name", p), p + ".name"),
                                     value_ref(field(e, "width", p), p + ".width"),
                                     value_ref(field(e, "height", p), p + ".height"),
                                     value_ref(field(e, "grade", p), p + ".grade")});
    }
  }
  if (j.contains("footing_groups")) {
    const auto& groups = j["footing_groups"];
    for (std::size_t i = 0; i < groups.size(); ++i) {
      const auto& e = groups[i];
      const auto p = at(root + ".footing_groups", i);
      FootingGroup g;
      g.name = text(field(e, "name", p), p + ".name");
      g.rectangularity = value_ref(field(e, "rectangularity", p), p + ".rectangularity");
      g.grade = value_ref(field(e, "grade", p), p + ".grade");
      g.depth = number_or(e, "depth", g.depth, p);
      spec.footing_groups.push_back(std::move(g));
    }
  }
  try {
    validate_spec(spec);
  } catch (const SpecError& e) {
    throw ConfigError(root + ": " + e.what());
  }
  return spec;
}

SoilProfile parse_soil(const Json& j) {
  const std::string root = "soil";
  SoilProfile soil;
  auto strength = [](const Json& e, const std::string& p) {
    SoilStrength s;
    s.unit_weight = number(e, "unit_weight", p);
    s.cohesion = number(e, "cohesion", p);
    s.friction_deg = number(e, "friction_deg", p);
    return s;
  };
  const auto& layers = array(j, "layers", root);
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const auto p = at(root + ".layers", i);
    SoilLayer l;
    l.thickness = number(layers[i], "thickness", p);
    l.first_ls = strength(field(layers[i], "first_ls", p), p + ".first_ls");
    l.second_ls = strength(field(layers[i], "second_ls", p), p + ".second_ls");
    soil.layers.push_back(l);
  }
  const auto& st = field(j, "settlement", root);
  soil.settlement.linearity_limit = number(st, "linearity_limit", root + ".settlement");
  soil.settlement.reference_settlement = number(st, "reference_settlement", root + ".settlement");
  if (j.contains("overrides")) {
    const auto& o = j["overrides"];
    for (std::size_t i = 0; i < o.size(); ++i) {
      const auto p = at(root + ".overrides", i);
      SettlementParameters sp;
      sp.linearity_limit = number(o[i], "linearity_limit", p);
      sp.reference_settlement = number(o[i], "reference_settlement", p);
      soil.overrides[integer(field(o[i], "node", p), p + ".node")] = sp;
    }
  }
  if (j.contains("water_table_depth") && !j["water_table_depth"].is_null())
    soil.water_table_depth = number(j["water_table_depth"], root + ".water_table_depth");
  soil.settlement_limit = number_or(j, "settlement_limit", soil.settlement_limit, root);
  if (auto errors = validate_soil(soil); !errors.empty()) throw ConfigError(errors.front());
  return soil;
}

UnitCosts parse_costs(const Json& j) {
  const std::string root = "costs";
  auto family = [&](const std::string& name, ElementUnitCosts& c) {
    const auto& e = field(j, name, root);
    const auto p = root + "." + name;
    c.formwork = number(e, "formwork", p);
    c.stirrup_elaboration = number(e, "stirrup_elaboration", p);
    c.stirrup_placement = number(e, "stirrup_placement", p);
    c.bar_elaboration = number(e, "bar_elaboration", p);
    c.bar_placement = number(e, "bar_placement", p);
    c.concrete_placement = number(e, "concrete_placement", p);
    const auto& grades = field(e, "concrete_elaboration", p);
    if (!grades.is_object() || grades.empty()) bad(p + ".concrete_elaboration", "expected a grade → price object");
    for (const auto& [grade, price] : grades.items()) {
      double g = 0.0;
      try {
        std::size_t used = 0;
        g = std::stod(grade, &used);
        if (used != grade.size()) throw std::invalid_argument(grade);
      } catch (const std::exception&) {
        bad(p + ".concrete_elaboration." + grade, "grade key is not a number");
      }
      c.concrete_elaboration[g] = number(price, p + ".concrete_elaboration." + grade);
    }
    auto check = [&](double v, const std::string& key) {
      if (v < 0.0) bad(p + "." + key, "unit cost must be >= 0");
    };
    check(c.formwork, "formwork");
    check(c.stirrup_elaboration, "stirrup_elaboration");
    check(c.stirrup_placement, "stirrup_placement");
    check(c.bar_elaboration, "bar_elaboration");
    check(c.bar_placement, "bar_placement");
    check(c.concrete_placement, "concrete_placement");
    for (const auto& [g, v] : c.concrete_elaboration) check(v, "concrete_elaboration." + format_number(g));
  };
  UnitCosts costs;
  family("beams", costs.beams);
  family("columns", costs.columns);
  family("foundations", costs.foundations);
  costs.excavation = number(field(j, "foundations", root), "excavation", root + ".foundations");
  costs.refill = number(field(j, "foundations", root), "refill", root + ".foundations");
  if (costs.excavation < 0.0) bad(root + ".foundations.excavation", "unit cost must be >= 0");
  if (costs.refill < 0.0) bad(root + ".foundations.refill", "unit cost must be >= 0");
  return costs;
}

DesignSettings parse_settings(const Json& j) {
  const std::string root = "settings";
  DesignSettings s;
  if (j.is_null()) return s;
  if (!j.is_object()) bad(root, "expected an object");
  std::set<std::string> known;
  auto real = [&](const char* key, double& target) {
    known.insert(key);
    if (j.contains(key)) target = number(j[key], root + "." + key);
  };
  auto whole = [&](const char* key, int& target) {
    known.insert(key);
    if (j.contains(key)) target = integer(j[key], root + "." + key);
  };
  real("fy", s.fy);
  real("steel_modulus", s.steel_modulus);
  whole("stirrup_diameter", s.stirrup_diameter);
  whole("stirrup_legs", s.stirrup_legs);
  real("beam_cover", s.beam_cover);
  real("column_cover", s.column_cover);
  real("min_clear_spacing", s.min_clear_spacing);
  real("beam_min_ratio", s.beam_min_ratio);
  real("column_min_ratio", s.column_min_ratio);
  whole("max_bars_per_face", s.max_bars_per_face);
  real("phi_flexure", s.phi_flexure);
  real("phi_shear", s.phi_shear);
  real("phi_compression", s.phi_compression);
  real("deflection_divisor", s.deflection_divisor);
  real("drift_divisor", s.drift_divisor);
  real("footing_cover", s.footing_cover);
  whole("footing_bar_guess", s.footing_bar_guess);
  real("footing_max_bar_spacing", s.footing_max_bar_spacing);
  real("footing_min_ratio", s.footing_min_ratio);
  real("footing_min_width", s.footing_min_width);
  real("footing_max_width", s.footing_max_width);
  real("footing_min_thickness", s.footing_min_thickness);
  real("footing_max_thickness", s.footing_max_thickness);
  real("size_step", s.size_step);
  real("excavation_clearance", s.excavation_clearance);
  real("overturning_ls1", s.overturning_ls1);
  real("overturning_ls2", s.overturning_ls2);
  real("sliding_cohesion_factor", s.sliding_cohesion_factor);
  real("sssi_tolerance", s.sssi_tolerance);
  whole("sssi_max_iterations", s.sssi_max_iterations);
  whole("sssi_damping_after", s.sssi_damping_after);
  real("penalty_factor", s.penalty_factor);
  real("infeasible_cost", s.infeasible_cost);
  real("steel_density", s.steel_density);
  real("lap_factor", s.lap_factor);
  real("top_bar_fraction", s.top_bar_fraction);
  known.insert("sssi_combination");
  if (j.contains("sssi_combination")) s.sssi_combination = text(j["sssi_combination"], root + ".sssi_combination");
  known.insert("bar_catalog");
  if (j.contains("bar_catalog")) {
    const auto& a = j["bar_catalog"];
    if (!a.is_array() || a.empty()) bad(root + ".bar_catalog", "expected a non-empty array");
    s.bar_catalog.clear();
    for (std::size_t i = 0; i < a.size(); ++i) s.bar_catalog.push_back(integer(a[i], at(root + ".bar_catalog", i)));
  }
  reject_unknown(j, known, root);
  if (!(s.sssi_tolerance > 0.0 && s.sssi_tolerance < 1.0 + 1e-12)) bad(root + ".sssi_tolerance", "must lie in (0, 1]");
  if (s.sssi_max_iterations < 1) bad(root + ".sssi_max_iterations", "must be >= 1");
  if (!(s.size_step > 0.0)) bad(root + ".size_step", "must be > 0");
  return s;
}

StructuralModel load_model(const std::filesystem::path& path) {
  const auto j = read_json(path);
  try {
    return parse_model(j);
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

DesignVariableSpec load_spec(const std::filesystem::path& path) {
  const auto j = read_json(path);
  try {
    return parse_spec(j);
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

SoilProfile load_soil(const std::filesystem::path& path) {
  const auto j = read_json(path);
  try {
    return parse_soil(j);
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

UnitCosts load_costs(const std::filesystem::path& path) {
  const auto j = read_json(path);
  try {
    return parse_costs(j);
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

}  // namespace rcbbo
