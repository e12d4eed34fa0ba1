#include "rcbbo/model.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "rcbbo/csv.hpp"
#include "rcbbo/errors.hpp"

namespace rcbbo {

std::optional<std::size_t> StructuralModel::node_index(int id) const {
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (nodes[i].id == id) return i;
  return std::nullopt;
}

std::optional<std::size_t> StructuralModel::member_index(int id) const {
  for (std::size_t i = 0; i < members.size(); ++i)
    if (members[i].id == id) return i;
  return std::nullopt;
}

const LoadCase* StructuralModel::load_case(const std::string& name) const {
  for (const auto& lc : load_cases)
    if (lc.name == name) return &lc;
  return nullptr;
}

std::vector<std::string> validate_model(const StructuralModel& model) {
  std::vector<std::string> errors;
  auto add = [&](std::string msg) { errors.push_back(std::move(msg)); };

  std::set<int> node_ids;
  for (const auto& n : model.nodes) {
    if (!node_ids.insert(n.id).second) add("duplicate node id " + std::to_string(n.id));
  }
  std::set<int> member_ids;
  for (const auto& m : model.members) {
    const std::string tag = "member " + std::to_string(m.id);
    if (!member_ids.insert(m.id).second) add("duplicate member id " + std::to_string(m.id));
    const auto a = model.node_index(m.start);
    const auto b = model.node_index(m.end);
    if (!a) add(tag + ": start node " + std::to_string(m.start) + " does not exist");
    if (!b) add(tag + ": end node " + std::to_string(m.end) + " does not exist");
    if (a && b) {
      const auto& p = model.nodes[*a].xyz;
      const auto& q = model.nodes[*b].xyz;
      const double len = std::hypot(q[0] - p[0], q[1] - p[1], q[2] - p[2]);
      if (!(len > 1e-9)) add(tag + ": zero length");
    }
    if (m.group.empty()) add(tag + ": no group");
  }
  std::set<int> support_nodes;
  for (const auto& s : model.supports) {
    if (!model.node_index(s.node)) add("support node " + std::to_string(s.node) + " does not exist");
    if (!support_nodes.insert(s.node).second)
      add("node " + std::to_string(s.node) + " has more than one support");
    for (double k : s.springs)
      if (!(k >= 0.0) || !std::isfinite(k)) add("support " + std::to_string(s.node) + ": negative or non-finite spring");
  }
  if (!(model.height > 0.0)) add("height H must be > 0");
  std::set<std::string> case_names;
  for (const auto& lc : model.load_cases) {
    if (!case_names.insert(lc.name).second) add("duplicate load case " + lc.name);
    for (const auto& ml : lc.member_loads)
      if (!model.member_index(ml.member))
        add("load case " + lc.name + ": member " + std::to_string(ml.member) + " does not exist");
    for (const auto& nl : lc.nodal_loads)
      if (!model.node_index(nl.node))
        add("load case " + lc.name + ": node " + std::to_string(nl.node) + " does not exist");
  }
  for (const auto& c : model.combinations) {
    for (const auto& [name, factor] : c.factors) {
      (void)factor;
      if (!model.load_case(name) && name != model.self_weight_case)
        add("combination " + c.name + ": unknown load case " + name);
    }
  }
  if (!(model.concrete_unit_weight >= 0.0)) add("concrete unit weight must be >= 0");
  return errors;
}

// ---------------------------------------------------------------------------

std::optional<std::size_t> DesignVariableSpec::variable_index(const std::string& name) const {
  for (std::size_t i = 0; i < variables.size(); ++i)
    if (variables[i].name == name) return i;
  return std::nullopt;
}

const SectionGroup* DesignVariableSpec::section_group(const std::string& name) const {
  for (const auto& g : section_groups)
    if (g.name == name) return &g;
  return nullptr;
}

const FootingGroup* DesignVariableSpec::footing_group(const std::string& name) const {
  for (const auto& g : footing_groups)
    if (g.name == name) return &g;
  return nullptr;
}

namespace {

bool is_multiple_of_5cm(double v) {
  const double steps = v / 0.05;
  return std::abs(steps - std::round(steps)) < 1e-6;
}

void check_ref(const DesignVariableSpec& spec, const ValueRef& ref, VariableKind kind,
               const std::string& where) {
  if (!ref.is_variable()) {
    if (!(ref.fixed > 0.0)) throw SpecError(where + ": fixed value must be > 0");
    if (kind == VariableKind::dimension && !is_multiple_of_5cm(ref.fixed))
      throw SpecError(where + ": fixed dimension must be a multiple of 0.05 m");
    return;
  }
  const auto idx = spec.variable_index(ref.variable);
  if (!idx) throw SpecError(where + ": unknown variable '" + ref.variable + "'");
  if (spec.variables[*idx].kind != kind)
    throw SpecError(where + ": variable '" + ref.variable + "' has the wrong kind");
}

}  // namespace

void validate_spec(const DesignVariableSpec& spec) {
  std::set<std::string> names;
  for (const auto& v : spec.variables) {
    if (v.name.empty()) throw SpecError("variable with empty name");
    if (!names.insert(v.name).second) throw SpecError("duplicate variable '" + v.name + "'");
    if (v.values.empty()) throw SpecError("variable '" + v.name + "': empty candidate list");
    for (double x : v.values) {
      if (!std::isfinite(x) || (v.kind != VariableKind::real && !(x > 0.0)))
        throw SpecError("variable '" + v.name + "': values must be positive");
      if (v.kind == VariableKind::dimension && !is_multiple_of_5cm(x))
        throw SpecError("variable '" + v.name + "': " + format_number(x) +
                        " is not a multiple of 0.05 m");
    }
  }
  for (const auto& g : spec.section_groups) {
    check_ref(spec, g.width, VariableKind::dimension, "section group " + g.name + ".width");
    check_ref(spec, g.height, VariableKind::dimension, "section group " + g.name + ".height");
    check_ref(spec, g.grade, VariableKind::grade, "section group " + g.name + ".grade");
  }
  for (const auto& g : spec.footing_groups) {
    check_ref(spec, g.rectangularity, VariableKind::rectangularity,
              "footing group " + g.name + ".rectangularity");
    check_ref(spec, g.grade, VariableKind::grade, "footing group " + g.name + ".grade");
    if (!(g.depth > 0.0)) throw SpecError("footing group " + g.name + ": depth must be > 0");
  }
}

std::vector<std::string> validate_bindings(const StructuralModel& model,
                                           const DesignVariableSpec& spec) {
  std::vector<std::string> errors;
  for (const auto& m : model.members)
    if (!spec.section_group(m.group))
      errors.push_back("member " + std::to_string(m.id) + ": group '" + m.group +
                       "' not defined in the variable spec");
  for (const auto& s : model.supports)
    if (!s.footing_group.empty() && !spec.footing_group(s.footing_group))
      errors.push_back("support " + std::to_string(s.node) + ": footing group '" +
                       s.footing_group + "' not defined in the variable spec");
  return errors;
}

// ---------------------------------------------------------------------------

double DesignCandidate::resolve(const ValueRef& ref, const DesignVariableSpec& spec) const {
  if (!ref.is_variable()) return ref.fixed;
  const auto idx = spec.variable_index(ref.variable);
  if (!idx || *idx >= values.size()) throw SpecError("unresolved variable '" + ref.variable + "'");
  return values[*idx];
}

std::string DesignCandidate::csv_row() const { return join_numbers(values); }

DesignCandidate decode_candidate(std::span<const double> genome, const DesignVariableSpec& spec) {
  if (genome.size() != spec.size())
    throw SpecError("genome length " + std::to_string(genome.size()) + " != variable count " +
                    std::to_string(spec.size()));
  DesignCandidate c;
  c.genome.assign(genome.begin(), genome.end());
  c.indices.resize(spec.size());
  c.values.resize(spec.size());
  for (std::size_t k = 0; k < spec.size(); ++k) {
    const auto& list = spec.variables[k].values;
    const std::size_t m = list.size();
    const double g = std::clamp(genome[k], 0.0, 1.0);
    auto idx = static_cast<std::size_t>(std::floor(g * static_cast<double>(m)));
    idx = std::min(idx, m - 1);
    c.indices[k] = idx;
    c.values[k] = list[idx];
  }
  return c;
}

std::vector<double> encode_center(std::span<const std::size_t> indices,
                                  const DesignVariableSpec& spec) {
  if (indices.size() != spec.size()) throw SpecError("index vector length mismatch");
  std::vector<double> g(indices.size());
  for (std::size_t k = 0; k < indices.size(); ++k) {
    const auto m = static_cast<double>(spec.variables[k].values.size());
    g[k] = (static_cast<double>(indices[k]) + 0.5) / m;
  }
  return g;
}

DesignCandidate candidate_from_indices(std::vector<std::size_t> indices,
                                       const DesignVariableSpec& spec) {
  if (indices.size() != spec.size()) throw SpecError("index vector length mismatch");
  DesignCandidate c;
  c.values.resize(indices.size());
  for (std::size_t k = 0; k < indices.size(); ++k) {
    const auto& list = spec.variables[k].values;
    if (indices[k] >= list.size())
      throw SpecError("index out of range for variable '" + spec.variables[k].name + "'");
    c.values[k] = list[indices[k]];
  }
  c.genome = encode_center(indices, spec);
  c.indices = std::move(indices);
  return c;
}

std::uint64_t candidate_count(const DesignVariableSpec& spec) {
  std::uint64_t n = 1;
  for (const auto& v : spec.variables) n *= v.values.size();
  return n;
}

CandidateRange::iterator::iterator(const DesignVariableSpec* spec, bool at_end) : spec_(spec) {
  done_ = at_end || candidate_count(*spec) == 0;
  if (!done_) current_ = candidate_from_indices(std::vector<std::size_t>(spec->size(), 0), *spec);
}

CandidateRange::iterator& CandidateRange::iterator::operator++() {
  auto indices = current_.indices;
  std::size_t k = indices.size();
  while (k > 0) {
    --k;
    if (++indices[k] < spec_->variables[k].values.size()) {
      current_ = candidate_from_indices(std::move(indices), *spec_);
      return *this;
    }
    indices[k] = 0;
  }
  done_ = true;
  return *this;
}

// ---------------------------------------------------------------------------

const SettlementParameters& SoilProfile::settlement_at(int node) const {
  const auto it = overrides.find(node);
  return it == overrides.end() ? settlement : it->second;
}

const SoilLayer& SoilProfile::layer_at(double depth) const {
  double top = 0.0;
  for (const auto& layer : layers) {
    if (depth < top + layer.thickness) return layer;
    top += layer.thickness;
  }
  return layers.back();
}

double SoilProfile::overburden(double depth, bool first_ls) const {
  double sigma = 0.0;
  double top = 0.0;
  for (std::size_t i = 0; i < layers.size() && top < depth; ++i) {
    const double bottom = (i + 1 == layers.size()) ? depth : std::min(depth, top + layers[i].thickness);
    const auto& props = first_ls ? layers[i].first_ls : layers[i].second_ls;
    sigma += props.unit_weight * (bottom - top);
    top = bottom;
  }
  return sigma;
}

std::vector<std::string> validate_soil(const SoilProfile& soil) {
  std::vector<std::string> errors;
  if (soil.layers.empty()) errors.emplace_back("soil: no layers");
  for (std::size_t i = 0; i < soil.layers.size(); ++i) {
    const auto& l = soil.layers[i];
    const std::string tag = "soil.layers[" + std::to_string(i) + "]";
    if (!(l.thickness > 0.0)) errors.push_back(tag + ".thickness must be > 0");
    for (const auto* s : {&l.first_ls, &l.second_ls}) {
      if (!(s->unit_weight > 0.0)) errors.push_back(tag + ": unit weight must be > 0");
      if (!(s->cohesion >= 0.0)) errors.push_back(tag + ": cohesion must be >= 0");
      if (!(s->friction_deg >= 0.0 && s->friction_deg <= 50.0))
        errors.push_back(tag + ": friction angle must be in [0, 50] degrees");
    }
  }
  auto check_params = [&](const SettlementParameters& p, const std::string& tag) {
    if (!(p.linearity_limit > 0.0)) errors.push_back(tag + ": R* must be > 0");
    if (!(p.reference_settlement > 0.0)) errors.push_back(tag + ": reference settlement must be > 0");
  };
  check_params(soil.settlement, "soil.settlement");
  for (const auto& [node, p] : soil.overrides) check_params(p, "soil.overrides[" + std::to_string(node) + "]");
  if (!(soil.settlement_limit > 0.0)) errors.emplace_back("soil.settlement_limit must be > 0");
  return errors;
}

}  // namespace rcbbo
