#include "rcbbo/frame_solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rcbbo/errors.hpp"

namespace rcbbo {

namespace {

constexpr double kPoisson = 0.2;
constexpr const char* kDofNames[6] = {"ux", "uy", "uz", "rx", "ry", "rz"};

using Mat12 = Eigen::Matrix<double, 12, 12>;
using Vec12 = Eigen::Matrix<double, 12, 1>;

Mat12 transformation(const Eigen::Matrix3d& r) {
  Mat12 t = Mat12::Zero();
  for (int i = 0; i < 4; ++i) t.block<3, 3>(3 * i, 3 * i) = r;
  return t;
}

Mat12 local_stiffness(const MemberSection& s, double L) {
  const double E = 1000.0 * s.modulus();  // kPa
  const double G = E / (2.0 * (1.0 + kPoisson));
  const double A = s.area();
  const double Iw = s.inertia_strong();
  const double Iv = s.inertia_weak();
  const double J = s.torsion_constant();
  const double L2 = L * L;
  const double L3 = L2 * L;

  Mat12 k = Mat12::Zero();
  auto set = [&k](int i, int j, double v) {
    k(i, j) = v;
    k(j, i) = v;
  };
  set(0, 0, E * A / L);
  set(6, 6, E * A / L);
  set(0, 6, -E * A / L);
  set(3, 3, G * J / L);
  set(9, 9, G * J / L);
  set(3, 9, -G * J / L);
  // x-v plane, rotation about w
  set(1, 1, 12 * E * Iw / L3);
  set(7, 7, 12 * E * Iw / L3);
  set(1, 7, -12 * E * Iw / L3);
  set(1, 5, 6 * E * Iw / L2);
  set(1, 11, 6 * E * Iw / L2);
  set(5, 7, -6 * E * Iw / L2);
  set(7, 11, -6 * E * Iw / L2);
  set(5, 5, 4 * E * Iw / L);
  set(11, 11, 4 * E * Iw / L);
  set(5, 11, 2 * E * Iw / L);
  // x-w plane, rotation about v
  set(2, 2, 12 * E * Iv / L3);
  set(8, 8, 12 * E * Iv / L3);
  set(2, 8, -12 * E * Iv / L3);
  set(2, 4, -6 * E * Iv / L2);
  set(2, 10, -6 * E * Iv / L2);
  set(4, 8, 6 * E * Iv / L2);
  set(8, 10, 6 * E * Iv / L2);
  set(4, 4, 4 * E * Iv / L);
  set(10, 10, 4 * E * Iv / L);
  set(4, 10, 2 * E * Iv / L);
  return k;
}

}  // namespace

double concrete_modulus(double fc_mpa) {
  if (!(fc_mpa > 0.0)) throw DomainError("f'c must be > 0 MPa");
  return 4700.0 * std::sqrt(fc_mpa);
}

double MemberSection::torsion_constant() const {
  const double a = std::max(b, h);
  const double c = std::min(b, h);
  const double r = c / a;
  return a * c * c * c * (1.0 / 3.0 - 0.21 * r * (1.0 - r * r * r * r / 12.0));
}

MemberSection make_section(double b, double h, double fc) {
  if (!(b > 0.0) || !(h > 0.0)) throw DomainError("section dimensions must be > 0");
  if (!(fc > 0.0)) throw DomainError("f'c must be > 0 MPa");
  return MemberSection{b, h, fc};
}

SupportStiffness SupportStiffness::fixed() {
  SupportStiffness s;
  s.restrained.fill(true);
  return s;
}

SupportStiffness SupportStiffness::from(const Support& support) {
  SupportStiffness s;
  switch (support.kind) {
    case SupportKind::fixed:
      s.restrained.fill(true);
      break;
    case SupportKind::pinned:
      s.restrained = {true, true, true, false, false, false};
      break;
    case SupportKind::spring:
      break;
  }
  for (int i = 0; i < 6; ++i) {
    s.restrained[i] = s.restrained[i] || support.restrained[i];
    s.springs[i] = support.springs[i];
  }
  return s;
}

std::vector<FactoredCase> expand_combination(const StructuralModel& model, const Combination& c) {
  std::vector<FactoredCase> cases;
  for (const auto& [name, factor] : c.factors) {
    const LoadCase* lc = model.load_case(name);
    const bool sw = name == model.self_weight_case;
    if (!lc && !sw) throw ConfigError("combination " + c.name + ": unknown load case " + name);
    cases.push_back({factor, lc, sw});
  }
  return cases;
}

FrameAnalysis::FrameAnalysis(const StructuralModel& model, std::vector<MemberSection> sections,
                             std::vector<SupportStiffness> supports)
    : model_(&model), sections_(std::move(sections)), supports_(std::move(supports)) {
  if (sections_.size() != model.members.size())
    throw AnalysisError("one section per member required");
  if (supports_.size() != model.supports.size())
    throw AnalysisError("one support condition per model support required");

  const std::size_t n = dof_count();
  k_full_ = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  elements_.reserve(model.members.size());

  for (std::size_t m = 0; m < model.members.size(); ++m) {
    const auto& mem = model.members[m];
    Element e;
    const auto ia = model.node_index(mem.start);
    const auto ib = model.node_index(mem.end);
    if (!ia || !ib) throw AnalysisError("member " + std::to_string(mem.id) + " references a missing node");
    e.a = *ia;
    e.b = *ib;
    const auto& pa = model.nodes[e.a].xyz;
    const auto& pb = model.nodes[e.b].xyz;
    Eigen::Vector3d dx(pb[0] - pa[0], pb[1] - pa[1], pb[2] - pa[2]);
    e.length = dx.norm();
    if (!(e.length > 1e-9)) throw AnalysisError("member " + std::to_string(mem.id) + " has zero length");
    const Eigen::Vector3d ex = dx / e.length;

    Eigen::Vector3d ref;
    if (mem.depth_direction) {
      ref = Eigen::Vector3d((*mem.depth_direction)[0], (*mem.depth_direction)[1], (*mem.depth_direction)[2]);
    } else if (std::abs(ex.z()) < 1.0 - 1e-9) {
      ref = Eigen::Vector3d::UnitZ();
    } else {
      ref = Eigen::Vector3d::UnitX();
    }
    Eigen::Vector3d ev = ref - ref.dot(ex) * ex;
    if (ev.norm() < 1e-9)
      throw AnalysisError("member " + std::to_string(mem.id) + ": depth direction parallel to the axis");
    ev.normalize();
    const Eigen::Vector3d ew = ex.cross(ev);
    e.rotation.row(0) = ex.transpose();
    e.rotation.row(1) = ev.transpose();
    e.rotation.row(2) = ew.transpose();
    e.k_local = local_stiffness(sections_[m], e.length);

    const Mat12 t = transformation(e.rotation);
    const Mat12 kg = t.transpose() * e.k_local * t;
    const std::size_t dofs[2] = {6 * e.a, 6 * e.b};
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        k_full_.block<6, 6>(static_cast<Eigen::Index>(dofs[i]), static_cast<Eigen::Index>(dofs[j])) +=
            kg.block<6, 6>(6 * i, 6 * j);
    elements_.push_back(e);
  }

  std::vector<bool> restrained(n, false);
  spring_diag_.assign(n, 0.0);
  for (std::size_t s = 0; s < model.supports.size(); ++s) {
    const auto idx = model.node_index(model.supports[s].node);
    if (!idx) throw AnalysisError("support references a missing node");
    for (int d = 0; d < 6; ++d) {
      const std::size_t g = 6 * *idx + static_cast<std::size_t>(d);
      if (supports_[s].restrained[d])
        restrained[g] = true;
      else
        spring_diag_[g] += supports_[s].springs[d];
    }
  }
  free_index_.assign(n, -1);
  int nf = 0;
  for (std::size_t g = 0; g < n; ++g)
    if (!restrained[g]) free_index_[g] = nf++;

  Eigen::MatrixXd kff(nf, nf);
  for (std::size_t i = 0; i < n; ++i) {
    if (free_index_[i] < 0) continue;
    for (std::size_t j = 0; j < n; ++j) {
      if (free_index_[j] < 0) continue;
      kff(free_index_[i], free_index_[j]) =
          k_full_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
    kff(free_index_[i], free_index_[i]) += spring_diag_[i];
  }
  if (nf == 0) return;

  factor_.compute(kff);
  const double scale = kff.diagonal().cwiseAbs().maxCoeff();
  bool singular = factor_.info() != Eigen::Success || !(scale > 0.0);
  if (!singular) {
    const Eigen::VectorXd pivots = Eigen::MatrixXd(factor_.matrixL()).diagonal();
    singular = (pivots.array().square() < 1e-11 * scale).any();
  }
  if (singular) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(kff);
    std::ostringstream msg;
    msg << "singular stiffness matrix; free modes:";
    const double lmax = std::max(std::abs(eig.eigenvalues().maxCoeff()), 1.0);
    int modes = 0;
    for (Eigen::Index k = 0; k < eig.eigenvalues().size() && modes < 6; ++k) {
      if (eig.eigenvalues()(k) > 1e-11 * lmax) break;
      Eigen::Index arg = 0;
      eig.eigenvectors().col(k).cwiseAbs().maxCoeff(&arg);
      for (std::size_t g = 0; g < n; ++g) {
        if (free_index_[g] == arg) {
          msg << " [node " << model.nodes[g / 6].id << " " << kDofNames[g % 6] << "]";
          break;
        }
      }
      ++modes;
    }
    throw AnalysisError(msg.str());
  }
}

Vec12 FrameAnalysis::fixed_end_reactions(const Element& e, const Eigen::Vector3d& q) const {
  const double L = e.length;
  Vec12 f = Vec12::Zero();
  f(0) = -q.x() * L / 2;
  f(1) = -q.y() * L / 2;
  f(2) = -q.z() * L / 2;
  f(4) = q.z() * L * L / 12;
  f(5) = -q.y() * L * L / 12;
  f(6) = -q.x() * L / 2;
  f(7) = -q.y() * L / 2;
  f(8) = -q.z() * L / 2;
  f(10) = -q.z() * L * L / 12;
  f(11) = q.y() * L * L / 12;
  return f;
}

std::vector<Eigen::Vector3d> FrameAnalysis::member_loads(std::span<const FactoredCase> cases) const {
  std::vector<Eigen::Vector3d> q(elements_.size(), Eigen::Vector3d::Zero());
  for (const auto& fc : cases) {
    if (fc.load_case) {
      for (const auto& ml : fc.load_case->member_loads) {
        const auto idx = model_->member_index(ml.member);
        if (!idx) throw AnalysisError("load on missing member " + std::to_string(ml.member));
        q[*idx] += fc.factor * Eigen::Vector3d(ml.w[0], ml.w[1], ml.w[2]);
      }
    }
    if (fc.self_weight) {
      for (std::size_t m = 0; m < elements_.size(); ++m)
        q[m].z() -= fc.factor * model_->concrete_unit_weight * sections_[m].area();
    }
  }
  return q;
}

Vec3 FrameAnalysis::applied_force_total(std::span<const FactoredCase> cases) const {
  Eigen::Vector3d total = Eigen::Vector3d::Zero();
  const auto q = member_loads(cases);
  for (std::size_t m = 0; m < elements_.size(); ++m) total += q[m] * elements_[m].length;
  for (const auto& fc : cases) {
    if (!fc.load_case) continue;
    for (const auto& nl : fc.load_case->nodal_loads)
      total += fc.factor * Eigen::Vector3d(nl.f[0], nl.f[1], nl.f[2]);
  }
  return {total.x(), total.y(), total.z()};
}

InternalForces FrameAnalysis::solve(std::span<const FactoredCase> cases) const {
  const auto& model = *model_;
  const std::size_t n = dof_count();
  Eigen::VectorXd f = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));

  for (const auto& fc : cases) {
    if (!fc.load_case) continue;
    for (const auto& nl : fc.load_case->nodal_loads) {
      const auto idx = model.node_index(nl.node);
      if (!idx) throw AnalysisError("load on missing node " + std::to_string(nl.node));
      for (int d = 0; d < 6; ++d) f(static_cast<Eigen::Index>(6 * *idx + d)) += fc.factor * nl.f[d];
    }
  }
  const auto q_global = member_loads(cases);
  std::vector<Eigen::Vector3d> q_local(elements_.size());
  std::vector<Vec12> fer(elements_.size());
  for (std::size_t m = 0; m < elements_.size(); ++m) {
    const auto& e = elements_[m];
    q_local[m] = e.rotation * q_global[m];
    fer[m] = fixed_end_reactions(e, q_local[m]);
    const Vec12 equiv = -(transformation(e.rotation).transpose() * fer[m]);
    f.segment<6>(static_cast<Eigen::Index>(6 * e.a)) += equiv.head<6>();
    f.segment<6>(static_cast<Eigen::Index>(6 * e.b)) += equiv.tail<6>();
  }

  Eigen::VectorXd u = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  const Eigen::Index nf = factor_.matrixLLT().rows();
  if (nf > 0) {
    Eigen::VectorXd ff(nf);
    for (std::size_t g = 0; g < n; ++g)
      if (free_index_[g] >= 0) ff(free_index_[g]) = f(static_cast<Eigen::Index>(g));
    const Eigen::VectorXd uf = factor_.solve(ff);
    for (std::size_t g = 0; g < n; ++g)
      if (free_index_[g] >= 0) u(static_cast<Eigen::Index>(g)) = uf(free_index_[g]);
  }

  InternalForces out;
  out.displacements.resize(model.nodes.size());
  for (std::size_t i = 0; i < model.nodes.size(); ++i)
    for (int d = 0; d < 6; ++d) out.displacements[i][d] = u(static_cast<Eigen::Index>(6 * i + d));

  const Eigen::VectorXd ku = k_full_ * u;
  out.reactions.resize(model.supports.size());
  for (std::size_t s = 0; s < model.supports.size(); ++s) {
    const std::size_t node = *model.node_index(model.supports[s].node);
    for (int d = 0; d < 6; ++d) {
      const auto g = static_cast<Eigen::Index>(6 * node + d);
      out.reactions[s][d] = supports_[s].restrained[d] ? ku(g) - f(g) : -supports_[s].springs[d] * u(g);
    }
  }

  out.members.resize(elements_.size());
  for (std::size_t m = 0; m < elements_.size(); ++m) {
    const auto& e = elements_[m];
    Vec12 ug;
    ug.head<6>() = u.segment<6>(static_cast<Eigen::Index>(6 * e.a));
    ug.tail<6>() = u.segment<6>(static_cast<Eigen::Index>(6 * e.b));
    const Vec12 ul = transformation(e.rotation) * ug;
    const Vec12 fl = e.k_local * ul + fer[m];
    const Eigen::Vector3d& q = q_local[m];
    const double L = e.length;
    const double E = 1000.0 * sections_[m].modulus();
    const double Iw = sections_[m].inertia_strong();
    const double Iv = sections_[m].inertia_weak();

    auto& mf = out.members[m];
    mf.length = L;
    mf.stations.resize(kStations);
    for (int k = 0; k < kStations; ++k) {
      const double xi = static_cast<double>(k) / (kStations - 1);
      const double x = xi * L;
      StationForces st;
      st.x = x;
      st.N = -(fl(0) + q.x() * x);
      st.Vv = -(fl(1) + q.y() * x);
      st.Vw = -(fl(2) + q.z() * x);
      st.T = -fl(3);
      st.Mv = -fl(4) - x * fl(2) - 0.5 * x * x * q.z();
      st.Mw = -fl(5) + x * fl(1) + 0.5 * x * x * q.y();

      const double n2 = L * (xi - 2 * xi * xi + xi * xi * xi);
      const double n4 = L * (-xi * xi + xi * xi * xi);
      const double bubble = x * x * (L - x) * (L - x) / 24.0;
      const double dv = n2 * ul(5) + n4 * ul(11) + q.y() * bubble / (E * Iw);
      const double dw = -n2 * ul(4) - n4 * ul(10) + q.z() * bubble / (E * Iv);
      st.deflection = std::hypot(dv, dw);
      mf.stations[k] = st;
    }
  }

  double ztop = -1e300;
  for (const auto& nd : model.nodes) ztop = std::max(ztop, nd.xyz[2]);
  for (std::size_t i = 0; i < model.nodes.size(); ++i) {
    if (model.nodes[i].xyz[2] >= ztop - 1e-6)
      out.top_displacement =
          std::max(out.top_displacement, std::hypot(out.displacements[i][0], out.displacements[i][1]));
  }
  return out;
}

InternalForces FrameAnalysis::solve(const LoadCase& load_case) const {
  const FactoredCase fc{1.0, &load_case, load_case.name == model_->self_weight_case};
  return solve(std::span<const FactoredCase>(&fc, 1));
}

InternalForces FrameAnalysis::solve(const Combination& combination) const {
  const auto cases = expand_combination(*model_, combination);
  return solve(cases);
}

InternalForces solve_static(const StructuralModel& model, const std::vector<MemberSection>& sections,
                            const std::vector<SupportStiffness>& supports, const LoadCase& load_case) {
  return FrameAnalysis(model, sections, supports).solve(load_case);
}

}  // namespace rcbbo
