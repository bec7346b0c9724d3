#include "vep/functionals.hpp"

#include <cmath>
#include <stdexcept>

namespace vep {

namespace {

// Chunk-deterministic accumulation: per-cell-row partial sums reduced in
// fixed order, so results do not depend on traversal batching.
template <typename F>
double sum_over_cells(const Mesh& m, F&& cell_fn) {
  double total = 0.0;
  for (int cj = 0; cj < m.ny(); ++cj) {
    double row = 0.0;
    for (int ci = 0; ci < m.nx(); ++ci) row += cell_fn(ci, cj);
    total += row;
  }
  return total;
}

}  // namespace

TestPair zero_test_pair(const Mesh& mesh) {
  TestPair t;
  t.psi = VectorField(mesh);
  t.Psi = TensorField(mesh);
  t.p_dev_Psi = 0.0;
  t.label = "zero";
  t.is_zero = true;
  return t;
}

FunctionalEvaluator::FunctionalEvaluator(const Mesh& mesh, const MaterialParams& params)
    : mesh_(&mesh), params_(params), phi_(params), pot_(params),
      quad_(GaussRule::make(mesh)) {}

double FunctionalEvaluator::energy(const State& s) const {
  const auto& q = quad_;
  return sum_over_cells(*mesh_, [&](int ci, int cj) {
    const auto nodes = mesh_->cell_nodes(ci, cj);
    double acc = 0.0;
    for (int g = 0; g < GaussRule::npts; ++g) {
      const Vec2 v = eval_vec2(q, g, nodes, s.v);
      const auto ev = eval_tensor(q, g, nodes, s.E);
      acc += q.weight * (0.5 * params_.rho * (v.x * v.x + v.y * v.y) +
                         phi_.value(ev.val));
    }
    return acc;
  });
}

double FunctionalEvaluator::dissipation_visc(const State& s) const {
  const auto& q = quad_;
  return sum_over_cells(*mesh_, [&](int ci, int cj) {
    const auto nodes = mesh_->cell_nodes(ci, cj);
    double acc = 0.0;
    for (int g = 0; g < GaussRule::npts; ++g) {
      const auto vp = eval_velocity(q, g, nodes, s.v);
      acc += q.weight *
             newtonian_stress(vp.sym, params_.mu1, params_.mu2).dot(vp.sym);
    }
    return acc;
  });
}

double FunctionalEvaluator::dissipation(const State& s) const {
  double d = dissipation_visc(s);
  if (params_.gamma > 0.0) {
    const auto& q = quad_;
    d += params_.gamma * sum_over_cells(*mesh_, [&](int ci, int cj) {
      const auto nodes = mesh_->cell_nodes(ci, cj);
      double acc = 0.0;
      for (int g = 0; g < GaussRule::npts; ++g) {
        const auto ev = eval_tensor(q, g, nodes, s.E);
        // grad Dphi(E) = K[grad E] for the quadratic family
        const SymTensor3 gx = phi_.bulk() * ev.gx.sph() + phi_.shear() * ev.gx.dev();
        const SymTensor3 gy = phi_.bulk() * ev.gy.sph() + phi_.shear() * ev.gy.dev();
        acc += q.weight * (gx.norm2() + gy.norm2());
      }
      return acc;
    });
  }
  return d;
}

double FunctionalEvaluator::grad_v_norm2(const VectorField& v) const {
  const auto& q = quad_;
  return sum_over_cells(*mesh_, [&](int ci, int cj) {
    const auto nodes = mesh_->cell_nodes(ci, cj);
    double acc = 0.0;
    for (int g = 0; g < GaussRule::npts; ++g)
      acc += q.weight * eval_velocity(q, g, nodes, v).grad.norm2();
    return acc;
  });
}

CouplingBreakdown FunctionalEvaluator::coupling(const State& s, const TestPair& t) const {
  const auto& q = quad_;
  CouplingBreakdown out;
  const double rho = params_.rho;
  const double gamma = params_.gamma;
  for (int cj = 0; cj < mesh_->ny(); ++cj) {
    CouplingBreakdown row;
    for (int ci = 0; ci < mesh_->nx(); ++ci) {
      const auto nodes = mesh_->cell_nodes(ci, cj);
      for (int g = 0; g < GaussRule::npts; ++g) {
        const double w = q.weight;
        const auto vp = eval_velocity(q, g, nodes, s.v);
        const auto ep = eval_tensor(q, g, nodes, s.E);
        const auto pp = eval_velocity(q, g, nodes, t.psi);
        const auto Pp = eval_tensor(q, g, nodes, t.Psi);

        // (rho/2)(div v)(v.psi) + rho (v (x) v):grad psi
        const double vdotpsi = vp.v.x * pp.v.x + vp.v.y * pp.v.y;
        double vv_gradpsi = 0.0;
        const double vcomp[2] = {vp.v.x, vp.v.y};
        for (int i = 0; i < 2; ++i)
          for (int j = 0; j < 2; ++j)
            vv_gradpsi += vcomp[i] * vcomp[j] * pp.grad(i, j);
        row.convection += w * (0.5 * rho * vp.div * vdotpsi + rho * vv_gradpsi);

        // -(Dphi(E) + phi(E) I):grad psi - S(v):D(psi);  the symmetric
        // stress contracts against D(psi), the pressure against div psi.
        const SymTensor3 dphi = phi_.derivative(ep.val);
        const double phi_val = phi_.value(ep.val);
        row.stress += w * (-dphi.dot(pp.sym) - phi_val * pp.div -
                           newtonian_stress(vp.sym, params_.mu1, params_.mu2)
                               .dot(pp.sym));

        // (div v) E:Psi + v.grad(Psi):E - (E W - W E):Psi
        const double e_dot_P = ep.val.dot(Pp.val);
        const double v_gradP_e =
            vp.v.x * Pp.gx.dot(ep.val) + vp.v.y * Pp.gy.dot(ep.val);
        const SymTensor3 br = jaumann_bracket(ep.val, vp.skew, 1e30);
        row.transport += w * (vp.div * e_dot_P + v_gradP_e - br.dot(Pp.val));

        // D(v):Psi
        row.strain_rate += w * vp.sym.dot(Pp.val);

        // -gamma grad(Dphi(E)) ::: grad(Psi)
        if (gamma > 0.0) {
          const SymTensor3 gx = phi_.bulk() * ep.gx.sph() + phi_.shear() * ep.gx.dev();
          const SymTensor3 gy = phi_.bulk() * ep.gy.sph() + phi_.shear() * ep.gy.dev();
          row.diffusion += w * (-gamma) * (gx.dot(Pp.gx) + gy.dot(Pp.gy));
        }
      }
    }
    out.convection += row.convection;
    out.stress += row.stress;
    out.transport += row.transport;
    out.strain_rate += row.strain_rate;
    out.diffusion += row.diffusion;
  }
  return out;
}

double FunctionalEvaluator::forcing(const VectorField& f_nodal,
                                    const VectorField& psi) const {
  return ip_velocity(f_nodal, psi);
}

double FunctionalEvaluator::tensor_forcing(const TensorField& g_nodal,
                                           const TensorField& phi) const {
  return ip_tensor(g_nodal, phi);
}

double FunctionalEvaluator::p_of_dev_dphi(const TensorField& E) const {
  // Node-wise with lumped weights; dev Dphi(E) = G dev E for the quadratic
  // family, evaluated through the potential interface.  The yield ball is
  // widened by the solver feasibility slack so states that sit on the
  // boundary to within it keep a finite value.
  double total = 0.0;
  const int n = mesh_->num_nodes();
  const double hx = mesh_->hx(), hy = mesh_->hy();
  for (int i = 0; i < n; ++i) {
    const int ix = i % (mesh_->nx() + 1), iy = i / (mesh_->nx() + 1);
    const double wx = (ix == 0 || ix == mesh_->nx()) ? 0.5 : 1.0;
    const double wy = (iy == 0 || iy == mesh_->ny()) ? 0.5 : 1.0;
    const double m = wx * wy * hx * hy;
    const double p = pot_.density(phi_.derivative(E.node(i)).dev(), 1e-8, 1e-8);
    if (p == kInf) return kInf;
    total += m * p;
  }
  return total;
}

double FunctionalEvaluator::p_of_dev(const TensorField& A) const {
  double total = 0.0;
  const int n = mesh_->num_nodes();
  const double hx = mesh_->hx(), hy = mesh_->hy();
  for (int i = 0; i < n; ++i) {
    const int ix = i % (mesh_->nx() + 1), iy = i / (mesh_->nx() + 1);
    const double wx = (ix == 0 || ix == mesh_->nx()) ? 0.5 : 1.0;
    const double wy = (iy == 0 || iy == mesh_->ny()) ? 0.5 : 1.0;
    const double p = pot_.density(A.node(i).dev());
    if (p == kInf) return kInf;
    total += wx * wy * hx * hy * p;
  }
  return total;
}

double FunctionalEvaluator::ip_velocity(const VectorField& a,
                                        const VectorField& b) const {
  const auto& q = quad_;
  return sum_over_cells(*mesh_, [&](int ci, int cj) {
    const auto nodes = mesh_->cell_nodes(ci, cj);
    double acc = 0.0;
    for (int g = 0; g < GaussRule::npts; ++g) {
      const Vec2 va = eval_vec2(q, g, nodes, a);
      const Vec2 vb = eval_vec2(q, g, nodes, b);
      acc += q.weight * (va.x * vb.x + va.y * vb.y);
    }
    return acc;
  });
}

double FunctionalEvaluator::ip_tensor(const TensorField& a, const TensorField& b) const {
  const auto& q = quad_;
  return sum_over_cells(*mesh_, [&](int ci, int cj) {
    const auto nodes = mesh_->cell_nodes(ci, cj);
    double acc = 0.0;
    for (int g = 0; g < GaussRule::npts; ++g) {
      const auto ta = eval_tensor(q, g, nodes, a);
      const auto tb = eval_tensor(q, g, nodes, b);
      acc += q.weight * ta.val.dot(tb.val);
    }
    return acc;
  });
}

double FunctionalEvaluator::f_step(const State& s, const State& prev,
                                   const TestPair& t, double tau,
                                   const VectorField* f_n,
                                   const TensorField* g_n) const {
  if (!(tau > 0.0)) throw std::invalid_argument("f_step: tau must be positive");
  if (t.p_dev_Psi == kInf) return kInf;  // inadmissible pair sentinel

  const double p_state = p_of_dev_dphi(s.E);
  if (p_state == kInf) return kInf;

  double value = energy(s) - energy(prev);

  // pairing terms against the test pair
  VectorField dv = s.v;
  dv.data -= prev.v.data;
  TensorField dE = s.E;
  dE.data -= prev.E.data;
  value -= params_.rho * ip_velocity(dv, t.psi);
  value -= ip_tensor(dE, t.Psi);

  double rate = dissipation(s) + p_state + coupling(s, t).total() - t.p_dev_Psi;
  if (f_n != nullptr) {
    rate -= ip_velocity(*f_n, s.v) - ip_velocity(*f_n, t.psi);
  }
  if (g_n != nullptr) {
    // strain-source work, tested with Dphi(E) - Psi like the strain equation
    TensorField dphiE(*mesh_);
    for (int i = 0; i < mesh_->num_nodes(); ++i)
      dphiE.set_node(i, phi_.derivative(s.E.node(i)));
    rate -= ip_tensor(*g_n, dphiE) - ip_tensor(*g_n, t.Psi);
  }
  return value + tau * rate;
}

double FunctionalEvaluator::weight_construct(const TestPairNorms& n) const {
  const double mu = params_.korn_mu;
  if (!(mu > 0.0))
    throw std::invalid_argument("weight_construct: Korn constant not set");
  const double kappa = params_.kappa();
  const double M = params_.third_derivative_bound();
  return 2.0 * params_.rho / mu * n.psi_inf * n.psi_inf +
         std::max(2.0, M / kappa) * n.grad_psi_inf + n.div_psi_inf +
         6.0 / (kappa * mu) * n.Psi_inf * n.Psi_inf +
         1.0 / kappa * n.grad_Psi_inf;
}

double FunctionalEvaluator::weight_limit(const TestPairNorms& n) const {
  const double mu = params_.korn_mu;
  if (!(mu > 0.0))
    throw std::invalid_argument("weight_limit: Korn constant not set");
  const double kappa = params_.kappa();
  const double M = params_.third_derivative_bound();
  return M / kappa * n.grad_psi_inf + n.div_psi_inf +
         5.0 / (kappa * mu) * n.Psi_inf * n.Psi_inf;
}

double FunctionalEvaluator::weight_limit_divplus(const TestPairNorms& n,
                                                 double div_psi_plus_inf) const {
  const double mu = params_.korn_mu;
  const double kappa = params_.kappa();
  const double M = params_.third_derivative_bound();
  return M / kappa * n.grad_psi_inf + div_psi_plus_inf +
         5.0 / (kappa * mu) * n.Psi_inf * n.Psi_inf;
}

double FunctionalEvaluator::j_functional(const State& s, const TestPair& t) const {
  const auto& q = quad_;
  double integral = sum_over_cells(*mesh_, [&](int ci, int cj) {
    const auto nodes = mesh_->cell_nodes(ci, cj);
    double acc = 0.0;
    for (int g = 0; g < GaussRule::npts; ++g) {
      const auto vp = eval_velocity(q, g, nodes, s.v);
      const auto ep = eval_tensor(q, g, nodes, s.E);
      const auto pp = eval_velocity(q, g, nodes, t.psi);
      const auto Pp = eval_tensor(q, g, nodes, t.Psi);
      const SymTensor3 dphi = phi_.derivative(ep.val);
      const double phi_val = phi_.value(ep.val);
      const SymTensor3 br = jaumann_bracket(ep.val, vp.skew, 1e30);
      acc += q.weight * (-dphi.dot(pp.sym) - phi_val * pp.div +
                         vp.div * ep.val.dot(Pp.val) - br.dot(Pp.val));
    }
    return acc;
  });
  return integral + dissipation_visc(s) + weight_limit(t.norms) * energy(s);
}

double FunctionalEvaluator::linear_terms(const State& s, const TestPair& t) const {
  const auto& q = quad_;
  return sum_over_cells(*mesh_, [&](int ci, int cj) {
    const auto nodes = mesh_->cell_nodes(ci, cj);
    double acc = 0.0;
    for (int g = 0; g < GaussRule::npts; ++g) {
      const auto vp = eval_velocity(q, g, nodes, s.v);
      const auto pp = eval_velocity(q, g, nodes, t.psi);
      const auto Pp = eval_tensor(q, g, nodes, t.Psi);
      double lin = -newtonian_stress(vp.sym, params_.mu1, params_.mu2).dot(pp.sym) -
                   vp.sym.dot(Pp.val);
      if (params_.gamma > 0.0) {
        const auto ep = eval_tensor(q, g, nodes, s.E);
        const SymTensor3 gx = phi_.bulk() * ep.gx.sph() + phi_.shear() * ep.gx.dev();
        const SymTensor3 gy = phi_.bulk() * ep.gy.sph() + phi_.shear() * ep.gy.dev();
        lin -= params_.gamma * (gx.dot(Pp.gx) + gy.dot(Pp.gy));
      }
      acc += q.weight * lin;
    }
    return acc;
  });
}

ConvexityComponents FunctionalEvaluator::convexity_components(const State& s,
                                                              const TestPair& t) const {
  const auto& q = quad_;
  const double mu = params_.korn_mu;
  if (!(mu > 0.0))
    throw std::invalid_argument("convexity_components: Korn constant not set");
  const double rho = params_.rho;
  const double kappa = params_.kappa();
  const double M = params_.third_derivative_bound();
  const auto& n = t.norms;

  double conv_div = 0.0;   // (rho/2)(div v)(v.psi)
  double conv_quad = 0.0;  // rho (v (x) v):grad psi
  double trans_div = 0.0;  // (div v) E:Psi
  double trans_adv = 0.0;  // v.grad(Psi):E
  double rot = 0.0;        // -(EW - WE):Psi
  double dphi_grad = 0.0;  // -Dphi(E):grad psi
  double phi_div = 0.0;    // -phi(E) div psi
  double kin = 0.0;        // int rho |v|^2 / 2
  double el2 = 0.0;        // int kappa |E|^2 / 2
  double phi_int = 0.0;    // int phi(E)
  double gradv2 = 0.0;     // int |grad v|^2
  double linear = 0.0;     // -S(v):D(psi) - D(v):Psi - gamma gradDphi:::gradPsi

  for (int cj = 0; cj < mesh_->ny(); ++cj) {
    for (int ci = 0; ci < mesh_->nx(); ++ci) {
      const auto nodes = mesh_->cell_nodes(ci, cj);
      for (int g = 0; g < GaussRule::npts; ++g) {
        const double w = q.weight;
        const auto vp = eval_velocity(q, g, nodes, s.v);
        const auto ep = eval_tensor(q, g, nodes, s.E);
        const auto pp = eval_velocity(q, g, nodes, t.psi);
        const auto Pp = eval_tensor(q, g, nodes, t.Psi);

        conv_div += w * 0.5 * rho * vp.div * (vp.v.x * pp.v.x + vp.v.y * pp.v.y);
        const double vcomp[2] = {vp.v.x, vp.v.y};
        double vvg = 0.0;
        for (int i = 0; i < 2; ++i)
          for (int j = 0; j < 2; ++j) vvg += vcomp[i] * vcomp[j] * pp.grad(i, j);
        conv_quad += w * rho * vvg;

        trans_div += w * vp.div * ep.val.dot(Pp.val);
        trans_adv += w * (vp.v.x * Pp.gx.dot(ep.val) + vp.v.y * Pp.gy.dot(ep.val));
        rot -= w * jaumann_bracket(ep.val, vp.skew, 1e30).dot(Pp.val);

        const SymTensor3 dphi = phi_.derivative(ep.val);
        dphi_grad -= w * dphi.dot(pp.sym);
        phi_div -= w * phi_.value(ep.val) * pp.div;

        kin += w * 0.5 * rho * (vp.v.x * vp.v.x + vp.v.y * vp.v.y);
        el2 += w * 0.5 * kappa * ep.val.norm2();
        phi_int += w * phi_.value(ep.val);
        gradv2 += w * vp.grad.norm2();

        double lin = -newtonian_stress(vp.sym, params_.mu1, params_.mu2).dot(pp.sym) -
                     vp.sym.dot(Pp.val);
        if (params_.gamma > 0.0) {
          const SymTensor3 gx = phi_.bulk() * ep.gx.sph() + phi_.shear() * ep.gx.dev();
          const SymTensor3 gy = phi_.bulk() * ep.gy.sph() + phi_.shear() * ep.gy.dev();
          lin -= params_.gamma * (gx.dot(Pp.gx) + gy.dot(Pp.gy));
        }
        linear += w * lin;
      }
    }
  }

  ConvexityComponents out;
  // Young-inequality budget of the divergence coupling uses
  // |div v| <= sqrt(3) |grad v|, hence the 6/(kappa mu) coefficient here.
  out.g[0] = conv_div + 0.25 * mu * gradv2 +
             (2.0 * rho / mu) * n.psi_inf * n.psi_inf * kin;
  out.g[1] = conv_quad + 2.0 * n.grad_psi_inf * kin;
  out.g[2] = trans_div + 0.25 * mu * gradv2 +
             (6.0 / (kappa * mu)) * n.Psi_inf * n.Psi_inf * el2;
  out.g[3] = trans_adv + (1.0 / rho) * n.grad_Psi_inf * kin +
             (1.0 / kappa) * n.grad_Psi_inf * el2;
  out.g[4] = rot + 0.5 * mu * gradv2 +
             (4.0 / (kappa * mu)) * n.Psi_inf * n.Psi_inf * el2;
  out.g[5] = dphi_grad + (M / kappa) * n.grad_psi_inf * el2;
  out.g[6] = phi_div + n.div_psi_inf * phi_int;

  const State& sv = s;
  out.h = dissipation_visc(sv) - mu * gradv2;

  const double ktilde = weight_construct(n);
  const double en = kin + phi_int;
  out.remainder =
      linear + ktilde * en -
      (2.0 * rho / mu * n.psi_inf * n.psi_inf + 2.0 * n.grad_psi_inf +
       (1.0 / rho) * n.grad_Psi_inf) * kin -
      ((M / kappa) * n.grad_psi_inf + (10.0 / (kappa * mu)) * n.Psi_inf * n.Psi_inf +
       (1.0 / kappa) * n.grad_Psi_inf) * el2 -
      n.div_psi_inf * phi_int;

  out.assembled = coupling(s, t).total() + dissipation_visc(s) + ktilde * energy(s);
  return out;
}

}  // namespace vep
