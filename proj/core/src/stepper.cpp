#include "vep/stepper.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <algorithm>
#include <cmath>

namespace vep {

namespace {

constexpr double kW6[6] = {1.0, 1.0, 1.0, 2.0, 2.0, 2.0};

double component6(const SymTensor3& s, int c) {
  switch (c) {
    case 0: return s.xx;
    case 1: return s.yy;
    case 2: return s.zz;
    case 3: return s.xy;
    case 4: return s.xz;
    default: return s.yz;
  }
}

SymTensor3 basis6(int c) {
  SymTensor3 s;
  switch (c) {
    case 0: s.xx = 1; break;
    case 1: s.yy = 1; break;
    case 2: s.zz = 1; break;
    case 3: s.xy = 1; break;
    case 4: s.xz = 1; break;
    case 5: s.yz = 1; break;
  }
  return s;
}

// K[.] in the raw six-component representation.
void elastic_map(double K, double G, const double in[6], double out[6]) {
  const double t = (in[0] + in[1] + in[2]) / 3.0;
  out[0] = G * in[0] + (K - G) * t;
  out[1] = G * in[1] + (K - G) * t;
  out[2] = G * in[2] + (K - G) * t;
  out[3] = G * in[3];
  out[4] = G * in[4];
  out[5] = G * in[5];
}

}  // namespace

/// Sparsity pattern and value cache for the strain-block matrix
///   M/tau + T(vhat) + R(W(vhat)) + gamma K_diff (+ ADMM penalty blocks).
/// The constant part is filled once; each Picard sweep rewrites only the
/// transport/rotation values in place.
struct Stepper::StrainCache {
  Eigen::SparseMatrix<double> mat;  // compressed, full 6x6 block stencil
  std::vector<int> slots;           // per cell: 16 node pairs x 36 components
  Eigen::VectorXd const_values;     // values of the velocity-independent part

  void build(const Mesh& mesh, const GaussRule& q, const MaterialParams& p,
             const Eigen::VectorXd& lumped, double tau, bool with_admm_blocks);
  void refill(const Mesh& mesh, const GaussRule& q, const VectorField& vhat);
};

void Stepper::StrainCache::build(const Mesh& mesh, const GaussRule& q,
                                 const MaterialParams& p,
                                 const Eigen::VectorXd& lumped, double tau,
                                 bool with_admm_blocks) {
  const int n = mesh.num_nodes();
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<size_t>(mesh.num_cells()) * 16 * 36);
  for (int cj = 0; cj < mesh.ny(); ++cj)
    for (int ci = 0; ci < mesh.nx(); ++ci) {
      const auto nodes = mesh.cell_nodes(ci, cj);
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
          for (int e = 0; e < 6; ++e)
            for (int c = 0; c < 6; ++c)
              trips.emplace_back(6 * nodes[a] + e, 6 * nodes[b] + c, 0.0);
    }
  mat.resize(6 * n, 6 * n);
  mat.setFromTriplets(trips.begin(), trips.end());
  mat.makeCompressed();

  auto slot_of = [&](int row, int col) {
    const int* begin = mat.innerIndexPtr() + mat.outerIndexPtr()[col];
    const int* end = mat.innerIndexPtr() + mat.outerIndexPtr()[col + 1];
    const int* it = std::lower_bound(begin, end, row);
    return static_cast<int>(it - mat.innerIndexPtr());
  };

  slots.resize(static_cast<size_t>(mesh.num_cells()) * 16 * 36);
  size_t s = 0;
  for (int cj = 0; cj < mesh.ny(); ++cj)
    for (int ci = 0; ci < mesh.nx(); ++ci) {
      const auto nodes = mesh.cell_nodes(ci, cj);
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
          for (int e = 0; e < 6; ++e)
            for (int c = 0; c < 6; ++c)
              slots[s++] = slot_of(6 * nodes[a] + e, 6 * nodes[b] + c);
    }

  // constant part: mass/tau + gamma K_diff (+ penalty blocks)
  Eigen::VectorXd vals = Eigen::VectorXd::Zero(mat.nonZeros());
  s = 0;
  for (int cj = 0; cj < mesh.ny(); ++cj)
    for (int ci = 0; ci < mesh.nx(); ++ci) {
      const auto nodes = mesh.cell_nodes(ci, cj);
      (void)nodes;
      double local[16][36] = {};
      for (int g = 0; g < GaussRule::npts; ++g) {
        for (int a = 0; a < 4; ++a)
          for (int b = 0; b < 4; ++b) {
            const double mab = q.weight * q.N[g][a] * q.N[g][b];
            const double sab = q.weight * (q.dNdx[g][a] * q.dNdx[g][b] +
                                           q.dNdy[g][a] * q.dNdy[g][b]);
            for (int e = 0; e < 6; ++e) local[4 * a + b][6 * e + e] += kW6[e] * mab / tau;
            if (p.gamma > 0.0) {
              // gamma grad(K[A]):::grad(Phi): component c of A couples to
              // component e of Phi through the elastic map
              double ec[6] = {0, 0, 0, 0, 0, 0}, kec[6];
              for (int c = 0; c < 6; ++c) {
                ec[c] = 1.0;
                elastic_map(p.K, p.G, ec, kec);
                ec[c] = 0.0;
                for (int e = 0; e < 6; ++e)
                  local[4 * a + b][6 * e + c] += p.gamma * sab * kW6[e] * kec[e];
              }
            }
          }
      }
      for (int ab = 0; ab < 16; ++ab)
        for (int ecc = 0; ecc < 36; ++ecc) vals[slots[s + ab * 36 + ecc]] += local[ab][ecc];
      s += 16 * 36;
    }

  if (with_admm_blocks) {
    // sigma_i G^2 W P_dev at each node
    const double G = p.G;
    for (int i = 0; i < n; ++i) {
      const double sig = lumped[i] / tau;
      for (int e = 0; e < 3; ++e)
        for (int c = 0; c < 3; ++c) {
          const double v = sig * G * G * ((e == c ? 1.0 : 0.0) - 1.0 / 3.0);
          vals[slot_of(6 * i + e, 6 * i + c)] += v;
        }
      for (int c = 3; c < 6; ++c)
        vals[slot_of(6 * i + c, 6 * i + c)] += 2.0 * sig * G * G;
    }
  }
  const_values = vals;
}

void Stepper::StrainCache::refill(const Mesh& mesh, const GaussRule& q,
                                  const VectorField& vhat) {
  Eigen::Map<Eigen::VectorXd>(mat.valuePtr(), mat.nonZeros()) = const_values;
  double* vals = mat.valuePtr();
  size_t s = 0;
  for (int cj = 0; cj < mesh.ny(); ++cj)
    for (int ci = 0; ci < mesh.nx(); ++ci) {
      const auto nodes = mesh.cell_nodes(ci, cj);
      double local[16][36] = {};
      for (int g = 0; g < GaussRule::npts; ++g) {
        const auto vp = eval_velocity(q, g, nodes, vhat);
        SymTensor3 br[6];
        const bool spin = vp.skew(0, 1) != 0.0;
        if (spin)
          for (int c = 0; c < 6; ++c) br[c] = jaumann_bracket(basis6(c), vp.skew, 1e30);
        for (int a = 0; a < 4; ++a) {
          const double adv = vp.v.x * q.dNdx[g][a] + vp.v.y * q.dNdy[g][a];
          for (int b = 0; b < 4; ++b) {
            const double trans =
                q.weight * (-vp.div * q.N[g][a] * q.N[g][b] - adv * q.N[g][b]);
            const double nab = q.weight * q.N[g][a] * q.N[g][b];
            for (int e = 0; e < 6; ++e) {
              local[4 * a + b][6 * e + e] += kW6[e] * trans;
              if (spin)
                for (int c = 0; c < 6; ++c) {
                  const double rv = component6(br[c], e);
                  if (rv != 0.0) local[4 * a + b][6 * e + c] += nab * kW6[e] * rv;
                }
            }
          }
        }
      }
      for (int ab = 0; ab < 16; ++ab)
        for (int ecc = 0; ecc < 36; ++ecc) vals[slots[s + ab * 36 + ecc]] += local[ab][ecc];
      s += 16 * 36;
    }
}

Stepper::Stepper(const Mesh& mesh, MaterialParams params, SolverOptions opts,
                 double tau)
    : mesh_(&mesh), params_(params), opts_(opts), tau_(tau),
      ops_(assemble(mesh, params)),
      eval_(std::make_unique<FunctionalEvaluator>(mesh, params)) {
  if (!(tau > 0.0)) throw std::invalid_argument("Stepper: tau must be positive");
  Eigen::SparseMatrix<double> mom =
      (params_.rho / tau_) * ops_.mass_v.mat + ops_.visc.mat;
  momentum_matrix_ = restrict_matrix(mom, ops_.free_vdofs);
  strain_cache_ = std::make_shared<StrainCache>();
  strain_cache_->build(mesh, ops_.quad, params_, ops_.lumped_node_mass, tau_,
                       !params_.plasticity_disabled());
}

Eigen::VectorXd Stepper::stress_load(const TensorField& E) const {
  const Mesh& m = *mesh_;
  const GaussRule& q = ops_.quad;
  const StoredEnergy& phi = eval_->stored_energy();
  Eigen::VectorXd load = Eigen::VectorXd::Zero(2 * m.num_nodes());
  for (int cj = 0; cj < m.ny(); ++cj)
    for (int ci = 0; ci < m.nx(); ++ci) {
      const auto nodes = m.cell_nodes(ci, cj);
      for (int g = 0; g < GaussRule::npts; ++g) {
        const auto ep = eval_tensor(q, g, nodes, E);
        const SymTensor3 dphi = phi.derivative(ep.val);
        const double pv = phi.value(ep.val);
        for (int a = 0; a < 4; ++a) {
          const double dx = q.dNdx[g][a], dy = q.dNdy[g][a];
          // D(e_x N_a) contraction plus pressure part
          load[2 * nodes[a]] += q.weight * (dphi.xx * dx + dphi.xy * dy + pv * dx);
          load[2 * nodes[a] + 1] +=
              q.weight * (dphi.yy * dy + dphi.xy * dx + pv * dy);
        }
      }
    }
  return load;
}

Eigen::VectorXd Stepper::convection_load(const VectorField& vhat) const {
  const Mesh& m = *mesh_;
  const GaussRule& q = ops_.quad;
  const double rho = params_.rho;
  Eigen::VectorXd load = Eigen::VectorXd::Zero(2 * m.num_nodes());
  for (int cj = 0; cj < m.ny(); ++cj)
    for (int ci = 0; ci < m.nx(); ++ci) {
      const auto nodes = m.cell_nodes(ci, cj);
      for (int g = 0; g < GaussRule::npts; ++g) {
        const auto vp = eval_velocity(q, g, nodes, vhat);
        for (int a = 0; a < 4; ++a) {
          const double adv = vp.v.x * q.dNdx[g][a] + vp.v.y * q.dNdy[g][a];
          const double cx =
              q.weight * (-0.5 * rho * vp.div * q.N[g][a] * vp.v.x - rho * adv * vp.v.x);
          const double cy =
              q.weight * (-0.5 * rho * vp.div * q.N[g][a] * vp.v.y - rho * adv * vp.v.y);
          load[2 * nodes[a]] += cx;
          load[2 * nodes[a] + 1] += cy;
        }
      }
    }
  return load;
}

void Stepper::strain_operator_apply(const VectorField& vhat, const TensorField& E,
                                    Eigen::VectorXd& out) const {
  const Mesh& m = *mesh_;
  const GaussRule& q = ops_.quad;
  const double gamma = params_.gamma;
  const StoredEnergy& phi = eval_->stored_energy();
  out.setZero();
  for (int cj = 0; cj < m.ny(); ++cj)
    for (int ci = 0; ci < m.nx(); ++ci) {
      const auto nodes = m.cell_nodes(ci, cj);
      for (int g = 0; g < GaussRule::npts; ++g) {
        const auto vp = eval_velocity(q, g, nodes, vhat);
        const auto ep = eval_tensor(q, g, nodes, E);
        const SymTensor3 br = jaumann_bracket(ep.val, vp.skew, 1e30);
        SymTensor3 kgx, kgy;
        if (gamma > 0.0) {
          kgx = phi.bulk() * ep.gx.sph() + phi.shear() * ep.gx.dev();
          kgy = phi.bulk() * ep.gy.sph() + phi.shear() * ep.gy.dev();
        }
        for (int a = 0; a < 4; ++a) {
          const double adv = vp.v.x * q.dNdx[g][a] + vp.v.y * q.dNdy[g][a];
          for (int e = 0; e < 6; ++e) {
            double val = kW6[e] * (-vp.div * q.N[g][a] - adv) * component6(ep.val, e);
            val += q.N[g][a] * kW6[e] * component6(br, e);
            if (gamma > 0.0)
              val += gamma * kW6[e] * (q.dNdx[g][a] * component6(kgx, e) +
                                       q.dNdy[g][a] * component6(kgy, e));
            out[6 * nodes[a] + e] += q.weight * val;
          }
        }
      }
    }
}

StepResult Stepper::step(const State& prev, const VectorField* f_n,
                         const TensorField* g_n,
                         const TensorField* warm_multiplier) const {
  const Mesh& m = *mesh_;
  const int n = m.num_nodes();
  const double G = params_.G;
  const bool plastic = !params_.plasticity_disabled();
  const DissipationPotential& pot = eval_->dissipation_potential();

  StepResult res;
  res.state = prev;
  res.multiplier = TensorField(m);
  if (warm_multiplier != nullptr) res.multiplier = *warm_multiplier;

  State& s = res.state;
  TensorField& xi = res.multiplier;

  // ADMM variables (scaled dual u, split variable z), warm-started
  std::vector<SymTensor3> z(n), u(n);
  if (plastic) {
    for (int i = 0; i < n; ++i) {
      u[i] = (tau_ / G) * xi.node(i);
      SymTensor3 zi = G * s.E.node(i).dev();
      const double r = zi.norm();
      if (r > pot.yield_stress()) zi *= pot.yield_stress() / r;
      z[i] = zi;
    }
  }

  Eigen::VectorXd mom_rhs_base = (params_.rho / tau_) * (ops_.mass_v.mat * prev.v.data);
  if (f_n != nullptr) mom_rhs_base += ops_.mass_v.mat * f_n->data;

  Eigen::VectorXd strain_rhs_base = (1.0 / tau_) * (ops_.mass_E.mat * prev.E.data);
  if (g_n != nullptr) strain_rhs_base += ops_.mass_E.mat * g_n->data;

  Eigen::BiCGSTAB<Eigen::SparseMatrix<double>> strain_solver;
  strain_solver.setTolerance(1e-13);
  strain_solver.setMaxIterations(opts_.max_krylov);

  Eigen::ConjugateGradient<Eigen::SparseMatrix<double>,
                           Eigen::Lower | Eigen::Upper>
      mom_solver;
  mom_solver.compute(momentum_matrix_);
  mom_solver.setTolerance(opts_.cg_tol);
  mom_solver.setMaxIterations(opts_.max_krylov);

  Eigen::VectorXd apply_buf(6 * n);
  double rel_res = kInf;

  for (int sweep = 1; sweep <= opts_.max_picard; ++sweep) {
    res.cert.picard_iters = sweep;
    const VectorField vbar = s.v;  // frozen advecting velocity and spin

    // (a) strain block with frozen transport
    strain_cache_->refill(m, ops_.quad, vbar);
    strain_solver.compute(strain_cache_->mat);
    Eigen::VectorXd strain_rhs = strain_rhs_base + ops_.grad_sym.mat * vbar.data;

    if (!plastic) {
      Eigen::VectorXd sol = strain_solver.solveWithGuess(strain_rhs, s.E.data);
      if (strain_solver.info() != Eigen::Success) {
        res.error = "strain solve did not converge";
        return res;
      }
      s.E.data = sol;
      xi.data.setZero();
    } else {
      const double sigma_y = pot.yield_stress();
      double primal_inf = kInf, dual_inf = kInf;
      int it = 0;
      for (; it < opts_.max_admm; ++it) {
        // E-update
        Eigen::VectorXd rhs = strain_rhs;
        for (int i = 0; i < n; ++i) {
          const double sig = ops_.lumped_node_mass[i] / tau_;
          const SymTensor3 zu = (z[i] - u[i]).dev();
          for (int c = 0; c < 6; ++c)
            rhs[6 * i + c] += sig * G * kW6[c] * component6(zu, c);
        }
        Eigen::VectorXd sol = strain_solver.solveWithGuess(rhs, s.E.data);
        if (strain_solver.info() != Eigen::Success) {
          res.error = "strain solve did not converge (admm)";
          return res;
        }
        s.E.data = sol;

        // z-update by the pointwise resolvent, then dual ascent
        primal_inf = 0.0;
        dual_inf = 0.0;
        double zscale = 0.0;
        for (int i = 0; i < n; ++i) {
          const SymTensor3 gde = G * s.E.node(i).dev();
          const SymTensor3 znew = pot.resolvent(gde + u[i], tau_ / G, 1e-8);
          dual_inf = std::max(dual_inf, (znew - z[i]).norm());
          z[i] = znew;
          const SymTensor3 pr = gde - znew;
          u[i] += pr;
          primal_inf = std::max(primal_inf, pr.norm());
          zscale = std::max(zscale, gde.norm());
        }
        const double ztol = opts_.admm_tol * (1.0 + zscale + sigma_y);
        if (primal_inf <= std::max(opts_.admm_feas_abs, ztol) &&
            dual_inf <= std::max(opts_.admm_feas_abs, ztol))
          break;
      }
      res.cert.admm_iters += it + 1;
      if (it >= opts_.max_admm) {
        res.error = "admm did not converge";
        return res;
      }
      for (int i = 0; i < n; ++i) xi.set_node(i, (G / tau_) * u[i]);
    }

    // (b) momentum with frozen convection
    const Eigen::VectorXd b_stress = stress_load(s.E);
    Eigen::VectorXd mom_rhs = mom_rhs_base - convection_load(vbar) - b_stress;
    Eigen::VectorXd rhs_f = gather(mom_rhs, ops_.free_vdofs);
    Eigen::VectorXd guess = gather(s.v.data, ops_.free_vdofs);
    Eigen::VectorXd sol = mom_solver.solveWithGuess(rhs_f, guess);
    if (mom_solver.info() != Eigen::Success) {
      res.error = "momentum solve did not converge";
      return res;
    }
    s.v.data.setZero();
    scatter(sol, ops_.free_vdofs, s.v.data);

    // combined nonlinear residual at the current iterate
    const Eigen::VectorXd mass_v_cur = ops_.mass_v.mat * s.v.data;
    Eigen::VectorXd r_mom = (params_.rho / tau_) * mass_v_cur +
                            convection_load(s.v) + ops_.visc.mat * s.v.data +
                            b_stress - mom_rhs_base;
    Eigen::VectorXd r_mom_f = gather(r_mom, ops_.free_vdofs);

    strain_operator_apply(s.v, s.E, apply_buf);
    Eigen::VectorXd r_str = (1.0 / tau_) * (ops_.mass_E.mat * (s.E.data - prev.E.data)) +
                            apply_buf - ops_.grad_sym.mat * s.v.data;
    if (g_n != nullptr) r_str -= ops_.mass_E.mat * g_n->data;
    if (plastic) {
      for (int i = 0; i < n; ++i) {
        const double mi = ops_.lumped_node_mass[i];
        const SymTensor3 x = xi.node(i);
        for (int c = 0; c < 6; ++c)
          r_str[6 * i + c] += mi * kW6[c] * component6(x, c);
      }
    }

    const double scale_m = 1.0 + mom_rhs_base.norm() + b_stress.norm() +
                           (params_.rho / tau_) * mass_v_cur.norm();
    const double scale_s = 1.0 + strain_rhs_base.norm() +
                           (1.0 / tau_) * (ops_.mass_E.mat * s.E.data).norm();
    rel_res = r_mom_f.norm() / scale_m + r_str.norm() / scale_s;
    res.cert.nonlinear_residual = rel_res;
    if (rel_res <= opts_.picard_tol) break;
    if (sweep == opts_.max_picard) {
      res.error = "picard iteration did not converge";
      return res;
    }
  }

  // certificate: feasibility, multiplier optimality, step inequality
  double excess = 0.0, fenchel = 0.0;
  for (int i = 0; i < n; ++i) {
    SymTensor3 a = eval_->stored_energy().derivative(s.E.node(i)).dev();
    const double r = a.norm();
    if (plastic) {
      excess = std::max(excess, r - pot.yield_stress());
      if (r > pot.yield_stress()) a *= pot.yield_stress() / r;
      const double gap = pot.fenchel_gap(a, xi.node(i), 1e-8);
      fenchel = std::max(fenchel, gap / (1.0 + a.norm2() + xi.node(i).norm2()));
    }
  }
  res.cert.yield_excess = excess;
  res.cert.fenchel_worst = fenchel;

  const TestPair zero = zero_test_pair(m);
  res.cert.energy_residual = eval_->f_step(s, prev, zero, tau_, f_n, g_n);

  const double sc = FunctionalEvaluator::scale(
      eval_->energy(s), eval_->energy(prev),
      tau_ * (eval_->dissipation(s) + std::abs(res.cert.energy_residual)));
  if (!(res.cert.energy_residual <= opts_.cert_tol * sc)) {
    res.error = "step inequality residual above certification tolerance";
    return res;
  }

  res.ok = true;
  return res;
}

RunResult run(const Scenario& sc, const StepCertHook& cert_hook) {
  RunResult out;
  MaterialParams params = sc.params;
  params.validate();
  if (params.korn_mu <= 0.0)
    params.korn_mu = korn_constant(sc.mesh, params).mu;

  const double tau = sc.tau();
  Stepper stepper(sc.mesh, params, sc.opts, tau);
  const FunctionalEvaluator& eval = stepper.evaluator();

  out.trajectory.tau = tau;
  out.trajectory.states.push_back(sc.initial);
  out.trajectory.multipliers.emplace_back(sc.mesh);
  out.ledger.initial_energy = eval.energy(sc.initial);

  double aux_energy = out.ledger.initial_energy;

  for (int nstep = 1; nstep <= sc.N; ++nstep) {
    const State& prev = out.trajectory.states.back();
    const double t0 = (nstep - 1) * tau, t1 = nstep * tau;

    VectorField f_n;
    const VectorField* f_ptr = nullptr;
    if (sc.forcing) {
      f_n = average_forcing(sc.mesh, sc.forcing.get(), t0, t1);
      f_ptr = &f_n;
    }
    TensorField g_n;
    const TensorField* g_ptr = nullptr;
    if (sc.strain_source) {
      g_n = average_strain_source(sc.mesh, sc.strain_source.get(), t0, t1);
      g_ptr = &g_n;
    }

    StepResult sr = stepper.step(prev, f_ptr, g_ptr,
                                 &out.trajectory.multipliers.back());
    if (!sr.ok) {
      out.failed_step = nstep;
      out.error = "step " + std::to_string(nstep) + ": " + sr.error;
      return out;
    }

    LedgerRow row;
    row.step = nstep;
    row.time = t1;
    row.energy = eval.energy(sr.state);
    row.dissipation = eval.dissipation(sr.state);
    row.P_term = eval.p_of_dev_dphi(sr.state.E);
    row.forcing_power = 0.0;
    if (f_ptr != nullptr) row.forcing_power += eval.ip_velocity(*f_ptr, sr.state.v);
    if (g_ptr != nullptr) {
      TensorField dphiE(sc.mesh);
      for (int i = 0; i < sc.mesh.num_nodes(); ++i)
        dphiE.set_node(i, eval.stored_energy().derivative(sr.state.E.node(i)));
      row.forcing_power += eval.ip_tensor(*g_ptr, dphiE);
    }
    row.ineq_residual = sr.cert.energy_residual;
    row.picard_iters = sr.cert.picard_iters;
    row.admm_iters = sr.cert.admm_iters;
    if (cert_hook)
      row.cert_worst_F = cert_hook(nstep, sr.state, prev, f_ptr, g_ptr);

    aux_energy += -tau * (row.dissipation + row.P_term - row.forcing_power);
    row.aux_energy = aux_energy;
    row.energy_defect = aux_energy - row.energy;

    out.ledger.rows.push_back(row);
    out.trajectory.states.push_back(std::move(sr.state));
    out.trajectory.multipliers.push_back(std::move(sr.multiplier));
  }
  out.ok = true;
  return out;
}

IncrementNorms increment_dual_norms(const Trajectory& traj,
                                    const FunctionalEvaluator& eval,
                                    const std::vector<TestPair>& dict) {
  if (dict.empty())
    throw std::invalid_argument("increment_dual_norms: empty dictionary");
  IncrementNorms out;
  const int N = traj.num_steps();
  out.v_step.resize(N, 0.0);
  out.E_step.resize(N, 0.0);
  for (int nstep = 1; nstep <= N; ++nstep) {
    VectorField dv = traj.states[nstep].v;
    dv.data -= traj.states[nstep - 1].v.data;
    TensorField dE = traj.states[nstep].E;
    dE.data -= traj.states[nstep - 1].E.data;
    double sv = 0.0, sE = 0.0;
    for (const TestPair& t : dict) {
      const double cv = t.norms.psi_inf + t.norms.grad_psi_inf;
      if (cv > 0.0) sv = std::max(sv, std::abs(eval.ip_velocity(dv, t.psi)) / cv);
      const double cE = t.norms.Psi_inf + t.norms.grad_Psi_inf;
      if (cE > 0.0) sE = std::max(sE, std::abs(eval.ip_tensor(dE, t.Psi)) / cE);
    }
    out.v_step[nstep - 1] = sv;
    out.E_step[nstep - 1] = sE;
    out.v_sum += traj.tau * sv;
    out.E_sum += traj.tau * sE;
  }
  return out;
}

}  // namespace vep
