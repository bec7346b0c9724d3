#include "vep/assembly.hpp"

#include <Eigen/SparseCholesky>
#include <cmath>
#include <stdexcept>

namespace vep {

namespace {

// Component weights of the six-component symmetric-tensor contraction.
constexpr double kW6[6] = {1.0, 1.0, 1.0, 2.0, 2.0, 2.0};

// K[.] = G I + (K - G) P_sph in the six-component representation.
void apply_elastic_map(double K, double G, const double in[6], double out[6]) {
  const double t = (in[0] + in[1] + in[2]) / 3.0;
  out[0] = G * in[0] + (K - G) * t;
  out[1] = G * in[1] + (K - G) * t;
  out[2] = G * in[2] + (K - G) * t;
  out[3] = G * in[3];
  out[4] = G * in[4];
  out[5] = G * in[5];
}

// Basis symmetric tensors e_c as SymTensor3.
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

}  // namespace

GaussRule GaussRule::make(const Mesh& m) {
  GaussRule q;
  const double hx = m.hx(), hy = m.hy();
  const double a = 0.5 - 0.5 / std::sqrt(3.0);
  const double b = 0.5 + 0.5 / std::sqrt(3.0);
  const double xi[2] = {a, b};
  int g = 0;
  for (int gy = 0; gy < 2; ++gy)
    for (int gx = 0; gx < 2; ++gx, ++g) {
      const double x = xi[gx], y = xi[gy];
      q.ox[g] = x * hx;
      q.oy[g] = y * hy;
      q.N[g] = {(1 - x) * (1 - y), x * (1 - y), x * y, (1 - x) * y};
      q.dNdx[g] = {-(1 - y) / hx, (1 - y) / hx, y / hx, -y / hx};
      q.dNdy[g] = {-(1 - x) / hy, -x / hy, x / hy, (1 - x) / hy};
    }
  q.weight = hx * hy / 4.0;
  return q;
}

double SparseOperator::symmetry_drift() const {
  double drift = 0.0, amax = 0.0;
  Eigen::SparseMatrix<double> d = mat - Eigen::SparseMatrix<double>(mat.transpose());
  for (int k = 0; k < d.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(d, k); it; ++it)
      drift = std::max(drift, std::abs(it.value()));
  for (int k = 0; k < mat.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(mat, k); it; ++it)
      amax = std::max(amax, std::abs(it.value()));
  return amax > 0.0 ? drift / amax : drift;
}

Operators assemble(const Mesh& mesh, const MaterialParams& params) {
  Operators ops;
  ops.mesh = &mesh;
  ops.params = params;
  ops.quad = GaussRule::make(mesh);
  const GaussRule& q = ops.quad;
  const int n = mesh.num_nodes();

  using T = Eigen::Triplet<double>;
  std::vector<T> t_mass_v, t_mass_E, t_visc, t_stiff, t_kdiff, t_grad, t_div;
  t_mass_v.reserve(mesh.num_cells() * 32);
  t_mass_E.reserve(mesh.num_cells() * 96);
  t_visc.reserve(mesh.num_cells() * 64);
  t_stiff.reserve(mesh.num_cells() * 32);
  t_kdiff.reserve(mesh.num_cells() * 96);
  t_grad.reserve(mesh.num_cells() * 200);
  t_div.reserve(mesh.num_cells() * 32);

  ops.lumped_node_mass = Eigen::VectorXd::Zero(n);

  for (int cj = 0; cj < mesh.ny(); ++cj) {
    for (int ci = 0; ci < mesh.nx(); ++ci) {
      const auto nodes = mesh.cell_nodes(ci, cj);
      for (int g = 0; g < GaussRule::npts; ++g) {
        const double w = q.weight;
        for (int a = 0; a < 4; ++a) {
          ops.lumped_node_mass[nodes[a]] += w * q.N[g][a];
          for (int b = 0; b < 4; ++b) {
            const double mab = w * q.N[g][a] * q.N[g][b];
            const double sab =
                w * (q.dNdx[g][a] * q.dNdx[g][b] + q.dNdy[g][a] * q.dNdy[g][b]);
            // scalar mass replicated per velocity component
            for (int c = 0; c < 2; ++c) {
              t_mass_v.emplace_back(2 * nodes[a] + c, 2 * nodes[b] + c, mab);
              t_stiff.emplace_back(2 * nodes[a] + c, 2 * nodes[b] + c, sab);
            }
            // tensor mass with contraction weights
            for (int c = 0; c < 6; ++c)
              t_mass_E.emplace_back(6 * nodes[a] + c, 6 * nodes[b] + c, kW6[c] * mab);

            // viscous form: S(e_d N_b):D(e_c N_a)
            for (int c = 0; c < 2; ++c) {
              SymTensor3 da;  // D of basis (node a, component c)
              if (c == 0) {
                da.xx = q.dNdx[g][a];
                da.xy = 0.5 * q.dNdy[g][a];
              } else {
                da.yy = q.dNdy[g][a];
                da.xy = 0.5 * q.dNdx[g][a];
              }
              for (int d = 0; d < 2; ++d) {
                SymTensor3 db;
                if (d == 0) {
                  db.xx = q.dNdx[g][b];
                  db.xy = 0.5 * q.dNdy[g][b];
                } else {
                  db.yy = q.dNdy[g][b];
                  db.xy = 0.5 * q.dNdx[g][b];
                }
                const double sv =
                    w * newtonian_stress(db, params.mu1, params.mu2).dot(da);
                t_visc.emplace_back(2 * nodes[a] + c, 2 * nodes[b] + d, sv);
              }
            }

            // stress diffusion: gamma * grad(K[A]) ::: grad(Phi)
            if (params.gamma > 0.0) {
              double ec[6] = {0, 0, 0, 0, 0, 0}, kec[6];
              for (int c = 0; c < 6; ++c) {
                ec[c] = 1.0;
                apply_elastic_map(params.K, params.G, ec, kec);
                ec[c] = 0.0;
                for (int e = 0; e < 6; ++e) {
                  const double val = params.gamma * sab * kW6[e] * kec[e];
                  if (val != 0.0 || e == c)
                    t_kdiff.emplace_back(6 * nodes[a] + e, 6 * nodes[b] + c, val);
                }
              }
            }
          }
        }

        // grad_sym and div: tested with tensor/scalar basis at node a
        for (int a = 0; a < 4; ++a) {
          for (int b = 0; b < 4; ++b) {
            for (int d = 0; d < 2; ++d) {
              SymTensor3 db;
              if (d == 0) {
                db.xx = q.dNdx[g][b];
                db.xy = 0.5 * q.dNdy[g][b];
              } else {
                db.yy = q.dNdy[g][b];
                db.xy = 0.5 * q.dNdx[g][b];
              }
              const double divb = d == 0 ? q.dNdx[g][b] : q.dNdy[g][b];
              t_div.emplace_back(nodes[a], 2 * nodes[b] + d,
                                 q.weight * q.N[g][a] * divb);
              for (int c = 0; c < 6; ++c) {
                const double val =
                    q.weight * q.N[g][a] * kW6[c] * component6(db, c);
                if (val != 0.0)
                  t_grad.emplace_back(6 * nodes[a] + c, 2 * nodes[b] + d, val);
              }
            }
          }
        }
      }
    }
  }

  auto build = [](int rows, int cols, const std::vector<T>& trips, bool sym) {
    SparseOperator op;
    op.mat.resize(rows, cols);
    op.mat.setFromTriplets(trips.begin(), trips.end());
    op.mat.makeCompressed();
    op.symmetric = sym;
    return op;
  };

  ops.mass_v = build(2 * n, 2 * n, t_mass_v, true);
  ops.mass_E = build(6 * n, 6 * n, t_mass_E, true);
  ops.visc = build(2 * n, 2 * n, t_visc, true);
  ops.stiff_v = build(2 * n, 2 * n, t_stiff, true);
  ops.k_diff = build(6 * n, 6 * n, t_kdiff, true);
  ops.grad_sym = build(6 * n, 2 * n, t_grad, false);
  ops.div_op = build(n, 2 * n, t_div, false);

  for (int i = 0; i < n; ++i) {
    if (!mesh.fixed_vx(i)) ops.free_vdofs.push_back(2 * i);
    if (!mesh.fixed_vy(i)) ops.free_vdofs.push_back(2 * i + 1);
  }
  return ops;
}

Eigen::SparseMatrix<double> Operators::convection(const VectorField& vhat) const {
  const Mesh& m = *mesh;
  const GaussRule& q = quad;
  const double rho = params.rho;
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(m.num_cells() * 128);
  for (int cj = 0; cj < m.ny(); ++cj)
    for (int ci = 0; ci < m.nx(); ++ci) {
      const auto nodes = m.cell_nodes(ci, cj);
      for (int g = 0; g < GaussRule::npts; ++g) {
        const auto vp = eval_velocity(q, g, nodes, vhat);
        for (int a = 0; a < 4; ++a)
          for (int b = 0; b < 4; ++b) {
            // row: w = e_c N_a ; col: u = e_c N_b (component-diagonal)
            const double adv = vp.v.x * q.dNdx[g][a] + vp.v.y * q.dNdy[g][a];
            const double val =
                q.weight * (-0.5 * rho * vp.div * q.N[g][a] * q.N[g][b] -
                            rho * adv * q.N[g][b]);
            for (int c = 0; c < 2; ++c)
              trips.emplace_back(2 * nodes[a] + c, 2 * nodes[b] + c, val);
          }
      }
    }
  Eigen::SparseMatrix<double> out(2 * m.num_nodes(), 2 * m.num_nodes());
  out.setFromTriplets(trips.begin(), trips.end());
  out.makeCompressed();
  return out;
}

Eigen::SparseMatrix<double> Operators::strain_transport(const VectorField& vhat) const {
  const Mesh& m = *mesh;
  const GaussRule& q = quad;
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(m.num_cells() * 384);
  for (int cj = 0; cj < m.ny(); ++cj)
    for (int ci = 0; ci < m.nx(); ++ci) {
      const auto nodes = m.cell_nodes(ci, cj);
      for (int g = 0; g < GaussRule::npts; ++g) {
        const auto vp = eval_velocity(q, g, nodes, vhat);
        for (int a = 0; a < 4; ++a)
          for (int b = 0; b < 4; ++b) {
            const double adv = vp.v.x * q.dNdx[g][a] + vp.v.y * q.dNdy[g][a];
            const double val =
                q.weight * (-vp.div * q.N[g][a] * q.N[g][b] - adv * q.N[g][b]);
            for (int c = 0; c < 6; ++c)
              trips.emplace_back(6 * nodes[a] + c, 6 * nodes[b] + c, kW6[c] * val);
          }
      }
    }
  Eigen::SparseMatrix<double> out(6 * m.num_nodes(), 6 * m.num_nodes());
  out.setFromTriplets(trips.begin(), trips.end());
  out.makeCompressed();
  return out;
}

Eigen::SparseMatrix<double> Operators::strain_rotation(const VectorField& vhat) const {
  const Mesh& m = *mesh;
  const GaussRule& q = quad;
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(m.num_cells() * 600);
  for (int cj = 0; cj < m.ny(); ++cj)
    for (int ci = 0; ci < m.nx(); ++ci) {
      const auto nodes = m.cell_nodes(ci, cj);
      for (int g = 0; g < GaussRule::npts; ++g) {
        const auto vp = eval_velocity(q, g, nodes, vhat);
        const double wxy = vp.skew(0, 1);
        if (wxy == 0.0) continue;
        // bracket(e_c, W) for the in-plane spin, then contract with e_e.
        SymTensor3 br[6];
        for (int c = 0; c < 6; ++c)
          br[c] = jaumann_bracket(basis6(c), vp.skew, 1e30);
        for (int a = 0; a < 4; ++a)
          for (int b = 0; b < 4; ++b) {
            const double nab = q.weight * q.N[g][a] * q.N[g][b];
            for (int e = 0; e < 6; ++e)
              for (int c = 0; c < 6; ++c) {
                const double val = nab * kW6[e] * component6(br[c], e);
                if (val != 0.0)
                  trips.emplace_back(6 * nodes[a] + e, 6 * nodes[b] + c, val);
              }
          }
      }
    }
  Eigen::SparseMatrix<double> out(6 * m.num_nodes(), 6 * m.num_nodes());
  out.setFromTriplets(trips.begin(), trips.end());
  out.makeCompressed();
  return out;
}

Eigen::SparseMatrix<double> restrict_matrix(const Eigen::SparseMatrix<double>& a,
                                            const std::vector<int>& idx) {
  return restrict_matrix(a, idx, idx);
}

Eigen::SparseMatrix<double> restrict_matrix(const Eigen::SparseMatrix<double>& a,
                                            const std::vector<int>& row_idx,
                                            const std::vector<int>& col_idx) {
  std::vector<int> rmap(a.rows(), -1), cmap(a.cols(), -1);
  for (size_t k = 0; k < row_idx.size(); ++k) rmap[row_idx[k]] = static_cast<int>(k);
  for (size_t k = 0; k < col_idx.size(); ++k) cmap[col_idx[k]] = static_cast<int>(k);
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(a.nonZeros());
  for (int k = 0; k < a.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(a, k); it; ++it) {
      const int r = rmap[it.row()], c = cmap[it.col()];
      if (r >= 0 && c >= 0) trips.emplace_back(r, c, it.value());
    }
  Eigen::SparseMatrix<double> out(static_cast<int>(row_idx.size()),
                                  static_cast<int>(col_idx.size()));
  out.setFromTriplets(trips.begin(), trips.end());
  out.makeCompressed();
  return out;
}

Eigen::VectorXd gather(const Eigen::VectorXd& full, const std::vector<int>& idx) {
  Eigen::VectorXd out(idx.size());
  for (size_t k = 0; k < idx.size(); ++k) out[k] = full[idx[k]];
  return out;
}

void scatter(const Eigen::VectorXd& reduced, const std::vector<int>& idx,
             Eigen::VectorXd& full) {
  for (size_t k = 0; k < idx.size(); ++k) full[idx[k]] = reduced[k];
}

KornResult korn_constant(const Mesh& mesh, const MaterialParams& params,
                         double rtol, int maxit) {
  Operators ops = assemble(mesh, params);
  if (ops.free_vdofs.empty())
    throw std::invalid_argument("korn_constant: admissible space is trivial");

  const auto S = restrict_matrix(ops.visc.mat, ops.free_vdofs);
  const auto B = restrict_matrix(ops.stiff_v.mat, ops.free_vdofs);

  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(S);
  if (ldlt.info() != Eigen::Success)
    throw std::runtime_error("korn_constant: viscous form not positive definite");

  // Inverse power iteration on S^{-1} B: converges to the largest
  // eigenvalue of B relative to S, whose reciprocal is the Korn constant.
  const int nf = static_cast<int>(ops.free_vdofs.size());
  Eigen::VectorXd y(nf);
  std::uint64_t s = 0x9e3779b97f4a7c15ULL;
  for (int i = 0; i < nf; ++i) {
    s ^= s << 13; s ^= s >> 7; s ^= s << 17;
    y[i] = static_cast<double>(s % 1000003) / 1000003.0 - 0.5;
  }
  y.normalize();

  double mu_prev = 0.0;
  for (int it = 1; it <= maxit; ++it) {
    Eigen::VectorXd by = B * y;
    Eigen::VectorXd z = ldlt.solve(by);
    z.normalize();
    const double num = z.dot(S * z);
    const double den = z.dot(B * z);
    const double mu = num / den;
    y = z;
    if (it > 1 && std::abs(mu - mu_prev) <= rtol * std::abs(mu)) {
      return {0.99 * mu, mu, it};
    }
    mu_prev = mu;
  }
  throw std::runtime_error("korn_constant: no convergence after " +
                           std::to_string(maxit) +
                           " iterations, last Rayleigh quotient " +
                           std::to_string(mu_prev));
}

}  // namespace vep
