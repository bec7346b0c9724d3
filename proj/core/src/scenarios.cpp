#include "vep/scenarios.hpp"

#include <cmath>

#include "vep/potentials.hpp"

namespace vep {

namespace {

constexpr double kPi = 3.14159265358979323846;

/// Manufactured Kelvin--Voigt solution and the source terms that make it
/// exact: v and E are products of trigonometric profiles, compatible with
/// the no-slip and natural strain boundary conditions on the rectangle.  The
/// momentum force and the strain source are composed pointwise from the
/// analytic derivatives.
struct MmsFields {
  MaterialParams p;
  double A, B, Omega, wx, wy;
  double cxx = 0.3, cyy = -0.2, czz = 0.1, cxy = 0.25;

  double a(double t) const { return A * std::cos(Omega * t); }
  double adot(double t) const { return -A * Omega * std::sin(Omega * t); }
  double b(double t) const { return B * (1.0 + 0.5 * std::sin(Omega * t)); }
  double bdot(double t) const { return 0.5 * B * Omega * std::cos(Omega * t); }

  SymTensor3 cdir() const {
    SymTensor3 c;
    c.xx = cxx;
    c.yy = cyy;
    c.zz = czz;
    c.xy = cxy;
    return c;
  }

  Vec2 v(double t, double x, double y) const {
    const double at = a(t);
    return {at * std::sin(wx * x) * std::sin(wy * y),
            0.5 * at * std::sin(2.0 * wx * x) * std::sin(wy * y)};
  }

  // grad = [v1x, v1y, v2x, v2y]
  std::array<double, 4> vgrad(double t, double x, double y) const {
    const double at = a(t);
    return {at * wx * std::cos(wx * x) * std::sin(wy * y),
            at * std::sin(wx * x) * wy * std::cos(wy * y),
            at * wx * std::cos(2.0 * wx * x) * std::sin(wy * y),
            0.5 * at * std::sin(2.0 * wx * x) * wy * std::cos(wy * y)};
  }

  // second derivatives [v1xx, v1xy, v1yy, v2xx, v2xy, v2yy]
  std::array<double, 6> vhess(double t, double x, double y) const {
    const double at = a(t);
    return {-at * wx * wx * std::sin(wx * x) * std::sin(wy * y),
            at * wx * std::cos(wx * x) * wy * std::cos(wy * y),
            -at * std::sin(wx * x) * wy * wy * std::sin(wy * y),
            -2.0 * at * wx * wx * std::sin(2.0 * wx * x) * std::sin(wy * y),
            at * wx * std::cos(2.0 * wx * x) * wy * std::cos(wy * y),
            -0.5 * at * std::sin(2.0 * wx * x) * wy * wy * std::sin(wy * y)};
  }

  double phi_profile(double x, double y) const {
    return std::cos(wx * x) * std::cos(wy * y);
  }

  SymTensor3 E(double t, double x, double y) const {
    return b(t) * phi_profile(x, y) * cdir();
  }
  SymTensor3 Edot(double t, double x, double y) const {
    return bdot(t) * phi_profile(x, y) * cdir();
  }
  SymTensor3 Ex(double t, double x, double y) const {
    return b(t) * (-wx * std::sin(wx * x) * std::cos(wy * y)) * cdir();
  }
  SymTensor3 Ey(double t, double x, double y) const {
    return b(t) * (-wy * std::cos(wx * x) * std::sin(wy * y)) * cdir();
  }
  SymTensor3 Elap(double t, double x, double y) const {
    return b(t) * (-(wx * wx + wy * wy)) * phi_profile(x, y) * cdir();
  }

  Vec2 forcing(double t, double x, double y) const {
    const Vec2 vv = v(t, x, y);
    const auto g = vgrad(t, x, y);
    const auto h = vhess(t, x, y);
    const double div = g[0] + g[3];
    const double at = adot(t) / (a(t) == 0.0 ? 1.0 : a(t));
    (void)at;

    // material acceleration + compressibility correction
    const Vec2 vt = {adot(t) * std::sin(wx * x) * std::sin(wy * y),
                     0.5 * adot(t) * std::sin(2.0 * wx * x) * std::sin(wy * y)};
    const double conv1 = vv.x * g[0] + vv.y * g[1];
    const double conv2 = vv.x * g[2] + vv.y * g[3];
    Vec2 f = {p.rho * (vt.x + conv1) + 0.5 * p.rho * div * vv.x,
              p.rho * (vt.y + conv2) + 0.5 * p.rho * div * vv.y};

    // minus div of the Newtonian stress
    const double lam = p.mu2 - 2.0 * p.mu1 / 3.0;
    const double divS1 =
        2.0 * p.mu1 * (h[0] + 0.5 * (h[2] + h[4])) + lam * (h[0] + h[4]);
    const double divS2 =
        2.0 * p.mu1 * (0.5 * (h[1] + h[3]) + h[5]) + lam * (h[1] + h[5]);
    f.x -= divS1;
    f.y -= divS2;

    // minus div of the elastic stress T = Dphi(E) + phi(E) I
    const StoredEnergy phi(p);
    const SymTensor3 e = E(t, x, y);
    const SymTensor3 ex = Ex(t, x, y);
    const SymTensor3 ey = Ey(t, x, y);
    const SymTensor3 dx = phi.bulk() * ex.sph() + phi.shear() * ex.dev();
    const SymTensor3 dy = phi.bulk() * ey.sph() + phi.shear() * ey.dev();
    const double phix = phi.derivative(e).dot(ex);
    const double phiy = phi.derivative(e).dot(ey);
    f.x -= dx.xx + dy.xy + phix;
    f.y -= dx.xy + dy.yy + phiy;
    return f;
  }

  SymTensor3 strain_source(double t, double x, double y) const {
    const auto g = vgrad(t, x, y);
    const Vec2 vv = v(t, x, y);
    Tensor3 skew;
    skew(0, 1) = 0.5 * (g[1] - g[2]);
    skew(1, 0) = -skew(0, 1);
    SymTensor3 dsym;
    dsym.xx = g[0];
    dsym.yy = g[3];
    dsym.xy = 0.5 * (g[1] + g[2]);

    const SymTensor3 e = E(t, x, y);
    SymTensor3 src = Edot(t, x, y) + vv.x * Ex(t, x, y) + vv.y * Ey(t, x, y) +
                     jaumann_bracket(e, skew, 1e30) - dsym;
    if (p.gamma > 0.0) {
      const StoredEnergy phi(p);
      const SymTensor3 lap = Elap(t, x, y);
      src -= p.gamma * (phi.bulk() * lap.sph() + phi.shear() * lap.dev());
    }
    return src;
  }

  AnalyticVelocity exact_velocity(double t) const {
    AnalyticVelocity f;
    f.value = [*this, t](double x, double y) { return v(t, x, y); };
    f.grad = [*this, t](double x, double y) { return vgrad(t, x, y); };
    return f;
  }
  AnalyticTensor exact_strain(double t) const {
    AnalyticTensor f;
    f.value = [*this, t](double x, double y) { return E(t, x, y); };
    f.grad = [*this, t](double x, double y) {
      return std::array<SymTensor3, 2>{Ex(t, x, y), Ey(t, x, y)};
    };
    return f;
  }
};

class MmsForcing final : public Forcing {
 public:
  explicit MmsForcing(MmsFields f) : f_(std::move(f)) {}
  Vec2 value(double t, double x, double y) const override {
    return f_.forcing(t, x, y);
  }

 private:
  MmsFields f_;
};

class MmsStrainSource final : public StrainSource {
 public:
  explicit MmsStrainSource(MmsFields f) : f_(std::move(f)) {}
  SymTensor3 value(double t, double x, double y) const override {
    return f_.strain_source(t, x, y);
  }

 private:
  MmsFields f_;
};

AnalyticVelocity shear_forcing_profile(double lx, double ly, double amp) {
  const double wx = kPi / lx, wy = kPi / ly;
  AnalyticVelocity f;
  f.value = [=](double x, double y) {
    return Vec2{amp * std::sin(wx * x) * std::sin(2.0 * wy * y), 0.0};
  };
  f.grad = [=](double x, double y) {
    return std::array<double, 4>{
        amp * wx * std::cos(wx * x) * std::sin(2.0 * wy * y),
        2.0 * amp * wy * std::sin(wx * x) * std::cos(2.0 * wy * y), 0.0, 0.0};
  };
  return f;
}

AnalyticVelocity rotation_initial(double lx, double ly, double amp) {
  const double wx = kPi / lx, wy = kPi / ly;
  AnalyticVelocity v;
  auto sx = [=](double x) { return std::sin(wx * x); };
  auto sy = [=](double y) { return std::sin(wy * y); };
  v.value = [=](double x, double y) {
    const double bx = 2.0 * wx * sx(x) * std::cos(wx * x) * sy(y) * sy(y);
    const double by = 2.0 * wy * sy(y) * std::cos(wy * y) * sx(x) * sx(x);
    return Vec2{-amp * by, amp * bx};
  };
  v.grad = [=](double x, double y) {
    const double bxy = wx * std::sin(2.0 * wx * x) * wy * std::sin(2.0 * wy * y);
    const double bxx = 2.0 * wx * wx * std::cos(2.0 * wx * x) * sy(y) * sy(y);
    const double byy = 2.0 * wy * wy * std::cos(2.0 * wy * y) * sx(x) * sx(x);
    return std::array<double, 4>{-amp * bxy, -amp * byy, amp * bxx, amp * bxy};
  };
  return v;
}

}  // namespace

ScenarioBundle make_scenario(const Config& cfg) {
  ScenarioBundle out;
  Scenario& sc = out.scenario;
  sc.name = cfg.scenario;
  sc.params = cfg.params;
  sc.T = cfg.T;
  sc.N = cfg.N;
  sc.opts = cfg.opts;
  sc.seed = cfg.seed;
  sc.threads = cfg.threads;

  if (cfg.scenario == "kelvin_voigt_mms") {
    // plasticity off; stress diffusion on unless overridden
    sc.params.nu = 0.0;
    sc.params.sigma_yield = kInf;
    if (sc.params.gamma <= 0.0) sc.params.gamma = 1e-2;
  }

  Config mesh_cfg = cfg;
  if (cfg.scenario == "rest" || cfg.scenario == "rotation_objectivity" ||
      cfg.scenario == "kelvin_voigt_mms") {
    mesh_cfg.bc_left = mesh_cfg.bc_right = "dirichlet";
    mesh_cfg.bc_bottom = mesh_cfg.bc_top = "dirichlet";
  }
  sc.mesh = mesh_cfg.make_mesh();
  sc.initial = State(sc.mesh);

  if (cfg.scenario == "rest") {
    // zero data, zero force
  } else if (cfg.scenario == "shear_yield" || cfg.scenario == "gamma_sweep") {
    sc.forcing = std::make_shared<SeparableForcing>(
        shear_forcing_profile(cfg.lx, cfg.ly, cfg.forcing_amp),
        TimeProfile::constant);
  } else if (cfg.scenario == "rotation_objectivity") {
    const AnalyticVelocity v0 =
        rotation_initial(cfg.lx, cfg.ly, 0.25 * cfg.init_amp);
    sc.initial.v = interpolate(sc.mesh, v0);
    sc.initial.v.apply_constraints();
    // feasible deviatoric initial strain
    const double amp = std::isfinite(cfg.params.sigma_yield)
                           ? 0.5 * cfg.params.sigma_yield / cfg.params.G
                           : 0.5;
    for (int i = 0; i < sc.mesh.num_nodes(); ++i) {
      const double x = sc.mesh.node_x(i), y = sc.mesh.node_y(i);
      SymTensor3 e = SymTensor3::diag(1.0, -1.0, 0.0) * (amp / std::sqrt(2.0));
      e *= std::cos(kPi * x / cfg.lx) * std::cos(kPi * y / cfg.ly);
      sc.initial.E.set_node(i, e);
    }
  } else if (cfg.scenario == "kelvin_voigt_mms") {
    MmsFields f;
    f.p = sc.params;
    f.A = 0.1 * cfg.init_amp;
    f.B = 0.1 * cfg.init_amp;
    f.Omega = kPi;
    f.wx = kPi / cfg.lx;
    f.wy = kPi / cfg.ly;
    sc.forcing = std::make_shared<MmsForcing>(f);
    sc.strain_source = std::make_shared<MmsStrainSource>(f);
    sc.initial.v = interpolate(sc.mesh, f.exact_velocity(0.0));
    sc.initial.v.apply_constraints();
    sc.initial.E = interpolate(sc.mesh, f.exact_strain(0.0));
    out.exact_velocity = [f](double t) { return f.exact_velocity(t); };
    out.exact_strain = [f](double t) { return f.exact_strain(t); };
  }
  return out;
}

}  // namespace vep
