#include "vep/dictionary.hpp"

#include <cmath>

namespace vep {

namespace {

constexpr double kPi = 3.14159265358979323846;

// C1 trapezoid profile: smoothstep ramps on [0, 1/4] and [3/4, 1], one in
// the middle, zero at the ends.
double plateau(double s) {
  if (s <= 0.0 || s >= 1.0) return 0.0;
  if (s < 0.25) {
    const double u = s / 0.25;
    return u * u * (3.0 - 2.0 * u);
  }
  if (s > 0.75) {
    const double u = (1.0 - s) / 0.25;
    return u * u * (3.0 - 2.0 * u);
  }
  return 1.0;
}

double plateau_d(double s) {
  if (s <= 0.0 || s >= 1.0) return 0.0;
  if (s < 0.25) {
    const double u = s / 0.25;
    return (6.0 * u - 6.0 * u * u) / 0.25;
  }
  if (s > 0.75) {
    const double u = (1.0 - s) / 0.25;
    return -(6.0 * u - 6.0 * u * u) / 0.25;
  }
  return 0.0;
}

struct Profile {
  std::function<double(double)> f, df;
};

Profile sin_profile(double L, int k) {
  const double w = k * kPi / L;
  return {[w](double s) { return std::sin(w * s); },
          [w](double s) { return w * std::cos(w * s); }};
}
Profile cos_profile(double L, int k) {
  const double w = k * kPi / L;
  return {[w](double s) { return std::cos(w * s); },
          [w](double s) { return -w * std::sin(w * s); }};
}
Profile half_sin(double L) {  // vanishes at 0 only
  const double w = kPi / (2.0 * L);
  return {[w](double s) { return std::sin(w * s); },
          [w](double s) { return w * std::cos(w * s); }};
}
Profile half_cos(double L) {  // vanishes at L only
  const double w = kPi / (2.0 * L);
  return {[w](double s) { return std::cos(w * s); },
          [w](double s) { return -w * std::sin(w * s); }};
}
Profile one_profile() {
  return {[](double) { return 1.0; }, [](double) { return 0.0; }};
}
Profile plateau_profile(double L) {
  return {[L](double s) { return plateau(s / L); },
          [L](double s) { return plateau_d(s / L) / L; }};
}

// profile for the direction that must vanish where the tags demand it
Profile tag_profile(double L, bool fix_low, bool fix_high, int mode) {
  if (fix_low && fix_high) return sin_profile(L, mode);
  if (fix_low) return half_sin(L);
  if (fix_high) return half_cos(L);
  return mode > 1 ? cos_profile(L, mode - 1) : one_profile();
}

AnalyticVelocity product_velocity(Profile fx, Profile fy, Profile gx, Profile gy,
                                  double ax, double ay) {
  AnalyticVelocity v;
  v.value = [=](double x, double y) {
    return Vec2{ax * fx.f(x) * fy.f(y), ay * gx.f(x) * gy.f(y)};
  };
  v.grad = [=](double x, double y) {
    return std::array<double, 4>{ax * fx.df(x) * fy.f(y), ax * fx.f(x) * fy.df(y),
                                 ay * gx.df(x) * gy.f(y), ay * gx.f(x) * gy.df(y)};
  };
  return v;
}

// divergence-free rotational field from the stream function a (sx sy)^2
AnalyticVelocity stream_velocity(double lx, double ly, double amp) {
  const double wx = kPi / lx, wy = kPi / ly;
  auto b = [=](double x, double y) {
    const double s = std::sin(wx * x) * std::sin(wy * y);
    return s * s;
  };
  auto bx = [=](double x, double y) {
    return 2.0 * std::sin(wx * x) * std::cos(wx * x) * wx * std::sin(wy * y) *
           std::sin(wy * y);
  };
  auto by = [=](double x, double y) {
    return 2.0 * std::sin(wy * y) * std::cos(wy * y) * wy * std::sin(wx * x) *
           std::sin(wx * x);
  };
  (void)b;
  auto bxx = [=](double x, double y) {
    return 2.0 * wx * wx * std::cos(2.0 * wx * x) * std::sin(wy * y) * std::sin(wy * y);
  };
  auto byy = [=](double x, double y) {
    return 2.0 * wy * wy * std::cos(2.0 * wy * y) * std::sin(wx * x) * std::sin(wx * x);
  };
  auto bxy = [=](double x, double y) {
    return wx * std::sin(2.0 * wx * x) * wy * std::sin(2.0 * wy * y);
  };
  AnalyticVelocity v;
  v.value = [=](double x, double y) {
    return Vec2{-amp * by(x, y), amp * bx(x, y)};
  };
  v.grad = [=](double x, double y) {
    return std::array<double, 4>{-amp * bxy(x, y), -amp * byy(x, y),
                                 amp * bxx(x, y), amp * bxy(x, y)};
  };
  return v;
}

SymTensor3 dev_dir1() { return SymTensor3::diag(1.0, -1.0, 0.0) * (1.0 / std::sqrt(2.0)); }
SymTensor3 dev_dir2() {
  SymTensor3 s;
  s.xy = 1.0 / std::sqrt(2.0);
  return s;
}
SymTensor3 dev_dir3() { return SymTensor3::diag(1.0, 1.0, -2.0) * (1.0 / std::sqrt(6.0)); }
SymTensor3 sph_dir() { return SymTensor3::identity() * (1.0 / std::sqrt(3.0)); }

AnalyticTensor modulated_tensor(SymTensor3 dir, Profile fx, Profile fy, double amp) {
  AnalyticTensor t;
  t.value = [=](double x, double y) { return amp * fx.f(x) * fy.f(y) * dir; };
  t.grad = [=](double x, double y) {
    return std::array<SymTensor3, 2>{amp * fx.df(x) * fy.f(y) * dir,
                                     amp * fx.f(x) * fy.df(y) * dir};
  };
  return t;
}

AnalyticTensor sum_tensor(AnalyticTensor a, AnalyticTensor b) {
  AnalyticTensor t;
  t.value = [=](double x, double y) { return a.value(x, y) + b.value(x, y); };
  t.grad = [=](double x, double y) {
    const auto ga = a.grad(x, y);
    const auto gb = b.grad(x, y);
    return std::array<SymTensor3, 2>{ga[0] + gb[0], ga[1] + gb[1]};
  };
  return t;
}

}  // namespace

TestDictionary::TestDictionary(const Mesh& mesh, const MaterialParams& params,
                               int size, int levels) {
  if (size < 1 || size > 24 || levels < 1)
    throw std::invalid_argument("TestDictionary: size in 1..24, levels >= 1");
  spatial_entries_ = size;
  levels_ = levels;

  const double lx = mesh.lx(), ly = mesh.ly();
  const bool dl = mesh.side_tag(0) == BoundaryTag::dirichlet;
  const bool dr = mesh.side_tag(1) == BoundaryTag::dirichlet;
  const bool db = mesh.side_tag(2) == BoundaryTag::dirichlet;
  const bool dt = mesh.side_tag(3) == BoundaryTag::dirichlet;

  // vx always vanishes on the x-sides, vy on the y-sides; Dirichlet sides
  // additionally pin the tangential component.
  auto vx_entry = [&](int mx, int my, double a) {
    return product_velocity(sin_profile(lx, mx), tag_profile(ly, db, dt, my),
                            one_profile(), one_profile(), a, 0.0);
  };
  auto vy_entry = [&](int mx, int my, double a) {
    return product_velocity(one_profile(), one_profile(),
                            tag_profile(lx, dl, dr, mx), sin_profile(ly, my), 0.0,
                            a);
  };
  auto vboth = [&](int mx, int my, double a) {
    AnalyticVelocity v1 = vx_entry(mx, my, a), v2 = vy_entry(mx, my, -a);
    AnalyticVelocity v;
    v.value = [=](double x, double y) {
      const Vec2 a1 = v1.value(x, y), a2 = v2.value(x, y);
      return Vec2{a1.x + a2.x, a1.y + a2.y};
    };
    v.grad = [=](double x, double y) {
      const auto g1 = v1.grad(x, y), g2 = v2.grad(x, y);
      return std::array<double, 4>{g1[0] + g2[0], g1[1] + g2[1], g1[2] + g2[2],
                                   g1[3] + g2[3]};
    };
    return v;
  };
  auto plateau_entry = [&](double a) {
    return product_velocity(plateau_profile(lx), tag_profile(ly, db, dt, 1),
                            tag_profile(lx, dl, dr, 1), plateau_profile(ly), a, a);
  };

  const double sy = params.sigma_yield;
  const double amp_feas = std::isfinite(sy) ? 0.5 * sy : 1.0;
  const double amp_hot = std::isfinite(sy) ? 3.0 * sy : 3.0;

  struct Spec {
    const char* label;
    AnalyticVelocity psi;
    AnalyticTensor Psi;
  };
  std::vector<Spec> specs;
  specs.push_back({"vx_bump", vx_entry(1, 1, 1.0), {}});
  specs.push_back({"vy_bump", vy_entry(1, 1, 1.0), {}});
  specs.push_back({"rotational", stream_velocity(lx, ly, 0.5), {}});
  specs.push_back({"plateau", plateau_entry(1.0), {}});
  specs.push_back({"vx_mode2", vx_entry(2, 1, 1.0), {}});
  specs.push_back({"vy_mode2", vy_entry(1, 2, 1.0), {}});
  specs.push_back({"swirl", vboth(1, 1, 0.7), {}});
  specs.push_back({"tangential", vx_entry(1, 1, 0.8), {}});

  specs.push_back({"sph_const",
                   {},
                   modulated_tensor(sph_dir(), one_profile(), one_profile(), 1.0)});
  specs.push_back({"dev1_const",
                   {},
                   modulated_tensor(dev_dir1(), one_profile(), one_profile(), amp_feas)});
  specs.push_back({"dev2_const",
                   {},
                   modulated_tensor(dev_dir2(), one_profile(), one_profile(), amp_feas)});
  specs.push_back({"dev3_coscos",
                   {},
                   modulated_tensor(dev_dir3(), cos_profile(lx, 1), cos_profile(ly, 1),
                                    amp_feas)});
  specs.push_back(
      {"mix_sph_dev",
       {},
       sum_tensor(modulated_tensor(dev_dir1(), cos_profile(lx, 1), cos_profile(ly, 1),
                                   0.6 * amp_feas),
                  modulated_tensor(sph_dir(), sin_profile(lx, 1), sin_profile(ly, 1),
                                   0.7))});
  specs.push_back({"dev2_cosy",
                   {},
                   modulated_tensor(dev_dir2(), one_profile(), cos_profile(ly, 1),
                                    amp_feas)});
  specs.push_back({"hot_dev",
                   {},
                   modulated_tensor(dev_dir1(), cos_profile(lx, 1), cos_profile(ly, 1),
                                    amp_hot)});
  specs.push_back({"sph_ramp",
                   {},
                   modulated_tensor(sph_dir(), {[](double s) { return s; },
                                                [](double) { return 1.0; }},
                                    one_profile(), 1.0)});

  specs.push_back({"vx_sph", vx_entry(1, 1, 1.0),
                   modulated_tensor(sph_dir(), one_profile(), one_profile(), 1.0)});
  specs.push_back({"vy_dev1", vy_entry(1, 1, 1.0),
                   modulated_tensor(dev_dir1(), one_profile(), one_profile(), amp_feas)});
  specs.push_back({"rot_dev2", stream_velocity(lx, ly, 0.5),
                   modulated_tensor(dev_dir2(), one_profile(), one_profile(), amp_feas)});
  specs.push_back({"swirl_dev3", vboth(1, 1, 0.7),
                   modulated_tensor(dev_dir3(), cos_profile(lx, 1), cos_profile(ly, 1),
                                    amp_feas)});
  specs.push_back({"plateau_sph", plateau_entry(0.7),
                   modulated_tensor(sph_dir(), one_profile(), one_profile(), 0.5)});
  specs.push_back({"vx2_dev2cosy", vx_entry(2, 1, 1.0),
                   modulated_tensor(dev_dir2(), one_profile(), cos_profile(ly, 1),
                                    amp_feas)});
  specs.push_back(
      {"tangential_mix", vx_entry(1, 1, 0.8),
       sum_tensor(modulated_tensor(dev_dir1(), cos_profile(lx, 1), cos_profile(ly, 1),
                                   0.6 * amp_feas),
                  modulated_tensor(sph_dir(), sin_profile(lx, 1), sin_profile(ly, 1),
                                   0.7))});
  specs.push_back({"rot_sphramp", stream_velocity(lx, ly, 0.25),
                   modulated_tensor(sph_dir(), {[](double s) { return s; },
                                                [](double) { return 1.0; }},
                                    one_profile(), 1.0)});

  FunctionalEvaluator eval(mesh, params);  // korn not needed for feasibility

  entries_.push_back(zero_test_pair(mesh));
  for (int k = 0; k < size; ++k) {
    const Spec& sp = specs[static_cast<size_t>(k)];
    const AnalyticVelocity* pv = sp.psi.empty() ? nullptr : &sp.psi;
    const AnalyticTensor* pt = sp.Psi.empty() ? nullptr : &sp.Psi;
    const SampledNorms base = sample_norms(mesh, pv, pt);
    VectorField psi1 = interpolate(mesh, sp.psi);
    if (psi1.mesh != nullptr) psi1.apply_constraints();
    TensorField Psi1 = interpolate(mesh, sp.Psi);
    if (sp.psi.empty()) psi1 = VectorField(mesh);
    if (sp.Psi.empty()) Psi1 = TensorField(mesh);

    double lambda = 1.0;
    for (int lev = 0; lev < levels; ++lev, lambda *= 0.5) {
      TestPair t;
      t.psi = psi1;
      t.psi.data *= lambda;
      t.Psi = Psi1;
      t.Psi.data *= lambda;
      t.norms = TestPairNorms{base.psi_inf, base.grad_psi_inf, base.div_psi_inf,
                              base.Psi_inf, base.grad_Psi_inf}
                    .scaled(lambda);
      t.p_dev_Psi = eval.p_of_dev(t.Psi);
      t.label = std::string(sp.label) + "@" + std::to_string(lev);
      entries_.push_back(std::move(t));
    }
  }
}

std::vector<const TestPair*> TestDictionary::admissible(
    const FunctionalEvaluator& eval, double tau) const {
  std::vector<const TestPair*> out;
  for (const TestPair& t : entries_) {
    if (t.p_dev_Psi == kInf) continue;
    if (tau * eval.weight_construct(t.norms) <= 1.0) out.push_back(&t);
  }
  return out;
}

int TestDictionary::infeasible_count() const {
  int n = 0;
  for (const TestPair& t : entries_)
    if (t.p_dev_Psi == kInf) ++n;
  return n;
}

}  // namespace vep
