#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "vep/assembly.hpp"
#include "vep/field.hpp"
#include "vep/forcing.hpp"
#include "vep/functionals.hpp"

namespace vep {

struct SolverOptions {
  double picard_tol = 1e-9;   // relative nonlinear residual
  int max_picard = 50;
  double admm_tol = 1e-9;     // relative primal+dual residual
  double admm_feas_abs = 1e-11;  // absolute primal infinity-norm target
  int max_admm = 500;
  double cg_tol = 1e-11;      // momentum solve, relative
  int max_krylov = 20000;
  double cert_tol = 1e-7;     // certification tolerance multiplier (x scale)
};

struct StepCertificate {
  int picard_iters = 0;
  int admm_iters = 0;             // inner iterations summed over sweeps
  double nonlinear_residual = 0;  // relative, at acceptance
  double fenchel_worst = 0;       // worst node-wise multiplier gap
  double yield_excess = 0;        // max over nodes of |dev Dphi(E)| - sigma_y
  double energy_residual = 0;     // incremental functional at the zero pair
};

/// Per-step ledger entry.  aux_energy follows the dissipation budget from
/// the initial energy; its gap to the state energy is the accumulated slack
/// of the step inequalities (nonnegative for accepted steps).
struct LedgerRow {
  int step = 0;
  double time = 0.0;
  double energy = 0.0;
  double dissipation = 0.0;
  double P_term = 0.0;
  double forcing_power = 0.0;
  double ineq_residual = 0.0;
  int picard_iters = 0;
  int admm_iters = 0;
  double cert_worst_F = 0.0;
  double aux_energy = 0.0;
  double energy_defect = 0.0;
};

struct EnergyLedger {
  double initial_energy = 0.0;
  std::vector<LedgerRow> rows;
};

/// Right-continuous piecewise-constant prolongation of the iterates on
/// (-tau, T]; index n covers (t_{n-1}, t_n].
struct Trajectory {
  double tau = 0.0;
  std::vector<State> states;           // size N + 1, states[0] = initial data
  std::vector<TensorField> multipliers;  // size N + 1, entry 0 unused (zero)

  int num_steps() const { return static_cast<int>(states.size()) - 1; }

  int index_at(double t) const {
    if (t <= 0.0) return 0;
    int n = static_cast<int>(std::ceil(t / tau - 1e-12));
    if (n < 0) n = 0;
    if (n > num_steps()) n = num_steps();
    return n;
  }
  const State& at_time(double t) const { return states[index_at(t)]; }
};

struct Scenario {
  std::string name = "custom";
  Mesh mesh;
  MaterialParams params;
  double T = 1.0;
  int N = 10;
  State initial;
  std::shared_ptr<Forcing> forcing;            // null = no force
  std::shared_ptr<StrainSource> strain_source; // null = none
  SolverOptions opts;
  unsigned seed = 0;
  int threads = 1;

  double tau() const { return T / N; }
};

struct StepResult {
  State state;
  TensorField multiplier;
  StepCertificate cert;
  bool ok = false;
  std::string error;
};

struct RunResult {
  Trajectory trajectory;
  EnergyLedger ledger;
  bool ok = false;
  int failed_step = -1;
  std::string error;
};

/// Backward-Euler incremental solver: an outer Picard iteration freezing the
/// advecting velocity, a node-wise ADMM treatment of the yield constraint in
/// the strain block, and a conjugate-gradient momentum solve.
class Stepper {
 public:
  Stepper(const Mesh& mesh, MaterialParams params, SolverOptions opts, double tau);

  const MaterialParams& params() const { return params_; }
  const FunctionalEvaluator& evaluator() const { return *eval_; }
  const Operators& ops() const { return ops_; }
  double tau() const { return tau_; }

  StepResult step(const State& prev, const VectorField* f_n, const TensorField* g_n,
                  const TensorField* warm_multiplier = nullptr) const;

 private:
  struct StrainCache;
  const Mesh* mesh_;
  MaterialParams params_;
  SolverOptions opts_;
  double tau_;
  Operators ops_;
  std::unique_ptr<FunctionalEvaluator> eval_;
  std::shared_ptr<StrainCache> strain_cache_;
  Eigen::SparseMatrix<double> momentum_matrix_;  // rho/tau M + S on free dofs

  Eigen::VectorXd stress_load(const TensorField& E) const;
  Eigen::VectorXd convection_load(const VectorField& vhat) const;
  void strain_operator_apply(const VectorField& vhat, const TensorField& E,
                             Eigen::VectorXd& out) const;  // (T + R + gamma Kd) E
};

/// March the scenario; the optional per-step certification hook fills
/// cert_worst_F (the verify module provides one).
using StepCertHook =
    std::function<double(int step, const State& s, const State& prev,
                         const VectorField* f_n, const TensorField* g_n)>;

RunResult run(const Scenario& sc, const StepCertHook& cert_hook = {});

/// Dictionary surrogate of the dual-norm increments: per-step suprema of
/// the pairings with unit-normalized test fields, plus tau-weighted sums.
struct IncrementNorms {
  std::vector<double> v_step;  // size N
  std::vector<double> E_step;
  double v_sum = 0.0;  // tau-weighted
  double E_sum = 0.0;
};

class TestDictionary;  // defined in dictionary.hpp

IncrementNorms increment_dual_norms(const Trajectory& traj,
                                    const FunctionalEvaluator& eval,
                                    const std::vector<TestPair>& dict);

}  // namespace vep
