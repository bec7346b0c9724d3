#include "vep/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace vep {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

double parse_double(const std::string& key, const std::string& v) {
  if (v == "inf" || v == "+inf") return std::numeric_limits<double>::infinity();
  try {
    size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (...) {
    throw std::invalid_argument("config: bad numeric value for key '" + key +
                                "': " + v);
  }
}

int parse_int(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    const int i = std::stoi(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return i;
  } catch (...) {
    throw std::invalid_argument("config: bad integer value for key '" + key +
                                "': " + v);
  }
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw std::invalid_argument("config: bad boolean value for key '" + key +
                              "': " + v);
}

template <typename T>
std::vector<T> parse_list(const std::string& key, const std::string& v,
                          T (*one)(const std::string&, const std::string&)) {
  std::vector<T> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(one(key, item));
  }
  if (out.empty())
    throw std::invalid_argument("config: empty list for key '" + key + "'");
  return out;
}

std::string fmt(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

Config Config::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return parse_lines(lines);
}

Config Config::parse_lines(const std::vector<std::string>& lines) {
  Config c;
  for (const std::string& raw : lines) {
    std::string line = raw;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config: expected key=value, got: " + line);
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));

    if (key == "scenario") c.scenario = val;
    else if (key == "lx") c.lx = parse_double(key, val);
    else if (key == "ly") c.ly = parse_double(key, val);
    else if (key == "nx") c.nx = parse_int(key, val);
    else if (key == "ny") c.ny = parse_int(key, val);
    else if (key == "bc_left") c.bc_left = val;
    else if (key == "bc_right") c.bc_right = val;
    else if (key == "bc_bottom") c.bc_bottom = val;
    else if (key == "bc_top") c.bc_top = val;
    else if (key == "allow_all_slip") c.allow_all_slip = parse_bool(key, val);
    else if (key == "T") c.T = parse_double(key, val);
    else if (key == "N") c.N = parse_int(key, val);
    else if (key == "rho") c.params.rho = parse_double(key, val);
    else if (key == "mu1") c.params.mu1 = parse_double(key, val);
    else if (key == "mu2") c.params.mu2 = parse_double(key, val);
    else if (key == "K") c.params.K = parse_double(key, val);
    else if (key == "G") c.params.G = parse_double(key, val);
    else if (key == "nu") c.params.nu = parse_double(key, val);
    else if (key == "sigma_yield") c.params.sigma_yield = parse_double(key, val);
    else if (key == "gamma") c.params.gamma = parse_double(key, val);
    else if (key == "korn_mu") c.params.korn_mu = parse_double(key, val);
    else if (key == "forcing_amp") c.forcing_amp = parse_double(key, val);
    else if (key == "forcing_omega") c.forcing_omega = parse_double(key, val);
    else if (key == "init_amp") c.init_amp = parse_double(key, val);
    else if (key == "picard_tol") c.opts.picard_tol = parse_double(key, val);
    else if (key == "max_picard") c.opts.max_picard = parse_int(key, val);
    else if (key == "admm_tol") c.opts.admm_tol = parse_double(key, val);
    else if (key == "max_admm") c.opts.max_admm = parse_int(key, val);
    else if (key == "cg_tol") c.opts.cg_tol = parse_double(key, val);
    else if (key == "cert_tol") c.opts.cert_tol = parse_double(key, val);
    else if (key == "dict_size") c.dict_size = parse_int(key, val);
    else if (key == "dict_levels") c.dict_levels = parse_int(key, val);
    else if (key == "st_samples") c.st_samples = parse_int(key, val);
    else if (key == "out_dir") c.out_dir = val;
    else if (key == "threads") c.threads = parse_int(key, val);
    else if (key == "seed") c.seed = static_cast<unsigned>(parse_int(key, val));
    else if (key == "certify_during_run") c.certify_during_run = parse_bool(key, val);
    else if (key == "envar_optimized_weight")
      c.envar_optimized_weight = parse_bool(key, val);
    else if (key == "study_levels") c.study_levels = parse_list<int>(key, val, parse_int);
    else if (key == "space_levels") c.space_levels = parse_list<int>(key, val, parse_int);
    else if (key == "gamma_list")
      c.gamma_list = parse_list<double>(key, val, parse_double);
    else
      throw std::invalid_argument("config: unknown key '" + key + "'");
  }
  c.validate();
  return c;
}

void Config::validate() const {
  params.validate();
  if (nx < 2 || ny < 2) throw std::invalid_argument("config: nx, ny must be >= 2");
  if (!(lx > 0.0) || !(ly > 0.0))
    throw std::invalid_argument("config: extents must be positive");
  if (!(T > 0.0) || N < 1) throw std::invalid_argument("config: need T > 0, N >= 1");
  if (threads < 1) throw std::invalid_argument("config: threads must be >= 1");
  auto tag_ok = [](const std::string& s) { return s == "dirichlet" || s == "slip"; };
  if (!tag_ok(bc_left) || !tag_ok(bc_right) || !tag_ok(bc_bottom) || !tag_ok(bc_top))
    throw std::invalid_argument("config: boundary tags must be dirichlet or slip");
  const bool known = scenario == "rest" || scenario == "shear_yield" ||
                     scenario == "kelvin_voigt_mms" ||
                     scenario == "rotation_objectivity" || scenario == "gamma_sweep";
  if (!known) throw std::invalid_argument("config: unknown scenario '" + scenario + "'");
  if (dict_size < 1 || dict_size > 24 || dict_levels < 1)
    throw std::invalid_argument("config: dict_size in 1..24, dict_levels >= 1");
}

std::string Config::resolved() const {
  std::ostringstream os;
  os << "scenario=" << scenario << "\n";
  os << "lx=" << fmt(lx) << "\nly=" << fmt(ly) << "\n";
  os << "nx=" << nx << "\nny=" << ny << "\n";
  os << "bc_left=" << bc_left << "\nbc_right=" << bc_right << "\n";
  os << "bc_bottom=" << bc_bottom << "\nbc_top=" << bc_top << "\n";
  os << "allow_all_slip=" << (allow_all_slip ? "true" : "false") << "\n";
  os << "T=" << fmt(T) << "\nN=" << N << "\n";
  os << "rho=" << fmt(params.rho) << "\nmu1=" << fmt(params.mu1)
     << "\nmu2=" << fmt(params.mu2) << "\n";
  os << "K=" << fmt(params.K) << "\nG=" << fmt(params.G) << "\n";
  os << "nu=" << fmt(params.nu) << "\nsigma_yield=" << fmt(params.sigma_yield)
     << "\n";
  os << "gamma=" << fmt(params.gamma) << "\nkorn_mu=" << fmt(params.korn_mu) << "\n";
  os << "forcing_amp=" << fmt(forcing_amp) << "\nforcing_omega=" << fmt(forcing_omega)
     << "\ninit_amp=" << fmt(init_amp) << "\n";
  os << "picard_tol=" << fmt(opts.picard_tol) << "\nmax_picard=" << opts.max_picard
     << "\n";
  os << "admm_tol=" << fmt(opts.admm_tol) << "\nmax_admm=" << opts.max_admm << "\n";
  os << "cg_tol=" << fmt(opts.cg_tol) << "\ncert_tol=" << fmt(opts.cert_tol) << "\n";
  os << "dict_size=" << dict_size << "\ndict_levels=" << dict_levels << "\n";
  os << "st_samples=" << st_samples << "\n";
  os << "out_dir=" << out_dir << "\nthreads=" << threads << "\nseed=" << seed << "\n";
  os << "certify_during_run=" << (certify_during_run ? "true" : "false") << "\n";
  os << "envar_optimized_weight=" << (envar_optimized_weight ? "true" : "false")
     << "\n";
  os << "study_levels=";
  for (size_t i = 0; i < study_levels.size(); ++i)
    os << (i ? "," : "") << study_levels[i];
  os << "\nspace_levels=";
  for (size_t i = 0; i < space_levels.size(); ++i)
    os << (i ? "," : "") << space_levels[i];
  os << "\ngamma_list=";
  for (size_t i = 0; i < gamma_list.size(); ++i)
    os << (i ? "," : "") << fmt(gamma_list[i]);
  os << "\n";
  return os.str();
}

BoundarySpec Config::boundary_spec() const {
  auto tag = [](const std::string& s) {
    return s == "dirichlet" ? BoundaryTag::dirichlet : BoundaryTag::slip;
  };
  BoundarySpec bc;
  bc.left = tag(bc_left);
  bc.right = tag(bc_right);
  bc.bottom = tag(bc_bottom);
  bc.top = tag(bc_top);
  bc.allow_all_slip = allow_all_slip;
  return bc;
}

Mesh Config::make_mesh() const { return Mesh::build(nx, ny, lx, ly, boundary_spec()); }

}  // namespace vep
