#include "vep/checkpoint.hpp"

#include <cinttypes>
#include <cstdio>
#include <cstring>
#include <memory>
#include <stdexcept>
#include <vector>

namespace vep {

namespace {

constexpr char kMagic[8] = {'V', 'E', 'P', 'C', 'H', 'K', 'P', 'T'};
constexpr std::uint32_t kVersion = 1;

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f != nullptr) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

void write_all(std::FILE* f, const void* buf, size_t bytes, const std::string& path) {
  if (std::fwrite(buf, 1, bytes, f) != bytes)
    throw std::runtime_error("checkpoint write failed: " + path);
}

void read_all(std::FILE* f, void* buf, size_t bytes, const std::string& path) {
  if (std::fread(buf, 1, bytes, f) != bytes)
    throw std::runtime_error("checkpoint truncated or unreadable: " + path);
}

}  // namespace

std::string checkpoint_filename(int step) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "chk_%05d.bin", step);
  return buf;
}

void write_checkpoint(const std::string& path, const Mesh& mesh, int step,
                      double tau, const State& state, const TensorField& xi) {
  FilePtr f(std::fopen(path.c_str(), "wb"));
  if (!f) throw std::runtime_error("cannot open checkpoint for writing: " + path);
  write_all(f.get(), kMagic, sizeof kMagic, path);
  const std::uint32_t header[4] = {kVersion, static_cast<std::uint32_t>(mesh.nx()),
                                   static_cast<std::uint32_t>(mesh.ny()),
                                   static_cast<std::uint32_t>(step)};
  write_all(f.get(), header, sizeof header, path);
  write_all(f.get(), &tau, sizeof tau, path);
  write_all(f.get(), state.v.data.data(), sizeof(double) * state.v.data.size(), path);
  write_all(f.get(), state.E.data.data(), sizeof(double) * state.E.data.size(), path);
  write_all(f.get(), xi.data.data(), sizeof(double) * xi.data.size(), path);
}

CheckpointData read_checkpoint(const std::string& path, const Mesh& mesh) {
  FilePtr f(std::fopen(path.c_str(), "rb"));
  if (!f) throw std::runtime_error("cannot open checkpoint: " + path);
  char magic[8];
  read_all(f.get(), magic, sizeof magic, path);
  if (std::memcmp(magic, kMagic, sizeof kMagic) != 0)
    throw std::runtime_error("bad checkpoint magic: " + path);
  std::uint32_t header[4];
  read_all(f.get(), header, sizeof header, path);
  if (header[0] != kVersion)
    throw std::runtime_error("checkpoint version mismatch in " + path +
                             ": found " + std::to_string(header[0]));
  CheckpointData out;
  out.nx = static_cast<int>(header[1]);
  out.ny = static_cast<int>(header[2]);
  out.step = static_cast<int>(header[3]);
  if (out.nx != mesh.nx() || out.ny != mesh.ny())
    throw std::runtime_error("checkpoint grid mismatch in " + path);
  read_all(f.get(), &out.tau, sizeof out.tau, path);
  out.state = State(mesh);
  out.xi = TensorField(mesh);
  read_all(f.get(), out.state.v.data.data(),
           sizeof(double) * out.state.v.data.size(), path);
  read_all(f.get(), out.state.E.data.data(),
           sizeof(double) * out.state.E.data.size(), path);
  read_all(f.get(), out.xi.data.data(), sizeof(double) * out.xi.data.size(), path);
  return out;
}

void write_ledger_csv(const std::string& path, const EnergyLedger& ledger) {
  FilePtr f(std::fopen(path.c_str(), "w"));
  if (!f) throw std::runtime_error("cannot open ledger for writing: " + path);
  std::fprintf(f.get(),
               "step,time,energy,dissipation,P_term,forcing_power,"
               "ineq_residual,picard_iters,admm_iters,cert_worst_F\n");
  for (const LedgerRow& r : ledger.rows)
    std::fprintf(f.get(), "%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%d,%d,%.17g\n",
                 r.step, r.time, r.energy, r.dissipation, r.P_term,
                 r.forcing_power, r.ineq_residual, r.picard_iters, r.admm_iters,
                 r.cert_worst_F);
}

EnergyLedger read_ledger_csv(const std::string& path) {
  FilePtr f(std::fopen(path.c_str(), "r"));
  if (!f) throw std::runtime_error("cannot open ledger: " + path);
  EnergyLedger out;
  char line[1024];
  bool first = true;
  while (std::fgets(line, sizeof line, f.get()) != nullptr) {
    if (first) {  // header
      first = false;
      continue;
    }
    LedgerRow r;
    if (std::sscanf(line, "%d,%lf,%lf,%lf,%lf,%lf,%lf,%d,%d,%lf", &r.step,
                    &r.time, &r.energy, &r.dissipation, &r.P_term,
                    &r.forcing_power, &r.ineq_residual, &r.picard_iters,
                    &r.admm_iters, &r.cert_worst_F) != 10)
      throw std::runtime_error("malformed ledger row in " + path);
    out.rows.push_back(r);
  }
  return out;
}

}  // namespace vep
