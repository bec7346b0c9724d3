#pragma once

#include <string>

#include "vep/field.hpp"
#include "vep/stepper.hpp"

namespace vep {

/// Per-step flat binary record: header (magic, version, nx, ny, step, tau),
/// then node arrays v, E, Xi as little-endian 64-bit floats.
void write_checkpoint(const std::string& path, const Mesh& mesh, int step,
                      double tau, const State& state, const TensorField& xi);

struct CheckpointData {
  int nx = 0, ny = 0, step = 0;
  double tau = 0.0;
  State state;
  TensorField xi;
};

/// Reads and validates a checkpoint; throws std::runtime_error on magic,
/// version, dimension, or truncation problems.
CheckpointData read_checkpoint(const std::string& path, const Mesh& mesh);

std::string checkpoint_filename(int step);

void write_ledger_csv(const std::string& path, const EnergyLedger& ledger);
EnergyLedger read_ledger_csv(const std::string& path);

}  // namespace vep
