#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

#include "geoharm/loss.hpp"

namespace geoharm {

enum class NetworkKind { Linear, FcNet, Siren };

struct NetworkSpec {
  NetworkKind kind = NetworkKind::Linear;
  int in_dim = 0;
  int out_dim = 0;
  int hidden = 256;          // H
  int layers = 1;            // N: number of Siren sine layers
  double dropout_rate = 0.0;
  double omega0 = 30.0;      // Siren first-layer frequency scale

  void validate() const;
};

/// Parses `kind[:k=v,...]`: `linear`, `fcnet:H=128,p=0.5`,
/// `siren:H=64,N=2,w0=30,p=0`. Input/output dims come from the embedding and
/// the task, not from the string.
NetworkSpec parse_network_spec(const std::string& text);
std::string to_string(const NetworkSpec& spec);

/// Where one weight matrix or bias lives inside the flat parameter vector.
/// Weights are row-major (rows x cols); biases have cols == 1.
struct ParamSlice {
  std::string name;
  std::size_t offset = 0;
  int rows = 0;
  int cols = 0;
};

std::vector<ParamSlice> make_layout(const NetworkSpec& spec);
std::size_t param_count(const NetworkSpec& spec);

struct Model {
  NetworkSpec spec;
  Eigen::VectorXd params;
  std::vector<ParamSlice> layout;
};

/// Deterministic initialization. Linear/FcNet weights ~ U(+-sqrt(6/(fan_in +
/// fan_out))) with zero biases; Siren first layer ~ U(-1/in, 1/in) and later
/// layers ~ U(+-sqrt(6/fan_in)/omega0), biases drawn like their weights.
Model init(const NetworkSpec& spec, std::uint64_t seed);

/// Per-layer intermediate values kept for the backward pass.
struct ForwardCache {
  std::vector<Eigen::MatrixXd> values;
  std::vector<Eigen::MatrixXd> dropout_masks;
};

/// Batch forward pass, one sample per row. In train mode dropout masks are
/// drawn from `dropout_seed` (inverted dropout, scaled by 1/(1-p)); eval mode
/// is deterministic and mask-free.
Eigen::MatrixXd forward_batch(const Model& model, const Eigen::MatrixXd& x,
                              bool train_mode, std::uint64_t dropout_seed,
                              ForwardCache* cache = nullptr);

/// Single-sample convenience wrapper.
Eigen::VectorXd forward(const Model& model, const Eigen::VectorXd& x,
                        bool train_mode, std::uint64_t dropout_seed);

/// Mean batch loss and its gradient w.r.t. every parameter. Throws
/// numeric_error naming the offending layer if a non-finite gradient shows up.
struct BackwardResult {
  double loss = 0.0;
  Eigen::VectorXd grad;
};
BackwardResult backward(const Model& model, const Eigen::MatrixXd& x,
                        const TargetsView& targets, LossKind loss_kind,
                        bool train_mode, std::uint64_t dropout_seed);

/// Loss only, via the identical forward path (for finite-difference checks).
double loss_on_batch(const Model& model, const Eigen::MatrixXd& x,
                     const TargetsView& targets, LossKind loss_kind,
                     bool train_mode, std::uint64_t dropout_seed);

/// The hard-coded 1-layer Siren whose forward pass reproduces the Grid
/// embedding exactly: H = 4S, first-layer weights 1/alpha_s, phase biases
/// pi/2, final linear fixed to the identity, omega0 absorbed as 1.
Model grid_siren(int scales, double r_min_deg, double r_max_deg);

/// Versioned binary model file (magic GEOH1); see docs/formats.md.
struct Checkpoint {
  Model model;
  std::string pe_spec;
  int task_kind = 0;   // matches TaskKind: 0 multiclass, 1 binary, 2 regression
  int task_arity = 1;  // classes or channels
};

void save_checkpoint(const Checkpoint& ckpt, const std::string& path);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace geoharm
