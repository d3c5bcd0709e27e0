#include "geoharm/network.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <stdexcept>

#include "geoharm/binary_io.hpp"
#include "geoharm/embedding.hpp"
#include "geoharm/errors.hpp"
#include "geoharm/rng.hpp"

namespace geoharm {

namespace {

using RowMajorMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using WeightMap = Eigen::Map<const RowMajorMatrix>;
using BiasMap = Eigen::Map<const Eigen::VectorXd>;
using MutWeightMap = Eigen::Map<RowMajorMatrix>;
using MutBiasMap = Eigen::Map<Eigen::VectorXd>;

WeightMap weight(const Model& m, std::size_t slice) {
  const ParamSlice& s = m.layout[slice];
  return WeightMap(m.params.data() + s.offset, s.rows, s.cols);
}

BiasMap bias(const Model& m, std::size_t slice) {
  const ParamSlice& s = m.layout[slice];
  return BiasMap(m.params.data() + s.offset, s.rows);
}

Eigen::MatrixXd affine(const Eigen::MatrixXd& x, const WeightMap& w, const BiasMap& b) {
  Eigen::MatrixXd z = x * w.transpose();
  z.rowwise() += b.transpose();
  return z;
}

Eigen::MatrixXd relu(const Eigen::MatrixXd& z) { return z.cwiseMax(0.0); }

Eigen::MatrixXd dropout_mask(Rng& rng, Eigen::Index rows, Eigen::Index cols,
                             double rate) {
  Eigen::MatrixXd mask(rows, cols);
  const double scale = 1.0 / (1.0 - rate);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) {
      mask(r, c) = rng.bernoulli(rate) ? 0.0 : scale;
    }
  }
  return mask;
}

void add_slice(std::vector<ParamSlice>& layout, std::size_t& offset,
               const std::string& name, int rows, int cols) {
  layout.push_back(ParamSlice{name, offset, rows, cols});
  offset += static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols);
}

constexpr int kFcNetBlocks = 4;

}  // namespace

void NetworkSpec::validate() const {
  if (in_dim < 1 || out_dim < 1) throw std::invalid_argument("network: dims must be positive");
  if (hidden < 1) throw std::invalid_argument("network: hidden must be positive");
  if (layers < 1) throw std::invalid_argument("network: layers must be >= 1");
  if (dropout_rate < 0.0 || dropout_rate >= 1.0) {
    throw std::invalid_argument("network: dropout_rate must lie in [0, 1)");
  }
  if (!(omega0 > 0.0)) throw std::invalid_argument("network: omega0 must be positive");
}

NetworkSpec parse_network_spec(const std::string& text) {
  const std::size_t colon = text.find(':');
  const std::string name = text.substr(0, colon);
  NetworkSpec spec;
  if (name == "linear") {
    spec.kind = NetworkKind::Linear;
  } else if (name == "fcnet") {
    spec.kind = NetworkKind::FcNet;
    spec.hidden = 256;
    spec.dropout_rate = 0.5;
  } else if (name == "siren") {
    spec.kind = NetworkKind::Siren;
    spec.hidden = 128;
    spec.layers = 2;
    spec.dropout_rate = 0.0;
  } else {
    throw parse_error("unknown network kind '" + name + "'");
  }
  if (colon == std::string::npos) return spec;

  std::map<std::string, std::string> kv;
  std::size_t pos = colon + 1;
  while (pos <= text.size()) {
    std::size_t comma = text.find(',', pos);
    if (comma == std::string::npos) comma = text.size();
    const std::string item = text.substr(pos, comma - pos);
    const std::size_t eq = item.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw parse_error("network spec: expected key=value, got '" + item + "'");
    }
    kv[item.substr(0, eq)] = item.substr(eq + 1);
    pos = comma + 1;
  }

  for (const auto& [key, value] : kv) {
    try {
      if (key == "H" && spec.kind != NetworkKind::Linear) {
        spec.hidden = std::stoi(value);
      } else if (key == "N" && spec.kind == NetworkKind::Siren) {
        spec.layers = std::stoi(value);
      } else if (key == "w0" && spec.kind == NetworkKind::Siren) {
        spec.omega0 = std::stod(value);
      } else if (key == "p" && spec.kind != NetworkKind::Linear) {
        spec.dropout_rate = std::stod(value);
      } else {
        throw parse_error("network '" + name + "': unknown key '" + key + "'");
      }
    } catch (const parse_error&) {
      throw;
    } catch (const std::exception&) {
      throw parse_error("network key '" + key + "': bad value '" + value + "'");
    }
  }
  return spec;
}

std::string to_string(const NetworkSpec& spec) {
  char buf[128];
  switch (spec.kind) {
    case NetworkKind::Linear:
      return "linear";
    case NetworkKind::FcNet:
      std::snprintf(buf, sizeof(buf), "fcnet:H=%d,p=%g", spec.hidden, spec.dropout_rate);
      return buf;
    case NetworkKind::Siren:
      std::snprintf(buf, sizeof(buf), "siren:H=%d,N=%d,w0=%g,p=%g", spec.hidden,
                    spec.layers, spec.omega0, spec.dropout_rate);
      return buf;
  }
  return "?";
}

std::vector<ParamSlice> make_layout(const NetworkSpec& spec) {
  std::vector<ParamSlice> layout;
  std::size_t offset = 0;
  switch (spec.kind) {
    case NetworkKind::Linear:
      add_slice(layout, offset, "w0", spec.out_dim, spec.in_dim);
      add_slice(layout, offset, "b0", spec.out_dim, 1);
      break;
    case NetworkKind::FcNet:
      add_slice(layout, offset, "w_in", spec.hidden, spec.in_dim);
      add_slice(layout, offset, "b_in", spec.hidden, 1);
      for (int k = 0; k < kFcNetBlocks; ++k) {
        const std::string tag = std::to_string(k);
        add_slice(layout, offset, "w" + tag + "a", spec.hidden, spec.hidden);
        add_slice(layout, offset, "b" + tag + "a", spec.hidden, 1);
        add_slice(layout, offset, "w" + tag + "b", spec.hidden, spec.hidden);
        add_slice(layout, offset, "b" + tag + "b", spec.hidden, 1);
      }
      add_slice(layout, offset, "w_out", spec.out_dim, spec.hidden);
      add_slice(layout, offset, "b_out", spec.out_dim, 1);
      break;
    case NetworkKind::Siren:
      add_slice(layout, offset, "w0", spec.hidden, spec.in_dim);
      add_slice(layout, offset, "b0", spec.hidden, 1);
      for (int k = 1; k < spec.layers; ++k) {
        const std::string tag = std::to_string(k);
        add_slice(layout, offset, "w" + tag, spec.hidden, spec.hidden);
        add_slice(layout, offset, "b" + tag, spec.hidden, 1);
      }
      add_slice(layout, offset, "w_out", spec.out_dim, spec.hidden);
      add_slice(layout, offset, "b_out", spec.out_dim, 1);
      break;
  }
  return layout;
}

std::size_t param_count(const NetworkSpec& spec) {
  std::size_t n = 0;
  for (const ParamSlice& s : make_layout(spec)) {
    n += static_cast<std::size_t>(s.rows) * static_cast<std::size_t>(s.cols);
  }
  return n;
}

Model init(const NetworkSpec& spec, std::uint64_t seed) {
  spec.validate();
  Model model;
  model.spec = spec;
  model.layout = make_layout(spec);
  model.params.setZero(static_cast<Eigen::Index>(param_count(spec)));
  Rng rng(mix_seed(seed, 0x1217));

  auto fill_uniform = [&](const ParamSlice& s, double bound) {
    for (int i = 0; i < s.rows * s.cols; ++i) {
      model.params[static_cast<Eigen::Index>(s.offset) + i] = rng.uniform(-bound, bound);
    }
  };

  for (const ParamSlice& s : model.layout) {
    const bool is_bias = s.cols == 1 && s.name[0] == 'b';
    if (spec.kind == NetworkKind::Siren) {
      // First layer U(-1/in, 1/in); every later layer U(+-sqrt(6/fan_in)/w0).
      const bool first = s.name == "w0" || s.name == "b0";
      const int fan_in = first ? spec.in_dim : spec.hidden;
      const double bound = first ? 1.0 / spec.in_dim
                                 : std::sqrt(6.0 / fan_in) / spec.omega0;
      fill_uniform(s, bound);
    } else if (!is_bias) {
      const int fan_out = s.rows, fan_in = s.cols;
      fill_uniform(s, std::sqrt(6.0 / (fan_in + fan_out)));
    }
    // Linear/FcNet biases stay zero.
  }
  return model;
}

namespace {

/// Shared forward pass. When `cache` is given, it records everything the
/// backward pass needs; the value sequence depends on the architecture.
Eigen::MatrixXd run_forward(const Model& model, const Eigen::MatrixXd& x,
                            bool train_mode, std::uint64_t dropout_seed,
                            ForwardCache* cache) {
  const NetworkSpec& spec = model.spec;
  if (x.cols() != spec.in_dim) {
    throw std::invalid_argument("forward: input has " + std::to_string(x.cols()) +
                                " columns, expected " + std::to_string(spec.in_dim));
  }
  const bool use_dropout = train_mode && spec.dropout_rate > 0.0;
  Rng drop_rng(mix_seed(dropout_seed, 0xd50));

  auto apply_dropout = [&](Eigen::MatrixXd& z) {
    if (!use_dropout) return;
    Eigen::MatrixXd mask = dropout_mask(drop_rng, z.rows(), z.cols(), spec.dropout_rate);
    z = z.cwiseProduct(mask);
    if (cache) cache->dropout_masks.push_back(std::move(mask));
  };

  switch (spec.kind) {
    case NetworkKind::Linear: {
      if (cache) cache->values.push_back(x);
      return affine(x, weight(model, 0), bias(model, 1));
    }

    case NetworkKind::FcNet: {
      Eigen::MatrixXd h = relu(affine(x, weight(model, 0), bias(model, 1)));
      if (cache) {
        cache->values.push_back(x);
        cache->values.push_back(h);
      }
      for (int k = 0; k < kFcNetBlocks; ++k) {
        const std::size_t base = 2 + 4 * static_cast<std::size_t>(k);
        Eigen::MatrixXd aa = relu(affine(h, weight(model, base), bias(model, base + 1)));
        Eigen::MatrixXd d = aa;
        apply_dropout(d);
        Eigen::MatrixXd ab = relu(affine(d, weight(model, base + 2), bias(model, base + 3)));
        h += ab;
        if (cache) {
          cache->values.push_back(std::move(aa));
          cache->values.push_back(std::move(d));
          cache->values.push_back(std::move(ab));
          cache->values.push_back(h);
        }
      }
      const std::size_t out_idx = 2 + 4 * static_cast<std::size_t>(kFcNetBlocks);
      return affine(h, weight(model, out_idx), bias(model, out_idx + 1));
    }

    case NetworkKind::Siren: {
      Eigen::MatrixXd a = x;
      if (cache) cache->values.push_back(a);
      for (int k = 0; k < spec.layers; ++k) {
        const std::size_t base = 2 * static_cast<std::size_t>(k);
        Eigen::MatrixXd d = affine(a, weight(model, base), bias(model, base + 1));
        apply_dropout(d);
        const double freq = (k == 0) ? spec.omega0 : 1.0;
        a = (freq * d.array()).sin().matrix();
        if (cache) {
          cache->values.push_back(std::move(d));
          cache->values.push_back(a);
        }
      }
      const std::size_t out_idx = 2 * static_cast<std::size_t>(spec.layers);
      return affine(a, weight(model, out_idx), bias(model, out_idx + 1));
    }
  }
  throw std::invalid_argument("forward: bad network kind");
}

}  // namespace

Eigen::MatrixXd forward_batch(const Model& model, const Eigen::MatrixXd& x,
                              bool train_mode, std::uint64_t dropout_seed,
                              ForwardCache* cache) {
  return run_forward(model, x, train_mode, dropout_seed, cache);
}

Eigen::VectorXd forward(const Model& model, const Eigen::VectorXd& x,
                        bool train_mode, std::uint64_t dropout_seed) {
  const Eigen::MatrixXd y =
      run_forward(model, x.transpose(), train_mode, dropout_seed, nullptr);
  return y.row(0).transpose();
}

double loss_on_batch(const Model& model, const Eigen::MatrixXd& x,
                     const TargetsView& targets, LossKind loss_kind,
                     bool train_mode, std::uint64_t dropout_seed) {
  const Eigen::MatrixXd y = run_forward(model, x, train_mode, dropout_seed, nullptr);
  return loss(loss_kind, y, targets);
}

BackwardResult backward(const Model& model, const Eigen::MatrixXd& x,
                        const TargetsView& targets, LossKind loss_kind,
                        bool train_mode, std::uint64_t dropout_seed) {
  const NetworkSpec& spec = model.spec;
  ForwardCache cache;
  const Eigen::MatrixXd y = run_forward(model, x, train_mode, dropout_seed, &cache);

  BackwardResult result;
  Eigen::MatrixXd dy;
  result.loss = loss_with_grad(loss_kind, y, targets, &dy);
  result.grad.setZero(model.params.size());

  const bool use_dropout = train_mode && spec.dropout_rate > 0.0;

  auto grad_weight = [&](std::size_t slice) {
    const ParamSlice& s = model.layout[slice];
    return MutWeightMap(result.grad.data() + s.offset, s.rows, s.cols);
  };
  auto grad_bias = [&](std::size_t slice) {
    const ParamSlice& s = model.layout[slice];
    return MutBiasMap(result.grad.data() + s.offset, s.rows);
  };
  // Accumulates gradients of an affine layer and returns the gradient w.r.t.
  // its input.
  auto backprop_affine = [&](std::size_t w_slice, const Eigen::MatrixXd& input,
                             const Eigen::MatrixXd& dz) {
    grad_weight(w_slice).noalias() = dz.transpose() * input;
    grad_bias(w_slice + 1) = dz.colwise().sum().transpose();
    return Eigen::MatrixXd(dz * weight(model, w_slice));
  };

  switch (spec.kind) {
    case NetworkKind::Linear: {
      backprop_affine(0, cache.values[0], dy);
      break;
    }

    case NetworkKind::FcNet: {
      const std::size_t out_idx = 2 + 4 * static_cast<std::size_t>(kFcNetBlocks);
      const Eigen::MatrixXd& h_last = cache.values[1 + 4 * static_cast<std::size_t>(kFcNetBlocks)];
      Eigen::MatrixXd dh = backprop_affine(out_idx, h_last, dy);

      for (int k = kFcNetBlocks - 1; k >= 0; --k) {
        const std::size_t base = 2 + 4 * static_cast<std::size_t>(k);
        const std::size_t vbase = 2 + 4 * static_cast<std::size_t>(k);
        const Eigen::MatrixXd& h_in = cache.values[vbase - 1];
        const Eigen::MatrixXd& aa = cache.values[vbase + 0];
        const Eigen::MatrixXd& d = cache.values[vbase + 1];
        const Eigen::MatrixXd& ab = cache.values[vbase + 2];

        Eigen::MatrixXd dzb =
            dh.cwiseProduct((ab.array() > 0.0).cast<double>().matrix());
        Eigen::MatrixXd dd = backprop_affine(base + 2, d, dzb);
        if (use_dropout) {
          dd = dd.cwiseProduct(cache.dropout_masks[static_cast<std::size_t>(k)]);
        }
        Eigen::MatrixXd dza =
            dd.cwiseProduct((aa.array() > 0.0).cast<double>().matrix());
        dh += backprop_affine(base, h_in, dza);  // skip connection adds through
      }

      const Eigen::MatrixXd& h0 = cache.values[1];
      Eigen::MatrixXd dz0 = dh.cwiseProduct((h0.array() > 0.0).cast<double>().matrix());
      backprop_affine(0, cache.values[0], dz0);
      break;
    }

    case NetworkKind::Siren: {
      const std::size_t out_idx = 2 * static_cast<std::size_t>(spec.layers);
      const Eigen::MatrixXd& a_last = cache.values[2 * static_cast<std::size_t>(spec.layers)];
      Eigen::MatrixXd da = backprop_affine(out_idx, a_last, dy);

      for (int k = spec.layers - 1; k >= 0; --k) {
        const Eigen::MatrixXd& d = cache.values[2 * static_cast<std::size_t>(k) + 1];
        const Eigen::MatrixXd& a_prev = cache.values[2 * static_cast<std::size_t>(k)];
        const double freq = (k == 0) ? spec.omega0 : 1.0;
        Eigen::MatrixXd dd =
            da.cwiseProduct((freq * (freq * d.array()).cos()).matrix());
        if (use_dropout) {
          dd = dd.cwiseProduct(cache.dropout_masks[static_cast<std::size_t>(k)]);
        }
        da = backprop_affine(2 * static_cast<std::size_t>(k), a_prev, dd);
      }
      break;
    }
  }

  if (!result.grad.allFinite()) {
    for (const ParamSlice& s : model.layout) {
      const auto seg = result.grad.segment(
          static_cast<Eigen::Index>(s.offset),
          static_cast<Eigen::Index>(s.rows) * static_cast<Eigen::Index>(s.cols));
      if (!seg.allFinite()) {
        throw numeric_error("backward: non-finite gradient in layer " + s.name);
      }
    }
  }
  return result;
}

Model grid_siren(int scales, double r_min_deg, double r_max_deg) {
  if (scales < 1) throw std::invalid_argument("grid_siren: S must be >= 1");
  EmbeddingSpec grid;
  grid.kind = EmbeddingKind::Grid;
  grid.scales = scales;
  grid.r_min_deg = r_min_deg;
  grid.r_max_deg = r_max_deg;
  grid.validate();

  NetworkSpec spec;
  spec.kind = NetworkKind::Siren;
  spec.in_dim = 2;  // takes the direct embedding [lon, lat]
  spec.hidden = 4 * scales;
  spec.out_dim = 4 * scales;
  spec.layers = 1;
  spec.dropout_rate = 0.0;
  spec.omega0 = 1.0;

  Model model;
  model.spec = spec;
  model.layout = make_layout(spec);
  model.params.setZero(static_cast<Eigen::Index>(param_count(spec)));

  const ParamSlice& w0 = model.layout[0];
  const ParamSlice& b0 = model.layout[1];
  const ParamSlice& w_out = model.layout[2];
  MutWeightMap w(model.params.data() + w0.offset, w0.rows, w0.cols);
  MutBiasMap b(model.params.data() + b0.offset, b0.rows);
  MutWeightMap wo(model.params.data() + w_out.offset, w_out.rows, w_out.cols);

  constexpr double kHalfPi = kPi / 2.0;
  for (int s = 0; s < scales; ++s) {
    // Same reciprocal the Grid embedding uses, so the sine arguments match
    // bit for bit.
    const double inv = 1.0 / (scale_factor(s, grid) * kRadPerDeg);
    w(4 * s + 0, 0) = inv;  // sin(lon/alpha + pi/2) = cos(lon/alpha)
    b(4 * s + 0) = kHalfPi;
    w(4 * s + 1, 0) = inv;  // sin(lon/alpha)
    w(4 * s + 2, 1) = inv;  // sin(lat/alpha + pi/2)
    b(4 * s + 2) = kHalfPi;
    w(4 * s + 3, 1) = inv;  // sin(lat/alpha)
  }
  wo.setIdentity();
  return model;
}

void save_checkpoint(const Checkpoint& ckpt, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write checkpoint: " + path);
  const NetworkSpec& spec = ckpt.model.spec;
  out.write("GEOH1", 5);
  io::write_le<std::uint32_t>(out, 1);
  io::write_le<std::uint8_t>(out, static_cast<std::uint8_t>(spec.kind));
  io::write_le<std::uint32_t>(out, static_cast<std::uint32_t>(spec.in_dim));
  io::write_le<std::uint32_t>(out, static_cast<std::uint32_t>(spec.out_dim));
  io::write_le<std::uint32_t>(out, static_cast<std::uint32_t>(spec.hidden));
  io::write_le<std::uint32_t>(out, static_cast<std::uint32_t>(spec.layers));
  io::write_f64(out, spec.dropout_rate);
  io::write_f64(out, spec.omega0);
  io::write_le<std::uint8_t>(out, static_cast<std::uint8_t>(ckpt.task_kind));
  io::write_le<std::uint32_t>(out, static_cast<std::uint32_t>(ckpt.task_arity));
  io::write_string(out, ckpt.pe_spec);
  io::write_le<std::uint64_t>(out, static_cast<std::uint64_t>(ckpt.model.params.size()));
  for (Eigen::Index i = 0; i < ckpt.model.params.size(); ++i) {
    io::write_f64(out, ckpt.model.params[i]);
  }
  if (!out) throw std::runtime_error("checkpoint write failed: " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open checkpoint: " + path);
  char magic[5];
  io::read_bytes(in, magic, 5);
  if (std::string(magic, 5) != "GEOH1") throw parse_error("not a GEOH1 checkpoint: " + path);
  const auto version = io::read_le<std::uint32_t>(in);
  if (version != 1) throw parse_error("unsupported checkpoint version");

  Checkpoint ckpt;
  NetworkSpec spec;
  spec.kind = static_cast<NetworkKind>(io::read_le<std::uint8_t>(in));
  spec.in_dim = static_cast<int>(io::read_le<std::uint32_t>(in));
  spec.out_dim = static_cast<int>(io::read_le<std::uint32_t>(in));
  spec.hidden = static_cast<int>(io::read_le<std::uint32_t>(in));
  spec.layers = static_cast<int>(io::read_le<std::uint32_t>(in));
  spec.dropout_rate = io::read_f64(in);
  spec.omega0 = io::read_f64(in);
  ckpt.task_kind = static_cast<int>(io::read_le<std::uint8_t>(in));
  ckpt.task_arity = static_cast<int>(io::read_le<std::uint32_t>(in));
  ckpt.pe_spec = io::read_string(in);
  spec.validate();

  const auto n = io::read_le<std::uint64_t>(in);
  if (n != param_count(spec)) throw parse_error("checkpoint parameter count mismatch");
  ckpt.model.spec = spec;
  ckpt.model.layout = make_layout(spec);
  ckpt.model.params.resize(static_cast<Eigen::Index>(n));
  for (std::uint64_t i = 0; i < n; ++i) {
    ckpt.model.params[static_cast<Eigen::Index>(i)] = io::read_f64(in);
  }
  return ckpt;
}

}  // namespace geoharm
