// Copyright 2026 The uavbench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Data re-uploading classifier.  Each layer re-encodes the input: qubit q
// receives RX, RY, RZ with angles theta[l,q,r] + x[q], and every layer is
// closed by a ring of CNOTs.  The decision score is the probability of
// measuring qubit 0 in |1>, i.e. (1 - <Z_0>) / 2.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <numbers>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "uavbench/core/error.hpp"
#include "uavbench/core/matrix.hpp"
#include "uavbench/core/rng.hpp"
#include "uavbench/core/text.hpp"
#include "uavbench/dru/optimizer.hpp"
#include "uavbench/qsim/statevector.hpp"

namespace uavbench::dru {

enum class Entanglement { ring, none };

struct DruSpec {
  int n_qubits = 5;
  int n_layers = 2;
  Entanglement entanglement = Entanglement::ring;
  std::uint64_t seed = 0;

  int n_params() const noexcept { return 3 * n_qubits * n_layers; }

  void validate() const {
    if (n_qubits < 1 || n_qubits > qsim::kMaxQubits) throw InvalidArgument("DruSpec: bad qubit count");
    if (n_layers < 1) throw InvalidArgument("DruSpec: need at least one layer");
    if (entanglement == Entanglement::ring && n_qubits < 2) {
      throw InvalidArgument("DruSpec: ring entanglement needs at least two qubits");
    }
  }

  friend bool operator==(const DruSpec&, const DruSpec&) = default;
};

enum class SubsetTag { A, B };

struct TrainBudget {
  int max_per_class = 400;
  int max_optimizer_evals = 250;
  SubsetTag subset_tag = SubsetTag::A;
  double rho_begin = 0.5;
};

struct DruModel {
  DruSpec spec;
  std::vector<double> theta;
  double threshold = 0.5;
  bool trained = false;
  /// Rows of the fit input that the optimizer actually saw.
  IndexList train_rows;
  /// Best training loss after each objective evaluation.
  std::vector<double> loss_history;

  friend bool operator==(const DruModel& a, const DruModel& b) {
    return a.spec == b.spec && a.theta == b.theta && a.threshold == b.threshold && a.trained == b.trained;
  }
};

inline constexpr double kInitHalfWidth = std::numbers::pi / 8.0;

namespace detail {

inline void check_input(const DruSpec& spec, std::span<const double> x) {
  if (x.size() != static_cast<std::size_t>(spec.n_qubits)) {
    throw InvalidArgument("DRU input has " + std::to_string(x.size()) + " features, circuit has " +
                          std::to_string(spec.n_qubits) + " qubits");
  }
  constexpr double lim = std::numbers::pi + 1e-9;
  for (double v : x) {
    if (!(v >= -lim && v <= lim)) throw InvalidArgument("DRU input outside [-pi, pi]");
  }
}

inline void check_theta(const DruSpec& spec, std::span<const double> theta) {
  if (theta.size() != static_cast<std::size_t>(spec.n_params())) {
    throw InvalidArgument("DRU parameter vector has " + std::to_string(theta.size()) + " entries, expected " +
                          std::to_string(spec.n_params()));
  }
}

inline std::size_t param_index(const DruSpec& spec, int layer, int qubit, int axis) {
  return static_cast<std::size_t>((layer * spec.n_qubits + qubit) * 3 + axis);
}

}  // namespace detail

inline std::vector<qsim::Gate> build_circuit(const DruSpec& spec, std::span<const double> theta,
                                             std::span<const double> x) {
  spec.validate();
  detail::check_theta(spec, theta);
  detail::check_input(spec, x);
  std::vector<qsim::Gate> gates;
  const bool ring = spec.entanglement == Entanglement::ring;
  gates.reserve(static_cast<std::size_t>(spec.n_layers * spec.n_qubits * (ring ? 4 : 3)));
  for (int l = 0; l < spec.n_layers; ++l) {
    for (int q = 0; q < spec.n_qubits; ++q) {
      const double xq = x[static_cast<std::size_t>(q)];
      gates.push_back(qsim::Gate::rx(q, theta[detail::param_index(spec, l, q, 0)] + xq));
      gates.push_back(qsim::Gate::ry(q, theta[detail::param_index(spec, l, q, 1)] + xq));
      gates.push_back(qsim::Gate::rz(q, theta[detail::param_index(spec, l, q, 2)] + xq));
    }
    if (ring) {
      for (const auto& g : qsim::ring_entangler_gates(spec.n_qubits)) gates.push_back(g);
    }
  }
  return gates;
}

/// Final state of the circuit started from |0...0>.
inline qsim::Statevector simulate(const DruSpec& spec, std::span<const double> theta, std::span<const double> x) {
  auto state = qsim::Statevector::zero(spec.n_qubits);
  state.apply(build_circuit(spec, theta, x));
  return state;
}

inline double score(const DruModel& model, std::span<const double> x) {
  const auto state = simulate(model.spec, model.theta, x);
  return std::clamp(0.5 * (1.0 - state.expect_z(0)), 0.0, 1.0);
}

inline std::vector<double> extract_features(const DruModel& model, std::span<const double> x) {
  const auto state = simulate(model.spec, model.theta, x);
  auto z = state.expect_z_all();
  for (auto& v : z) v = std::clamp(0.5 * (1.0 - v), 0.0, 1.0);
  return z;
}

inline Scores score_rows(const DruModel& model, const Matrix& X) {
  Scores out(X.rows());
  for (std::size_t i = 0; i < X.rows(); ++i) out[i] = score(model, X.row(i));
  return out;
}

inline Matrix extract_rows(const DruModel& model, const Matrix& X) {
  Matrix out(X.rows(), static_cast<std::size_t>(model.spec.n_qubits));
  for (std::size_t i = 0; i < X.rows(); ++i) {
    const auto f = extract_features(model, X.row(i));
    std::copy(f.begin(), f.end(), out.row(i).begin());
  }
  return out;
}

inline Labels predict(const DruModel& model, const Matrix& X) {
  Labels out(X.rows());
  for (std::size_t i = 0; i < X.rows(); ++i) out[i] = score(model, X.row(i)) >= model.threshold ? 1 : 0;
  return out;
}

/// Parameters drawn from Uniform(-pi/8, pi/8), seeded by spec.seed.
inline std::vector<double> initial_theta(const DruSpec& spec) {
  Rng rng(derive_seed(spec.seed, "dru-init"));
  std::vector<double> theta(static_cast<std::size_t>(spec.n_params()));
  for (auto& t : theta) t = rng.uniform(-kInitHalfWidth, kInitHalfWidth);
  return theta;
}

/// A model with seeded random parameters and no optimisation.
inline DruModel untrained_model(const DruSpec& spec) {
  spec.validate();
  DruModel m;
  m.spec = spec;
  m.theta = initial_theta(spec);
  return m;
}

/// Class-balanced training subset: min(max_per_class, smaller class size)
/// rows from each class, chosen by a seeded shuffle.  Row order in the
/// result is ascending.
inline IndexList balanced_subset(std::span<const int> y, int max_per_class, std::uint64_t seed) {
  if (max_per_class < 1) throw InvalidArgument("max_per_class must be at least 1");
  IndexList cls[2];
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (y[i] != 0 && y[i] != 1) throw InvalidArgument("labels must be binary");
    cls[y[i]].push_back(i);
  }
  const std::size_t take = std::min<std::size_t>(static_cast<std::size_t>(max_per_class),
                                                  std::min(cls[0].size(), cls[1].size()));
  Rng rng(derive_seed(seed, "dru-subset"));
  IndexList out;
  for (auto& c : cls) {
    rng.shuffle(std::span<std::size_t>(c));
    out.insert(out.end(), c.begin(), c.begin() + static_cast<std::ptrdiff_t>(take));
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline double mse_loss(const DruSpec& spec, std::span<const double> theta, const Matrix& X, std::span<const int> y) {
  double acc = 0.0;
  DruModel m;
  m.spec = spec;
  m.theta.assign(theta.begin(), theta.end());
  for (std::size_t i = 0; i < X.rows(); ++i) {
    const double d = score(m, X.row(i)) - static_cast<double>(y[i]);
    acc += d * d;
  }
  return acc / static_cast<double>(X.rows());
}

/// Fits theta by derivative-free minimisation of the mean squared error
/// between score and label.  Deterministic in (spec.seed, X, y, budget).
inline DruModel fit(const DruSpec& spec, const Matrix& X, std::span<const int> y, const TrainBudget& budget = {}) {
  spec.validate();
  if (X.rows() == 0) throw InvalidArgument("DRU fit: empty training set");
  if (X.rows() != y.size()) throw InvalidArgument("DRU fit: X and y lengths differ");
  if (X.cols() != static_cast<std::size_t>(spec.n_qubits)) throw InvalidArgument("DRU fit: feature count != qubits");
  const bool has0 = std::find(y.begin(), y.end(), 0) != y.end();
  const bool has1 = std::find(y.begin(), y.end(), 1) != y.end();
  if (!has0 || !has1) throw InvalidArgument("DRU fit: training labels hold a single class");
  for (std::size_t i = 0; i < X.rows(); ++i) detail::check_input(spec, X.row(i));

  DruModel model = untrained_model(spec);
  model.train_rows = balanced_subset(y, budget.max_per_class, spec.seed);
  const Matrix Xs = X.select_rows(model.train_rows);
  const Labels ys = select(y, std::span<const std::size_t>(model.train_rows));

  const Objective objective = [&](std::span<const double> theta) { return mse_loss(spec, theta, Xs, ys); };
  OptimizeOptions opt;
  opt.max_evals = budget.max_optimizer_evals;
  opt.rho_begin = budget.rho_begin;
  auto res = minimize(objective, model.theta, opt);
  model.theta = std::move(res.x);
  model.loss_history = std::move(res.best_history);
  model.trained = true;
  return model;
}

/// Picks the threshold in (0, 1) that maximises balanced accuracy on a
/// validation fold; candidates are midpoints between sorted scores.
inline double tune_threshold(const DruModel& model, const Matrix& Xval, std::span<const int> yval) {
  auto s = score_rows(model, Xval);
  std::size_t pos = 0;
  for (int v : yval) pos += v == 1;
  const std::size_t neg = yval.size() - pos;
  if (pos == 0 || neg == 0) return model.threshold;
  IndexList order(s.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return s[a] < s[b]; });
  // Threshold below everything: all predicted positive.
  double best_t = model.threshold;
  double best = -1.0;
  std::size_t tn = 0, fn = 0;
  for (std::size_t k = 0; k <= order.size(); ++k) {
    if (k == order.size() || k == 0 || s[order[k]] != s[order[k - 1]]) {
      const double t = k == 0 ? 0.5 * s[order[0]] : (k == order.size() ? 0.5 * (s[order[k - 1]] + 1.0)
                                                                       : 0.5 * (s[order[k - 1]] + s[order[k]]));
      const double tpr = static_cast<double>(pos - fn) / static_cast<double>(pos);
      const double tnr = static_cast<double>(tn) / static_cast<double>(neg);
      const double bal = 0.5 * (tpr + tnr);
      if (t > 0.0 && t < 1.0 && bal > best) {
        best = bal;
        best_t = t;
      }
    }
    if (k < order.size()) (yval[order[k]] == 1 ? fn : tn) += 1;
  }
  return best_t;
}

// Plain-text model record.  Values use shortest round-trip formatting, so
// read(write(m)) == m exactly.

inline void write(std::ostream& os, const DruModel& m) {
  os << "uavbench-dru 1\n";
  os << "n_qubits " << m.spec.n_qubits << "\n";
  os << "n_layers " << m.spec.n_layers << "\n";
  os << "entanglement " << (m.spec.entanglement == Entanglement::ring ? "ring" : "none") << "\n";
  os << "seed " << m.spec.seed << "\n";
  os << "threshold " << text::format_double(m.threshold) << "\n";
  os << "trained " << (m.trained ? 1 : 0) << "\n";
  os << "theta " << m.theta.size() << "\n";
  for (double t : m.theta) os << text::format_double(t) << "\n";
}

inline DruModel read(std::istream& is) {
  auto expect_key = [&](const std::string& key) {
    std::string line;
    if (!std::getline(is, line)) throw DataError("DRU record truncated before '" + key + "'");
    const auto sp = line.find(' ');
    if (sp == std::string::npos || line.substr(0, sp) != key) {
      throw DataError("DRU record: expected '" + key + "', got '" + line + "'");
    }
    return line.substr(sp + 1);
  };
  if (expect_key("uavbench-dru") != "1") throw DataError("DRU record: unsupported version");
  DruModel m;
  m.spec.n_qubits = static_cast<int>(text::parse_int(expect_key("n_qubits")));
  m.spec.n_layers = static_cast<int>(text::parse_int(expect_key("n_layers")));
  const auto ent = expect_key("entanglement");
  if (ent == "ring") m.spec.entanglement = Entanglement::ring;
  else if (ent == "none") m.spec.entanglement = Entanglement::none;
  else throw DataError("DRU record: unknown entanglement '" + ent + "'");
  m.spec.seed = static_cast<std::uint64_t>(std::stoull(expect_key("seed")));
  m.threshold = text::parse_double(expect_key("threshold"));
  m.trained = text::parse_int(expect_key("trained")) != 0;
  const auto count = text::parse_int(expect_key("theta"));
  m.spec.validate();
  if (count != m.spec.n_params()) throw DataError("DRU record: theta count does not match spec");
  m.theta.resize(static_cast<std::size_t>(count));
  for (auto& t : m.theta) {
    std::string line;
    if (!std::getline(is, line)) throw DataError("DRU record truncated in theta");
    t = text::parse_double(line);
  }
  return m;
}

inline std::string to_string(const DruModel& m) {
  std::ostringstream os;
  write(os, m);
  return os.str();
}

inline DruModel from_string(const std::string& s) {
  std::istringstream is(s);
  return read(is);
}

}  // namespace uavbench::dru
