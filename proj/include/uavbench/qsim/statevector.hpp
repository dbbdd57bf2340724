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

// Exact pure-state simulator for the small gate set used by the
// re-uploading classifier: RX, RY, RZ, CNOT and Pauli-Z readout.
//
// Basis ordering is little-endian: qubit q is bit q of the amplitude index,
// so |10000> (qubit 0 set, five qubits) is index 1.

#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "uavbench/core/error.hpp"

namespace uavbench::qsim {

using Complex = std::complex<double>;

inline constexpr int kMaxQubits = 24;

enum class GateKind { RX, RY, RZ, CNOT };

struct Gate {
  GateKind kind = GateKind::RX;
  int target = 0;
  std::optional<int> control;
  double angle = 0.0;

  static Gate rx(int q, double theta) { return {GateKind::RX, q, std::nullopt, theta}; }
  static Gate ry(int q, double theta) { return {GateKind::RY, q, std::nullopt, theta}; }
  static Gate rz(int q, double theta) { return {GateKind::RZ, q, std::nullopt, theta}; }
  static Gate cnot(int control, int target) { return {GateKind::CNOT, target, control, 0.0}; }

  bool is_rotation() const noexcept { return kind != GateKind::CNOT; }

  friend bool operator==(const Gate&, const Gate&) = default;
};

class Statevector {
 public:
  /// |0...0> on `n_qubits` qubits.
  static Statevector zero(int n_qubits) {
    if (n_qubits < 1 || n_qubits > kMaxQubits) {
      throw InvalidArgument("Statevector: qubit count " + std::to_string(n_qubits) +
                            " outside [1, " + std::to_string(kMaxQubits) + "]");
    }
    Statevector s;
    s.n_qubits_ = n_qubits;
    s.amps_.assign(std::size_t{1} << n_qubits, Complex{0.0, 0.0});
    s.amps_[0] = 1.0;
    return s;
  }

  /// Adopts explicit amplitudes; the length must be a power of two.  The
  /// caller is responsible for normalisation.
  static Statevector from_amplitudes(std::vector<Complex> amps) {
    std::size_t dim = amps.size();
    int n = 0;
    while ((std::size_t{1} << n) < dim) ++n;
    if (dim == 0 || (std::size_t{1} << n) != dim || n < 1 || n > kMaxQubits) {
      throw InvalidArgument("Statevector: amplitude count must be 2^n with 1 <= n <= 24");
    }
    Statevector s;
    s.n_qubits_ = n;
    s.amps_ = std::move(amps);
    return s;
  }

  /// Computational basis state; bit q of `index` is qubit q.
  static Statevector basis(int n_qubits, std::size_t index) {
    auto s = zero(n_qubits);
    detail::require(index < s.dimension(), "Statevector::basis: index out of range");
    s.amps_[0] = 0.0;
    s.amps_[index] = 1.0;
    return s;
  }

  int n_qubits() const noexcept { return n_qubits_; }
  std::size_t dimension() const noexcept { return amps_.size(); }
  std::span<const Complex> amplitudes() const noexcept { return amps_; }
  Complex amplitude(std::size_t i) const { return amps_.at(i); }

  double norm_squared() const noexcept {
    double acc = 0.0;
    for (const auto& a : amps_) acc += std::norm(a);
    return acc;
  }

  /// In-place gate application.
  void apply(const Gate& g) {
    check_qubit(g.target, "target");
    if (g.kind == GateKind::CNOT) {
      if (!g.control) throw InvalidArgument("CNOT gate without a control qubit");
      check_qubit(*g.control, "control");
      if (*g.control == g.target) throw InvalidArgument("CNOT control equals target");
      apply_cnot(*g.control, g.target);
      return;
    }
    if (g.control) throw InvalidArgument("rotation gate must not carry a control qubit");
    const double c = std::cos(0.5 * g.angle);
    const double s = std::sin(0.5 * g.angle);
    switch (g.kind) {
      case GateKind::RX:
        apply_1q(g.target, {c, 0.0}, {0.0, -s}, {0.0, -s}, {c, 0.0});
        break;
      case GateKind::RY:
        apply_1q(g.target, {c, 0.0}, {-s, 0.0}, {s, 0.0}, {c, 0.0});
        break;
      case GateKind::RZ:
        apply_diag(g.target, {c, -s}, {c, s});
        break;
      case GateKind::CNOT:
        break;
    }
  }

  void apply(std::span<const Gate> gates) {
    for (const auto& g : gates) apply(g);
  }

  /// CNOT(q, q+1 mod n) for q = 0..n-1, in that order.
  void apply_ring_entangler() {
    if (n_qubits_ < 2) throw InvalidArgument("ring entangler needs at least two qubits");
    for (int q = 0; q < n_qubits_; ++q) apply_cnot(q, (q + 1) % n_qubits_);
  }

  /// <Z_q> computed exactly from the amplitudes.
  double expect_z(int qubit) const {
    check_qubit(qubit, "readout");
    const std::size_t mask = std::size_t{1} << qubit;
    double acc = 0.0;
    for (std::size_t i = 0; i < amps_.size(); ++i) {
      const double p = std::norm(amps_[i]);
      acc += (i & mask) ? -p : p;
    }
    return acc;
  }

  /// <Z_q> for every qubit in one pass.
  std::vector<double> expect_z_all() const {
    std::vector<double> out(static_cast<std::size_t>(n_qubits_), 0.0);
    for (std::size_t i = 0; i < amps_.size(); ++i) {
      const double p = std::norm(amps_[i]);
      for (int q = 0; q < n_qubits_; ++q) out[q] += ((i >> q) & 1U) ? -p : p;
    }
    return out;
  }

 private:
  void check_qubit(int q, const char* role) const {
    if (q < 0 || q >= n_qubits_) {
      throw InvalidArgument(std::string("qubit index out of range (") + role + "): " +
                            std::to_string(q));
    }
  }

  // [[m00, m01], [m10, m11]] acting on qubit q.
  void apply_1q(int q, Complex m00, Complex m01, Complex m10, Complex m11) {
    const std::size_t stride = std::size_t{1} << q;
    const std::size_t dim = amps_.size();
    for (std::size_t base = 0; base < dim; base += 2 * stride) {
      for (std::size_t i = base; i < base + stride; ++i) {
        const Complex a0 = amps_[i];
        const Complex a1 = amps_[i + stride];
        amps_[i] = m00 * a0 + m01 * a1;
        amps_[i + stride] = m10 * a0 + m11 * a1;
      }
    }
  }

  void apply_diag(int q, Complex d0, Complex d1) {
    const std::size_t mask = std::size_t{1} << q;
    for (std::size_t i = 0; i < amps_.size(); ++i) amps_[i] *= (i & mask) ? d1 : d0;
  }

  void apply_cnot(int control, int target) {
    const std::size_t cmask = std::size_t{1} << control;
    const std::size_t tmask = std::size_t{1} << target;
    for (std::size_t i = 0; i < amps_.size(); ++i) {
      if ((i & cmask) && !(i & tmask)) std::swap(amps_[i], amps_[i | tmask]);
    }
  }

  int n_qubits_ = 0;
  std::vector<Complex> amps_;
};

inline Statevector init_zero(int n_qubits) { return Statevector::zero(n_qubits); }

inline Statevector apply_gate(Statevector state, const Gate& gate) {
  state.apply(gate);
  return state;
}

inline Statevector apply_ring_entangler(Statevector state) {
  state.apply_ring_entangler();
  return state;
}

inline double expect_z(const Statevector& state, int qubit) { return state.expect_z(qubit); }

/// The gates that make up one ring entangler on `n` qubits.
inline std::vector<Gate> ring_entangler_gates(int n) {
  if (n < 2) throw InvalidArgument("ring entangler needs at least two qubits");
  std::vector<Gate> gates;
  gates.reserve(static_cast<std::size_t>(n));
  for (int q = 0; q < n; ++q) gates.push_back(Gate::cnot(q, (q + 1) % n));
  return gates;
}

}  // namespace uavbench::qsim
