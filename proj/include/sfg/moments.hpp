#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "sfg/errors.hpp"
#include "sfg/integrator.hpp"

namespace sfg {

/// Raw (normally ordered) stochastic moments of the three modes at one time.
///
/// Storage is a flat array so batches can be summed and differenced without
/// knowing the layout:
///   [0,3)   E[a_j]          [3,6)   E[a_j+]
///   [6,12)  E[a_j a_k]      [12,18) E[a_j+ a_k+]     (j <= k)
///   [18,27) E[a_j+ a_k]     (all j, k)
///   [27]    E[(n1+n2)^2]    [28,34) E[n_j n_k]       (j <= k), n_j = a_j+ a_j
class MomentSet {
 public:
  static constexpr std::size_t kSize = 34;

  MomentSet() { values_.fill(cplx{}); }

  /// Single-trajectory contributions.
  static MomentSet of(const PhaseSpacePoint& x) {
    MomentSet m;
    const std::array<cplx, 3> a = {x.a1, x.a2, x.a3};
    const std::array<cplx, 3> ap = {x.a1p, x.a2p, x.a3p};
    std::array<cplx, 3> n{};
    for (int j = 0; j < 3; ++j) {
      m.values_[j] = a[j];
      m.values_[3 + j] = ap[j];
      n[j] = ap[j] * a[j];
    }
    for (int j = 0; j < 3; ++j)
      for (int k = j; k < 3; ++k) {
        m.values_[6 + pair(j, k)] = a[j] * a[k];
        m.values_[12 + pair(j, k)] = ap[j] * ap[k];
        m.values_[28 + pair(j, k)] = n[j] * n[k];
      }
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) m.values_[18 + 3 * j + k] = ap[j] * a[k];
    const cplx n12 = n[0] + n[1];
    m.values_[27] = n12 * n12;
    return m;
  }

  // Mode indices below are 1-based to match the physics labels.
  cplx a(int j) const { return values_[idx(j)]; }
  cplx ap(int j) const { return values_[3 + idx(j)]; }
  cplx aa(int j, int k) const { return values_[6 + pair(idx(j), idx(k))]; }
  cplx apap(int j, int k) const { return values_[12 + pair(idx(j), idx(k))]; }
  cplx apa(int j, int k) const { return values_[18 + 3 * idx(j) + idx(k)]; }
  /// E[a_j a_k+], read from the stored E[a_k+ a_j].
  cplx aap(int j, int k) const { return apa(k, j); }
  cplx n(int j) const { return apa(j, j); }
  cplx nn(int j, int k) const { return values_[28 + pair(idx(j), idx(k))]; }
  cplx n12_squared() const { return values_[27]; }

  cplx& operator[](std::size_t i) { return values_[i]; }
  const cplx& operator[](std::size_t i) const { return values_[i]; }

  MomentSet& operator+=(const MomentSet& o) {
    for (std::size_t i = 0; i < kSize; ++i) values_[i] += o.values_[i];
    return *this;
  }
  MomentSet& operator-=(const MomentSet& o) {
    for (std::size_t i = 0; i < kSize; ++i) values_[i] -= o.values_[i];
    return *this;
  }
  MomentSet& operator*=(double s) {
    for (auto& v : values_) v *= s;
    return *this;
  }
  friend MomentSet operator+(MomentSet l, const MomentSet& r) { return l += r; }
  friend MomentSet operator-(MomentSet l, const MomentSet& r) { return l -= r; }
  friend MomentSet operator*(double s, MomentSet m) { return m *= s; }

  bool operator==(const MomentSet&) const = default;

 private:
  static int idx(int mode) {
    if (mode < 1 || mode > 3) throw ContractViolation("mode index must be 1, 2 or 3");
    return mode - 1;
  }
  // Index of the unordered pair (j, k) among {00, 01, 02, 11, 12, 22}.
  static constexpr int pair(int j, int k) {
    if (j > k) std::swap(j, k);
    constexpr int offset[3] = {0, 3, 5};
    return offset[j] + (k - j);
  }

  std::array<cplx, kSize> values_;
};

/// Ensemble moments on a common sample grid, with per-batch means for
/// standard errors.
struct MomentTable {
  std::vector<double> times;                       ///< sample times (scaled zeta for travelling wave)
  std::vector<MomentSet> mean;                     ///< ensemble mean at each sample
  std::vector<std::vector<MomentSet>> batch_mean;  ///< [sample][batch]
  std::vector<std::size_t> batch_count;            ///< trajectories kept per batch
  std::size_t n_trajectories = 0;                  ///< requested
  std::size_t n_used = 0;                          ///< kept after divergence screening
  std::size_t n_diverged = 0;
  std::string time_label = "t";

  std::size_t samples() const { return times.size(); }
  std::size_t batches() const { return batch_count.size(); }
};

}  // namespace sfg
