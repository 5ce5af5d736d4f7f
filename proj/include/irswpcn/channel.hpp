#pragma once

#include <cstdint>
#include <vector>

#include "json.hpp"

#include "irswpcn/numerics.hpp"
#include "irswpcn/phase_vector.hpp"

namespace irswpcn {

struct Point3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

double distance(const Point3& a, const Point3& b);

/// x dBm -> 10^((x - 30) / 10) W.
double dbm_to_watt(double dbm);

/// Scenario constants. Defaults reproduce the reference deployment: HAP at the
/// origin, IRS at (10, 0, 3) m, devices in a 1.5 m disc around (10, 0, 0) m.
struct SystemParams {
  int numDevices = 5;
  int numElements = 16;
  double hapPower = dbm_to_watt(40.0);     // W
  double noisePower = dbm_to_watt(-85.0);  // W
  double totalTime = 1.0;                  // s
  std::vector<double> efficiency = std::vector<double>(5, 0.8);
  Point3 hapPos{0.0, 0.0, 0.0};
  Point3 irsPos{10.0, 0.0, 3.0};
  Point3 userCenter{10.0, 0.0, 0.0};
  double userRadius = 1.5;
  double plExpHapIrs = 2.2;
  double plExpIrsUser = 2.2;
  double plExpHapUser = 2.8;
  double refAttenuationDb = 30.0;

  /// Throws ArgumentError describing the first violated invariant.
  void validate() const;

  /// Copy with a different device / element count. New devices inherit the
  /// last configured efficiency (0.8 if none).
  SystemParams with_size(int devices, int elements) const;
};

/// Large-scale gain 10^(-refDb/10) * d^(-exponent); distances below 1 m are
/// treated as 1 m. Throws ArgumentError for d <= 0.
double pathloss_linear(double distance, double exponent, double refAttenuationDb);

/// One channel drop plus the composite quantities every model equation uses.
///
/// Storage conventions: hR[k] is the column h_{r,k} (so the IRS->device row is
/// hR[k]^H), hD[k] is stored so that h_{d,k}^H = conj(hD[k]). Then
///   q_k  = diag(g)^H h_{r,k}        (q_k^H = h_{r,k}^H diag(g))
///   qBar_k = [q_k; hD_k]            (qBar_k^H [v; 1] = h_{d,k}^H + q_k^H v)
///   Q_k  = qBar_k qBar_k^H
class ChannelRealization {
 public:
  ChannelRealization() = default;
  ChannelRealization(ComplexVector g, std::vector<ComplexVector> hR, std::vector<Complex> hD,
                     std::vector<Point3> devicePositions = {}, std::uint64_t seed = 0);

  int num_devices() const noexcept { return static_cast<int>(hD_.size()); }
  int num_elements() const noexcept { return static_cast<int>(g_.size()); }

  const ComplexVector& g() const noexcept { return g_; }
  const ComplexVector& hR(int k) const { return hR_.at(static_cast<std::size_t>(k)); }
  Complex hD(int k) const { return hD_.at(static_cast<std::size_t>(k)); }
  const ComplexVector& q(int k) const { return q_.at(static_cast<std::size_t>(k)); }
  const ComplexVector& qBar(int k) const { return qBar_.at(static_cast<std::size_t>(k)); }
  const ComplexMatrix& Q(int k) const { return Q_.at(static_cast<std::size_t>(k)); }
  const std::vector<Point3>& device_positions() const noexcept { return positions_; }
  std::uint64_t seed() const noexcept { return seed_; }

  /// The same drop with the IRS removed (N = 0).
  ChannelRealization without_irs() const;

 private:
  ComplexVector g_;
  std::vector<ComplexVector> hR_;
  std::vector<Complex> hD_;
  std::vector<ComplexVector> q_;
  std::vector<ComplexVector> qBar_;
  std::vector<ComplexMatrix> Q_;
  std::vector<Point3> positions_;
  std::uint64_t seed_ = 0;
};

/// Draws device positions and Rayleigh-faded channels for (params, seed).
///
/// Draw order is: all device positions, all direct links, then per IRS element
/// n the HAP->IRS coefficient followed by the K IRS->device coefficients. A
/// drop with N elements is therefore a prefix of the same-seed drop with more
/// elements, which pairs Monte-Carlo comparisons across N.
ChannelRealization generate_drop(const SystemParams& params, std::uint64_t seed);

/// |h_{d,k}^H + q_k^H v|^2. Throws ArgumentError on length mismatch.
double composite_gain(const ChannelRealization& real, int k, const PhaseVector& v);

/// [v;1]^H Q_k [v;1], the lifted evaluation of the same quantity.
double lifted_gain(const ChannelRealization& real, int k, const PhaseVector& v);

nlohmann::json to_json(const ChannelRealization& real);
ChannelRealization realization_from_json(const nlohmann::json& doc);

}  // namespace irswpcn
