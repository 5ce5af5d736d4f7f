#include "irswpcn/channel.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "irswpcn/errors.hpp"

namespace irswpcn {

double distance(const Point3& a, const Point3& b) {
  return std::sqrt((a.x - b.x) * (a.x - b.x) + (a.y - b.y) * (a.y - b.y) +
                   (a.z - b.z) * (a.z - b.z));
}

double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

void SystemParams::validate() const {
  if (numDevices < 1) throw ArgumentError("SystemParams: numDevices must be >= 1");
  if (numElements < 0) throw ArgumentError("SystemParams: numElements must be >= 0");
  if (!(hapPower > 0.0)) throw ArgumentError("SystemParams: hapPower must be > 0");
  if (!(noisePower > 0.0)) throw ArgumentError("SystemParams: noisePower must be > 0");
  if (!(totalTime > 0.0)) throw ArgumentError("SystemParams: totalTime must be > 0");
  if (static_cast<int>(efficiency.size()) != numDevices) {
    throw ArgumentError("SystemParams: efficiency has " + std::to_string(efficiency.size()) +
                        " entries for " + std::to_string(numDevices) + " devices");
  }
  for (const double eta : efficiency) {
    if (!(eta > 0.0 && eta <= 1.0)) throw ArgumentError("SystemParams: efficiency must lie in (0, 1]");
  }
  if (!(userRadius >= 0.0)) throw ArgumentError("SystemParams: userRadius must be >= 0");
}

SystemParams SystemParams::with_size(int devices, int elements) const {
  SystemParams out = *this;
  out.numDevices = devices;
  out.numElements = elements;
  const double fill = efficiency.empty() ? 0.8 : efficiency.back();
  out.efficiency.resize(static_cast<std::size_t>(std::max(devices, 0)), fill);
  return out;
}

double pathloss_linear(double distance, double exponent, double refAttenuationDb) {
  if (!(distance > 0.0)) throw ArgumentError("pathloss_linear: distance must be positive");
  const double d = std::max(distance, 1.0);
  return std::pow(10.0, -refAttenuationDb / 10.0) * std::pow(d, -exponent);
}

ChannelRealization::ChannelRealization(ComplexVector g, std::vector<ComplexVector> hR,
                                       std::vector<Complex> hD, std::vector<Point3> devicePositions,
                                       std::uint64_t seed)
    : g_(std::move(g)), hR_(std::move(hR)), hD_(std::move(hD)), positions_(std::move(devicePositions)), seed_(seed) {
  if (hR_.size() != hD_.size()) {
    throw ArgumentError("ChannelRealization: hR and hD must have one entry per device");
  }
  const auto n = g_.size();
  const auto d = n + 1;
  q_.reserve(hD_.size());
  qBar_.reserve(hD_.size());
  Q_.reserve(hD_.size());
  for (std::size_t k = 0; k < hD_.size(); ++k) {
    if (hR_[k].size() != n) {
      throw ArgumentError("ChannelRealization: hR[" + std::to_string(k) + "] has wrong length");
    }
    ComplexVector qk = hR_[k].cwiseProduct(g_.conjugate());
    ComplexVector qbar(d);
    qbar.head(n) = qk;
    qbar(n) = hD_[k];
    q_.push_back(std::move(qk));
    Q_.push_back(qbar * qbar.adjoint());
    qBar_.push_back(std::move(qbar));
  }
}

ChannelRealization ChannelRealization::without_irs() const {
  return ChannelRealization(ComplexVector(0), std::vector<ComplexVector>(hD_.size(), ComplexVector(0)), hD_,
                            positions_, seed_);
}

ChannelRealization generate_drop(const SystemParams& params, std::uint64_t seed) {
  params.validate();
  Rng rng(seed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);

  const int devices = params.numDevices;
  const int elements = params.numElements;

  std::vector<Point3> positions;
  positions.reserve(static_cast<std::size_t>(devices));
  for (int k = 0; k < devices; ++k) {
    const double r = params.userRadius * std::sqrt(uniform(rng));
    const double phi = 2.0 * std::numbers::pi * uniform(rng);
    positions.push_back({params.userCenter.x + r * std::cos(phi), params.userCenter.y + r * std::sin(phi), 0.0});
  }

  std::vector<Complex> hD;
  hD.reserve(static_cast<std::size_t>(devices));
  for (int k = 0; k < devices; ++k) {
    const double pl = pathloss_linear(distance(params.hapPos, positions[static_cast<std::size_t>(k)]),
                                      params.plExpHapUser, params.refAttenuationDb);
    hD.push_back(std::sqrt(pl) * numerics::standard_complex_normal(rng));
  }

  const double plHapIrs = pathloss_linear(distance(params.hapPos, params.irsPos), params.plExpHapIrs,
                                          params.refAttenuationDb);
  std::vector<double> plIrsUser;
  for (const auto& pos : positions) {
    plIrsUser.push_back(pathloss_linear(distance(params.irsPos, pos), params.plExpIrsUser, params.refAttenuationDb));
  }

  ComplexVector g(elements);
  std::vector<ComplexVector> hR(static_cast<std::size_t>(devices), ComplexVector(elements));
  for (int n = 0; n < elements; ++n) {
    g(n) = std::sqrt(plHapIrs) * numerics::standard_complex_normal(rng);
    for (int k = 0; k < devices; ++k) {
      hR[static_cast<std::size_t>(k)](n) =
          std::sqrt(plIrsUser[static_cast<std::size_t>(k)]) * numerics::standard_complex_normal(rng);
    }
  }

  return ChannelRealization(std::move(g), std::move(hR), std::move(hD), std::move(positions), seed);
}

double composite_gain(const ChannelRealization& real, int k, const PhaseVector& v) {
  if (v.size() != real.num_elements()) {
    throw ArgumentError("composite_gain: phase vector has " + std::to_string(v.size()) + " entries, expected " +
                        std::to_string(real.num_elements()));
  }
  // Eigen's dot() conjugates its left operand: q.dot(v) = q^H v.
  const Complex s = std::conj(real.hD(k)) + (v.size() > 0 ? real.q(k).dot(v.coefficients()) : Complex{});
  return std::norm(s);
}

double lifted_gain(const ChannelRealization& real, int k, const PhaseVector& v) {
  if (v.size() != real.num_elements()) throw ArgumentError("lifted_gain: length mismatch");
  const ComplexVector vbar = v.lifted();
  return (vbar.adjoint() * real.Q(k) * vbar)(0, 0).real();
}

namespace {

nlohmann::json complex_array(const ComplexVector& v) {
  auto out = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back({v(i).real(), v(i).imag()});
  return out;
}

ComplexVector parse_complex_array(const nlohmann::json& arr) {
  ComplexVector out(static_cast<Eigen::Index>(arr.size()));
  for (std::size_t i = 0; i < arr.size(); ++i) {
    out(static_cast<Eigen::Index>(i)) = Complex(arr[i].at(0).get<double>(), arr[i].at(1).get<double>());
  }
  return out;
}

}  // namespace

nlohmann::json to_json(const ChannelRealization& real) {
  nlohmann::json doc;
  doc["seed"] = real.seed();
  doc["g"] = complex_array(real.g());
  doc["hR"] = nlohmann::json::array();
  doc["hD"] = nlohmann::json::array();
  doc["devicePositions"] = nlohmann::json::array();
  for (int k = 0; k < real.num_devices(); ++k) {
    doc["hR"].push_back(complex_array(real.hR(k)));
    doc["hD"].push_back({real.hD(k).real(), real.hD(k).imag()});
  }
  for (const auto& p : real.device_positions()) doc["devicePositions"].push_back({p.x, p.y, p.z});
  return doc;
}

ChannelRealization realization_from_json(const nlohmann::json& doc) {
  try {
    ComplexVector g = parse_complex_array(doc.at("g"));
    std::vector<ComplexVector> hR;
    for (const auto& col : doc.at("hR")) hR.push_back(parse_complex_array(col));
    std::vector<Complex> hD;
    for (const auto& c : doc.at("hD")) hD.emplace_back(c.at(0).get<double>(), c.at(1).get<double>());
    std::vector<Point3> positions;
    if (doc.contains("devicePositions")) {
      for (const auto& p : doc.at("devicePositions")) {
        positions.push_back({p.at(0).get<double>(), p.at(1).get<double>(), p.at(2).get<double>()});
      }
    }
    return ChannelRealization(std::move(g), std::move(hR), std::move(hD), std::move(positions),
                              doc.value("seed", std::uint64_t{0}));
  } catch (const nlohmann::json::exception& e) {
    throw ArgumentError(std::string("realization_from_json: ") + e.what());
  }
}

}  // namespace irswpcn
