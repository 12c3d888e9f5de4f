#pragma once

#include <set>
#include <string>

#include "json.hpp"

#include "viscowave/kernel.hpp"

// JSON form of a kernel spec:
//   {"kind":"standard","beta":0.7,"eps":1.0}
//   {"kind":"prime","alpha":2.0,"beta":0.7}
//   {"kind":"exp","tau0":1.0}
//   {"kind":"measure","nodes":[...],"weights":[...]}
// Unknown fields are rejected so config typos cannot pass silently.

namespace viscowave {

inline Kernel kernel_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
    throw std::invalid_argument("kernel spec: expected object with string field 'kind'");
  const std::string kind = j["kind"].get<std::string>();

  auto check_fields = [&](std::set<std::string> allowed) {
    allowed.insert("kind");
    for (const auto& item : j.items())
      if (!allowed.count(item.key()))
        throw std::invalid_argument("kernel spec: unknown field '" + item.key() + "'");
    for (const auto& name : allowed)
      if (!j.contains(name))
        throw std::invalid_argument("kernel spec: missing field '" + name + "'");
  };

  if (kind == "standard") {
    check_fields({"beta", "eps"});
    return Kernel::standard(j["beta"].get<double>(), j["eps"].get<double>());
  }
  if (kind == "prime") {
    check_fields({"alpha", "beta"});
    return Kernel::prime(j["alpha"].get<double>(), j["beta"].get<double>());
  }
  if (kind == "exp") {
    check_fields({"tau0"});
    return Kernel::exponential(j["tau0"].get<double>());
  }
  if (kind == "measure") {
    check_fields({"nodes", "weights"});
    const auto nodes = j["nodes"].get<std::vector<double>>();
    const auto weights = j["weights"].get<std::vector<double>>();
    Eigen::VectorXd n = Eigen::Map<const Eigen::VectorXd>(nodes.data(), nodes.size());
    Eigen::VectorXd w = Eigen::Map<const Eigen::VectorXd>(weights.data(), weights.size());
    return Kernel::measure(std::move(n), std::move(w));
  }
  throw std::invalid_argument("kernel spec: unknown kind '" + kind + "'");
}

inline nlohmann::json kernel_to_json(const Kernel& k) {
  nlohmann::json j;
  std::visit(
      [&](const auto& f) {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, StandardKernel>) {
          j = {{"kind", "standard"}, {"beta", f.beta}, {"eps", f.eps}};
        } else if constexpr (std::is_same_v<T, PrimeKernel>) {
          j = {{"kind", "prime"}, {"alpha", f.alpha}, {"beta", f.beta}};
        } else if constexpr (std::is_same_v<T, ExponentialKernel>) {
          j = {{"kind", "exp"}, {"tau0", f.tau0}};
        } else {
          j = {{"kind", "measure"},
               {"nodes", std::vector<double>(f.nodes.data(), f.nodes.data() + f.nodes.size())},
               {"weights",
                std::vector<double>(f.weights.data(), f.weights.data() + f.weights.size())}};
        }
      },
      k.form());
  return j;
}

}  // namespace viscowave
