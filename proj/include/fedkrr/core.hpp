#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace fedkrr {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

// Thrown for runtime numerical failures (divergence, factorization breakdown).
// `module` names the subsystem so the CLI can report it and exit with status 2.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(std::string module, const std::string& what)
      : std::runtime_error(module + ": " + what), module_(std::move(module)) {}
  const std::string& module() const { return module_; }

 private:
  std::string module_;
};

inline void require(bool cond, const std::string& what) {
  if (!cond) throw std::invalid_argument(what);
}

}  // namespace fedkrr
