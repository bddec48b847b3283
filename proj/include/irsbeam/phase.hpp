#pragma once

#include "irsbeam/rng.hpp"
#include "irsbeam/types.hpp"

namespace irsbeam {

// IRS phase-shift configuration and its lifted forms. The lifted vector
// follows v = [e^{j theta_1}, ..., e^{j theta_M}, x]^H with the reference
// entry fixed to x = 1, so v_m = e^{-j theta_m}.
struct PhaseConfig {
  VecR theta;

  int m() const { return static_cast<int>(theta.size()); }

  VecC lifted_vector() const {
    VecC v(theta.size() + 1);
    for (int i = 0; i < theta.size(); ++i) v(i) = std::polar(1.0, -theta(i));
    v(theta.size()) = 1.0;
    return v;
  }

  MatC lifted_matrix() const {
    VecC v = lifted_vector();
    return v * v.adjoint();
  }

  static PhaseConfig random(int m, RngStream& rng) { return PhaseConfig{rng.phases(m)}; }
};

}  // namespace irsbeam
