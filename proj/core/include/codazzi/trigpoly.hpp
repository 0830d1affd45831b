#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "codazzi/torus.hpp"

namespace codazzi {

// Real trigonometric polynomial in the lattice coordinates t in [0,1)^n:
//   sum_k  amp_k * { cos | sin }( 2 pi <freq_k, t> ).
// Constants are cos terms with zero frequency.
struct TrigPoly {
  struct Term {
    double amp = 0.0;
    bool is_sin = false;
    Eigen::VectorXi freq;
  };
  int dim = 0;
  std::vector<Term> terms;

  double eval(const Eigen::VectorXd& t) const;
  ScalarField sample(const TorusSpec& spec) const;
  // Largest |frequency| appearing on any axis (bandwidth in grid cycles).
  int max_frequency() const;
  bool empty() const { return terms.empty(); }
};

TrigPoly constant_poly(int dim, double value);

// Parses expressions like "1 + 0.2*sin(1)" (dim 1) or
// "0.5 - 0.1*cos(1,2) + 0.05*sin(0,1)" (dim 2). Frequencies are integers per
// lattice axis. Throws config_error on malformed input.
TrigPoly parse_trig_poly(const std::string& text, int dim);

}  // namespace codazzi
