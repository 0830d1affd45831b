#include "codazzi/trigpoly.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <numbers>

#include "codazzi/errors.hpp"

namespace codazzi {

double TrigPoly::eval(const Eigen::VectorXd& t) const {
  double acc = 0.0;
  for (const auto& term : terms) {
    const double phase = 2.0 * std::numbers::pi * term.freq.cast<double>().dot(t);
    acc += term.amp * (term.is_sin ? std::sin(phase) : std::cos(phase));
  }
  return acc;
}

ScalarField TrigPoly::sample(const TorusSpec& spec) const {
  ScalarField out(spec.node_count());
  for (int x = 0; x < spec.node_count(); ++x) out[x] = eval(spec.lattice_coord(x));
  return out;
}

int TrigPoly::max_frequency() const {
  int m = 0;
  for (const auto& term : terms)
    for (int i = 0; i < term.freq.size(); ++i)
      m = std::max(m, std::abs(term.freq[i]));
  return m;
}

TrigPoly constant_poly(int dim, double value) {
  TrigPoly p;
  p.dim = dim;
  TrigPoly::Term t;
  t.amp = value;
  t.is_sin = false;
  t.freq = Eigen::VectorXi::Zero(dim);
  p.terms.push_back(t);
  return p;
}

namespace {

struct Cursor {
  const std::string& s;
  size_t i = 0;

  void skip_ws() {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  }
  bool done() {
    skip_ws();
    return i >= s.size();
  }
  char peek() {
    skip_ws();
    return i < s.size() ? s[i] : '\0';
  }
  bool eat(char c) {
    if (peek() == c) {
      ++i;
      return true;
    }
    return false;
  }
};

double parse_number(Cursor& c) {
  c.skip_ws();
  char* end = nullptr;
  const double v = std::strtod(c.s.c_str() + c.i, &end);
  if (end == c.s.c_str() + c.i) throw config_error("trig poly: expected a number in '" + c.s + "'");
  c.i = end - c.s.c_str();
  return v;
}

Eigen::VectorXi parse_freq(Cursor& c, int dim) {
  if (!c.eat('(')) throw config_error("trig poly: expected '(' after sin/cos in '" + c.s + "'");
  Eigen::VectorXi freq = Eigen::VectorXi::Zero(dim);
  for (int k = 0; k < dim; ++k) {
    const double v = parse_number(c);
    if (v != std::floor(v)) throw config_error("trig poly: frequencies must be integers");
    freq[k] = static_cast<int>(v);
    if (k + 1 < dim && !c.eat(','))
      throw config_error("trig poly: expected " + std::to_string(dim) + " frequencies");
  }
  if (!c.eat(')')) throw config_error("trig poly: expected ')' in '" + c.s + "'");
  return freq;
}

}  // namespace

TrigPoly parse_trig_poly(const std::string& text, int dim) {
  TrigPoly poly;
  poly.dim = dim;
  Cursor c{text};
  bool first = true;
  while (!c.done()) {
    double sign = 1.0;
    if (c.eat('+')) {
      sign = 1.0;
    } else if (c.eat('-')) {
      sign = -1.0;
    } else if (!first) {
      throw config_error("trig poly: expected '+' or '-' in '" + text + "'");
    }
    first = false;

    TrigPoly::Term term;
    term.freq = Eigen::VectorXi::Zero(dim);
    term.amp = sign;

    bool saw_coeff = false;
    if (std::isdigit(static_cast<unsigned char>(c.peek())) || c.peek() == '.') {
      term.amp *= parse_number(c);
      saw_coeff = true;
      if (!c.eat('*')) {  // bare constant
        poly.terms.push_back(term);
        continue;
      }
    }
    c.skip_ws();
    if (c.s.compare(c.i, 3, "sin") == 0) {
      term.is_sin = true;
      c.i += 3;
    } else if (c.s.compare(c.i, 3, "cos") == 0) {
      term.is_sin = false;
      c.i += 3;
    } else {
      if (saw_coeff) throw config_error("trig poly: expected sin/cos after '*' in '" + text + "'");
      throw config_error("trig poly: unexpected token in '" + text + "'");
    }
    term.freq = parse_freq(c, dim);
    poly.terms.push_back(term);
  }
  if (poly.terms.empty()) throw config_error("trig poly: empty expression");
  return poly;
}

}  // namespace codazzi
