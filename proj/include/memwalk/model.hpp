#pragma once

// Transition law of the one-dimensional walk with full uniform memory and
// rests. A walker at time t recalls a uniformly chosen earlier step sigma_k.
// A recalled move (+1 or -1) is followed with probability p, reversed with
// probability q, or replaced by a rest with probability r. A recalled rest is
// always copied. The first step is +1 with probability s and -1 otherwise.

#include <cmath>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>

namespace memwalk {

/// Thrown when a probability quadruple violates the simplex constraints.
class InvalidParameters : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline constexpr double kSimplexTolerance = 1e-12;

template <typename Scalar>
struct BasicParameters {
  Scalar p{};  // follow the recalled move
  Scalar q{};  // oppose it
  Scalar r{};  // rest instead
  Scalar s{};  // first step goes right

  /// Validating constructor. p + q + r must equal 1 within kSimplexTolerance;
  /// nothing is renormalized.
  static BasicParameters make(Scalar p, Scalar q, Scalar r, Scalar s) {
    BasicParameters out{p, q, r, s};
    out.validate();
    return out;
  }

  /// Explicit renormalization of (p, q, r) onto the simplex.
  static BasicParameters renormalized(Scalar p, Scalar q, Scalar r, Scalar s) {
    const Scalar total = p + q + r;
    if (!(total > Scalar(0)))
      throw InvalidParameters("cannot renormalize: p + q + r must be positive");
    return make(p / total, q / total, r / total, s);
  }

  /// Parameters from the (gamma, r) coordinates used by the phase diagram.
  static BasicParameters from_gamma_rest(Scalar gamma, Scalar r, Scalar s) {
    return make((Scalar(1) - r + gamma) / 2, (Scalar(1) - r - gamma) / 2, r, s);
  }

  /// Memory asymmetry gamma = p - q.
  Scalar gamma() const { return p - q; }

  void validate() const {
    check_unit("p", p);
    check_unit("q", q);
    check_unit("r", r);
    check_unit("s", s);
    const Scalar total = p + q + r;
    if (std::abs(static_cast<double>(total) - 1.0) > kSimplexTolerance) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "p + q + r must equal 1 (got " << static_cast<double>(total) << ")";
      throw InvalidParameters(msg.str());
    }
  }

  template <typename Other>
  BasicParameters<Other> cast() const {
    return BasicParameters<Other>{Other(p), Other(q), Other(r), Other(s)};
  }

 private:
  static void check_unit(const char* name, Scalar v) {
    if (!(v >= Scalar(0) && v <= Scalar(1))) {
      std::ostringstream msg;
      msg.precision(17);
      msg << name << " must lie in [0, 1] (got " << static_cast<double>(v) << ")";
      throw InvalidParameters(msg.str());
    }
  }
};

using Parameters = BasicParameters<double>;

enum class Step : std::int8_t { Minus = -1, Rest = 0, Plus = 1 };

constexpr int value(Step s) { return static_cast<int>(s); }

inline Step step_from_int(int v) {
  switch (v) {
    case -1: return Step::Minus;
    case 0: return Step::Rest;
    case 1: return Step::Plus;
    default: throw std::invalid_argument("step value must be -1, 0 or +1");
  }
}

/// Sufficient statistics of a trajectory history. The transition law depends
/// on the history only through these counts.
struct WalkState {
  std::int64_t t = 0;
  std::int64_t n_plus = 0;
  std::int64_t n_minus = 0;
  std::int64_t n_zero = 0;
  std::int64_t x = 0;

  static WalkState after_first_step(Step first) {
    if (first == Step::Rest) throw std::invalid_argument("the first step never rests");
    WalkState w;
    w.t = 1;
    (first == Step::Plus ? w.n_plus : w.n_minus) = 1;
    w.x = value(first);
    return w;
  }

  /// State from counts; x is derived.
  static WalkState from_counts(std::int64_t n_plus, std::int64_t n_minus, std::int64_t n_zero) {
    WalkState w{n_plus + n_minus + n_zero, n_plus, n_minus, n_zero, n_plus - n_minus};
    w.validate();
    return w;
  }

  bool valid() const {
    return t >= 1 && n_plus >= 0 && n_minus >= 0 && n_zero >= 0 &&
           n_plus + n_minus + n_zero == t && x == n_plus - n_minus &&
           (t != 1 || n_zero == 0);
  }

  void validate() const {
    if (t < 1) throw std::invalid_argument("walk state requires t >= 1");
    if (!valid()) throw std::invalid_argument("inconsistent walk state counts");
  }

  /// Mirror image x -> -x.
  WalkState mirrored() const { return WalkState{t, n_minus, n_plus, n_zero, -x}; }

  friend bool operator==(const WalkState&, const WalkState&) = default;
};

inline WalkState apply_step(WalkState state, Step step) {
  ++state.t;
  switch (step) {
    case Step::Plus: ++state.n_plus; break;
    case Step::Minus: ++state.n_minus; break;
    case Step::Rest: ++state.n_zero; break;
  }
  state.x += value(step);
  return state;
}

template <typename Scalar>
struct BasicStepDistribution {
  Scalar p_plus{};
  Scalar p_zero{};
  Scalar p_minus{};

  Scalar of(Step s) const {
    switch (s) {
      case Step::Plus: return p_plus;
      case Step::Minus: return p_minus;
      case Step::Rest: return p_zero;
    }
    return Scalar(0);
  }

  Scalar total() const { return p_plus + p_zero + p_minus; }
};

using StepDistribution = BasicStepDistribution<double>;

template <typename Scalar>
BasicStepDistribution<Scalar> first_step_distribution(const BasicParameters<Scalar>& params) {
  return {params.s, Scalar(0), Scalar(1) - params.s};
}

/// Count form of the transition law: integer numerators over t.
template <typename Scalar>
BasicStepDistribution<Scalar> step_distribution(const BasicParameters<Scalar>& params,
                                                const WalkState& state) {
  state.validate();
  const Scalar np = Scalar(state.n_plus);
  const Scalar nm = Scalar(state.n_minus);
  const Scalar t = Scalar(state.t);
  BasicStepDistribution<Scalar> d;
  d.p_plus = (np * params.p + nm * params.q) / t;
  d.p_minus = (nm * params.p + np * params.q) / t;
  d.p_zero = ((np + nm) * params.r + Scalar(state.n_zero)) / t;
  return d;
}

/// The two-stage recall procedure written out as a mixture over the recalled
/// step's category. Cross-check for step_distribution only.
template <typename Scalar>
BasicStepDistribution<Scalar> step_distribution_reference(const BasicParameters<Scalar>& params,
                                                          const WalkState& state) {
  state.validate();
  const Scalar t = Scalar(state.t);
  const Scalar w_plus = Scalar(state.n_plus) / t;
  const Scalar w_minus = Scalar(state.n_minus) / t;
  const Scalar w_zero = Scalar(state.n_zero) / t;

  // Conditional laws (plus, zero, minus) given the recalled step.
  const BasicStepDistribution<Scalar> recalled_plus{params.p, params.r, params.q};
  const BasicStepDistribution<Scalar> recalled_minus{params.q, params.r, params.p};
  const BasicStepDistribution<Scalar> recalled_rest{Scalar(0), Scalar(1), Scalar(0)};

  BasicStepDistribution<Scalar> d;
  d.p_plus = w_plus * recalled_plus.p_plus + w_minus * recalled_minus.p_plus +
             w_zero * recalled_rest.p_plus;
  d.p_zero = w_plus * recalled_plus.p_zero + w_minus * recalled_minus.p_zero +
             w_zero * recalled_rest.p_zero;
  d.p_minus = w_plus * recalled_plus.p_minus + w_minus * recalled_minus.p_minus +
              w_zero * recalled_rest.p_minus;
  return d;
}

}  // namespace memwalk
