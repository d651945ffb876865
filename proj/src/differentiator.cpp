#include "qbs/differentiator.hpp"

#include <cmath>
#include <complex>
#include <string>

#include "qbs/errors.hpp"

namespace qbs {

namespace {

using WideComplex = std::complex<Real>;

struct WideState {
  WideComplex a0;
  WideComplex a1;
};

WideState widen(const TwoDimState& s) {
  return {WideComplex(s.a0.real(), s.a0.imag()),
          WideComplex(s.a1.real(), s.a1.imag())};
}

TwoDimState narrow(const WideState& s) {
  return {Complex(static_cast<double>(s.a0.real()),
                  static_cast<double>(s.a0.imag())),
          Complex(static_cast<double>(s.a1.real()),
                  static_cast<double>(s.a1.imag()))};
}

WideState apply(const RealMatrix2& m, const WideState& s) {
  return {m[0][0] * s.a0 + m[0][1] * s.a1, m[1][0] * s.a0 + m[1][1] * s.a1};
}

Real norm2(const WideState& s) { return std::norm(s.a0) + std::norm(s.a1); }

void check_sublist_size(std::uint64_t m) {
  if (m < 2) {
    throw Error(ErrorCode::invalid_size,
                "sublist size must be at least 2, got " + std::to_string(m));
  }
}

}  // namespace

const char* to_string(ChainMode mode) {
  return mode == ChainMode::forced ? "forced" : "stochastic";
}

RealMatrix2 multiply(const RealMatrix2& a, const RealMatrix2& b) {
  RealMatrix2 out{};
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
    }
  }
  return out;
}

RealMatrix2 transpose(const RealMatrix2& a) {
  return {{{a[0][0], a[1][0]}, {a[0][1], a[1][1]}}};
}

RealMatrix2 identity2() { return {{{1, 0}, {0, 1}}}; }

Matrix2c to_complex(const RealMatrix2& a) {
  Matrix2c out{};
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) out[i][j] = static_cast<double>(a[i][j]);
  }
  return out;
}

TwoDimState TwoDimState::make(Complex a0, Complex a1) {
  const double norm = std::norm(a0) + std::norm(a1);
  if (std::abs(norm - 1.0) > 1e-12) {
    throw Error(ErrorCode::precondition,
                "two-dimensional state is not normalized (norm^2 = " +
                    std::to_string(norm) + ")");
  }
  return {a0, a1};
}

TwoDimState second_register_model(std::uint64_t sublist_size, bool present) {
  check_sublist_size(sublist_size);
  if (!present) return {1.0, 0.0};
  const Real m = static_cast<Real>(sublist_size);
  return {static_cast<double>(std::sqrt((m - 1) / m)),
          static_cast<double>(1 / std::sqrt(m))};
}

RealMatrix2 build_d(std::uint64_t sublist_size) {
  check_sublist_size(sublist_size);
  const Real m = static_cast<Real>(sublist_size);
  return {{{1, -std::sqrt(m - 1)}, {0, std::sqrt(m)}}};
}

SvdTriple svd_2x2(const RealMatrix2& a) {
  const Real det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
  if (std::abs(det) <= 1e-14L) {
    throw Error(ErrorCode::singular_matrix, "cannot factor a singular matrix");
  }

  // A = rot(phi) diag(sx, sy) rot(theta)^T with
  //   sx = |(E, H)| + |(F, G)|, sy = det / sx.
  const Real e = (a[0][0] + a[1][1]) / 2;
  const Real f = (a[0][0] - a[1][1]) / 2;
  const Real g = (a[1][0] + a[0][1]) / 2;
  const Real h = (a[1][0] - a[0][1]) / 2;
  const Real sx = std::hypot(e, h) + std::hypot(f, g);
  const Real sy = det / sx;
  const Real a1 = std::atan2(g, f);
  const Real a2 = std::atan2(h, e);
  const Real theta = (a2 - a1) / 2;
  const Real phi = (a2 + a1) / 2;

  const Real cp = std::cos(phi), sp = std::sin(phi);
  const Real ct = std::cos(theta), st = std::sin(theta);
  SvdTriple out{};
  out.q = {{{cp, -sp}, {sp, cp}}};
  out.r = {{{ct, st}, {-st, ct}}};
  out.v = {{{sx, 0}, {0, std::abs(sy)}}};
  if (sy < 0) {
    out.q[0][1] = -out.q[0][1];
    out.q[1][1] = -out.q[1][1];
  }
  if (out.r[1][0] < 0) {
    for (auto* m : {&out.q, &out.r}) {
      for (auto& row : *m) {
        for (auto& x : row) x = -x;
      }
    }
  }
  return out;
}

int choose_root_power(Real sigma1) {
  if (!(sigma1 > 0)) {
    throw Error(ErrorCode::invalid_argument,
                "singular value must be positive");
  }
  int v = 1;
  while (std::pow(sigma1, 1 / static_cast<Real>(v)) >= 2) v *= 2;
  return v;
}

MeasurementPair build_measurement_pair(const RealMatrix2& v_diag, int v) {
  if (v < 1) {
    throw Error(ErrorCode::invalid_argument, "root power must be at least 1");
  }
  const Real sigma1 = v_diag[0][0];
  const Real sigma2 = v_diag[1][1];
  if (!(sigma1 >= sigma2 && sigma2 > 0)) {
    throw Error(ErrorCode::precondition,
                "expected diag(sigma1, sigma2) with sigma1 >= sigma2 > 0");
  }
  MeasurementPair pair{};
  pair.v = v;
  const Real s1 = std::pow(sigma1, 1 / static_cast<Real>(v));
  const Real s2 = std::pow(sigma2, 1 / static_cast<Real>(v));
  pair.root = {{{s1, 0}, {0, s2}}};
  pair.c = std::hypot(s1, s2);
  const Real m00 = s1 / pair.c;
  const Real m11 = s2 / pair.c;
  pair.m0 = {{{m00, 0}, {0, m11}}};
  // M1 = sqrt(I - M0^dag M0), written as (1-m)(1+m) to keep digits near m=1.
  pair.m1 = {{{std::sqrt((1 - m00) * (1 + m00)), 0},
              {0, std::sqrt((1 - m11) * (1 + m11))}}};
  return pair;
}

DifferentiatorPlan make_plan(std::uint64_t sublist_size,
                             std::optional<int> v_override) {
  DifferentiatorPlan plan;
  plan.sublist_size = sublist_size;
  plan.d = build_d(sublist_size);
  plan.svd = svd_2x2(plan.d);
  const int v = v_override ? *v_override : choose_root_power(plan.svd.v[0][0]);
  plan.pair = build_measurement_pair(plan.svd.v, v);
  return plan;
}

Membership classify(const TwoDimState& final_state) {
  return std::norm(final_state.a1) > 0.5 ? Membership::present
                                         : Membership::absent;
}

ChainOutcome run_chain(const TwoDimState& input, const DifferentiatorPlan& plan,
                       ChainMode mode, Rng& rng, bool keep_trajectory) {
  const MeasurementPair& pair = plan.pair;
  ChainOutcome out;
  out.branches.reserve(pair.v);
  out.step_probabilities.reserve(pair.v);

  WideState state = apply(transpose(plan.svd.r), widen(input));
  if (keep_trajectory) out.trajectory.push_back(narrow(state));

  Real chain_probability = 1;
  for (int step = 0; step < pair.v; ++step) {
    const WideState after_m0 = apply(pair.m0, state);
    const Real p0 = norm2(after_m0);
    Branch branch = Branch::m0;
    if (mode == ChainMode::stochastic &&
        !(static_cast<Real>(uniform01(rng)) < p0)) {
      branch = Branch::m1;
    }
    WideState next = branch == Branch::m0 ? after_m0 : apply(pair.m1, state);
    const Real p = branch == Branch::m0 ? p0 : norm2(next);
    if (p < 1e-300L) {
      throw Error(ErrorCode::zero_probability_branch,
                  "chain step " + std::to_string(step) +
                      " selected a zero-probability branch");
    }
    const Real inv = 1 / std::sqrt(p);
    state = {next.a0 * inv, next.a1 * inv};
    out.branches.push_back(branch);
    out.step_probabilities.push_back(static_cast<double>(p));
    chain_probability *= p;
    if (branch == Branch::m1) out.clean = false;
    if (keep_trajectory) out.trajectory.push_back(narrow(state));
  }

  out.final_state = narrow(apply(plan.svd.q, state));
  out.readout = classify(out.final_state);
  out.chain_probability = static_cast<double>(chain_probability);
  return out;
}

double chain_success_probability(const DifferentiatorPlan& plan,
                                 const TwoDimState& input) {
  const WideState rotated = apply(transpose(plan.svd.r), widen(input));
  const Real v = static_cast<Real>(plan.pair.v);
  const Real g0 = std::pow(plan.pair.m0[0][0], v);
  const Real g1 = std::pow(plan.pair.m0[1][1], v);
  return static_cast<double>(g0 * g0 * std::norm(rotated.a0) +
                             g1 * g1 * std::norm(rotated.a1));
}

}  // namespace qbs
