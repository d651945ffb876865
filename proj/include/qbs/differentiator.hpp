#pragma once

// Discrimination of the two flag-register states
//
//   |x> = sqrt((M-1)/M)|0> + (1/sqrt M)|1>   (target inside the sublist)
//   |y> = |0>                                (target outside)
//
// via the non-unitary map D = [[1, -sqrt(M-1)], [0, sqrt(M)]], which sends
// |x> to |1> and |y> to |0>. D is realized as R^T, then v selective
// measurements with M0 = V^(1/v) / c, then Q, where D = Q V R^T.
//
// Matrix arithmetic runs in long double: for M = 2^30 the entries of D reach
// 3.3e4, and the SVD factors must reconstruct D to 1e-12 absolute.

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "qbs/types.hpp"

namespace qbs {

using Real = long double;
using RealMatrix2 = std::array<std::array<Real, 2>, 2>;

RealMatrix2 multiply(const RealMatrix2& a, const RealMatrix2& b);
RealMatrix2 transpose(const RealMatrix2& a);
RealMatrix2 identity2();
Matrix2c to_complex(const RealMatrix2& a);

struct TwoDimState {
  Complex a0;
  Complex a1;

  // Validates |a0|^2 + |a1|^2 = 1 within 1e-12.
  static TwoDimState make(Complex a0, Complex a1);
};

struct SvdTriple {
  RealMatrix2 q;  // orthogonal
  RealMatrix2 v;  // diag(sigma1, sigma2), sigma1 >= sigma2 > 0
  RealMatrix2 r;  // orthogonal
};

struct MeasurementPair {
  RealMatrix2 m0;
  RealMatrix2 m1;
  RealMatrix2 root;  // V^(1/v) before normalization
  int v = 1;
  Real c = 1;
};

struct DifferentiatorPlan {
  std::uint64_t sublist_size = 0;
  RealMatrix2 d{};
  SvdTriple svd{};
  MeasurementPair pair{};
};

enum class ChainMode { forced, stochastic };
enum class Branch { m0, m1 };

const char* to_string(ChainMode mode);

struct ChainOutcome {
  std::vector<Branch> branches;
  std::vector<double> step_probabilities;
  TwoDimState final_state{};
  Membership readout = Membership::absent;
  bool clean = true;
  double chain_probability = 1.0;
  // State after R^T and after each selective step; filled only on request.
  std::vector<TwoDimState> trajectory;
};

// Flag-register state after the oracle for a sublist of M items.
TwoDimState second_register_model(std::uint64_t sublist_size, bool present);

RealMatrix2 build_d(std::uint64_t sublist_size);

// Closed-form SVD of a nonsingular 2x2 matrix. Gauge: Q and R are proper
// rotations (when det > 0) with R(1,0) >= 0.
SvdTriple svd_2x2(const RealMatrix2& a);

// Smallest power of two v with sigma1^(1/v) < 2.
int choose_root_power(Real sigma1);

MeasurementPair build_measurement_pair(const RealMatrix2& v_diag, int v);

DifferentiatorPlan make_plan(std::uint64_t sublist_size,
                             std::optional<int> v_override = std::nullopt);

Membership classify(const TwoDimState& final_state);

ChainOutcome run_chain(const TwoDimState& input, const DifferentiatorPlan& plan,
                       ChainMode mode, Rng& rng, bool keep_trajectory = false);

// Probability that a stochastic chain takes M0 at every step,
// ||M0^v R^T input||^2 (= ||D input||^2 / c^(2v)).
double chain_success_probability(const DifferentiatorPlan& plan,
                                 const TwoDimState& input);

}  // namespace qbs
