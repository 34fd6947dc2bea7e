#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>

namespace qplexkit {

namespace detail {
inline std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6e", x);
  return buf;
}
}  // namespace detail

/// Base class for every validation and computation failure in the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatchError : public Error {
 public:
  using Error::Error;
};

class NotHermitianError : public Error {
 public:
  explicit NotHermitianError(double deviation)
      : Error("matrix is not Hermitian: max |A - A^dag| = " +
              detail::sci(deviation)),
        deviation(deviation) {}
  double deviation;
};

class NotPositiveError : public Error {
 public:
  explicit NotPositiveError(double min_eigenvalue)
      : Error("operator is not positive semidefinite: min eigenvalue = " +
              detail::sci(min_eigenvalue)),
        min_eigenvalue(min_eigenvalue) {}
  double min_eigenvalue;
};

class TraceNotOneError : public Error {
 public:
  explicit TraceNotOneError(double deviation)
      : Error("trace deviates from 1 by " + detail::sci(deviation)),
        deviation(deviation) {}
  double deviation;
};

class NormNotOneError : public Error {
 public:
  explicit NormNotOneError(double deviation)
      : Error("vector norm deviates from 1 by " + detail::sci(deviation)),
        deviation(deviation) {}
  double deviation;
};

class EffectNotPositiveError : public Error {
 public:
  EffectNotPositiveError(int index, double offending_eigenvalue)
      : Error("effect " + std::to_string(index) +
              " has eigenvalue outside [0, 1]: " +
              detail::sci(offending_eigenvalue)),
        index(index),
        offending_eigenvalue(offending_eigenvalue) {}
  int index;
  double offending_eigenvalue;
};

class SumNotIdentityError : public Error {
 public:
  explicit SumNotIdentityError(double deviation)
      : Error("effects do not sum to the identity: max-abs deviation = " +
              detail::sci(deviation)),
        deviation(deviation) {}
  double deviation;
};

class ProbabilityOutOfRangeError : public Error {
 public:
  explicit ProbabilityOutOfRangeError(double value)
      : Error("Born probability out of range: " + detail::sci(value)),
        value(value) {}
  double value;
};

class NotInformationallyCompleteError : public Error {
 public:
  NotInformationallyCompleteError(int rank, int required)
      : Error("POVM is not informationally complete: Gram rank " +
              std::to_string(rank) + " < " + std::to_string(required)),
        rank(rank),
        required(required) {}
  int rank;
  int required;
};

class NotEquiangularError : public Error {
 public:
  explicit NotEquiangularError(double max_deviation)
      : Error("orbit is not equiangular: max | |<m|n>|^2 - 1/(d+1) | = " +
              detail::sci(max_deviation)),
        max_deviation(max_deviation) {}
  double max_deviation;
};

class NotConvergedError : public Error {
 public:
  NotConvergedError(double best_deviation, double best_potential)
      : Error("search did not converge: best equiangularity deviation = " +
              detail::sci(best_deviation) +
              ", best potential = " + detail::sci(best_potential) +
              " (raise restarts or max_iters)"),
        best_deviation(best_deviation),
        best_potential(best_potential) {}
  double best_deviation;
  double best_potential;
};

class NotAStateError : public Error {
 public:
  explicit NotAStateError(double min_eigenvalue)
      : Error("probability vector lies outside the state space: "
              "reconstructed operator has min eigenvalue " +
              detail::sci(min_eigenvalue)),
        min_eigenvalue(min_eigenvalue) {}
  double min_eigenvalue;
};

class InconsistentPairError : public Error {
 public:
  explicit InconsistentPairError(double min_entry)
      : Error("state/conditional pair violates reciprocal consistency: "
              "min output entry = " +
              detail::sci(min_entry)),
        min_entry(min_entry) {}
  double min_entry;
};

class DegenerateSubspaceError : public Error {
 public:
  explicit DegenerateSubspaceError(double overlap)
      : Error("states are parallel within tolerance: |<psi|psi'>| = " +
              detail::sci(overlap)),
        overlap(overlap) {}
  double overlap;
};

class OverlapViolationError : public Error {
 public:
  OverlapViolationError(double dot, int subspace_rank)
      : Error("probabilistic representations fail to overlap (dot = " +
              detail::sci(dot) + "); projected-effect rank on the subspace = " +
              std::to_string(subspace_rank) +
              " — reference measurement is not informationally complete "
              "there"),
        dot(dot),
        subspace_rank(subspace_rank) {}
  double dot;
  int subspace_rank;
};

class InsufficientSpanError : public Error {
 public:
  InsufficientSpanError(int rank, int required)
      : Error("samples span only " + std::to_string(rank) + " of " +
              std::to_string(required) + " Hermitian dimensions"),
        rank(rank),
        required(required) {}
  int rank;
  int required;
};

class TooManyCandidatesError : public Error {
 public:
  TooManyCandidatesError(int candidates, int budget)
      : Error("saturation graph has " + std::to_string(candidates) +
              " connected vertices, exceeding the exact-search budget of " +
              std::to_string(budget)),
        candidates(candidates),
        budget(budget) {}
  int candidates;
  int budget;
};

}  // namespace qplexkit
