#pragma once

#include <cstdint>
#include <ostream>
#include <vector>

#include "gramfiber/gram.hpp"
#include "gramfiber/monomial.hpp"
#include "gramfiber/sdp.hpp"
#include "gramfiber/symmat.hpp"

namespace gramfiber::fiberbody {

/// Monte-Carlo sample of the projected base: sos forms on the unit sphere
/// of coefficient space, drawn by rejection from the Gaussian measure.
/// Deterministic under (seed, index): each sample has its own substream.
struct SampleSet {
  GramContext ctx;
  std::vector<Form> forms;
  std::uint64_t seed = 0;
  std::vector<double> weights;   // radial factor 1/(dim V + 1) per sample
  double acceptance_rate = 0;    // accepted / attempted, for the cap measure
  double sphere_area = 0;        // area of S^{M-1}
  long long trials = 0;

  /// sphere_area * acceptance_rate * radial weight: the constant turning a
  /// sample mean over accepted sphere directions into the ball integral.
  double measure_constant() const;
};

SampleSet sample_forms(const GramContext& ctx, int count, std::uint64_t seed);

struct SupportEstimate {
  double h = 0;
  double stderr_ = 0;
  int used = 0;
  int failed = 0;
};

/// h of the fiber body in direction w: the per-sample SDP minimum averaged
/// against the base measure. Directions are lambda coordinates.
SupportEstimate support_estimate(const std::vector<double>& lambda,
                                 const SampleSet& samples);

struct CloudRecord {
  std::vector<double> direction;  // lambda coordinates of w
  std::vector<double> point;      // averaged optimizer, lambda coordinates
  int count = 0;                  // samples used
  double stderr_ = 0;             // standard error of the support value
  int unpinned = 0;               // samples whose optimal face was not a point
};

/// Averaged optimizer over the sample set: the fiber-body boundary point
/// exposed by w when the per-sample faces are points (unpinned counts the
/// exceptions).
CloudRecord boundary_point(const std::vector<double>& lambda,
                           const SampleSet& samples);

struct FaceDimEstimate {
  int dim = 0;
  std::vector<SymMat> basis;  // orthonormal in the svec metric
};

/// Numeric span of the per-sample face subspaces: rank of the stacked
/// bases at relative threshold 1e-6.
FaceDimEstimate face_dim_estimate(const std::vector<double>& lambda,
                                  const SampleSet& samples);

enum class NcProbe { InCone, NotInCone, Undetermined };

/// NotInCone when the optimal faces in directions w and w' differ on more
/// than 10% of samples; InCone when they coincide on all samples.
NcProbe nc_probe(const std::vector<double>& lambda,
                 const std::vector<double>& lambda_prime,
                 const SampleSet& samples);

/// Built-in direction generator: Fibonacci sphere points for dim W = 3,
/// seeded Gaussian directions on the sphere otherwise.
std::vector<std::vector<double>> default_directions(const GramContext& ctx,
                                                    int count,
                                                    std::uint64_t seed);

/// CSV rows "dir_1..k, pt_1..k, n_samples, stderr" at 17 significant
/// digits; byte-deterministic under a fixed seed. Returns rows written.
int export_cloud(const std::vector<std::vector<double>>& directions,
                 const SampleSet& samples, std::ostream& sink);

/// Worker cap: GRAMFIBER_THREADS, defaulting to hardware concurrency.
int worker_count();

}  // namespace gramfiber::fiberbody
