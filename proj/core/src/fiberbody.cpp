#include "gramfiber/fiberbody.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <mutex>
#include <numeric>
#include <random>
#include <thread>

#include "gramfiber/dense.hpp"
#include "gramfiber/errors.hpp"

namespace gramfiber::fiberbody {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::mt19937_64 substream(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t s = seed ^ (0x517cc1b727220a95ULL * (index + 1));
  splitmix64(s);
  return std::mt19937_64(splitmix64(s));
}

double uniform01(std::mt19937_64& rng) {
  return ((rng() >> 11) + 1.0) * 0x1.0p-53;  // in (0, 1]
}

// Box-Muller; engine-only use of <random> keeps the stream portable.
double normal(std::mt19937_64& rng) {
  double u1 = uniform01(rng);
  double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

double pairwise_sum(const std::vector<double>& v, size_t lo, size_t hi) {
  if (hi - lo <= 8) {
    double s = 0;
    for (size_t i = lo; i < hi; ++i) s += v[i];
    return s;
  }
  size_t mid = lo + (hi - lo) / 2;
  return pairwise_sum(v, lo, mid) + pairwise_sum(v, mid, hi);
}

double pairwise_mean(const std::vector<double>& v) {
  if (v.empty()) return 0;
  return pairwise_sum(v, 0, v.size()) / static_cast<double>(v.size());
}

void parallel_for(int total, const std::function<void(int)>& fn) {
  int workers = std::min(worker_count(), total);
  if (workers <= 1) {
    for (int i = 0; i < total; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto run = [&]() {
    for (;;) {
      int i = next.fetch_add(1);
      if (i >= total) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) pool.emplace_back(run);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

// Cheap negativity prefilter on a fixed point grid; the SDP confirms.
bool nonnegative_on_grid(const Form& f) {
  int n = f.order.n();
  if (n == 2) {
    for (int k = 0; k < 64; ++k) {
      double th = M_PI * k / 64.0;
      if (f.eval({std::cos(th), std::sin(th)}) < 0) return false;
    }
  } else if (n == 3) {
    const double golden = M_PI * (3.0 - std::sqrt(5.0));
    for (int k = 0; k < 128; ++k) {
      double z = 1.0 - 2.0 * (k + 0.5) / 128.0;
      double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      double ph = golden * k;
      if (f.eval({r * std::cos(ph), r * std::sin(ph), z}) < 0) return false;
    }
  }
  return true;
}

struct PerSample {
  double value = 0;
  std::vector<double> lambda;
  bool ok = false;
  bool pinned = false;
};

std::vector<PerSample> solve_direction(const SampleSet& samples,
                                       const SymMat& objective) {
  int n = static_cast<int>(samples.forms.size());
  std::vector<PerSample> out(n);
  parallel_for(n, [&](int i) {
    SliceProblem prob;
    prob.g0 = samples.ctx.v_rep(samples.forms[i]);
    prob.basis = samples.ctx.kernel_basis();
    prob.objective = objective;
    SdpSolution sol = solve(prob);
    if (sol.status == SdpStatus::Optimal) {
      out[i].ok = true;
      out[i].value = sol.objective_value;
      out[i].lambda = samples.ctx.lambda_of(sol.x);
      out[i].pinned = sol.polished;
    }
  });
  int failed = 0;
  for (const PerSample& p : out)
    if (!p.ok) ++failed;
  if (failed * 20 > n)
    throw ConvergenceError("fiberbody: more than 5% of per-sample solves failed");
  return out;
}

FaceReport face_of_sample(const SampleSet& samples, int i,
                          const std::vector<double>& lambda) {
  return face(samples.forms[i], lambda, samples.ctx);
}

}  // namespace

int worker_count() {
  if (const char* env = std::getenv("GRAMFIBER_THREADS")) {
    int v = std::atoi(env);
    if (v > 0) return v;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

double SampleSet::measure_constant() const {
  double radial = weights.empty() ? 1.0 / (ctx.dim_2d() + 1) : weights.front();
  return sphere_area * acceptance_rate * radial;
}

SampleSet sample_forms(const GramContext& ctx, int count, std::uint64_t seed) {
  if (count < 1) throw DimensionError("sample_forms: count must be >= 1");
  const int m = ctx.dim_2d();

  SampleSet set{ctx, {}, seed, {}, 0.0, 0.0, 0};
  set.forms.assign(count, Form(ctx.order_2d()));
  set.weights.assign(count, 1.0 / (m + 1));
  set.sphere_area = 2.0 * std::pow(M_PI, m / 2.0) / std::tgamma(m / 2.0);

  std::vector<long long> trials(count, 0);
  parallel_for(count, [&](int i) {
    std::mt19937_64 rng = substream(seed, static_cast<std::uint64_t>(i));
    for (long long attempt = 0; attempt < 1000000; ++attempt) {
      ++trials[i];
      Form f(ctx.order_2d());
      double nn = 0;
      for (int k = 0; k < m; ++k) {
        f.coeffs[k] = normal(rng);
        nn += f.coeffs[k] * f.coeffs[k];
      }
      nn = std::sqrt(nn);
      if (nn == 0) continue;
      for (double& c : f.coeffs) c /= nn;
      if (!nonnegative_on_grid(f)) continue;
      if (!feasible(ctx.v_rep(f), ctx.kernel_basis())) continue;
      set.forms[i] = std::move(f);
      return;
    }
    throw SamplingError("sample_forms: no sos form within 1e6 attempts");
  });

  for (long long t : trials) set.trials += t;
  set.acceptance_rate = static_cast<double>(count) / static_cast<double>(set.trials);
  if (set.acceptance_rate < 1e-4)
    throw SamplingError("sample_forms: acceptance rate below 1e-4");
  return set;
}

SupportEstimate support_estimate(const std::vector<double>& lambda,
                                 const SampleSet& samples) {
  SymMat obj = samples.ctx.dir_to_objective(samples.ctx.from_lambda(lambda));
  std::vector<PerSample> per = solve_direction(samples, obj);

  std::vector<double> vals;
  vals.reserve(per.size());
  int failed = 0;
  for (const PerSample& p : per) {
    if (p.ok) vals.push_back(p.value);
    else ++failed;
  }
  double mean = pairwise_mean(vals);
  double var = 0;
  for (double v : vals) var += (v - mean) * (v - mean);
  int used = static_cast<int>(vals.size());
  if (used > 1) var /= (used - 1);

  double cm = samples.measure_constant();
  SupportEstimate est;
  est.h = cm * mean;
  est.stderr_ = cm * std::sqrt(var / std::max(used, 1));
  est.used = used;
  est.failed = failed;
  return est;
}

CloudRecord boundary_point(const std::vector<double>& lambda,
                           const SampleSet& samples) {
  SymMat obj = samples.ctx.dir_to_objective(samples.ctx.from_lambda(lambda));
  std::vector<PerSample> per = solve_direction(samples, obj);
  const int k = samples.ctx.dim_w();
  double cm = samples.measure_constant();

  CloudRecord rec;
  rec.direction = lambda;
  rec.point.assign(k, 0.0);

  std::vector<double> vals;
  std::vector<double> coord;
  for (int c = 0; c < k; ++c) {
    coord.clear();
    for (const PerSample& p : per)
      if (p.ok) coord.push_back(p.lambda[c]);
    rec.point[c] = cm * pairwise_mean(coord);
  }
  for (const PerSample& p : per) {
    if (!p.ok) continue;
    vals.push_back(p.value);
    if (!p.pinned) ++rec.unpinned;
  }
  rec.count = static_cast<int>(vals.size());
  double mean = pairwise_mean(vals);
  double var = 0;
  for (double v : vals) var += (v - mean) * (v - mean);
  if (rec.count > 1) var /= (rec.count - 1);
  rec.stderr_ = cm * std::sqrt(var / std::max(rec.count, 1));
  return rec;
}

FaceDimEstimate face_dim_estimate(const std::vector<double>& lambda,
                                  const SampleSet& samples) {
  const int n = static_cast<int>(samples.forms.size());
  const int nsym = samples.ctx.dim_sym2();

  std::vector<std::vector<std::vector<double>>> rows(n);
  std::vector<int> ok(n, 0);
  parallel_for(n, [&](int i) {
    try {
      FaceReport rep = face_of_sample(samples, i, lambda);
      for (const SymMat& b : face_subspace(rep.u_basis, samples.ctx))
        rows[i].push_back(svec(b));
      ok[i] = 1;
    } catch (const Error&) {
      ok[i] = 0;
    }
  });
  int failed = n - std::accumulate(ok.begin(), ok.end(), 0);
  if (failed * 20 > n)
    throw ConvergenceError("face_dim_estimate: more than 5% of faces failed");

  // Covariance of the stacked (already normalized) subspace vectors.
  SymMat cov(nsym);
  for (int i = 0; i < n; ++i)
    for (const auto& r : rows[i])
      for (int a = 0; a < nsym; ++a)
        for (int b = 0; b <= a; ++b) cov.at(a, b) += r[a] * r[b];

  FaceDimEstimate out;
  EighResult e = eigh(cov);
  double mx = std::max(e.eigenvalues.empty() ? 0.0 : e.eigenvalues.front(), 0.0);
  if (mx == 0.0) return out;
  const double tol = 1e-6;
  for (int k = 0; k < nsym; ++k) {
    if (e.eigenvalues[k] <= tol * tol * mx) break;
    ++out.dim;
    out.basis.push_back(unsvec(e.vectors[k], samples.ctx.dim_d()));
  }
  return out;
}

NcProbe nc_probe(const std::vector<double>& lambda,
                 const std::vector<double>& lambda_prime,
                 const SampleSet& samples) {
  // Same positive ray: identical functional.
  {
    double dd = dot(lambda, lambda_prime);
    double n1 = norm2(lambda), n2 = norm2(lambda_prime);
    if (n1 == 0 || n2 == 0)
      throw DimensionError("nc_probe: directions must be nonzero");
    if (dd > 0 && std::abs(dd - n1 * n2) <= 1e-12 * n1 * n2)
      return NcProbe::InCone;
  }

  const int n = static_cast<int>(samples.forms.size());
  std::vector<int> differ(n, 0), ok(n, 0);
  parallel_for(n, [&](int i) {
    try {
      FaceReport a = face_of_sample(samples, i, lambda);
      FaceReport b = face_of_sample(samples, i, lambda_prime);
      ok[i] = 1;
      if (a.face_dim != b.face_dim) {
        differ[i] = 1;
        return;
      }
      double scale = 1.0 + std::max(a.optimizer.frobenius(), b.optimizer.frobenius());
      // Distance between the affine hulls: displacement modulo the common
      // direction space plus the subspace gap.
      std::vector<std::vector<double>> ba, bb;
      for (const SymMat& mmat : face_subspace(a.u_basis, samples.ctx))
        ba.push_back(svec(mmat));
      for (const SymMat& mmat : face_subspace(b.u_basis, samples.ctx))
        bb.push_back(svec(mmat));
      SymMat diff = a.optimizer;
      diff += -1.0 * b.optimizer;
      std::vector<double> v = svec(diff);
      for (const auto& basis : {ba, bb}) {
        std::vector<double> resid = v;
        for (const auto& u : basis) {
          double c = dot(resid, u);
          for (size_t t = 0; t < resid.size(); ++t) resid[t] -= c * u[t];
        }
        if (norm2(resid) > 1e-5 * scale) {
          differ[i] = 1;
          return;
        }
      }
      if (!ba.empty() &&
          max_principal_angle(ba, bb, 1e-8) > 1e-4) {
        differ[i] = 1;
      }
    } catch (const Error&) {
      ok[i] = 0;
    }
  });

  int used = 0, diff_count = 0;
  for (int i = 0; i < n; ++i) {
    used += ok[i];
    diff_count += differ[i];
  }
  if ((n - used) * 20 > n)
    throw ConvergenceError("nc_probe: more than 5% of per-sample faces failed");
  if (diff_count * 10 > used) return NcProbe::NotInCone;
  if (diff_count == 0) return NcProbe::InCone;
  return NcProbe::Undetermined;
}

std::vector<std::vector<double>> default_directions(const GramContext& ctx,
                                                    int count,
                                                    std::uint64_t seed) {
  const int k = ctx.dim_w();
  std::vector<std::vector<double>> dirs(count);
  if (k == 3) {
    const double golden = M_PI * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < count; ++i) {
      double z = 1.0 - 2.0 * (i + 0.5) / count;
      double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      double ph = golden * i;
      dirs[i] = {r * std::cos(ph), r * std::sin(ph), z};
    }
  } else {
    for (int i = 0; i < count; ++i) {
      std::mt19937_64 rng = substream(seed ^ 0xd1eccf0ffULL, i);
      std::vector<double> v(k);
      double nn = 0;
      do {
        nn = 0;
        for (int c = 0; c < k; ++c) {
          v[c] = normal(rng);
          nn += v[c] * v[c];
        }
      } while (nn == 0);
      nn = std::sqrt(nn);
      for (double& x : v) x /= nn;
      dirs[i] = v;
    }
  }
  return dirs;
}

int export_cloud(const std::vector<std::vector<double>>& directions,
                 const SampleSet& samples, std::ostream& sink) {
  if (directions.empty())
    throw DimensionError("export_cloud: direction set must be nonempty");
  const int k = samples.ctx.dim_w();

  char buf[64];
  auto put = [&](double v) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    sink << buf;
  };

  for (int c = 1; c <= k; ++c) sink << "dir_" << c << ",";
  for (int c = 1; c <= k; ++c) sink << "pt_" << c << ",";
  sink << "n_samples,stderr\n";

  int rows = 0;
  for (const auto& dir : directions) {
    CloudRecord rec = boundary_point(dir, samples);
    for (int c = 0; c < k; ++c) {
      put(rec.direction[c]);
      sink << ",";
    }
    for (int c = 0; c < k; ++c) {
      put(rec.point[c]);
      sink << ",";
    }
    sink << rec.count << ",";
    put(rec.stderr_);
    sink << "\n";
    if (!sink) throw Error("export_cloud: write failed");
    ++rows;
  }
  sink.flush();
  if (!sink) throw Error("export_cloud: write failed");
  return rows;
}

}  // namespace gramfiber::fiberbody
