#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "lsq/mechanism.hpp"
#include "lsq/rff.hpp"
#include "test_helpers.hpp"

using namespace lsq;
using namespace lsq::testutil;

namespace {

// Monte Carlo estimate of E[z(x) z(y)] over `draws` sampled features.
double mc_pair_expectation(KernelKind kind, const Point& x, const Point& y, int draws,
                           SplitRng& rng) {
  double sum = 0.0;
  for (int i = 0; i < draws; ++i) {
    const RffDescriptor desc = rff::sample(kind, x.dim(), rng);
    sum += rff::feature(desc, kind, x.view()) * rff::feature(desc, kind, y.view());
  }
  return sum / draws;
}

KernelSpec mc_target(KernelKind kind) {
  // The feature expectation reproduces the normalized Cauchy variant.
  return {kind, 1.0, kind == KernelKind::kCauchy};
}

}  // namespace

TEST_CASE("gaussian frequencies have unit variance") {
  SplitRng rng(201);
  const int n = 100000;
  std::vector<double> first(n);
  for (int i = 0; i < n; ++i) {
    first[i] = rff::sample(KernelKind::kGaussian, 3, rng).omega[0];
  }
  CHECK(variance(first) > 0.99);
  CHECK(variance(first) < 1.01);
}

TEST_CASE("laplacian kernel frequencies follow a standard Cauchy") {
  SplitRng rng(202);
  const int n = 100000;
  std::vector<double> first(n);
  for (int i = 0; i < n; ++i) {
    first[i] = rff::sample(KernelKind::kLaplacian, 2, rng).omega[0];
  }
  std::sort(first.begin(), first.end());
  const double median = first[n / 2];
  const double iqr = first[3 * n / 4] - first[n / 4];
  CHECK(std::abs(median) < 0.03);
  CHECK(iqr == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("beta is uniform over [0, 2pi) and descriptors are seed-stable") {
  SplitRng rng(203);
  double max_beta = 0.0;
  double min_beta = 10.0;
  for (int i = 0; i < 2000; ++i) {
    const double beta = rff::sample(KernelKind::kGaussian, 1, rng).beta;
    max_beta = std::max(max_beta, beta);
    min_beta = std::min(min_beta, beta);
  }
  CHECK(min_beta >= 0.0);
  CHECK(max_beta < 2.0 * std::numbers::pi);

  SplitRng a(55), b(55);
  const auto da = rff::sample(KernelKind::kCauchy, 3, a);
  const auto db = rff::sample(KernelKind::kCauchy, 3, b);
  CHECK(da.omega == db.omega);
  CHECK(da.beta == db.beta);
}

TEST_CASE("feature closed forms") {
  RffDescriptor zero{{0.0, 0.0}, 0.0};
  CHECK(rff::feature(zero, KernelKind::kGaussian, Point{1.0, 2.0}.view()) ==
        doctest::Approx(std::sqrt(2.0)));
  RffDescriptor quarter{{0.0, 0.0}, std::numbers::pi / 2};
  CHECK(std::abs(rff::feature(quarter, KernelKind::kGaussian, Point{1.0, 2.0}.view())) < 1e-12);
  CHECK_THROWS_AS(rff::feature(zero, KernelKind::kGaussian, Point{1.0}.view()),
                  std::invalid_argument);
}

TEST_CASE("feature range stays within sqrt(2)") {
  SplitRng rng(204);
  const double bound = std::sqrt(2.0) + 1e-12;
  for (int i = 0; i < 2000; ++i) {
    const auto desc = rff::sample(KernelKind::kLaplacian, 3, rng);
    const Point p = random_point(rng, 3);
    CHECK(std::abs(rff::feature(desc, KernelKind::kLaplacian, p.view())) <= bound);
  }
}

TEST_CASE("gaussian feature products reproduce the kernel at unit distance") {
  SplitRng rng(205);
  const Point x{0.0, 0.0};
  const Point y{1.0, 0.0};
  const double est = mc_pair_expectation(KernelKind::kGaussian, x, y, 100000, rng);
  CHECK(std::abs(est - std::exp(-1.0)) < 0.01);
}

TEST_CASE("feature expectation matches all three kernels") {
  SplitRng rng(206);
  for (KernelKind kind : {KernelKind::kGaussian, KernelKind::kLaplacian, KernelKind::kCauchy}) {
    const KernelSpec spec = mc_target(kind);
    for (int pair = 0; pair < 5; ++pair) {
      const Point x = random_point(rng, 3, -1.0, 1.0);
      const Point y = random_point(rng, 3, -1.0, 1.0);
      const double est = mc_pair_expectation(kind, x, y, 100000, rng);
      const double truth = kernel_eval(spec, x, y);
      CHECK_MESSAGE(std::abs(est - truth) < 0.015, "kernel ", kernel_kind_name(kind), " pair ",
                    pair, " est ", est, " truth ", truth);
    }
  }
}

TEST_CASE("family evaluates f = g with params (1, sqrt2, 1)") {
  auto family = rff::make_family({KernelKind::kGaussian, 1.0}, 4);
  const auto p = family->params();
  CHECK(p.quantization == 1);
  CHECK(p.range == doctest::Approx(std::sqrt(2.0)));
  CHECK(p.sparsity == 1);
  CHECK(family->f_range_l1() == doctest::Approx(std::sqrt(2.0)));

  SplitRng rng(207);
  for (int i = 0; i < 1000; ++i) {
    const auto desc = family->sample(rng);
    const Point x = random_point(rng, 4);
    const auto f = family->eval_f(desc, x);
    const auto g = family->eval_g(desc, x);
    REQUIRE(f.nnz() == 1);
    CHECK(f.entries == g.entries);
    CHECK(f.well_formed());
  }
}

TEST_CASE("accumulate_mean_f agrees with per-point evaluation") {
  SplitRng rng(208);
  for (std::size_t dim : {std::size_t(1), std::size_t(2), std::size_t(3), std::size_t(5)}) {
    Dataset data = random_dataset(rng, 40, dim);
    auto family = rff::make_family({KernelKind::kGaussian, 1.0}, dim);
    const auto desc = family->sample(rng);

    std::vector<double> fused(1, 0.0);
    family->accumulate_mean_f(desc, data, fused);

    double slow = 0.0;
    SparseVector f;
    for (std::size_t i = 0; i < data.size(); ++i) {
      family->eval_f_into(desc, data.point(i), f);
      slow += f.entries.at(0).value;
    }
    slow /= static_cast<double>(data.size());
    CHECK(fused[0] == doctest::Approx(slow).epsilon(1e-9));
  }
}

TEST_CASE("kernel approximation error decays like 1/sqrt(m)") {
  SplitRng rng(209);
  const int pairs = 100;
  std::vector<Point> xs, ys;
  for (int i = 0; i < pairs; ++i) {
    xs.push_back(random_point(rng, 2, -1.5, 1.5));
    ys.push_back(random_point(rng, 2, -1.5, 1.5));
  }
  const KernelSpec spec{KernelKind::kGaussian, 1.0};

  auto rms_error = [&](int m) {
    std::vector<double> est(pairs, 0.0);
    for (int i = 0; i < m; ++i) {
      const auto desc = rff::sample(KernelKind::kGaussian, 2, rng);
      for (int p = 0; p < pairs; ++p) {
        est[p] += rff::feature(desc, KernelKind::kGaussian, xs[p].view()) *
                  rff::feature(desc, KernelKind::kGaussian, ys[p].view());
      }
    }
    double sq = 0.0;
    for (int p = 0; p < pairs; ++p) {
      const double err = est[p] / m - kernel_eval(spec, xs[p], ys[p]);
      sq += err * err;
    }
    return std::sqrt(sq / pairs);
  };

  const double coarse = rms_error(1 << 10);
  const double fine = rms_error(1 << 12);
  const double ratio = coarse / fine;
  CHECK(ratio > 1.5);
  CHECK(ratio < 2.7);
}
