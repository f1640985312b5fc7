#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <fstream>
#include <numeric>

#include "lsq/binio.hpp"
#include "lsq/fgt.hpp"
#include "lsq/lsh.hpp"
#include "lsq/mechanism.hpp"
#include "lsq/release_io.hpp"
#include "lsq/rff.hpp"
#include "test_helpers.hpp"

using namespace lsq;
using namespace lsq::testutil;

namespace {

// Wraps a family and counts feature entries handed to the client, so tests
// can assert the per-repetition inner-product work is O(S).
class CountingFamily final : public LsqFamily {
 public:
  explicit CountingFamily(const LsqFamily& inner) : inner_(inner) {}

  FamilyTag tag() const override { return inner_.tag(); }
  std::size_t dim() const override { return inner_.dim(); }
  LsqParams params() const override { return inner_.params(); }
  PairDescriptor sample(SplitRng& rng) const override { return inner_.sample(rng); }
  double f_range_l1() const override { return inner_.f_range_l1(); }

  void eval_f_into(const PairDescriptor& d, std::span<const double> x,
                   SparseVector& out) const override {
    inner_.eval_f_into(d, x, out);
    f_entries += out.nnz();
  }
  void eval_g_into(const PairDescriptor& d, std::span<const double> y,
                   SparseVector& out) const override {
    inner_.eval_g_into(d, y, out);
    g_entries += out.nnz();
  }

  mutable std::size_t f_entries = 0;
  mutable std::size_t g_entries = 0;

 private:
  const LsqFamily& inner_;
};

}  // namespace

TEST_CASE("laplace sampling matches the target distribution") {
  SplitRng rng(101);
  const int n = 1000000;
  std::vector<double> samples(n);
  for (auto& s : samples) s = rng.laplace(1.0);
  CHECK(std::abs(mean(samples)) < 0.005);
  const double var = variance(samples);
  CHECK(var > 1.98);
  CHECK(var < 2.02);
}

TEST_CASE("laplace rejects non-positive scale") {
  SplitRng rng(1);
  CHECK_THROWS_AS(rng.laplace(0.0), std::invalid_argument);
  CHECK_THROWS_AS(rng.laplace(-1.0), std::invalid_argument);
}

TEST_CASE("fixed seed reproduces the stream; derived streams differ") {
  SplitRng a(42);
  SplitRng b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());

  SplitRng base(7);
  SplitRng s0 = base.derive(0);
  SplitRng s1 = base.derive(1);
  bool all_equal = true;
  for (int i = 0; i < 16; ++i) all_equal = all_equal && (s0.next_u64() == s1.next_u64());
  CHECK_FALSE(all_equal);
}

TEST_CASE("noise_scale formula") {
  // I * f_l1 / (eps * n) with the family's l1 range bound.
  CHECK(noise_scale(100, std::sqrt(2.0), 1.0, 10000) ==
        doctest::Approx(100.0 * std::sqrt(2.0) / 10000.0).epsilon(1e-15));
  CHECK(noise_scale(1, 1.0, 1.0, 1) == 1.0);

  // d=2, rho=5 expansion bound, cross-checked by enumerating 2^-(r1+r2).
  double enumerated = 0.0;
  for (int r1 = 0; r1 <= 5; ++r1) {
    for (int r2 = 0; r2 <= 5; ++r2) enumerated += std::pow(0.5, r1 + r2);
  }
  const double closed = fgt::f_range_l1_bound(5, 2);
  CHECK(closed == doctest::Approx(enumerated).epsilon(1e-15));
  CHECK(noise_scale(1, closed, 0.1, 100000) ==
        doctest::Approx(enumerated / 10000.0).epsilon(1e-14));

  CHECK_THROWS_AS(noise_scale(1, 1.0, 1.0, 0), std::invalid_argument);
}

TEST_CASE("privatize_count") {
  SplitRng rng(5);
  const int trials = 100000;
  double sum = 0.0;
  for (int t = 0; t < trials; ++t) sum += privatize_count(50, 0.5, rng);
  const double avg = sum / trials;
  // CLT window: std of the mean is sqrt(2)*(1/eps)/sqrt(trials).
  const double window = 3.0 * std::sqrt(2.0) * 2.0 / std::sqrt(static_cast<double>(trials));
  CHECK(std::abs(avg - 50.0) < window);

  // Tiny n*eps can go negative; consumers are expected to floor at 1.
  SplitRng rng2(6);
  bool negative_seen = false;
  for (int t = 0; t < 2000; ++t) negative_seen = negative_seen || privatize_count(1, 0.1, rng2) < 0.0;
  CHECK(negative_seen);
}

TEST_CASE("zero-noise release reproduces the plain aggregate") {
  SplitRng rng(21);
  Dataset data = random_dataset(rng, 50, 2);
  auto family = rff::make_family({KernelKind::kGaussian, 1.0}, 2);
  MechanismConfig cfg{.epsilon = 1.0, .repetitions = 8, .median_groups = 1, .rng_seed = 3};

  const auto noiseless = internal::release_without_noise(data, *family, {KernelKind::kGaussian, 1.0}, cfg);
  for (std::uint32_t i = 0; i < cfg.repetitions; ++i) {
    SparseVector f;
    double expect = 0.0;
    for (std::size_t p = 0; p < data.size(); ++p) {
      family->eval_f_into(noiseless.descriptors[i], data.point(p), f);
      expect += f.entries.at(0).value;
    }
    expect /= static_cast<double>(data.size());
    CHECK(noiseless.aggregate(i)[0] == doctest::Approx(expect).epsilon(1e-9));
  }

  // Single-point dataset: the aggregate is f(x) itself.
  Dataset one({Point{0.3, -0.4}}, 1.0);
  const auto single = internal::release_without_noise(one, *family, {KernelKind::kGaussian, 1.0}, cfg);
  SparseVector f;
  family->eval_f_into(single.descriptors[0], one.point(0), f);
  CHECK(single.aggregate(0)[0] == doctest::Approx(f.entries.at(0).value));
}

TEST_CASE("released noise scale uses the family l1 bound") {
  SplitRng rng(22);
  Dataset data = random_dataset(rng, 200, 2);
  KernelSpec kernel{KernelKind::kGaussian, 1.0};
  MechanismConfig cfg{.epsilon = 0.5, .repetitions = 4, .median_groups = 2, .rng_seed = 9};

  auto rff_family = rff::make_family(kernel, 2);
  const auto rel = curator_release(data, *rff_family, kernel, cfg);
  CHECK(rel.noise_scale == noise_scale(4, std::sqrt(2.0), 0.5, data.size()));

  auto lsh_family = lsh::make_family(2, 64);
  const auto rel_lsh = curator_release(data, *lsh_family, kernel, cfg);
  CHECK(rel_lsh.noise_scale == noise_scale(4, 1.0, 0.5, data.size()));

  auto fgt_family = fgt::make_family_for_dataset(data, 5);
  MechanismConfig fgt_cfg{.epsilon = 0.5, .repetitions = 1, .median_groups = 1, .rng_seed = 9};
  const auto rel_fgt = curator_release(data, *fgt_family, kernel, fgt_cfg);
  CHECK(rel_fgt.noise_scale == noise_scale(1, fgt::f_range_l1_bound(5, 2), 0.5, data.size()));
}

TEST_CASE("same seed gives a bit-identical release; different seed does not") {
  SplitRng rng(23);
  Dataset data = random_dataset(rng, 100, 2);
  KernelSpec kernel{KernelKind::kGaussian, 1.0};
  auto family = rff::make_family(kernel, 2);
  MechanismConfig cfg{.epsilon = 1.0, .repetitions = 16, .median_groups = 4, .rng_seed = 77};

  const auto bytes_a = serialize_released(curator_release(data, *family, kernel, cfg));
  const auto bytes_b = serialize_released(curator_release(data, *family, kernel, cfg));
  CHECK(bytes_a == bytes_b);

  cfg.rng_seed = 78;
  const auto bytes_c = serialize_released(curator_release(data, *family, kernel, cfg));
  CHECK(bytes_a != bytes_c);
}

TEST_CASE("parallel release is bit-identical to sequential") {
  SplitRng rng(24);
  Dataset data = random_dataset(rng, 64, 2);
  KernelSpec kernel{KernelKind::kGaussian, 1.0};
  auto family = rff::make_family(kernel, 2);

  MechanismConfig seq{.epsilon = 1.0, .repetitions = 32, .median_groups = 1, .rng_seed = 5, .threads = 1};
  MechanismConfig par = seq;
  par.threads = 4;
  CHECK(serialize_released(curator_release(data, *family, kernel, seq)) ==
        serialize_released(curator_release(data, *family, kernel, par)));
}

TEST_CASE("client_estimate reduces group means with a median") {
  // Hand-built release: Q=1, three groups with known aggregates. Using an LSH
  // family with one bucket makes g(y) = [1], so each group mean is just the
  // stored aggregate.
  auto family = lsh::make_family(1, 1);
  SplitRng rng(31);
  ReleasedFunction rel;
  rel.family_tag = FamilyTag::kLsh;
  rel.kernel = {KernelKind::kLaplacian, 1.0};
  rel.dim = 1;
  rel.epsilon = 1.0;
  rel.repetitions = 3;
  rel.median_groups = 3;
  rel.quantization = 1;
  rel.noise_scale = 1.0;
  for (int i = 0; i < 3; ++i) rel.descriptors.push_back(family->sample(rng));
  rel.noisy_aggregates = {0.1, 0.9, 0.5};
  CHECK(client_estimate(rel, *family, Point{0.0}) == doctest::Approx(0.5));

  // J=1 equals the plain mean.
  rel.median_groups = 1;
  CHECK(client_estimate(rel, *family, Point{0.0}) == doctest::Approx((0.1 + 0.9 + 0.5) / 3.0));
}

TEST_CASE("client inner-product work is O(S) per repetition") {
  SplitRng rng(32);
  Dataset data = random_dataset(rng, 30, 2);
  KernelSpec kernel{KernelKind::kGaussian, 1.0};
  auto family = rff::make_family(kernel, 2);
  CountingFamily counting(*family);
  MechanismConfig cfg{.epsilon = 1.0, .repetitions = 50, .median_groups = 1, .rng_seed = 4};
  const auto rel = curator_release(data, counting, kernel, cfg);

  counting.g_entries = 0;
  client_estimate(rel, counting, Point{0.0, 0.0});
  const auto s = counting.params().sparsity;
  CHECK(counting.g_entries <= rel.repetitions * s);
}

TEST_CASE("aggregate sensitivity obeys the 2*l1/n bound on neighboring data") {
  SplitRng rng(33);
  const std::size_t n = 40;
  KernelSpec kernel{KernelKind::kGaussian, 1.0};

  std::vector<std::unique_ptr<LsqFamily>> families;
  families.push_back(rff::make_family(kernel, 2));
  families.push_back(lsh::make_family(2, 32));
  families.push_back(fgt::make_family(4.0, 2, 4));

  for (const auto& family : families) {
    for (int trial = 0; trial < 10; ++trial) {
      Dataset full = random_dataset(rng, n, 2, -2.0, 2.0);
      std::vector<double> flat(full.flat().begin(), full.flat().end() - 2);
      Dataset smaller(std::move(flat), 2, 1.0);

      SplitRng sample_rng(trial * 997 + 1);
      const PairDescriptor desc = family->sample(sample_rng);
      const std::uint64_t q = family->params().quantization;
      std::vector<double> agg_full(q, 0.0), agg_small(q, 0.0);
      family->accumulate_mean_f(desc, full, agg_full);
      family->accumulate_mean_f(desc, smaller, agg_small);

      double l1 = 0.0;
      for (std::uint64_t i = 0; i < q; ++i) l1 += std::abs(agg_full[i] - agg_small[i]);
      CHECK(l1 <= 2.0 * family->f_range_l1() / static_cast<double>(n) + 1e-12);
    }
  }
}

TEST_CASE("averaging noisy estimates over seeds converges to the noiseless value") {
  SplitRng rng(34);
  Dataset data = random_dataset(rng, 60, 2);
  KernelSpec kernel{KernelKind::kGaussian, 1.0};
  auto family = rff::make_family(kernel, 2);
  const Point y{0.2, -0.1};

  // With J=1 the Laplace noise has mean zero, so the seed-averaged estimate
  // approaches the average non-private quantization estimate.
  const int seeds = 600;
  double noisy_sum = 0.0;
  double clean_sum = 0.0;
  for (int s = 0; s < seeds; ++s) {
    MechanismConfig cfg{.epsilon = 2.0, .repetitions = 8, .median_groups = 1,
                        .rng_seed = static_cast<std::uint64_t>(s)};
    noisy_sum += client_estimate(curator_release(data, *family, kernel, cfg), *family, y);
    clean_sum += client_estimate(internal::release_without_noise(data, *family, kernel, cfg),
                                 *family, y);
  }
  CHECK(noisy_sum / seeds == doctest::Approx(clean_sum / seeds).epsilon(0.05));
}

TEST_CASE("config validation") {
  SplitRng rng(35);
  Dataset data = random_dataset(rng, 10, 2);
  KernelSpec kernel{KernelKind::kGaussian, 1.0};
  auto family = rff::make_family(kernel, 2);

  MechanismConfig bad{.epsilon = 1.0, .repetitions = 10, .median_groups = 3, .rng_seed = 0};
  CHECK_THROWS_AS(curator_release(data, *family, kernel, bad), std::invalid_argument);
  bad = {.epsilon = -1.0, .repetitions = 10, .median_groups = 1, .rng_seed = 0};
  CHECK_THROWS_AS(curator_release(data, *family, kernel, bad), std::invalid_argument);
}

TEST_CASE("memory cap rejects oversized aggregate matrices") {
  SplitRng rng(36);
  Dataset data = random_dataset(rng, 10, 2);
  KernelSpec kernel{KernelKind::kLaplacian, 1.0};
  auto family = lsh::make_family(2, 1u << 20);
  MechanismConfig cfg{.epsilon = 1.0, .repetitions = 4, .median_groups = 1, .rng_seed = 0};
  cfg.memory_cap_bytes = 1024 * 1024;  // 1 MiB, far below 4 * 2^20 doubles
  CHECK_THROWS_WITH_AS(curator_release(data, *family, kernel, cfg),
                       doctest::Contains("memory cap"), std::invalid_argument);
}

TEST_CASE("serialization round-trips every family") {
  SplitRng rng(37);
  Dataset data = random_dataset(rng, 25, 2, -2.0, 2.0);
  KernelSpec kernel{KernelKind::kGaussian, 1.0};

  std::vector<std::unique_ptr<LsqFamily>> families;
  families.push_back(rff::make_family(kernel, 2));
  families.push_back(lsh::make_family(2, 16));
  families.push_back(fgt::make_family_for_dataset(data, 3));

  for (const auto& family : families) {
    MechanismConfig cfg{.epsilon = 0.7, .repetitions = family->tag() == FamilyTag::kFgt ? 1u : 6u,
                        .median_groups = 1, .rng_seed = 11};
    const auto rel = curator_release(data, *family, kernel, cfg);
    const auto bytes = serialize_released(rel);
    const auto back = deserialize_released(bytes);
    CHECK(serialize_released(back) == bytes);
    CHECK(back.noise_scale == rel.noise_scale);
    CHECK(back.quantization == rel.quantization);
    CHECK(back.noisy_aggregates == rel.noisy_aggregates);

    // Estimates computed from the round-tripped release agree exactly.
    const Point y{0.1, 0.2};
    const auto rebuilt = rebuild_family(back);
    CHECK(client_estimate(back, *rebuilt, y) == client_estimate(rel, *family, y));
  }
}

TEST_CASE("corrupted payloads produce structured errors") {
  SplitRng rng(38);
  Dataset data = random_dataset(rng, 10, 2);
  KernelSpec kernel{KernelKind::kGaussian, 1.0};
  auto family = rff::make_family(kernel, 2);
  MechanismConfig cfg{.epsilon = 1.0, .repetitions = 2, .median_groups = 1, .rng_seed = 1};
  auto bytes = serialize_released(curator_release(data, *family, kernel, cfg));

  auto truncated = bytes;
  truncated.resize(truncated.size() - 5);
  CHECK_THROWS_AS(deserialize_released(truncated), SerializationError);

  auto bad_magic = bytes;
  bad_magic[0] = 'X';
  CHECK_THROWS_AS(deserialize_released(bad_magic), SerializationError);

  auto bad_version = bytes;
  bad_version[4] = 99;
  CHECK_THROWS_WITH_AS(deserialize_released(bad_version), doctest::Contains("version"),
                       SerializationError);

  // Corrupt the first descriptor length field (right after the header).
  auto bad_len = bytes;
  const std::size_t header_size = 4 + 4 + 1 + 8 + 4 + 4 + 8 + 8 + 1 + 1 + 8 + 4 + 1;
  bad_len[header_size] = 0xFF;
  CHECK_THROWS_AS(deserialize_released(bad_len), SerializationError);
}

TEST_CASE("golden release file stays stable") {
  const char* path = "golden/rff_gaussian_seed7.lsqf";
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    in.open(std::string("../tests/") + path, std::ios::binary);
  }
  REQUIRE_MESSAGE(in.good(), "golden file missing; run tests from the build or tests directory");
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());

  const auto rel = deserialize_released(bytes);
  CHECK(rel.family_tag == FamilyTag::kRff);
  CHECK(rel.repetitions == 4);
  CHECK(rel.epsilon == 0.5);
  CHECK(serialize_released(rel) == bytes);

  // Regenerate with the frozen inputs and compare byte for byte.
  std::vector<double> flat;
  SplitRng gen(7);
  for (int i = 0; i < 20; ++i) flat.push_back(gen.uniform(-1.0, 1.0));
  Dataset data(std::move(flat), 2, 1.0);
  KernelSpec kernel{KernelKind::kGaussian, 1.0};
  auto family = rff::make_family(kernel, 2);
  MechanismConfig cfg{.epsilon = 0.5, .repetitions = 4, .median_groups = 2, .rng_seed = 7};
  CHECK(serialize_released(curator_release(data, *family, kernel, cfg)) == bytes);
}
