#include "lsq/release_io.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>

#include <json.hpp>

#include "lsq/binio.hpp"
#include "lsq/fgt.hpp"
#include "lsq/lsh.hpp"
#include "lsq/rff.hpp"

namespace lsq {

namespace {

constexpr std::uint32_t kFormatVersion = 1;

struct Header {
  FamilyTag tag;
  double epsilon;
  std::uint32_t repetitions;
  std::uint32_t median_groups;
  std::uint64_t quantization;
  double noise_scale;
  KernelSpec kernel;
  std::uint32_t dim;
  bool clamp_default;
};

void write_header(ByteWriter& w, const Header& h) {
  w.ascii("LSQF");
  w.u32(kFormatVersion);
  w.u8(static_cast<std::uint8_t>(h.tag));
  w.f64(h.epsilon);
  w.u32(h.repetitions);
  w.u32(h.median_groups);
  w.u64(h.quantization);
  w.f64(h.noise_scale);
  w.u8(static_cast<std::uint8_t>(h.kernel.kind));
  w.u8(h.kernel.normalized_cauchy ? 1 : 0);
  w.f64(h.kernel.bandwidth);
  w.u32(h.dim);
  w.u8(h.clamp_default ? 1 : 0);
}

Header read_header(ByteReader& r) {
  r.need(4);
  char magic[4];
  for (char& c : magic) c = static_cast<char>(r.u8());
  if (std::memcmp(magic, "LSQF", 4) != 0) {
    throw SerializationError("bad magic: not a released-function container");
  }
  const std::uint32_t version = r.u32();
  if (version != kFormatVersion) {
    throw SerializationError("unsupported container version " + std::to_string(version));
  }
  Header h{};
  const std::uint8_t tag = r.u8();
  if (tag > 4) throw SerializationError("bad family tag " + std::to_string(tag));
  h.tag = static_cast<FamilyTag>(tag);
  h.epsilon = r.f64();
  h.repetitions = r.u32();
  h.median_groups = r.u32();
  h.quantization = r.u64();
  h.noise_scale = r.f64();
  const std::uint8_t kind = r.u8();
  if (kind > 2) throw SerializationError("bad kernel kind " + std::to_string(kind));
  h.kernel.kind = static_cast<KernelKind>(kind);
  h.kernel.normalized_cauchy = r.u8() != 0;
  h.kernel.bandwidth = r.f64();
  h.dim = r.u32();
  h.clamp_default = r.u8() != 0;
  return h;
}

}  // namespace

std::unique_ptr<LsqFamily> rebuild_family(const ReleasedFunction& released) {
  switch (released.family_tag) {
    case FamilyTag::kRff:
      return rff::make_family(released.kernel.scaled_to_unit(), released.dim);
    case FamilyTag::kFgt: {
      const auto& d = std::get<FgtDescriptor>(released.descriptors.at(0));
      return std::make_unique<fgt::FgtFamily>(d.radius, d.dim, d.rho, d.center);
    }
    case FamilyTag::kLsh: {
      const auto& d = std::get<RandomBinningDescriptor>(released.descriptors.at(0));
      return lsh::make_family(released.dim, d.buckets);
    }
    default:
      throw std::invalid_argument("rebuild_family: tag does not name a quantization family");
  }
}

std::vector<std::uint8_t> serialize_any(const AnyRelease& release) {
  if (const auto* rf = std::get_if<ReleasedFunction>(&release)) {
    return serialize_released(*rf);
  }
  ByteWriter w;
  if (const auto* b = std::get_if<baselines::BernsteinRelease>(&release)) {
    write_header(w, {FamilyTag::kBernstein, b->epsilon, 1, 1, b->noisy_values.size(),
                     b->noise_scale, b->kernel, b->dim, false});
    ByteWriter body;
    body.u32(b->order);
    body.u32(b->dim);
    body.u32(b->iteration_order);
    for (const auto& [lo, hi] : b->domain_box) {
      body.f64(lo);
      body.f64(hi);
    }
    w.u32(static_cast<std::uint32_t>(body.data().size()));
    w.bytes(body.data());
    for (double v : b->noisy_values) w.f64(v);
    return w.take();
  }
  const auto& ns = std::get<baselines::NoisySampleRelease>(release);
  write_header(w, {FamilyTag::kNoisySample, ns.epsilon, 1, 1, 1, ns.noise_scale(), ns.kernel,
                   ns.dim, false});
  ByteWriter body;
  body.u32(ns.sample_size);
  body.u64(ns.n_remaining);
  w.u32(static_cast<std::uint32_t>(body.data().size()));
  w.bytes(body.data());
  w.f64(ns.value);
  return w.take();
}

AnyRelease deserialize_any(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes);
  const Header h = read_header(r);
  switch (h.tag) {
    case FamilyTag::kBernstein: {
      const std::uint32_t len = r.u32();
      r.need(len);
      baselines::BernsteinRelease b;
      b.epsilon = h.epsilon;
      b.noise_scale = h.noise_scale;
      b.kernel = h.kernel;
      b.order = r.u32();
      b.dim = r.u32();
      b.iteration_order = r.u32();
      if (b.dim != h.dim) throw SerializationError("bernstein descriptor dimension mismatch");
      b.domain_box.resize(b.dim);
      for (auto& [lo, hi] : b.domain_box) {
        lo = r.f64();
        hi = r.f64();
      }
      if (r.remaining() != h.quantization * 8) {
        throw SerializationError("bernstein lattice section has unexpected size");
      }
      b.noisy_values.resize(h.quantization);
      for (double& v : b.noisy_values) v = r.f64();
      return b;
    }
    case FamilyTag::kNoisySample: {
      const std::uint32_t len = r.u32();
      r.need(len);
      baselines::NoisySampleRelease ns;
      ns.epsilon = h.epsilon;
      ns.kernel = h.kernel;
      ns.dim = h.dim;
      ns.sample_size = r.u32();
      ns.n_remaining = r.u64();
      ns.value = r.f64();
      if (r.remaining() != 0) throw SerializationError("trailing bytes after noisy-sample value");
      return ns;
    }
    default:
      return deserialize_released(bytes);
  }
}

void save_release(const AnyRelease& release, const std::string& path) {
  const auto bytes = serialize_any(release);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("short write to '" + path + "'");
}

AnyRelease load_release(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return deserialize_any(bytes);
}

ReleaseEvaluator::ReleaseEvaluator(const AnyRelease& release) : release_(release) {
  if (const auto* rf = std::get_if<ReleasedFunction>(&release)) {
    family_ = rebuild_family(*rf);
  } else if (const auto* b = std::get_if<baselines::BernsteinRelease>(&release)) {
    bernstein_ = std::make_unique<baselines::BernsteinEvaluator>(*b);
  }
}

double ReleaseEvaluator::operator()(const Point& query, bool clamp) const {
  if (const auto* rf = std::get_if<ReleasedFunction>(&release_)) {
    const Point scaled = scale_point(query, rf->kernel.bandwidth);
    return client_estimate(*rf, *family_, scaled, clamp);
  }
  if (const auto* b = std::get_if<baselines::BernsteinRelease>(&release_)) {
    const Point scaled = scale_point(query, b->kernel.bandwidth);
    double est = (*bernstein_)(scaled).value;
    if (clamp) est = std::clamp(est, 0.0, 1.0);
    return est;
  }
  const auto& ns = std::get<baselines::NoisySampleRelease>(release_);
  const Point scaled = scale_point(query, ns.kernel.bandwidth);
  double est = baselines::noisy_sample_estimate(ns, scaled);
  if (clamp) est = std::clamp(est, 0.0, 1.0);
  return est;
}

double estimate_any(const AnyRelease& release, const Point& query, bool clamp) {
  return ReleaseEvaluator(release)(query, clamp);
}

double release_epsilon(const AnyRelease& release) {
  return std::visit([](const auto& r) { return r.epsilon; }, release);
}

std::uint32_t release_dim(const AnyRelease& release) {
  return std::visit([](const auto& r) { return r.dim; }, release);
}

bool release_clamp_default(const AnyRelease& release) {
  if (const auto* rf = std::get_if<ReleasedFunction>(&release)) return rf->clamp_default;
  return false;
}

namespace {

nlohmann::json kernel_json(const KernelSpec& spec) {
  return {{"kind", kernel_kind_name(spec.kind)},
          {"bandwidth", spec.bandwidth},
          {"normalized_cauchy", spec.normalized_cauchy}};
}

nlohmann::json descriptor_json(const PairDescriptor& desc) {
  if (const auto* rff = std::get_if<RffDescriptor>(&desc)) {
    return {{"omega", rff->omega}, {"beta", rff->beta}};
  }
  if (const auto* fgt = std::get_if<FgtDescriptor>(&desc)) {
    return {{"rho", fgt->rho},
            {"radius", fgt->radius},
            {"dim", fgt->dim},
            {"center", fgt->center},
            {"cells", fgt->cells}};
  }
  const auto& lsh = std::get<RandomBinningDescriptor>(desc);
  return {{"pitch", lsh.pitch},
          {"shift", lsh.shift},
          {"hash_seed", lsh.hash_seed},
          {"buckets", lsh.buckets}};
}

}  // namespace

std::string release_to_json(const AnyRelease& release) {
  nlohmann::json j;
  if (const auto* rf = std::get_if<ReleasedFunction>(&release)) {
    j["family"] = family_tag_name(rf->family_tag);
    j["epsilon"] = rf->epsilon;
    j["repetitions"] = rf->repetitions;
    j["median_groups"] = rf->median_groups;
    j["quantization"] = rf->quantization;
    j["noise_scale"] = rf->noise_scale;
    j["kernel"] = kernel_json(rf->kernel);
    j["dim"] = rf->dim;
    j["clamp_default"] = rf->clamp_default;
    j["descriptors"] = nlohmann::json::array();
    for (const auto& d : rf->descriptors) j["descriptors"].push_back(descriptor_json(d));
    j["noisy_aggregates"] = rf->noisy_aggregates;
  } else if (const auto* b = std::get_if<baselines::BernsteinRelease>(&release)) {
    j["family"] = "bernstein";
    j["epsilon"] = b->epsilon;
    j["order"] = b->order;
    j["iteration_order"] = b->iteration_order;
    j["dim"] = b->dim;
    j["noise_scale"] = b->noise_scale;
    j["kernel"] = kernel_json(b->kernel);
    j["domain_box"] = b->domain_box;
    j["noisy_values"] = b->noisy_values;
  } else {
    const auto& ns = std::get<baselines::NoisySampleRelease>(release);
    j["family"] = "noisysample";
    j["epsilon"] = ns.epsilon;
    j["dim"] = ns.dim;
    j["sample_size"] = ns.sample_size;
    j["n_remaining"] = ns.n_remaining;
    j["noise_scale"] = ns.noise_scale();
    j["kernel"] = kernel_json(ns.kernel);
    j["value"] = ns.value;
  }
  return j.dump(2);
}

}  // namespace lsq
