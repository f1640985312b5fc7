#include <cstring>

#include "lsq/binio.hpp"
#include "lsq/mechanism.hpp"

namespace lsq {

namespace {

constexpr std::uint32_t kFormatVersion = 1;

void write_kernel(ByteWriter& w, const KernelSpec& spec) {
  w.u8(static_cast<std::uint8_t>(spec.kind));
  w.u8(spec.normalized_cauchy ? 1 : 0);
  w.f64(spec.bandwidth);
}

KernelSpec read_kernel(ByteReader& r) {
  KernelSpec spec;
  const std::uint8_t kind = r.u8();
  if (kind > 2) throw SerializationError("bad kernel kind " + std::to_string(kind));
  spec.kind = static_cast<KernelKind>(kind);
  spec.normalized_cauchy = r.u8() != 0;
  spec.bandwidth = r.f64();
  return spec;
}

void write_descriptor(ByteWriter& w, const PairDescriptor& desc) {
  ByteWriter body;
  if (const auto* rff = std::get_if<RffDescriptor>(&desc)) {
    for (double v : rff->omega) body.f64(v);
    body.f64(rff->beta);
  } else if (const auto* fgt = std::get_if<FgtDescriptor>(&desc)) {
    body.u32(static_cast<std::uint32_t>(fgt->rho));
    body.f64(fgt->radius);
    body.u32(fgt->dim);
    for (double v : fgt->center) body.f64(v);
    body.u64(fgt->cell_count());
    for (std::int32_t c : fgt->cells) body.i32(c);
  } else if (const auto* lsh = std::get_if<RandomBinningDescriptor>(&desc)) {
    body.u32(static_cast<std::uint32_t>(lsh->pitch.size()));
    for (double v : lsh->pitch) body.f64(v);
    for (double v : lsh->shift) body.f64(v);
    body.u64(lsh->hash_seed);
    body.u64(lsh->buckets);
  }
  w.u32(static_cast<std::uint32_t>(body.data().size()));
  w.bytes(body.data());
}

PairDescriptor read_descriptor(ByteReader& r, FamilyTag tag, std::uint32_t dim) {
  const std::uint32_t len = r.u32();
  r.need(len);
  const std::size_t end = r.position() + len;
  PairDescriptor desc;
  switch (tag) {
    case FamilyTag::kRff: {
      RffDescriptor d;
      d.omega.resize(dim);
      for (auto& v : d.omega) v = r.f64();
      d.beta = r.f64();
      desc = std::move(d);
      break;
    }
    case FamilyTag::kFgt: {
      FgtDescriptor d;
      d.rho = static_cast<std::int32_t>(r.u32());
      d.radius = r.f64();
      d.dim = r.u32();
      d.center.resize(d.dim);
      for (auto& v : d.center) v = r.f64();
      const std::uint64_t cells = r.u64();
      d.cells.resize(cells * d.dim);
      for (auto& c : d.cells) c = r.i32();
      desc = std::move(d);
      break;
    }
    case FamilyTag::kLsh: {
      RandomBinningDescriptor d;
      const std::uint32_t d_axes = r.u32();
      d.pitch.resize(d_axes);
      for (auto& v : d.pitch) v = r.f64();
      d.shift.resize(d_axes);
      for (auto& v : d.shift) v = r.f64();
      d.hash_seed = r.u64();
      d.buckets = r.u64();
      desc = std::move(d);
      break;
    }
    default:
      throw SerializationError("descriptor block for unsupported family tag");
  }
  if (r.position() != end) {
    throw SerializationError("descriptor block length mismatch: declared " + std::to_string(len) +
                             " bytes, consumed " + std::to_string(r.position() - (end - len)));
  }
  return desc;
}

}  // namespace

std::vector<std::uint8_t> serialize_released(const ReleasedFunction& released) {
  ByteWriter w;
  w.ascii("LSQF");
  w.u32(kFormatVersion);
  w.u8(static_cast<std::uint8_t>(released.family_tag));
  w.f64(released.epsilon);
  w.u32(released.repetitions);
  w.u32(released.median_groups);
  w.u64(released.quantization);
  w.f64(released.noise_scale);
  write_kernel(w, released.kernel);
  w.u32(released.dim);
  w.u8(released.clamp_default ? 1 : 0);
  for (const auto& desc : released.descriptors) write_descriptor(w, desc);
  for (double v : released.noisy_aggregates) w.f64(v);
  return w.take();
}

ReleasedFunction deserialize_released(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes);
  r.need(4);
  char magic[5] = {0};
  for (int i = 0; i < 4; ++i) magic[i] = static_cast<char>(r.u8());
  if (std::strcmp(magic, "LSQF") != 0) {
    throw SerializationError("bad magic: not a released-function container");
  }
  const std::uint32_t version = r.u32();
  if (version != kFormatVersion) {
    throw SerializationError("unsupported container version " + std::to_string(version) +
                             " (expected " + std::to_string(kFormatVersion) + ")");
  }
  ReleasedFunction out;
  const std::uint8_t tag = r.u8();
  if (tag > 4) throw SerializationError("bad family tag " + std::to_string(tag));
  out.family_tag = static_cast<FamilyTag>(tag);
  out.epsilon = r.f64();
  out.repetitions = r.u32();
  out.median_groups = r.u32();
  out.quantization = r.u64();
  out.noise_scale = r.f64();
  out.kernel = read_kernel(r);
  out.dim = r.u32();
  out.clamp_default = r.u8() != 0;

  if (out.repetitions == 0) throw SerializationError("container declares zero repetitions");
  if (out.median_groups == 0 || out.repetitions % out.median_groups != 0) {
    throw SerializationError("container median group count does not divide repetitions");
  }

  out.descriptors.reserve(out.repetitions);
  for (std::uint32_t i = 0; i < out.repetitions; ++i) {
    out.descriptors.push_back(read_descriptor(r, out.family_tag, out.dim));
  }
  const std::uint64_t total = static_cast<std::uint64_t>(out.repetitions) * out.quantization;
  if (r.remaining() != total * 8) {
    throw SerializationError("aggregate section has " + std::to_string(r.remaining()) +
                             " bytes, expected " + std::to_string(total * 8));
  }
  out.noisy_aggregates.resize(total);
  for (auto& v : out.noisy_aggregates) v = r.f64();
  return out;
}

}  // namespace lsq
