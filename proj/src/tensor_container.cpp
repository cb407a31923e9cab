// SPDX-License-Identifier: Apache-2.0
#include <helm/tensor_container.hpp>

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>

static_assert(std::endian::native == std::endian::little, "tensor container I/O assumes a little-endian host");

namespace helm {

namespace {

constexpr char kMagic[8] = {'N', 'O', 'T', 'E', 'N', 'S', 'R', '1'};
constexpr std::uint64_t kAlign = 8;

DType parse_dtype(const std::string& s, const std::string& name) {
  if (s == "f32") return DType::f32;
  if (s == "f64") return DType::f64;
  throw FormatError("container: tensor '" + name + "' has unsupported dtype '" + s + "'");
}

std::vector<std::uint8_t> slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in), {});
}

std::uint64_t read_u64(const std::uint8_t* p) {
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | p[i];
  return v;
}

}  // namespace

const char* dtype_name(DType d) { return d == DType::f32 ? "f32" : "f64"; }
std::size_t dtype_size(DType d) { return d == DType::f32 ? 4 : 8; }

std::string fnv1a64_hex(std::span<const std::uint8_t> bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (auto b : bytes) {
    h ^= b;
    h *= 0x100000001b3ull;
  }
  static const char* digits = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i) {
    s[static_cast<std::size_t>(i)] = digits[h & 0xf];
    h >>= 4;
  }
  return s;
}

std::uint64_t Tensor::numel() const {
  std::uint64_t n = 1;
  for (auto d : shape) n *= d;
  return n;
}

Tensor Tensor::from_f64(std::vector<std::uint64_t> shape, std::span<const double> values) {
  Tensor t;
  t.dtype = DType::f64;
  t.shape = std::move(shape);
  if (t.numel() != values.size()) throw DimensionError("tensor: shape does not match value count");
  t.bytes.resize(values.size() * 8);
  std::memcpy(t.bytes.data(), values.data(), t.bytes.size());
  return t;
}

Tensor Tensor::from_f32(std::vector<std::uint64_t> shape, std::span<const float> values) {
  Tensor t;
  t.dtype = DType::f32;
  t.shape = std::move(shape);
  if (t.numel() != values.size()) throw DimensionError("tensor: shape does not match value count");
  t.bytes.resize(values.size() * 4);
  std::memcpy(t.bytes.data(), values.data(), t.bytes.size());
  return t;
}

Tensor Tensor::from_values(DType dtype, std::vector<std::uint64_t> shape, std::span<const double> values) {
  if (dtype == DType::f64) return from_f64(std::move(shape), values);
  std::vector<float> f(values.begin(), values.end());
  return from_f32(std::move(shape), f);
}

std::vector<double> Tensor::to_f64() const {
  const auto n = numel();
  std::vector<double> out(n);
  if (dtype == DType::f64) {
    std::memcpy(out.data(), bytes.data(), n * 8);
  } else {
    std::vector<float> f(n);
    std::memcpy(f.data(), bytes.data(), n * 4);
    std::copy(f.begin(), f.end(), out.begin());
  }
  return out;
}

const Tensor& TensorContainer::at(const std::string& name) const {
  auto it = tensors.find(name);
  if (it == tensors.end()) throw FormatError("container: missing tensor '" + name + "'");
  return it->second;
}

std::vector<std::uint8_t> serialize_container(const TensorContainer& c) {
  nlohmann::json header = nlohmann::json::object();
  std::uint64_t offset = 0;
  for (const auto& [name, t] : c.tensors) {
    if (name == "meta") throw FormatError("container: 'meta' is a reserved name");
    if (t.bytes.size() != t.nbytes()) throw FormatError("container: tensor '" + name + "' byte size mismatch");
    header[name] = {{"dtype", dtype_name(t.dtype)},
                    {"shape", t.shape},
                    {"offset", offset},
                    {"nbytes", t.nbytes()},
                    {"checksum", fnv1a64_hex(t.bytes)}};
    offset += (t.nbytes() + kAlign - 1) / kAlign * kAlign;
  }
  header["meta"] = c.meta;
  const std::string hs = header.dump();

  std::vector<std::uint8_t> out;
  out.reserve(16 + hs.size() + offset);
  out.insert(out.end(), kMagic, kMagic + 8);
  const std::uint64_t len = hs.size();
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(len >> (8 * i)));
  out.insert(out.end(), hs.begin(), hs.end());
  const std::size_t data_start = out.size();
  out.resize(data_start + offset, 0);
  for (const auto& [name, t] : c.tensors) {
    const auto off = header[name]["offset"].get<std::uint64_t>();
    std::copy(t.bytes.begin(), t.bytes.end(), out.begin() + static_cast<std::ptrdiff_t>(data_start + off));
  }
  return out;
}

namespace {

nlohmann::json parse_header(std::span<const std::uint8_t> bytes, std::size_t* data_start) {
  if (bytes.size() < 16 || std::memcmp(bytes.data(), kMagic, 8) != 0)
    throw FormatError("container: bad magic (expected NOTENSR1)");
  const std::uint64_t len = read_u64(bytes.data() + 8);
  if (len > bytes.size() - 16) throw FormatError("container: header length exceeds file size");
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(bytes.begin() + 16, bytes.begin() + 16 + static_cast<std::ptrdiff_t>(len));
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("container: corrupt JSON header: ") + e.what());
  }
  if (!header.is_object()) throw FormatError("container: header is not a JSON object");
  if (data_start) *data_start = 16 + len;
  return header;
}

}  // namespace

TensorContainer parse_container(std::span<const std::uint8_t> bytes) {
  std::size_t data_start = 0;
  const auto header = parse_header(bytes, &data_start);
  const std::uint64_t data_size = bytes.size() - data_start;

  TensorContainer c;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> ranges;
  std::vector<std::string> range_names;
  for (const auto& [name, entry] : header.items()) {
    if (name == "meta") {
      c.meta = entry;
      continue;
    }
    try {
      Tensor t;
      t.dtype = parse_dtype(entry.at("dtype").get<std::string>(), name);
      t.shape = entry.at("shape").get<std::vector<std::uint64_t>>();
      const auto offset = entry.at("offset").get<std::uint64_t>();
      const auto nbytes = entry.at("nbytes").get<std::uint64_t>();
      if (nbytes != t.nbytes())
        throw FormatError("container: tensor '" + name + "' nbytes does not match its shape and dtype");
      if (offset > data_size || nbytes > data_size - offset)
        throw FormatError("container: tensor '" + name + "' extends past the end of the data section (truncated?)");
      const auto* p = bytes.data() + data_start + offset;
      t.bytes.assign(p, p + nbytes);
      if (entry.contains("checksum")) {
        if (entry["checksum"].get<std::string>() != fnv1a64_hex(t.bytes))
          throw FormatError("container: checksum mismatch for tensor '" + name + "'");
      }
      ranges.emplace_back(offset, nbytes);
      range_names.push_back(name);
      c.tensors.emplace(name, std::move(t));
    } catch (const nlohmann::json::exception& e) {
      throw FormatError("container: malformed header entry for tensor '" + name + "': " + e.what());
    }
  }
  std::vector<std::size_t> order(ranges.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return ranges[a].first < ranges[b].first; });
  for (std::size_t i = 1; i < order.size(); ++i) {
    const auto& prev = ranges[order[i - 1]];
    if (prev.first + prev.second > ranges[order[i]].first && prev.second > 0 && ranges[order[i]].second > 0)
      throw FormatError("container: tensors '" + range_names[order[i - 1]] + "' and '" + range_names[order[i]] +
                        "' overlap");
  }
  return c;
}

void write_container(const std::filesystem::path& path, const TensorContainer& c) {
  const auto bytes = serialize_container(c);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw FormatError("short write to " + path.string());
}

TensorContainer read_container(const std::filesystem::path& path) { return parse_container(slurp(path)); }

nlohmann::json read_container_header(const std::filesystem::path& path) {
  return parse_header(slurp(path), nullptr);
}

}  // namespace helm
