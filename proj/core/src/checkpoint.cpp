#include "segmix/nn/checkpoint.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace segmix::nn {

namespace {

constexpr char kMagic[8] = {'S', 'M', 'X', 'C', 'K', 'P', 'T', '1'};

template <typename T>
void write_raw(std::ostream& os, const T& v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_raw(std::istream& is) {
  T v{};
  if (!is.read(reinterpret_cast<char*>(&v), sizeof(T)))
    throw std::runtime_error("checkpoint: truncated file");
  return v;
}

}  // namespace

void save_checkpoint(const ParamSet& ps, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("checkpoint: cannot open for write: " + path);
  os.write(kMagic, sizeof(kMagic));
  write_raw<std::uint32_t>(os, static_cast<std::uint32_t>(ps.entries().size()));
  for (const auto& e : ps.entries()) {
    write_raw<std::uint32_t>(os, static_cast<std::uint32_t>(e.name.size()));
    os.write(e.name.data(), static_cast<std::streamsize>(e.name.size()));
    write_raw<std::uint64_t>(os, e.value.rows());
    write_raw<std::uint64_t>(os, e.value.cols());
    os.write(reinterpret_cast<const char*>(e.value.data().data()),
             static_cast<std::streamsize>(e.value.numel() * sizeof(double)));
  }
  if (!os) throw std::runtime_error("checkpoint: write failed: " + path);
}

ParamSet load_checkpoint(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("checkpoint: cannot open: " + path);
  char magic[8];
  if (!is.read(magic, sizeof(magic)) || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw std::runtime_error("checkpoint: bad magic in " + path);
  auto count = read_raw<std::uint32_t>(is);
  ParamSet ps;
  for (std::uint32_t k = 0; k < count; ++k) {
    auto name_len = read_raw<std::uint32_t>(is);
    std::string name(name_len, '\0');
    if (!is.read(name.data(), name_len)) throw std::runtime_error("checkpoint: truncated name");
    auto rows = read_raw<std::uint64_t>(is);
    auto cols = read_raw<std::uint64_t>(is);
    Tensor& t = ps.add(name, static_cast<std::size_t>(rows), static_cast<std::size_t>(cols));
    if (!is.read(reinterpret_cast<char*>(t.data().data()),
                 static_cast<std::streamsize>(t.numel() * sizeof(double))))
      throw std::runtime_error("checkpoint: truncated values for " + name);
  }
  return ps;
}

}  // namespace segmix::nn
