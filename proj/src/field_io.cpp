#include "potflow/field_io.hpp"

#include "potflow/format.hpp"

#include "potflow/errors.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>

namespace potflow {

namespace {

constexpr std::array<char, 8> kMagic{'P', 'F', 'L', 'O', 'W', '1', '\0', '\0'};

template <class T>
void put_le(std::string& buf, T value) {
  std::array<unsigned char, sizeof(T)> bytes;
  std::memcpy(bytes.data(), &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) {
    std::reverse(bytes.begin(), bytes.end());
  }
  buf.append(reinterpret_cast<const char*>(bytes.data()), sizeof(T));
}

template <class T>
T get_le(const char* p) {
  std::array<unsigned char, sizeof(T)> bytes;
  std::memcpy(bytes.data(), p, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) {
    std::reverse(bytes.begin(), bytes.end());
  }
  T value;
  std::memcpy(&value, bytes.data(), sizeof(T));
  return value;
}

std::uint32_t model_tag(ModelKind m) { return static_cast<std::uint32_t>(m); }

ModelKind model_from_tag(std::uint32_t tag) {
  if (tag > static_cast<std::uint32_t>(ModelKind::Burgers)) {
    throw UsageError("binary snapshot: unknown model tag " + std::to_string(tag));
  }
  return static_cast<ModelKind>(tag);
}

} // namespace

void write_field_csv(std::ostream& out, const Field& field) {
  const Grid& g = field.grid();
  const bool burgers = field.model() == ModelKind::Burgers;
  const bool full = field.model() == ModelKind::FullEuler;
  out << (g.dims == 2 ? "x,y," : "x,");
  if (burgers) {
    out << "u\n";
  } else {
    out << (g.dims == 2 ? "rho,v,w" : "rho,v") << (full ? ",E\n" : "\n");
  }
  const auto put = [&](double v, bool last) { out << format_double(v) << (last ? '\n' : ','); };
  const int ny = g.dims == 2 ? g.ny : 1;
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const State s = field.state(field.index(i, j));
      put(g.x_center(i), false);
      if (g.dims == 2) {
        put(g.y_center(j), false);
      }
      if (burgers) {
        put(s.u(0), true);
        continue;
      }
      const Primitives p = primitives(field.law(), s);
      put(p.rho, false);
      put(p.velocity[0], g.dims == 1 && !full);
      if (g.dims == 2) {
        put(p.velocity[1], !full);
      }
      if (full) {
        put(s.u(1 + g.dims), true);
      }
    }
  }
}

void write_field_binary(std::ostream& out, const Field& field) {
  const Grid& g = field.grid();
  std::string buf;
  buf.reserve(kBinaryHeaderBytes + field.data().size() * sizeof(double));
  buf.append(kMagic.data(), kMagic.size());
  put_le<std::uint32_t>(buf, static_cast<std::uint32_t>(g.dims));
  put_le<std::uint32_t>(buf, model_tag(field.model()));
  put_le<std::uint64_t>(buf, static_cast<std::uint64_t>(g.nx));
  put_le<std::uint64_t>(buf, static_cast<std::uint64_t>(g.dims == 2 ? g.ny : 1));
  put_le<double>(buf, g.lx);
  put_le<double>(buf, g.dims == 2 ? g.ly : 1.0);
  put_le<double>(buf, field.time());
  put_le<double>(buf, field.law().gamma());
  for (double v : field.data()) {
    put_le<double>(buf, v);
  }
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
}

Field read_field_binary(std::istream& in) {
  std::array<char, kBinaryHeaderBytes> header{};
  if (!in.read(header.data(), header.size())) {
    throw UsageError("binary snapshot: truncated header");
  }
  if (std::memcmp(header.data(), kMagic.data(), kMagic.size()) != 0) {
    throw UsageError("binary snapshot: bad magic");
  }
  const char* p = header.data() + 8;
  const auto dims = get_le<std::uint32_t>(p);
  const auto tag = get_le<std::uint32_t>(p + 4);
  const auto nx = get_le<std::uint64_t>(p + 8);
  const auto ny = get_le<std::uint64_t>(p + 16);
  const double lx = get_le<double>(p + 24);
  const double ly = get_le<double>(p + 32);
  const double time = get_le<double>(p + 40);
  const double gamma = get_le<double>(p + 48);
  const Grid grid = dims == 2 ? Grid::torus(static_cast<int>(nx), static_cast<int>(ny), lx, ly)
                              : Grid::line(static_cast<int>(nx), lx);
  Field field(grid, model_from_tag(tag), PolytropicLaw(gamma), time);
  auto& data = field.data();
  std::string raw(data.size() * sizeof(double), '\0');
  if (!in.read(raw.data(), static_cast<std::streamsize>(raw.size()))) {
    throw UsageError("binary snapshot: truncated data");
  }
  for (std::size_t k = 0; k < data.size(); ++k) {
    data[k] = get_le<double>(raw.data() + k * sizeof(double));
  }
  return field;
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const std::filesystem::path target(path);
  std::filesystem::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw UsageError("cannot open " + tmp.string() + " for writing");
    }
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) {
      throw UsageError("write failed for " + tmp.string());
    }
  }
  std::filesystem::rename(tmp, target);
}

} // namespace potflow
