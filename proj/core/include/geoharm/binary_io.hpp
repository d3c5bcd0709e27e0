#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <iosfwd>
#include <istream>
#include <ostream>
#include <string>

#include "geoharm/errors.hpp"

namespace geoharm::io {

// All on-disk integers and doubles are little-endian.

inline void write_bytes(std::ostream& out, const void* data, std::size_t n) {
  out.write(static_cast<const char*>(data), static_cast<std::streamsize>(n));
}

inline void read_bytes(std::istream& in, void* data, std::size_t n) {
  in.read(static_cast<char*>(data), static_cast<std::streamsize>(n));
  if (static_cast<std::size_t>(in.gcount()) != n) {
    throw parse_error("binary file truncated");
  }
}

template <typename T>
void write_le(std::ostream& out, T value) {
  static_assert(std::is_integral_v<T>);
  unsigned char bytes[sizeof(T)];
  auto u = static_cast<std::make_unsigned_t<T>>(value);
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    bytes[i] = static_cast<unsigned char>(u >> (8 * i));
  }
  write_bytes(out, bytes, sizeof(T));
}

template <typename T>
T read_le(std::istream& in) {
  static_assert(std::is_integral_v<T>);
  unsigned char bytes[sizeof(T)];
  read_bytes(in, bytes, sizeof(T));
  std::make_unsigned_t<T> u = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    u |= static_cast<std::make_unsigned_t<T>>(bytes[i]) << (8 * i);
  }
  return static_cast<T>(u);
}

inline void write_f64(std::ostream& out, double value) {
  write_le<std::uint64_t>(out, std::bit_cast<std::uint64_t>(value));
}

inline double read_f64(std::istream& in) {
  return std::bit_cast<double>(read_le<std::uint64_t>(in));
}

inline void write_string(std::ostream& out, const std::string& s) {
  write_le<std::uint32_t>(out, static_cast<std::uint32_t>(s.size()));
  write_bytes(out, s.data(), s.size());
}

inline std::string read_string(std::istream& in) {
  const auto n = read_le<std::uint32_t>(in);
  std::string s(n, '\0');
  if (n > 0) read_bytes(in, s.data(), n);
  return s;
}

}  // namespace geoharm::io
