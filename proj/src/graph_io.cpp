#include "hampack/graph_io.hpp"

#include <array>
#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "hampack/error.hpp"

namespace hampack {

namespace {

constexpr std::array<char, 5> kMagic{'H', 'P', 'L', 'X', '1'};

void put_u64(std::ostream& out, std::uint64_t value) {
  std::array<char, 8> bytes{};
  for (int i = 0; i < 8; ++i) bytes[i] = static_cast<char>((value >> (8 * i)) & 0xFF);
  out.write(bytes.data(), bytes.size());
}

std::uint64_t get_u64(std::istream& in) {
  std::array<unsigned char, 8> bytes{};
  in.read(reinterpret_cast<char*>(bytes.data()), bytes.size());
  if (!in) throw InvalidInput("truncated binary digraph");
  std::uint64_t value = 0;
  for (int i = 7; i >= 0; --i) value = (value << 8) | bytes[i];
  return value;
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace

void write_digraph_text(std::ostream& out, const Digraph& d) {
  out << "digraph n=" << d.n() << " m=" << d.edge_count() << '\n';
  for (Vertex u = 0; u < d.n(); ++u) d.out(u).for_each([&](int v) { out << u << ' ' << v << '\n'; });
}

Digraph read_digraph_text(std::istream& in) {
  std::string line;
  long long n = -1;
  long long m = -1;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (std::sscanf(line.c_str(), "digraph n=%lld m=%lld", &n, &m) != 2)
      throw InvalidInput("expected header 'digraph n=<n> m=<m>', got: " + line);
    break;
  }
  if (n < 0 || m < 0) throw InvalidInput("missing digraph header");
  Digraph d(static_cast<int>(n));
  long long read = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream row(line);
    long long u = -1;
    long long v = -1;
    if (!(row >> u >> v)) throw InvalidInput("malformed arc line: " + line);
    if (u < 0 || v < 0 || u >= n || v >= n) throw InvalidInput("arc endpoint out of range: " + line);
    if (!d.add_arc(static_cast<Vertex>(u), static_cast<Vertex>(v))) throw InvalidInput("duplicate arc: " + line);
    ++read;
  }
  if (read != m) throw InvalidInput("header declares " + std::to_string(m) + " arcs, file has " + std::to_string(read));
  return d;
}

void write_digraph_binary(std::ostream& out, const Digraph& d) {
  out.write(kMagic.data(), kMagic.size());
  put_u64(out, static_cast<std::uint64_t>(d.n()));
  for (Vertex u = 0; u < d.n(); ++u)
    for (auto word : d.out(u).words()) put_u64(out, word);
}

Digraph read_digraph_binary(std::istream& in) {
  std::array<char, 5> magic{};
  in.read(magic.data(), magic.size());
  if (!in || magic != kMagic) throw InvalidInput("bad magic: not an HPLX1 digraph");
  const std::uint64_t n64 = get_u64(in);
  if (n64 > (1U << 30)) throw InvalidInput("binary digraph vertex count too large");
  const int n = static_cast<int>(n64);
  Digraph d(n);
  const std::size_t words = Bitset::word_count(n);
  for (Vertex u = 0; u < n; ++u) {
    for (std::size_t k = 0; k < words; ++k) {
      std::uint64_t word = get_u64(in);
      while (word) {
        const int bit = std::countr_zero(word);
        const auto v = static_cast<Vertex>(k * 64 + static_cast<std::size_t>(bit));
        if (v >= n) throw InvalidInput("padding bit set in binary digraph row");
        if (v == u) throw InvalidInput("self-loop in binary digraph");
        d.add_arc(u, v);
        word &= word - 1;
      }
    }
  }
  return d;
}

Digraph load_digraph(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open " + path);
  std::array<char, 5> head{};
  in.read(head.data(), head.size());
  const bool binary = in.gcount() == 5 && head == kMagic;
  in.clear();
  in.seekg(0);
  return binary ? read_digraph_binary(in) : read_digraph_text(in);
}

void save_digraph(const std::string& path, const Digraph& d) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw InvalidInput("cannot write " + tmp);
    if (ends_with(path, ".bin"))
      write_digraph_binary(out, d);
    else
      write_digraph_text(out, d);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) throw InvalidInput("cannot move " + tmp + " to " + path);
}

}  // namespace hampack
