#include "covlap/field_io.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>

namespace covlap {

namespace {

constexpr char kMagic[4] = {'G', 'F', 'L', 'D'};

}  // namespace

void write_field(const ScalarField& F, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);

  const std::uint32_t n = static_cast<std::uint32_t>(F.grid().n);
  const std::uint32_t d = static_cast<std::uint32_t>(F.dim());
  const std::uint32_t reserved = 0;
  out.write(kMagic, 4);
  out.write(reinterpret_cast<const char*>(&n), 4);
  out.write(reinterpret_cast<const char*>(&d), 4);
  out.write(reinterpret_cast<const char*>(&reserved), 4);
  out.write(reinterpret_cast<const char*>(F.data().data()),
            static_cast<std::streamsize>(F.data().size() * sizeof(double)));
  if (!out) throw IoError("write failed: " + path);
}

ScalarField read_field(const std::string& path, const Grid3& grid,
                       const AlgebraPtr& alg) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open for reading: " + path);

  char magic[4];
  std::uint32_t n = 0, d = 0, reserved = 0;
  in.read(magic, 4);
  in.read(reinterpret_cast<char*>(&n), 4);
  in.read(reinterpret_cast<char*>(&d), 4);
  in.read(reinterpret_cast<char*>(&reserved), 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0)
    throw IoError("not a GFLD file: " + path);
  if (n != static_cast<std::uint32_t>(grid.n))
    throw IoError(path + ": node count " + std::to_string(n) +
                  " does not match grid n=" + std::to_string(grid.n));
  if (d != static_cast<std::uint32_t>(alg->dim()))
    throw IoError(path + ": coefficient count " + std::to_string(d) +
                  " does not match algebra dim=" + std::to_string(alg->dim()));

  ScalarField F(grid, alg);
  in.read(reinterpret_cast<char*>(F.data().data()),
          static_cast<std::streamsize>(F.data().size() * sizeof(double)));
  if (!in) throw IoError("truncated GFLD file: " + path);
  return F;
}

void write_csv(const ScalarField& F, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << std::setprecision(17);
  out << "x,y,z";
  for (int a = 0; a < F.dim(); ++a) out << ",c" << a + 1;
  out << "\n";
  const Grid3& g = F.grid();
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j)
      for (int k = 0; k < g.n; ++k) {
        const auto x = g.point(i, j, k);
        out << x[0] << "," << x[1] << "," << x[2];
        const double* p = F.at(i, j, k);
        for (int a = 0; a < F.dim(); ++a) out << "," << p[a];
        out << "\n";
      }
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace covlap
