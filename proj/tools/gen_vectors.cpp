// Regenerates the golden wire-format file. Run from the repository root after
// an intentional encoding change, then review the diff:
//   build/gen_vectors [vectors/encodings.txt]

#include <cstdio>
#include <fstream>

#include "vector_set.hpp"

int main(int argc, char** argv) {
  const char* path = argc > 1 ? argv[1] : "vectors/encodings.txt";
  std::ofstream out(path, std::ios::trunc);
  if (!out) {
    std::fprintf(stderr, "cannot write %s\n", path);
    return 1;
  }
  out << "# golden wire encodings; regenerate with gen_vectors and review the diff\n";
  for (const auto& [name, token] : zlvec::vector_set()) out << name << " " << token << "\n";
  out.close();
  std::printf("wrote %s\n", path);
  return 0;
}
