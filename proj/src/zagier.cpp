#include "gridlab/zagier.hpp"

namespace gridlab {

std::vector<std::int64_t> first_valid_indices(Family family,
                                              std::size_t count) {
  std::vector<std::int64_t> out;
  std::int64_t idx = 0;
  while (out.size() < count) {
    if (family_valid_index(family, idx)) out.push_back(idx);
    ++idx;
  }
  return out;
}

// Instantiate the grid builders for both coefficient domains so template
// errors surface here rather than in whichever client includes them first.
template ZagierGrids<QDomain> build_zagier(const QDomain&, std::int64_t,
                                           std::int64_t, std::int64_t);
template ZagierGrids<ZpDomain> build_zagier(const ZpDomain&, std::int64_t,
                                            std::int64_t, std::int64_t);
template QSeries zagier_g4_series(const QDomain&, std::int64_t);
template ZpSeries zagier_g4_series(const ZpDomain&, std::int64_t);
template QSeries zagier_bracket_quotient(const QDomain&, std::int64_t);

}  // namespace gridlab
