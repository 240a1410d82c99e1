#include "bmatch/marks.hpp"

#include <set>

namespace bmatch {

MarkMatrix global_matrix(const GlobalMarkVector& v, Orientation orientation) {
  const PeerId n = v.size();
  std::set<double> distinct(v.values.begin(), v.values.end());
  if (static_cast<PeerId>(distinct.size()) != n)
    throw StructuralError("global mark values must be pairwise distinct");

  MarkMatrix m(n, orientation);
  for (PeerId i = 0; i < n; ++i)
    for (PeerId p = 0; p < n; ++p)
      if (i != p) m.set(i, p, Mark::finite(v.values[static_cast<std::size_t>(p)]));
  return m;
}

MarkMatrix negated(const MarkMatrix& m) {
  MarkMatrix out(m.size(), flipped(m.orientation()));
  for (PeerId p = 0; p < m.size(); ++p)
    for (PeerId q = 0; q < m.size(); ++q)
      if (p != q && m.finite(p, q)) out.set(p, q, Mark::finite(-m.at(p, q).value()));
  return out;
}

}  // namespace bmatch
