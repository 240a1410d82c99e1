#include "bmatch/solver.hpp"

#include <cassert>
#include <set>
#include <stdexcept>
#include <vector>

#include "bmatch/classify.hpp"
#include "bmatch/dynamics.hpp"

namespace bmatch {

namespace {

// Quota-aware loving-pair peeling. Residual lists are list suffixes:
// heads advance lazily past quota-exhausted peers and past extracted
// partners, so every list position is visited O(1) times.
class ResidualPeel {
 public:
  ResidualPeel(const PreferenceInstance& L, const QuotaVector& b)
      : L_(&L),
        head_(static_cast<std::size_t>(L.size()), 0),
        residual_(static_cast<std::size_t>(L.size())) {
    for (PeerId p = 0; p < L.size(); ++p) residual_[static_cast<std::size_t>(p)] = b.at(p);
  }

  std::int64_t residual(PeerId p) const { return residual_[static_cast<std::size_t>(p)]; }

  // First still-acceptable neighbor with residual quota; -1 when p is
  // exhausted or out of quota itself.
  PeerId first_active(PeerId p) {
    if (residual(p) <= 0) return -1;
    const auto& list = L_->list(p);
    auto& h = head_[static_cast<std::size_t>(p)];
    while (h < list.size() && residual(list[h]) <= 0) ++h;
    return h < list.size() ? list[h] : -1;
  }

  bool loving(PeerId p, PeerId q) {
    return first_active(p) == q && first_active(q) == p;
  }

  // Consumes the mutual heads of a freshly extracted pair.
  void consume(PeerId a, PeerId b) {
    assert(first_active(a) == b && first_active(b) == a);
    ++head_[static_cast<std::size_t>(a)];
    ++head_[static_cast<std::size_t>(b)];
    --residual_[static_cast<std::size_t>(a)];
    --residual_[static_cast<std::size_t>(b)];
  }

 private:
  const PreferenceInstance* L_;
  std::vector<std::size_t> head_;
  std::vector<std::int64_t> residual_;
};

}  // namespace

Configuration stable_configuration(const PreferenceInstance& L, const QuotaVector& b) {
  if (b.size() != L.size())
    throw StructuralError("quota vector size does not match instance");
  if (auto cycle = find_preference_cycle(L)) throw CyclicInstanceError(std::move(*cycle));

  const PeerId n = L.size();
  ResidualPeel peel(L, b);

  std::set<Edge> work;
  auto consider = [&](PeerId p) {
    const PeerId q = peel.first_active(p);
    if (q >= 0 && peel.first_active(q) == p) work.insert(make_edge(p, q));
  };
  for (PeerId p = 0; p < n; ++p) consider(p);

  std::vector<Edge> links;
  while (!work.empty()) {
    const Edge e = *work.begin();
    work.erase(work.begin());
    if (!peel.loving(e.a, e.b)) continue;  // superseded entry

    peel.consume(e.a, e.b);
    links.push_back(e);

    // A peer whose quota just hit zero disappears from every residual
    // list; peers that ranked it first get new first choices.
    for (PeerId d : {e.a, e.b}) {
      if (peel.residual(d) == 0)
        for (PeerId x : L.list(d)) consider(x);
    }
    consider(e.a);
    consider(e.b);
  }

  Configuration result(std::move(links));
  if (!is_stable(L, b, result))
    throw std::logic_error("stable_configuration postcondition failed");
  return result;
}

}  // namespace bmatch
