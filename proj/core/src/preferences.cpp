#include "bmatch/preferences.hpp"

#include <algorithm>
#include <sstream>

namespace bmatch {

PreferenceInstance PreferenceInstance::from_lists(
    std::vector<std::vector<PeerId>> lists) {
  PreferenceInstance L;
  L.n_ = static_cast<PeerId>(lists.size());
  L.lists_ = std::move(lists);
  L.ranks_.assign(static_cast<std::size_t>(L.n_) * L.n_, -1);

  for (PeerId p = 0; p < L.n_; ++p) {
    const auto& list = L.lists_[static_cast<std::size_t>(p)];
    for (std::size_t i = 0; i < list.size(); ++i) {
      PeerId q = list[i];
      if (q < 0 || q >= L.n_)
        throw StructuralError("preference list of peer " + std::to_string(p) +
                              " references unknown peer " + std::to_string(q));
      if (q == p)
        throw StructuralError("peer " + std::to_string(p) + " lists itself");
      auto& slot = L.ranks_[static_cast<std::size_t>(p) * L.n_ + q];
      if (slot != -1)
        throw StructuralError("peer " + std::to_string(p) + " lists peer " +
                              std::to_string(q) + " twice");
      slot = static_cast<std::int32_t>(i);
    }
  }

  for (PeerId p = 0; p < L.n_; ++p) {
    for (PeerId q : L.lists_[static_cast<std::size_t>(p)]) {
      if (L.rank(q, p) < 0)
        throw StructuralError("acceptance asymmetry: " + std::to_string(q) +
                              " in L(" + std::to_string(p) + ") but not vice versa");
      if (p < q) ++L.pair_count_;
    }
  }
  return L;
}

bool PreferenceInstance::prefers(PeerId p, PeerId q1, PeerId q2) const {
  const auto r1 = rank(p, q1);
  const auto r2 = rank(p, q2);
  if (r1 < 0 || r2 < 0)
    throw DomainError("prefers: peer " + std::to_string(p) +
                      " does not accept both arguments");
  return r1 < r2;
}

AcceptanceGraph PreferenceInstance::acceptance() const {
  std::vector<Edge> edges;
  edges.reserve(pair_count_);
  for (PeerId p = 0; p < n_; ++p)
    for (PeerId q : list(p))
      if (p < q) edges.push_back({p, q});
  return AcceptanceGraph(n_, std::move(edges));
}

std::string MarkValidation::describe() const {
  std::ostringstream out;
  out << (ok() ? "pass" : "fail") << ", symmetric=" << (symmetric ? "true" : "false");
  for (const auto& t : ties)
    out << "\n  tie: peer " << t.peer << " marks " << t.first << " and " << t.second
        << " equally (" << t.value << ")";
  for (const auto& v : one_sided)
    out << "\n  one-sided acceptance: m(" << v.from << "," << v.to
        << ") finite but m(" << v.to << "," << v.from << ") infinite";
  return out.str();
}

MarkValidation validate_marks(const MarkMatrix& m) {
  const PeerId n = m.size();
  MarkValidation report;

  std::vector<std::pair<double, PeerId>> row;
  for (PeerId p = 0; p < n; ++p) {
    row.clear();
    for (PeerId q = 0; q < n; ++q) {
      if (q == p) continue;
      if (m.finite(p, q)) row.emplace_back(m.at(p, q).value(), q);
      if (m.finite(p, q) && !m.finite(q, p))
        report.one_sided.push_back({p, q});
      if (m.finite(p, q) && m.finite(q, p) &&
          m.at(p, q).value() != m.at(q, p).value())
        report.symmetric = false;
    }
    std::sort(row.begin(), row.end());
    for (std::size_t i = 1; i < row.size(); ++i) {
      if (row[i].first == row[i - 1].first)
        report.ties.push_back({p, row[i - 1].second, row[i].second, row[i].first});
    }
  }
  return report;
}

PreferenceInstance preferences_from_marks(const MarkMatrix& m) {
  auto report = validate_marks(m);
  if (!report.ok())
    throw StructuralError("marks failed validation: " + report.describe());

  const PeerId n = m.size();
  std::vector<std::vector<PeerId>> lists(static_cast<std::size_t>(n));
  std::vector<std::pair<double, PeerId>> row;
  for (PeerId p = 0; p < n; ++p) {
    row.clear();
    for (PeerId q = 0; q < n; ++q)
      if (q != p && m.finite(p, q)) row.emplace_back(m.at(p, q).value(), q);
    std::sort(row.begin(), row.end());
    if (m.orientation() == Orientation::kHigherIsBetter)
      std::reverse(row.begin(), row.end());
    auto& list = lists[static_cast<std::size_t>(p)];
    list.reserve(row.size());
    for (const auto& [value, q] : row) list.push_back(q);
  }
  return PreferenceInstance::from_lists(std::move(lists));
}

AcceptanceGraph acceptance_from_marks(const MarkMatrix& m) {
  auto report = validate_marks(m);
  if (!report.ok())
    throw StructuralError("marks failed validation: " + report.describe());

  const PeerId n = m.size();
  std::vector<Edge> edges;
  for (PeerId p = 0; p < n; ++p)
    for (PeerId q = p + 1; q < n; ++q)
      if (m.finite(p, q)) edges.push_back({p, q});
  return AcceptanceGraph(n, std::move(edges));
}

}  // namespace bmatch
