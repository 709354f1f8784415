#include "coarse/filtration.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace coarse {

namespace {

bool subset_sorted(const std::vector<Index>& a, const std::vector<Index>& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

std::vector<Index> intersect_sorted(const std::vector<Index>& a,
                                    const std::vector<Index>& b) {
  std::vector<Index> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::back_inserter(out));
  return out;
}

}  // namespace

CoarseFiltration::CoarseFiltration(
    Relation generator, FiltrationKind kind, int max_level,
    std::optional<std::vector<std::vector<Index>>> filter_base)
    : generator_(generator.symmetrized_reflexive()),
      kind_(kind),
      max_level_(max_level),
      base_(std::move(filter_base)),
      cache_(std::make_shared<LevelCache>()) {
  if (max_level_ < 0)
    throw std::invalid_argument("CoarseFiltration: negative level cap");
  if (kind_ == FiltrationKind::filter_restricted) {
    if (!base_ || base_->empty())
      throw std::invalid_argument("CoarseFiltration: filter base missing or empty");
    for (auto& b : *base_) {
      if (b.empty())
        throw std::invalid_argument("CoarseFiltration: empty filter base element");
      std::sort(b.begin(), b.end());
      b.erase(std::unique(b.begin(), b.end()), b.end());
      for (Index i : b)
        if (i < 0 || i >= domain().size())
          throw std::out_of_range("CoarseFiltration: base element index " +
                                  std::to_string(i) + " outside ground set");
    }
    // Directedness: each pairwise intersection must contain a base element.
    for (std::size_t i = 0; i < base_->size(); ++i)
      for (std::size_t j = i + 1; j < base_->size(); ++j) {
        const auto cap = intersect_sorted((*base_)[i], (*base_)[j]);
        bool covered = false;
        for (const auto& c : *base_)
          if (subset_sorted(c, cap)) {
            covered = true;
            break;
          }
        if (!covered)
          throw std::invalid_argument(
              "CoarseFiltration: base not directed, no element below the "
              "intersection of elements " +
              std::to_string(i) + " and " + std::to_string(j));
      }
  } else if (base_) {
    throw std::invalid_argument(
        "CoarseFiltration: filter base given for a non-filter kind");
  }
}

Relation CoarseFiltration::level(int k) const {
  if (k < 0) throw std::out_of_range("CoarseFiltration::level: negative level");
  if (k > max_level_)
    throw std::out_of_range("CoarseFiltration::level: level " + std::to_string(k) +
                            " above cap " + std::to_string(max_level_));
  std::lock_guard<std::mutex> lock(cache_->mutex);
  auto& levels = cache_->levels;
  if (levels.empty()) levels.push_back(Relation::diagonal(domain()));
  while (static_cast<int>(levels.size()) <= k && cache_->fixpoint < 0) {
    Relation next = levels.back().compose(generator_);
    if (next == levels.back())
      cache_->fixpoint = static_cast<int>(levels.size());
    else
      levels.push_back(std::move(next));
  }
  return levels[std::min<std::size_t>(k, levels.size() - 1)];
}

std::vector<Relation> CoarseFiltration::cached_levels() const {
  std::lock_guard<std::mutex> lock(cache_->mutex);
  return cache_->levels;
}

void CoarseFiltration::preload_levels(const std::vector<Relation>& levels) {
  if (levels.empty()) return;
  const Relation diag = Relation::diagonal(domain());
  if (levels.front() != diag)
    throw std::invalid_argument("preload_levels: level 0 is not the diagonal");
  for (std::size_t k = 1; k < levels.size(); ++k) {
    if (levels[k].domain().size() != domain().size())
      throw std::invalid_argument("preload_levels: ground set mismatch at level " +
                                  std::to_string(k));
    if (!levels[k - 1].subset_of(levels[k]) || !generator_.subset_of(levels[k]))
      throw std::invalid_argument("preload_levels: chain not monotone at level " +
                                  std::to_string(k));
  }
  std::lock_guard<std::mutex> lock(cache_->mutex);
  if (cache_->levels.size() < levels.size()) cache_->levels = levels;
}

MembershipCertificate CoarseFiltration::membership_level(const Relation& e) const {
  if (!e.domain().compatible_with(domain()))
    throw std::invalid_argument("membership_level: ground set mismatch");
  for (int k = 0; k <= max_level_; ++k) {
    const Relation lv = level(k);
    if (e.subset_of(lv)) {
      MembershipCertificate cert;
      cert.contained = true;
      cert.level = k;
      return cert;
    }
    {
      std::lock_guard<std::mutex> lock(cache_->mutex);
      if (cache_->fixpoint >= 0 && k >= cache_->fixpoint) break;  // levels frozen
    }
  }
  MembershipCertificate cert;
  cert.contained = false;
  const Relation top = level(max_level_);
  for (const auto& p : e.pairs())
    if (!top.contains(p)) {
      cert.witness_pair = p;
      break;
    }
  return cert;
}

MembershipCertificate CoarseFiltration::filter_membership(const Relation& e) const {
  if (kind_ != FiltrationKind::filter_restricted)
    throw std::logic_error("filter_membership: filtration is not filter-restricted");
  MembershipCertificate cert = membership_level(e);
  if (!cert.contained) return cert;

  std::vector<Index> s = splitting_points(e);
  for (std::size_t i = 0; i < base_->size(); ++i)
    if (subset_sorted((*base_)[i], s)) {
      cert.base_index = static_cast<int>(i);
      cert.splitting_set = std::move(s);
      return cert;
    }
  cert.contained = false;
  cert.level = -1;
  cert.splitting_set = std::move(s);
  return cert;
}

CoarseFiltration metric_filtration(Relation generator, int max_level) {
  return CoarseFiltration(std::move(generator), FiltrationKind::metric, max_level);
}

CoarseFiltration explicit_filtration(Relation generator, int max_level) {
  return CoarseFiltration(std::move(generator), FiltrationKind::explicit_kind,
                          max_level);
}

CoarseFiltration group_filtration(const GroupTable& group, const std::vector<Index>& s,
                                  int max_level) {
  return CoarseFiltration(group_entourage(group, s), FiltrationKind::group, max_level);
}

CoarseFiltration filter_filtration(Relation metric_generator,
                                   std::vector<std::vector<Index>> base,
                                   int max_level) {
  return CoarseFiltration(std::move(metric_generator),
                          FiltrationKind::filter_restricted, max_level,
                          std::move(base));
}

CoarseFiltration amplify(const CoarseFiltration& f, Index n) {
  if (n <= 0) throw std::invalid_argument("amplify: copy count must be positive");
  const Index base_size = f.domain().size();
  GroundSet domain(base_size * n);
  std::vector<IndexPair> pairs;
  pairs.reserve(f.generator().size() * static_cast<std::size_t>(n) * n);
  for (const auto& [y, yp] : f.generator().pairs())
    for (Index s = 0; s < n; ++s)
      for (Index t = 0; t < n; ++t) pairs.emplace_back(y * n + s, yp * n + t);
  return CoarseFiltration(Relation(domain, std::move(pairs)),
                          FiltrationKind::amplified, f.max_level());
}

CoarseFiltration structure_from_operators(const GroundSet& domain,
                                          const std::vector<SparseOperator>& ops,
                                          double eps, int max_level) {
  if (domain.size() == 0)
    throw std::invalid_argument("structure_from_operators: empty ground set");
  if (eps < 0)
    throw std::invalid_argument("structure_from_operators: negative threshold");
  Relation gen = Relation::empty(domain);
  for (const auto& op : ops) {
    if (op.rows() != domain.size() || op.cols() != domain.size())
      throw std::invalid_argument(
          "structure_from_operators: operator shape differs from ground set");
    gen = gen.union_with(support(op, eps));
  }
  return CoarseFiltration(std::move(gen), FiltrationKind::operator_induced, max_level);
}

}  // namespace coarse
