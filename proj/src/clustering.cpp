#include "qclust/clustering.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace qclust {

void Clustering::validate() const {
  std::vector<int> seen(assignments.size(), -1);
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    const Cluster& cluster = clusters[c];
    if (cluster.label != static_cast<int>(c)) throw std::logic_error("cluster labels are not dense");
    if (cluster.members.empty()) throw std::logic_error("cluster " + std::to_string(c) + " is empty");
    for (std::size_t id : cluster.members) {
      if (id >= assignments.size()) throw std::logic_error("member id out of range");
      if (seen[id] != -1) throw std::logic_error("point " + std::to_string(id) + " is in two clusters");
      seen[id] = cluster.label;
      if (assignments[id] != cluster.label) throw std::logic_error("assignment table disagrees with clusters");
    }
  }
  for (std::size_t id = 0; id < seen.size(); ++id) {
    if (seen[id] == -1) throw std::logic_error("point " + std::to_string(id) + " is unassigned");
  }
}

Clustering make_clustering(std::size_t point_count, std::vector<std::vector<std::size_t>> groups,
                           std::vector<std::optional<Code>> tags) {
  tags.resize(groups.size());
  Clustering out;
  out.assignments.assign(point_count, -1);
  for (std::size_t g = 0; g < groups.size(); ++g) {
    if (groups[g].empty()) continue;
    Cluster cluster;
    cluster.label = static_cast<int>(out.clusters.size());
    cluster.members = std::move(groups[g]);
    std::sort(cluster.members.begin(), cluster.members.end());
    cluster.tag = tags[g];
    for (std::size_t id : cluster.members) out.assignments.at(id) = cluster.label;
    out.clusters.push_back(std::move(cluster));
  }
  return out;
}

Clustering clustering_from_labels(const std::vector<int>& labels) {
  std::map<int, std::size_t> slot;  // raw label -> group index by first appearance
  std::vector<std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    auto [it, inserted] = slot.emplace(labels[i], groups.size());
    if (inserted) groups.emplace_back();
    groups[it->second].push_back(i);
  }
  return make_clustering(labels.size(), std::move(groups));
}

namespace {

struct CodeGroup {
  std::vector<Code> codes;  // sorted distinct
  std::vector<std::size_t> members;
  std::optional<Code> tag;
  int label;

  Code lo() const { return codes.front(); }
  Code hi() const { return codes.back(); }
  Code range() const { return hi() - lo(); }
};

std::vector<CodeGroup> groups_of(const Clustering& clustering, const DistanceEncoding& encoding) {
  if (clustering.size() != encoding.size()) {
    throw std::invalid_argument("clustering and encoding cover different point counts");
  }
  std::vector<CodeGroup> groups;
  for (const Cluster& c : clustering.clusters) {
    CodeGroup g{{}, c.members, c.tag, c.label};
    for (std::size_t id : c.members) g.codes.push_back(encoding.codes[id]);
    std::sort(g.codes.begin(), g.codes.end());
    g.codes.erase(std::unique(g.codes.begin(), g.codes.end()), g.codes.end());
    groups.push_back(std::move(g));
  }
  std::stable_sort(groups.begin(), groups.end(), [](const CodeGroup& a, const CodeGroup& b) {
    return a.lo() != b.lo() ? a.lo() < b.lo() : a.label < b.label;
  });
  return groups;
}

Clustering rebuild(const Clustering& source, std::vector<CodeGroup> groups) {
  std::vector<std::vector<std::size_t>> members;
  std::vector<std::optional<Code>> tags;
  for (auto& g : groups) {
    members.push_back(std::move(g.members));
    tags.push_back(g.tag);
  }
  Clustering out = make_clustering(source.size(), std::move(members), std::move(tags));
  out.params = source.params;
  return out;
}

}  // namespace

Clustering order_by_codes(Clustering clustering, const DistanceEncoding& encoding) {
  return rebuild(clustering, groups_of(clustering, encoding));
}

Clustering refine_to_k(const Clustering& clustering, const DistanceEncoding& encoding,
                       std::size_t target_k) {
  if (target_k < 1) throw std::invalid_argument("target cluster count must be at least 1");
  const std::size_t distinct = encoding.distinct_codes().size();
  if (target_k > distinct) {
    throw std::invalid_argument("cannot form " + std::to_string(target_k) + " clusters from " +
                                std::to_string(distinct) + " distinct distance codes");
  }
  std::vector<CodeGroup> groups = groups_of(clustering, encoding);
  // position in `groups` doubles as the current label, so "lowest label" = lowest index

  while (groups.size() > target_k) {
    std::size_t best = 0;
    long double best_gap = 0;
    for (std::size_t i = 0; i + 1 < groups.size(); ++i) {
      const long double gap = static_cast<long double>(groups[i + 1].lo()) -
                              static_cast<long double>(groups[i].hi());
      if (i == 0 || gap < best_gap) {
        best = i;
        best_gap = gap;
      }
    }
    CodeGroup& left = groups[best];
    CodeGroup& right = groups[best + 1];
    left.members.insert(left.members.end(), right.members.begin(), right.members.end());
    left.codes.insert(left.codes.end(), right.codes.begin(), right.codes.end());
    std::sort(left.codes.begin(), left.codes.end());
    left.codes.erase(std::unique(left.codes.begin(), left.codes.end()), left.codes.end());
    left.tag.reset();
    groups.erase(groups.begin() + static_cast<std::ptrdiff_t>(best) + 1);
  }

  while (groups.size() < target_k) {
    std::size_t widest = 0;
    for (std::size_t i = 1; i < groups.size(); ++i) {
      if (groups[i].range() > groups[widest].range()) widest = i;
    }
    CodeGroup& g = groups[widest];
    if (g.codes.size() < 2) {
      throw std::logic_error("no cluster left with two distinct codes to split");
    }
    std::size_t cut = 0;  // split between codes[cut] and codes[cut + 1]
    for (std::size_t i = 1; i + 1 < g.codes.size(); ++i) {
      if (g.codes[i + 1] - g.codes[i] > g.codes[cut + 1] - g.codes[cut]) cut = i;
    }
    const Code boundary = g.codes[cut];
    CodeGroup upper{{g.codes.begin() + static_cast<std::ptrdiff_t>(cut) + 1, g.codes.end()}, {}, {}, 0};
    std::vector<std::size_t> lower_members;
    for (std::size_t id : g.members) {
      (encoding.codes[id] <= boundary ? lower_members : upper.members).push_back(id);
    }
    g.codes.resize(cut + 1);
    g.members = std::move(lower_members);
    g.tag.reset();
    groups.insert(groups.begin() + static_cast<std::ptrdiff_t>(widest) + 1, std::move(upper));
  }

  return rebuild(clustering, std::move(groups));
}

}  // namespace qclust
