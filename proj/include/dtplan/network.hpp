#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "dtplan/rational.hpp"

namespace dtplan {

// Thrown for malformed inputs: parse failures, dangling references,
// nonpositive weights. Infeasibility of a well-formed instance is a
// result, not an InputError.
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

class InfeasibleError : public std::runtime_error {
 public:
  explicit InfeasibleError(const std::string& what) : std::runtime_error(what) {}
};

struct Site {
  std::string id;
  std::optional<Rational> storage_capacity;  // absent = unbounded
};

struct Link {
  std::string id;
  int from = -1;  // site index
  int to = -1;
  Rational weight;     // time units per size unit
  int max_streams = 1;  // execution-layer concurrency cap
};

// Immutable once built. Sites and links are indexed densely; all solver
// modules work on indices and translate to ids only at the boundaries.
class Network {
 public:
  Network(std::vector<Site> sites, std::vector<Link> links)
      : sites_(std::move(sites)), links_(std::move(links)) {
    for (int i = 0; i < (int)sites_.size(); ++i) {
      if (!site_index_.emplace(sites_[i].id, i).second)
        throw InputError("duplicate site id: " + sites_[i].id);
      if (sites_[i].storage_capacity && sites_[i].storage_capacity->is_negative())
        throw InputError("negative storage capacity at site: " + sites_[i].id);
    }
    out_.resize(sites_.size());
    in_.resize(sites_.size());
    for (int e = 0; e < (int)links_.size(); ++e) {
      const Link& l = links_[e];
      if (!link_index_.emplace(l.id, e).second)
        throw InputError("duplicate link id: " + l.id);
      if (l.from < 0 || l.from >= (int)sites_.size() || l.to < 0 ||
          l.to >= (int)sites_.size())
        throw InputError("link " + l.id + " references unknown site");
      if (l.from == l.to)
        throw InputError("self-loop link: " + l.id);
      if (!(Rational(0) < l.weight) || l.weight.is_infinite())
        throw InputError("nonpositive weight on link: " + l.id);
      if (l.max_streams < 1)
        throw InputError("nonpositive max_streams on link: " + l.id);
      out_[l.from].push_back(e);
      in_[l.to].push_back(e);
    }
  }

  int site_count() const { return (int)sites_.size(); }
  int link_count() const { return (int)links_.size(); }
  const Site& site(int n) const { return sites_[n]; }
  const Link& link(int e) const { return links_[e]; }
  const std::vector<Site>& sites() const { return sites_; }
  const std::vector<Link>& links() const { return links_; }
  const std::vector<int>& out(int n) const { return out_[n]; }
  const std::vector<int>& in(int n) const { return in_[n]; }

  int site_index(const std::string& id) const {
    auto it = site_index_.find(id);
    return it == site_index_.end() ? -1 : it->second;
  }
  int link_index(const std::string& id) const {
    auto it = link_index_.find(id);
    return it == link_index_.end() ? -1 : it->second;
  }
  int require_site(const std::string& id) const {
    int n = site_index(id);
    if (n < 0) throw InputError("unknown site: " + id);
    return n;
  }
  int require_link(const std::string& id) const {
    int e = link_index(id);
    if (e < 0) throw InputError("unknown link: " + id);
    return e;
  }

  bool operator==(const Network& o) const {
    if (sites_.size() != o.sites_.size() || links_.size() != o.links_.size())
      return false;
    for (std::size_t i = 0; i < sites_.size(); ++i) {
      if (sites_[i].id != o.sites_[i].id ||
          sites_[i].storage_capacity.has_value() !=
              o.sites_[i].storage_capacity.has_value())
        return false;
      if (sites_[i].storage_capacity &&
          *sites_[i].storage_capacity != *o.sites_[i].storage_capacity)
        return false;
    }
    for (std::size_t i = 0; i < links_.size(); ++i) {
      const Link &a = links_[i], &b = o.links_[i];
      if (a.id != b.id || sites_[a.from].id != o.sites_[b.from].id ||
          sites_[a.to].id != o.sites_[b.to].id || a.weight != b.weight ||
          a.max_streams != b.max_streams)
        return false;
    }
    return true;
  }

 private:
  std::vector<Site> sites_;
  std::vector<Link> links_;
  std::vector<std::vector<int>> out_;
  std::vector<std::vector<int>> in_;
  std::map<std::string, int> site_index_;
  std::map<std::string, int> link_index_;
};

struct Demand {
  std::string id;
  Rational size;
  std::vector<std::string> origins;  // site ids, deduplicated, sorted
};

struct Request {
  std::string destination;
  std::vector<Demand> demands;
};

enum class SharedSide { Incoming, Outgoing };

struct SharedGroup {
  std::string site;
  SharedSide side = SharedSide::Incoming;
  std::vector<std::string> member_links;
  Rational limit;  // shared slowdown amount, must stay below every member weight
};

// dur_de: time to move the whole file over one link.
inline Rational transfer_duration(const Rational& size, const Rational& weight) {
  return size * weight;
}
inline Rational transfer_duration(const Demand& d, const Link& e) {
  return d.size * e.weight;
}

// Rewrites each shared group as a dummy site plus a dummy link carrying
// the shared portion of the slowdown. Path costs through the affected
// site are preserved exactly: reduced member weight + limit = original.
inline Network apply_shared_groups(const Network& net,
                                   const std::vector<SharedGroup>& groups) {
  std::vector<Site> sites = net.sites();
  std::vector<Link> links = net.links();
  std::set<std::string> used_site_ids, used_link_ids;
  for (const Site& s : sites) used_site_ids.insert(s.id);
  for (const Link& l : links) used_link_ids.insert(l.id);

  for (const SharedGroup& g : groups) {
    int site = net.site_index(g.site);
    if (site < 0) throw InputError("shared group references unknown site: " + g.site);
    if (g.member_links.empty())
      throw InputError("shared group at " + g.site + " has no member links");
    if (!(Rational(0) < g.limit))
      throw InputError("shared group at " + g.site + " has nonpositive limit");

    std::string dummy_id = g.site + "'";
    while (used_site_ids.count(dummy_id)) dummy_id += "'";
    used_site_ids.insert(dummy_id);
    int dummy = (int)sites.size();
    sites.push_back(Site{dummy_id, std::nullopt});

    for (const std::string& member : g.member_links) {
      int e = net.link_index(member);
      if (e < 0) throw InputError("shared group member is not a link: " + member);
      Link& l = links[e];
      bool attached = g.side == SharedSide::Incoming ? l.to == site : l.from == site;
      if (!attached)
        throw InputError("link " + member + " is not attached to site " + g.site +
                         " on the declared side");
      if (!(g.limit < l.weight))
        throw InputError("limit exhausts link weight: " + member);
      l.weight = l.weight - g.limit;
      if (g.side == SharedSide::Incoming)
        l.to = dummy;
      else
        l.from = dummy;
    }

    Link dl;
    dl.weight = g.limit;
    dl.max_streams = 1;
    if (g.side == SharedSide::Incoming) {
      dl.id = dummy_id + "->" + g.site;
      dl.from = dummy;
      dl.to = site;
    } else {
      dl.id = g.site + "->" + dummy_id;
      dl.from = site;
      dl.to = dummy;
    }
    while (used_link_ids.count(dl.id)) dl.id += "'";
    used_link_ids.insert(dl.id);
    links.push_back(dl);
  }
  return Network(std::move(sites), std::move(links));
}

// Per link e: minimal weight sum over directed paths head(e) -> destination,
// in time units per size unit. Unreachable heads map to infinity.
inline std::vector<Rational> shortest_path_table(const Network& net, int destination) {
  const int n = net.site_count();
  std::vector<Rational> dist(n, Rational::infinity());
  dist[destination] = Rational(0);
  // Dijkstra over reversed edges; instances are small, a scan-based
  // extract-min keeps it allocation free.
  std::vector<char> done(n, 0);
  for (int round = 0; round < n; ++round) {
    int best = -1;
    for (int v = 0; v < n; ++v)
      if (!done[v] && !dist[v].is_infinite() && (best < 0 || dist[v] < dist[best]))
        best = v;
    if (best < 0) break;
    done[best] = 1;
    for (int e : net.in(best)) {
      const Link& l = net.link(e);
      Rational cand = dist[best] + l.weight;
      if (cand < dist[l.from]) dist[l.from] = cand;
    }
  }
  std::vector<Rational> sp(net.link_count());
  for (int e = 0; e < net.link_count(); ++e) sp[e] = dist[net.link(e).to];
  return sp;
}

struct NormalizedDemand {
  std::string id;
  Rational size;
  std::vector<int> origins;  // site indices, sorted
};

struct NormalizedRequest {
  int destination = -1;
  std::vector<NormalizedDemand> demands;
  std::vector<std::string> satisfied;  // demand ids already at the destination
  std::vector<std::string> warnings;
};

// Drops demands already at the destination, drops origin sites unknown to
// the network (with a warning), and requires every remaining demand to
// have at least one origin that can reach the destination.
inline NormalizedRequest validate_request(const Network& net, const Request& req) {
  NormalizedRequest out;
  out.destination = net.site_index(req.destination);
  if (out.destination < 0)
    throw InputError("unknown destination site: " + req.destination);

  std::set<std::string> seen_ids;
  std::vector<Rational> sp = shortest_path_table(net, out.destination);
  std::vector<Rational> dist(net.site_count(), Rational::infinity());
  dist[out.destination] = Rational(0);
  for (int e = 0; e < net.link_count(); ++e) {
    Rational via = net.link(e).weight + sp[e];
    if (via < dist[net.link(e).from]) dist[net.link(e).from] = via;
  }

  for (const Demand& d : req.demands) {
    if (!seen_ids.insert(d.id).second)
      throw InputError("duplicate demand id: " + d.id);
    if (!(Rational(0) < d.size))
      throw InputError("nonpositive size for demand: " + d.id);
    if (d.origins.empty()) throw InputError("demand has no origins: " + d.id);

    NormalizedDemand nd;
    nd.id = d.id;
    nd.size = d.size;
    bool at_destination = false;
    for (const std::string& o : d.origins) {
      int s = net.site_index(o);
      if (s < 0) {
        out.warnings.push_back("demand " + d.id + ": origin site " + o +
                               " is not in the network, dropped");
        continue;
      }
      if (s == out.destination) at_destination = true;
      nd.origins.push_back(s);
    }
    if (at_destination) {
      out.satisfied.push_back(d.id);
      continue;
    }
    std::sort(nd.origins.begin(), nd.origins.end());
    nd.origins.erase(std::unique(nd.origins.begin(), nd.origins.end()),
                     nd.origins.end());
    bool reachable = false;
    for (int s : nd.origins)
      if (!dist[s].is_infinite()) reachable = true;
    if (!reachable) throw InfeasibleError("unroutable demand " + d.id);
    out.demands.push_back(std::move(nd));
  }
  return out;
}

}  // namespace dtplan
