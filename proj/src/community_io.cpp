#include "mscd/community_io.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "mscd/errors.hpp"

namespace mscd {

TokenCommunities read_communities(std::istream& in) {
  TokenCommunities out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream fields(line);
    std::vector<std::string> tokens;
    std::string token;
    while (fields >> token) tokens.push_back(token);
    if (tokens.empty() || tokens.front().front() == '#') continue;
    std::unordered_set<std::string> seen;
    for (const auto& t : tokens) {
      if (!seen.insert(t).second) throw ParseError(line_no, "node '" + t + "' listed twice in one community");
    }
    out.push_back(std::move(tokens));
  }
  return out;
}

TokenCommunities read_communities_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_communities(in);
}

Cover to_cover(const Graph& g, const TokenCommunities& communities) {
  std::vector<std::vector<NodeId>> ids;
  ids.reserve(communities.size());
  for (const auto& c : communities) {
    auto& row = ids.emplace_back();
    row.reserve(c.size());
    for (const auto& token : c) {
      const auto id = g.find(token);
      if (!id) throw DomainError("community node '" + token + "' does not appear in the graph");
      row.push_back(*id);
    }
  }
  return Cover(g.node_count(), std::move(ids));
}

std::pair<Cover, Cover> align(const TokenCommunities& a, const TokenCommunities& b) {
  std::unordered_map<std::string, NodeId> index;
  auto map = [&](const TokenCommunities& lists) {
    std::vector<std::vector<NodeId>> ids;
    for (const auto& c : lists) {
      auto& row = ids.emplace_back();
      for (const auto& token : c) {
        const auto [it, fresh] = index.try_emplace(token, static_cast<NodeId>(index.size()));
        row.push_back(it->second);
      }
    }
    return ids;
  };
  auto ia = map(a);
  auto ib = map(b);
  return {Cover(index.size(), std::move(ia)), Cover(index.size(), std::move(ib))};
}

bool same_partitioned_tokens(const TokenCommunities& a, const TokenCommunities& b) {
  auto tokens = [](const TokenCommunities& lists, std::set<std::string>& out) {
    for (const auto& c : lists) {
      for (const auto& t : c) {
        if (!out.insert(t).second) return false;
      }
    }
    return true;
  };
  std::set<std::string> ta, tb;
  return tokens(a, ta) && tokens(b, tb) && ta == tb;
}

void write_communities(const Graph& g, const std::vector<std::vector<NodeId>>& communities, std::ostream& out) {
  for (const auto& c : communities) {
    for (std::size_t k = 0; k < c.size(); ++k) {
      if (k) out << ' ';
      out << g.label(c[k]);
    }
    out << '\n';
  }
}

void write_communities_file(const Graph& g, const std::vector<std::vector<NodeId>>& communities,
                            const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  write_communities(g, communities, out);
  if (!out) throw std::runtime_error("error while writing " + path);
}

}  // namespace mscd
