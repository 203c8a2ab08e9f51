#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "mscd/graph.hpp"

namespace mscd {

using TokenCommunities = std::vector<std::vector<std::string>>;

/// One community per line, node tokens separated by whitespace. Blank lines
/// and lines starting with '#' are skipped. A token repeated on one line is a
/// ParseError.
TokenCommunities read_communities(std::istream& in);
TokenCommunities read_communities_file(const std::string& path);

/// Resolves tokens against the graph's labels. Unknown tokens raise DomainError.
Cover to_cover(const Graph& g, const TokenCommunities& communities);

/// Both token lists mapped onto the union of their tokens, numbered in order
/// of first appearance (first list first).
std::pair<Cover, Cover> align(const TokenCommunities& a, const TokenCommunities& b);

/// Do both lists cover exactly the same tokens, each exactly once?
bool same_partitioned_tokens(const TokenCommunities& a, const TokenCommunities& b);

void write_communities(const Graph& g, const std::vector<std::vector<NodeId>>& communities, std::ostream& out);
void write_communities_file(const Graph& g, const std::vector<std::vector<NodeId>>& communities,
                            const std::string& path);

}  // namespace mscd
