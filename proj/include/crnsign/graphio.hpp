#pragma once

#include "crnsign/matrix.hpp"
#include "crnsign/model.hpp"

#include <array>
#include <cstddef>
#include <string>
#include <vector>

namespace crnsign {

enum class EdgeDirection { consumed, produced };
enum class EdgeStyle { solid, dotted };

/// Bipartite species-reaction graph. Consumed edges (S_ij < 0) are drawn
/// solid, produced edges dotted.
struct SRGraph {
    struct Edge {
        std::size_t species = 0;
        std::size_t reaction = 0;
        EdgeDirection direction = EdgeDirection::consumed;
        EdgeStyle style = EdgeStyle::solid;
    };
    std::vector<std::string> species;
    std::vector<std::string> reactions;
    std::vector<Edge> edges; // column-major: by reaction, then species

    const Edge *find(std::size_t species, std::size_t reaction) const;
};

/// Nodes are named X1.. and R1.. when no names are given.
SRGraph build_graph(const RationalMatrix &s, std::vector<std::string> species_names = {});
SRGraph build_graph(const Network &net);

/// Cycle species_i - reaction_k - species_j - reaction_l - species_i with
/// three consumed edges and one produced edge.
struct BadCycle {
    std::array<std::size_t, 2> species{};
    std::array<std::size_t, 2> reactions{};
    std::size_t produced_species = 0;
    std::size_t produced_reaction = 0;
};

std::vector<BadCycle> find_bad_cycles(const SRGraph &g);

/// Graphviz text. Species are ellipses s<i>, reactions boxes r<j>; consumed
/// edges point species -> reaction, produced edges reaction -> species.
std::string export_dot(const SRGraph &g);

struct DotEdge {
    std::string from;
    std::string to;
    std::string style;
};

/// Reads back the edge statements written by export_dot.
std::vector<DotEdge> read_dot_edges(const std::string &dot);

} // namespace crnsign
