#include "crnsign/graphio.hpp"

#include <regex>
#include <sstream>
#include <stdexcept>

namespace crnsign {

const SRGraph::Edge *SRGraph::find(std::size_t sp, std::size_t rx) const {
    for (const auto &e : edges)
        if (e.species == sp && e.reaction == rx)
            return &e;
    return nullptr;
}

SRGraph build_graph(const RationalMatrix &s, std::vector<std::string> species_names) {
    SRGraph g;
    if (species_names.empty())
        for (std::size_t i = 0; i < s.rows(); ++i)
            species_names.push_back("X" + std::to_string(i + 1));
    if (species_names.size() != s.rows())
        throw std::invalid_argument("one name per species row is required");
    g.species = std::move(species_names);
    for (std::size_t j = 0; j < s.cols(); ++j)
        g.reactions.push_back("R" + std::to_string(j + 1));
    for (std::size_t j = 0; j < s.cols(); ++j)
        for (std::size_t i = 0; i < s.rows(); ++i) {
            int sg = sgn(s(i, j));
            if (sg == 0)
                continue;
            bool consumed = sg < 0;
            g.edges.push_back({i, j, consumed ? EdgeDirection::consumed : EdgeDirection::produced,
                               consumed ? EdgeStyle::solid : EdgeStyle::dotted});
        }
    return g;
}

SRGraph build_graph(const Network &net) {
    std::vector<std::string> names;
    for (const auto &sp : net.species())
        names.push_back(sp.name);
    return build_graph(stoichiometric_matrix(net), std::move(names));
}

std::vector<BadCycle> find_bad_cycles(const SRGraph &g) {
    std::vector<std::vector<const SRGraph::Edge *>> by_reaction(g.reactions.size());
    for (const auto &e : g.edges)
        by_reaction[e.reaction].push_back(&e);

    std::vector<BadCycle> out;
    for (std::size_t k = 0; k < g.reactions.size(); ++k)
        for (std::size_t l = k + 1; l < g.reactions.size(); ++l)
            // species touching both reactions close a 4-cycle pairwise
            for (const auto *ik : by_reaction[k])
                for (const auto *jk : by_reaction[k]) {
                    if (jk->species <= ik->species)
                        continue;
                    const auto *il = g.find(ik->species, l);
                    const auto *jl = g.find(jk->species, l);
                    if (!il || !jl)
                        continue;
                    const SRGraph::Edge *cyc[4] = {ik, jk, il, jl};
                    int produced = 0;
                    const SRGraph::Edge *p = nullptr;
                    for (const auto *e : cyc)
                        if (e->direction == EdgeDirection::produced) {
                            ++produced;
                            p = e;
                        }
                    if (produced != 1)
                        continue;
                    out.push_back({{ik->species, jk->species}, {k, l}, p->species, p->reaction});
                }
    return out;
}

std::string export_dot(const SRGraph &g) {
    std::ostringstream out;
    auto quote = [](const std::string &s) {
        std::string q = "\"";
        for (char c : s) {
            if (c == '"' || c == '\\')
                q += '\\';
            q += c;
        }
        return q + '"';
    };
    out << "digraph SR {\n";
    for (std::size_t i = 0; i < g.species.size(); ++i)
        out << "  s" << i << " [label=" << quote(g.species[i]) << ", shape=ellipse];\n";
    for (std::size_t j = 0; j < g.reactions.size(); ++j)
        out << "  r" << j << " [label=" << quote(g.reactions[j]) << ", shape=box];\n";
    for (const auto &e : g.edges) {
        const char *style = e.style == EdgeStyle::solid ? "solid" : "dotted";
        if (e.direction == EdgeDirection::consumed)
            out << "  s" << e.species << " -> r" << e.reaction;
        else
            out << "  r" << e.reaction << " -> s" << e.species;
        out << " [style=" << style << "];\n";
    }
    out << "}\n";
    return out.str();
}

std::vector<DotEdge> read_dot_edges(const std::string &dot) {
    static const std::regex edge(R"(^\s*(\w+)\s*->\s*(\w+)\s*\[style=(\w+)\];\s*$)");
    std::vector<DotEdge> out;
    std::istringstream in(dot);
    std::string line;
    std::smatch m;
    while (std::getline(in, line))
        if (std::regex_match(line, m, edge))
            out.push_back({m[1], m[2], m[3]});
    return out;
}

} // namespace crnsign
