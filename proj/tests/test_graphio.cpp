#include "doctest.h"

#include "crnsign/graphio.hpp"
#include "crnsign/report.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"
#include "support/random_network.hpp"

#include <random>

using namespace crnsign;
using testing::load_fixture;

TEST_CASE("2A + B -> 4C") {
    SRGraph g = build_graph(rational_matrix({{-2}, {-1}, {4}}));
    CHECK(g.species == std::vector<std::string>{"X1", "X2", "X3"});
    REQUIRE(g.edges.size() == 3);
    CHECK(g.edges[0].direction == EdgeDirection::consumed);
    CHECK(g.edges[0].style == EdgeStyle::solid);
    CHECK(g.edges[2].direction == EdgeDirection::produced);
    CHECK(g.edges[2].style == EdgeStyle::dotted);
    CHECK(find_bad_cycles(g).empty());
}

TEST_CASE("the two-class network graph and its two bad cycles") {
    Network net = load_fixture("two_classes");
    SRGraph g = build_graph(net);
    CHECK(g.species.size() == 7);
    CHECK(g.reactions.size() == 6);
    CHECK(g.edges.size() == 18);
    auto cycles = find_bad_cycles(g);
    REQUIRE(cycles.size() == 2);
    CHECK(report::cycles_match_submatrices(stoichiometric_matrix(net), cycles));
    // both cycles run through C and D
    for (const auto &c : cycles)
        CHECK(c.species == std::array<std::size_t, 2>{2, 3});

    Network fixed = sign_fix(net).result();
    CHECK(find_bad_cycles(build_graph(fixed)).empty());
}

TEST_CASE("nonnegative and zero matrices have no bad cycles") {
    CHECK(find_bad_cycles(build_graph(rational_matrix({{1, 2}, {3, 0}}))).empty());
    SRGraph z = build_graph(RationalMatrix(2, 2));
    CHECK(z.edges.empty());
    CHECK_THROWS_AS(build_graph(RationalMatrix(2, 2), {"A"}), std::invalid_argument);
}

TEST_CASE("DOT export") {
    SRGraph empty;
    CHECK(export_dot(empty) == "digraph SR {\n}\n");
    Network net = load_fixture("two_classes");
    SRGraph g = build_graph(net);
    std::string dot = export_dot(g);
    CHECK(dot == export_dot(build_graph(net)));
    CHECK(dot.find("s0 [label=\"A\", shape=ellipse];") != std::string::npos);
    CHECK(dot.find("r0 [label=\"R1\", shape=box];") != std::string::npos);
    auto edges = read_dot_edges(dot);
    REQUIRE(edges.size() == g.edges.size());
    for (std::size_t i = 0; i < edges.size(); ++i) {
        const auto &e = g.edges[i];
        std::string s = "s" + std::to_string(e.species), r = "r" + std::to_string(e.reaction);
        bool consumed = e.direction == EdgeDirection::consumed;
        CHECK(edges[i].from == (consumed ? s : r));
        CHECK(edges[i].to == (consumed ? r : s));
        CHECK(edges[i].style == (consumed ? "solid" : "dotted"));
    }
}

TEST_CASE("bad cycles correspond to bad submatrices on random matrices") {
    std::mt19937_64 rng(53);
    for (int n = 0; n < 300; ++n) {
        RationalMatrix s = stoichiometric_matrix(testing::random_network(rng));
        SRGraph g = build_graph(s);
        std::size_t nonzero = 0;
        for (std::size_t i = 0; i < s.rows(); ++i)
            for (std::size_t j = 0; j < s.cols(); ++j)
                nonzero += s(i, j) != 0;
        CHECK(g.edges.size() == nonzero);
        auto cycles = find_bad_cycles(g);
        CHECK(cycles.size() == testing::brute_bad_submatrices(s).size());
        REQUIRE(report::cycles_match_submatrices(s, cycles));
    }
}
