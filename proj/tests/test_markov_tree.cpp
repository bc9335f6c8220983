#include <catch2/catch_amalgamated.hpp>

#include "qmt/markov_tree.hpp"
#include "test_helpers.hpp"

using namespace qmt;
using qmt::test::require_close;
using Catch::Approx;

namespace {

/// Marginal set of independent random single-node states on a path.
MarginalSet product_path_set(const std::vector<std::string>& nodes, long d, std::uint64_t seed) {
    std::vector<Subsystem> parts;
    for (const auto& n : nodes) parts.push_back({n, d});
    const SystemLayout layout{parts};
    std::vector<DensityOperator> singles;
    for (size_t i = 0; i < nodes.size(); ++i) {
        singles.push_back(random_density(SystemLayout{{nodes[i], d}}, seed + i));
    }
    std::vector<DensityOperator> pairs;
    for (size_t i = 0; i + 1 < nodes.size(); ++i) {
        pairs.push_back(tensor(singles[i], singles[i + 1]));
    }
    return make_marginal_set(layout, std::move(pairs));
}

MarginalSet ghz_path_set() {
    const DensityOperator g = qmt::test::ghz();
    return marginals_on_edges(g, {{"A", "B"}, {"B", "C"}});
}

}  // namespace

TEST_CASE("associated graph shapes") {
    const MarginalSet chain = ghz_path_set();
    const AssociatedGraph g = associated_graph(chain);
    REQUIRE(g.edges == std::vector<Edge>{{"A", "B"}, {"B", "C"}});
    REQUIRE(g.is_tree());

    const DensityOperator rho = random_density(SystemLayout{{"A", 2}, {"B", 2}, {"C", 2}}, 3);
    const MarginalSet triangle =
        marginals_on_edges(rho, {{"A", "B"}, {"B", "C"}, {"A", "C"}});
    REQUIRE_FALSE(triangle.graph().is_tree());

    const auto star = star_graph("Y", {"X1", "X2", "X3", "X4"});
    REQUIRE(star.is_tree());
    REQUIRE(star.degree("Y") == 4);
}

TEST_CASE("constructive orders") {
    const auto path = path_graph({"A", "B", "C"});
    const ConstructiveOrder co = constructive_order(path, "A");
    REQUIRE(co.order == std::vector<std::string>{"A", "B", "C"});
    REQUIRE(co.parent.at("B") == "A");
    REQUIRE(co.parent.at("C") == "B");

    const auto star = star_graph("Y", {"P", "Q", "R"});
    const ConstructiveOrder so = constructive_order(star, "Y");
    REQUIRE(so.order == std::vector<std::string>{"Y", "P", "Q", "R"});

    REQUIRE_THROWS_AS(constructive_order(complete_graph({"A", "B", "C"}), "A"), HypothesisError);

    // prefix-connectivity on random trees: each node has exactly one earlier
    // neighbor
    Rng rng(5);
    const std::vector<std::string> nodes{"N1", "N2", "N3", "N4", "N5", "N6"};
    for (int inst = 0; inst < 20; ++inst) {
        std::vector<long> seq(nodes.size() - 2);
        for (auto& s : seq) s = static_cast<long>(rng.bits() % nodes.size());
        const AssociatedGraph t = tree_from_prufer(nodes, seq);
        const std::string root = nodes[rng.bits() % nodes.size()];
        const ConstructiveOrder o = constructive_order(t, root);
        REQUIRE(o.order.size() == nodes.size());
        for (size_t k = 1; k < o.order.size(); ++k) {
            long earlier_neighbors = 0;
            for (size_t j = 0; j < k; ++j) {
                earlier_neighbors += t.has_edge(o.order[k], o.order[j]) ? 1 : 0;
            }
            REQUIRE(earlier_neighbors == 1);
            REQUIRE(t.has_edge(o.order[k], o.parent.at(o.order[k])));
        }
    }
}

TEST_CASE("3-chain enumeration matches the closed-form counts") {
    const std::vector<std::string> names{"N1", "N2", "N3", "N4", "N5", "N6", "N7", "N8"};
    for (long n = 2; n <= 8; ++n) {
        const std::vector<std::string> nodes(names.begin(), names.begin() + n);
        REQUIRE(static_cast<long>(enumerate_3chains(path_graph(nodes)).size()) ==
                count_3chains_path(n));
        REQUIRE(static_cast<long>(enumerate_3chains(
                    star_graph(nodes[0], {nodes.begin() + 1, nodes.end()})).size()) ==
                count_3chains_star(n));
        REQUIRE(static_cast<long>(enumerate_3chains(complete_graph(nodes)).size()) ==
                count_3chains_complete(n));
    }
    REQUIRE(count_3chains_path(5) == 3);
    REQUIRE(count_3chains_star(5) == 6);
    REQUIRE(count_3chains_complete(4) == 12);
    REQUIRE(count_3chains_complete(5) == 30);

    // each chain appears once, centers carry the degree structure
    const auto chains = enumerate_3chains(star_graph("Y", {"A", "B", "C"}));
    REQUIRE(chains.size() == 3);
    for (const auto& c : chains) REQUIRE(c.center == "Y");
}

TEST_CASE("Pruefer enumeration hits the Cayley counts") {
    REQUIRE(enumerate_labeled_trees({"A", "B", "C"}).size() == 3);
    REQUIRE(enumerate_labeled_trees({"A", "B", "C", "D"}).size() == 16);
    REQUIRE(enumerate_labeled_trees({"A", "B", "C", "D", "E"}).size() == 125);
    for (const auto& t : enumerate_labeled_trees({"A", "B", "C", "D"})) REQUIRE(t.is_tree());
}

TEST_CASE("local QMC conditions over a tree") {
    SECTION("product sets pass everywhere") {
        const auto report = local_qmc_conditions(product_path_set({"A", "B", "C", "D"}, 2, 60));
        REQUIRE(report.all_pass);
        REQUIRE(report.verdicts.size() == 2);
    }

    SECTION("product-edge QMT marginals pass everywhere") {
        const QmtInstance inst = random_qmt(star_graph("Y", {"P", "Q", "R"}), EdgeDims{2, 2}, 61);
        const auto report = local_qmc_conditions(inst.tree_marginals);
        REQUIRE(report.all_pass);
        REQUIRE(report.verdicts.size() == 3);
    }

    SECTION("generic global states fail some chain") {
        const DensityOperator rho =
            random_pure_density(SystemLayout{{"A", 2}, {"B", 2}, {"C", 2}}, 62);
        const MarginalSet set = marginals_on_edges(rho, {{"A", "B"}, {"B", "C"}});
        const auto report = local_qmc_conditions(set);
        REQUIRE_FALSE(report.all_pass);
        REQUIRE(report.max_normality_residual > 1e-8);
        REQUIRE(report.first_failure() != nullptr);
    }

    SECTION("non-tree sets are refused") {
        const DensityOperator rho = random_density(SystemLayout{{"A", 2}, {"B", 2}, {"C", 2}}, 63);
        REQUIRE_THROWS_AS(
            local_qmc_conditions(marginals_on_edges(rho, {{"A", "B"}, {"B", "C"}, {"A", "C"}})),
            HypothesisError);
    }
}

TEST_CASE("Petz factorization reconstructions") {
    SECTION("product marginals on a 3-path") {
        const MarginalSet set = product_path_set({"A", "B", "C"}, 2, 70);
        const auto rec = petz_factorize(set, "A");
        const DensityOperator expect = tensor(
            tensor(set.node_marginal("A"), set.node_marginal("B")), set.node_marginal("C"));
        REQUIRE(trace_distance(rec.rho, expect) <= 1e-10);
        REQUIRE(rec.residuals.at("theta_normality") <= 1e-10);
    }

    SECTION("GHZ marginals reproduce the dephased GHZ") {
        const auto rec = petz_factorize(ghz_path_set(), "A");
        REQUIRE(trace_distance(rec.rho, qmt::test::ghz_dephased()) <= 1e-10);
        REQUIRE(rec.closed_form_entropy_bits == Approx(1.0).margin(1e-9));
    }

    SECTION("product-edge QMT round-trips on a 4-path") {
        const QmtInstance inst = random_qmt(path_graph({"A", "B", "C", "D"}), EdgeDims{2, 2}, 71);
        const auto rec = petz_factorize(inst.tree_marginals, "A");
        REQUIRE(trace_distance(rec.rho, inst.state) <= 1e-8);
        REQUIRE(rec.residuals.at("marginal_max_distance") <= 1e-8);
        REQUIRE(rec.residuals.at("closed_vs_direct_entropy") <= 1e-8);
        REQUIRE(rec.delta_factors.size() == 2);
    }

    SECTION("star QMT round-trips") {
        const QmtInstance inst = random_qmt(star_graph("Y", {"P", "Q", "R"}), EdgeDims{2, 2}, 72);
        const auto rec = petz_factorize(inst.tree_marginals, "Y");
        REQUIRE(trace_distance(rec.rho, inst.state) <= 1e-8);
    }

    SECTION("order invariance across roots") {
        for (std::uint64_t seed : {73u, 74u}) {
            const QmtInstance inst =
                random_qmt(path_graph({"A", "B", "C", "D"}), EdgeDims{2, 2}, seed);
            const auto from_a = petz_factorize(inst.tree_marginals, "A");
            const auto from_c = petz_factorize(inst.tree_marginals, "C");
            REQUIRE(trace_distance(from_a.rho, from_c.rho) <= 1e-8);
        }
    }

    SECTION("local condition failures are loud and name the chain") {
        const DensityOperator rho =
            random_pure_density(SystemLayout{{"A", 2}, {"B", 2}, {"C", 2}}, 75);
        const MarginalSet set = marginals_on_edges(rho, {{"A", "B"}, {"B", "C"}});
        REQUIRE_THROWS_WITH(petz_factorize(set, "A"),
                            Catch::Matchers::ContainsSubstring("A - B - C"));
    }
}

TEST_CASE("closed-form entropy") {
    SECTION("product marginals add single-node entropies") {
        const MarginalSet set = product_path_set({"A", "B", "C"}, 2, 80);
        double expect = 0.0;
        for (const auto& n : {"A", "B", "C"}) expect += von_neumann_entropy(set.node_marginal(n));
        REQUIRE(qmt_entropy_closed_form(set, set.graph()) == Approx(expect).margin(1e-10));
    }

    SECTION("GHZ path gives S_AB + S_BC - S_B = 1") {
        const MarginalSet set = ghz_path_set();
        REQUIRE(qmt_entropy_closed_form(set, set.graph()) == Approx(1.0).margin(1e-10));
    }

    SECTION("matches the direct entropy on generated QMTs") {
        const QmtInstance inst = random_qmt(path_graph({"A", "B", "C", "D"}), EdgeDims{2, 2}, 81);
        const double closed = qmt_entropy_closed_form(inst.tree_marginals, inst.tree);
        REQUIRE(closed == Approx(von_neumann_entropy(inst.state)).margin(1e-8));
    }
}

TEST_CASE("log condition residuals") {
    SECTION("full-rank product state") {
        const MarginalSet set = product_path_set({"A", "B", "C"}, 2, 90);
        const DensityOperator prod = tensor(
            tensor(set.node_marginal("A"), set.node_marginal("B")), set.node_marginal("C"));
        const auto report = verify_log_condition(prod, set);
        REQUIRE(report.support_ok);
        REQUIRE(report.residual <= 1e-10);
    }

    SECTION("factorization outputs satisfy the identity") {
        const QmtInstance inst = random_qmt(star_graph("Y", {"P", "Q", "R"}), EdgeDims{2, 2}, 91);
        const auto rec = petz_factorize(inst.tree_marginals, "Y");
        REQUIRE(verify_log_condition(rec.rho, inst.tree_marginals).residual <= 1e-8);
    }

    SECTION("GHZ violates the identity on its own marginals") {
        const auto report = verify_log_condition(qmt::test::ghz(), ghz_path_set());
        REQUIRE(report.residual > 0.1);
    }

    SECTION("incompatible states are rejected") {
        const MarginalSet set = ghz_path_set();
        const DensityOperator other =
            random_density(SystemLayout{{"A", 2}, {"B", 2}, {"C", 2}}, 92);
        REQUIRE_THROWS_AS(verify_log_condition(other, set), std::invalid_argument);
    }
}

TEST_CASE("local Markov CMI maps") {
    SECTION("product-edge QMTs satisfy every condition") {
        const QmtInstance inst = random_qmt(path_graph({"A", "B", "C", "D"}), EdgeDims{2, 2}, 100);
        const auto report = local_markov_cmi(inst.state, inst.tree);
        REQUIRE(report.max_value <= 1e-9);
        REQUIRE(report.chain_cmi.size() == 2);
        REQUIRE(report.order_cmi.size() == 2);
    }

    SECTION("GHZ breaks the center condition") {
        const auto report = local_markov_cmi(qmt::test::ghz(), path_graph({"A", "B", "C"}));
        REQUIRE(report.chain_cmi.size() == 1);
        REQUIRE(report.chain_cmi[0].second == Approx(1.0).margin(1e-9));
    }

    SECTION("4-chain composite conditions (chain-rule consequences)") {
        const QmtInstance inst = random_qmt(path_graph({"A", "B", "C", "D"}), EdgeDims{2, 2}, 101);
        const double joint =
            conditional_mutual_information(inst.state, {"A", "B"}, {"D"}, {"C"});
        const double tail = conditional_mutual_information(inst.state, {"B"}, {"D"}, {"C"});
        REQUIRE(std::abs(joint) <= 1e-9);
        REQUIRE(std::abs(tail) <= 1e-9);
    }

    SECTION("star QMTs have conditionally independent leaves") {
        const QmtInstance inst =
            random_qmt(star_graph("Y", {"P", "Q", "R"}), EdgeDims{2, 2}, 102);
        for (const auto& [chain, value] : local_markov_cmi(inst.state, inst.tree).chain_cmi) {
            REQUIRE(chain.center == "Y");
            REQUIRE(std::abs(value) <= 1e-9);
        }
    }

    SECTION("degree-stable relaxation holds along the order") {
        const QmtInstance inst = random_qmt(path_graph({"A", "B", "C", "D", "E"}),
                                            EdgeDims{2, 2}, 103, 4096);
        const ConstructiveOrder co = constructive_order(inst.tree, "A");
        const auto degree_in_prefix = [&](const std::string& v, size_t k) {
            long d = 0;
            for (size_t j = 0; j < k; ++j) {
                if (co.order[j] != v && inst.tree.has_edge(v, co.order[j])) ++d;
            }
            return d;
        };
        for (size_t i = 1; i < co.order.size(); ++i) {
            const std::string& xi = co.order[i];
            const std::string& yi = co.parent.at(xi);
            for (size_t r = std::max<size_t>(i + 1, 3); r <= co.order.size(); ++r) {
                if (degree_in_prefix(xi, r) != degree_in_prefix(xi, i + 1) ||
                    degree_in_prefix(yi, r) != degree_in_prefix(yi, i + 1)) {
                    break;  // degree stability window ended
                }
                std::vector<std::string> rest;
                for (size_t j = 0; j < r; ++j) {
                    if (co.order[j] != xi && co.order[j] != yi) rest.push_back(co.order[j]);
                }
                if (rest.empty()) continue;
                REQUIRE(std::abs(conditional_mutual_information(inst.state, {xi}, rest, {yi})) <=
                        1e-9);
            }
        }
    }
}

TEST_CASE("MECMP decision") {
    SECTION("maximally mixed qubits on a 3-path") {
        const SystemLayout layout{{"A", 2}, {"B", 2}, {"C", 2}};
        std::vector<DensityOperator> pairs{
            maximally_mixed({{"A", 2}, {"B", 2}}),
            maximally_mixed({{"B", 2}, {"C", 2}}),
        };
        const MarginalSet set = make_marginal_set(layout, std::move(pairs));
        const auto yes = mecmp_decide(set, 3.0);
        REQUIRE(yes.accept);
        REQUIRE(yes.entropy_bits == Approx(3.0).margin(1e-9));
        REQUIRE_FALSE(mecmp_decide(set, 3.1).accept);
    }

    SECTION("GHZ marginals accept at k = 1 with the dephased certificate") {
        const auto v = mecmp_decide(ghz_path_set(), 1.0);
        REQUIRE(v.accept);
        REQUIRE(von_neumann_entropy(v.certificate.rho) == Approx(1.0).margin(1e-9));
    }

    SECTION("non-tree input is outside the tractable class") {
        const DensityOperator rho = random_density(SystemLayout{{"A", 2}, {"B", 2}, {"C", 2}}, 110);
        const MarginalSet tri = marginals_on_edges(rho, {{"A", "B"}, {"B", "C"}, {"A", "C"}});
        REQUIRE_THROWS_WITH(mecmp_decide(tri, 1.0),
                            Catch::Matchers::ContainsSubstring("not a tree"));
    }
}

TEST_CASE("random QMT instances") {
    SECTION("pure edge states give a pure global product") {
        const QmtInstance inst =
            random_qmt(path_graph({"A", "B", "C"}), EdgeDims{2, 2}, 120, 4096, 1);
        REQUIRE(von_neumann_entropy(inst.state) <= 1e-9);
        REQUIRE(local_qmc_conditions(inst.tree_marginals).all_pass);
    }

    SECTION("returned marginals equal partial traces of the state") {
        const QmtInstance inst =
            random_qmt(star_graph("Y", {"P", "Q", "R"}), EdgeDims{2, 2}, 121);
        for (const auto& [key, op] : inst.tree_marginals.pairs) {
            REQUIRE(marginal_distance(marginal(inst.state, {key.first, key.second}), op) <= 1e-12);
        }
    }

    SECTION("same seed gives the identical instance") {
        const QmtInstance a = random_qmt(path_graph({"A", "B", "C"}), EdgeDims{2, 2}, 122);
        const QmtInstance b = random_qmt(path_graph({"A", "B", "C"}), EdgeDims{2, 2}, 122);
        REQUIRE(a.state.matrix == b.state.matrix);
    }

    SECTION("dimension caps are enforced") {
        REQUIRE_THROWS_AS(random_qmt(path_graph({"A", "B", "C", "D", "E", "F", "G"}),
                                     EdgeDims{3, 3}, 1, 729),
                          std::invalid_argument);
    }
}
