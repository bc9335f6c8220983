// qmt: maximum-entropy reconstruction and structure learning for tree
// marginal sets, plus the 3cQED entropy-gap gadget.
//
// Exit codes: 0 accept/success, 1 reject/negative verdict, 2 error,
// violated promise or failed hypothesis. Reports go to stdout as JSON;
// errors go to stderr as JSON.

#include <chrono>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qmt/qmt.hpp"

using namespace qmt;

namespace {

struct GlobalFlags {
    double tol = 1e-8;
    double cutoff_rel = 1e-10;
    std::optional<std::uint64_t> seed;
};

void add_global_flags(CLI::App* sub, GlobalFlags& flags) {
    sub->add_option("--tol", flags.tol, "decision tolerance")->capture_default_str();
    sub->add_option("--cutoff", flags.cutoff_rel, "relative spectral support cutoff")
        ->capture_default_str();
    sub->add_option("--seed", flags.seed, "RNG seed for seeded operations");
}

RunReport base_report(const std::string& command, const GlobalFlags& flags) {
    RunReport r;
    r.command = command;
    r.tolerances["tol"] = flags.tol;
    r.tolerances["cutoff_rel"] = flags.cutoff_rel;
    r.seed = flags.seed;
    return r;
}

int emit(RunReport& report, const std::chrono::steady_clock::time_point& start, int code) {
    report.wall_time_ms = static_cast<long>(std::chrono::duration_cast<std::chrono::milliseconds>(
                                                std::chrono::steady_clock::now() - start)
                                                .count());
    std::cout << report.to_json().dump(2) << std::endl;
    return code;
}

std::vector<std::string> split_csv(const std::string& csv) {
    std::vector<std::string> out;
    std::string current;
    for (char c : csv) {
        if (c == ',') {
            if (!current.empty()) out.push_back(current);
            current.clear();
        } else {
            current += c;
        }
    }
    if (!current.empty()) out.push_back(current);
    return out;
}

std::vector<QmcBlock> parse_blocks(const std::string& spec) {
    std::vector<QmcBlock> out;
    for (const auto& tok : split_csv(spec)) {
        const auto x = tok.find('x');
        if (x == std::string::npos) {
            throw std::invalid_argument("blocks: expected entries like '1x2', got '" + tok + "'");
        }
        out.push_back({std::stol(tok.substr(0, x)), std::stol(tok.substr(x + 1))});
    }
    return out;
}

EdgeDims parse_edge_dims(const std::string& spec) {
    const auto x = spec.find('x');
    if (x == std::string::npos) {
        throw std::invalid_argument("edge-dims: expected 'LxR', got '" + spec + "'");
    }
    return {std::stol(spec.substr(0, x)), std::stol(spec.substr(x + 1))};
}

Json weights_to_json(const WeightedGraph& weights) {
    Json j = Json::array();
    for (const auto& [e, w] : weights.weights) j.push_back({e.first, e.second, w});
    return j;
}

std::vector<std::string> node_names(long n) {
    std::vector<std::string> nodes;
    for (long i = 1; i <= n; ++i) nodes.push_back("X" + std::to_string(i));
    return nodes;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"maximum-entropy states over tree marginal sets "
                 "(Petz factorization, quantum Chow-Liu, 3cQED gadget)"};
    app.require_subcommand(1);

    GlobalFlags flags;
    const auto start = std::chrono::steady_clock::now();
    std::function<int()> action;

    // ---- entropy ----
    {
        auto* sub = app.add_subcommand("entropy", "von Neumann entropy of an operator file");
        auto in = std::make_shared<std::string>();
        sub->add_option("--in", *in, "operator JSON")->required();
        add_global_flags(sub, flags);
        sub->callback([&, in]() {
            action = [&, in]() {
                RunReport report = base_report("entropy", flags);
                report.add_input(*in);
                const DensityOperator rho = load_operator(*in);
                report.results["entropy_bits"] = von_neumann_entropy(rho, flags.cutoff_rel);
                report.results["dim"] = rho.dim();
                return emit(report, start, 0);
            };
        });
    }

    // ---- cmi ----
    {
        auto* sub = app.add_subcommand("cmi", "conditional mutual information I(A:C|B)");
        auto in = std::make_shared<std::string>();
        auto a = std::make_shared<std::string>(), c = std::make_shared<std::string>(),
             b = std::make_shared<std::string>();
        sub->add_option("--in", *in, "operator JSON")->required();
        sub->add_option("--part-a", *a, "comma-separated labels of A")->required();
        sub->add_option("--part-c", *c, "comma-separated labels of C")->required();
        sub->add_option("--part-b", *b, "comma-separated labels of B (may be empty)");
        add_global_flags(sub, flags);
        sub->callback([&, in, a, c, b]() {
            action = [&, in, a, c, b]() {
                RunReport report = base_report("cmi", flags);
                report.add_input(*in);
                const DensityOperator rho = load_operator(*in);
                const double v = conditional_mutual_information(rho, split_csv(*a), split_csv(*c),
                                                                split_csv(*b));
                report.results["cmi_bits"] = clamp_cmi(v);
                report.residuals["cmi_raw"] = v;
                return emit(report, start, 0);
            };
        });
    }

    // ---- check-qmc ----
    {
        auto* sub = app.add_subcommand("check-qmc",
                                       "QMC existence test for a 3-chain marginal pair");
        auto chain_path = std::make_shared<std::string>();
        sub->add_option("--chain", *chain_path, "chain JSON with rho_ab, rho_bc")->required();
        add_global_flags(sub, flags);
        sub->callback([&, chain_path]() {
            action = [&, chain_path]() {
                RunReport report = base_report("check-qmc", flags);
                report.add_input(*chain_path);
                const ThreeChainMarginals chain =
                    load_chain(*chain_path, std::max(1e-3, 10 * flags.tol));
                const QmcVerdict v = qmc_exists(chain, flags.tol, flags.cutoff_rel);
                report.results = qmc_verdict_to_json(v);
                return emit(report, start, v.exists ? 0 : 1);
            };
        });
    }

    // ---- petz ----
    {
        auto* sub = app.add_subcommand("petz", "apply the (rotated) Petz map to rho_AB");
        auto chain_path = std::make_shared<std::string>();
        auto out = std::make_shared<std::string>();
        auto t = std::make_shared<double>(0.0);
        sub->add_option("--chain", *chain_path, "chain JSON with rho_ab, rho_bc")->required();
        sub->add_option("--rotation-t", *t, "rotation parameter (0 = plain Petz)")
            ->capture_default_str();
        sub->add_option("--out", *out, "write the recovered operator here");
        add_global_flags(sub, flags);
        sub->callback([&, chain_path, out, t]() {
            action = [&, chain_path, out, t]() {
                RunReport report = base_report("petz", flags);
                report.add_input(*chain_path);
                const ThreeChainMarginals chain =
                    load_chain(*chain_path, std::max(1e-3, 10 * flags.tol));
                const DensityOperator rho_b = chain.rho_b();
                const LabeledOperator rec =
                    *t == 0.0
                        ? petz_map_apply(chain.rho_bc, rho_b, chain.rho_ab.labeled(), 1e-6,
                                         flags.cutoff_rel)
                        : rotated_petz_apply(chain.rho_bc, rho_b, chain.rho_ab.labeled(), *t,
                                             1e-6, flags.cutoff_rel);
                report.results["trace"] = rec.mat.trace().real();
                report.results["rotation_t"] = *t;
                report.residuals["hermiticity_defect"] = hermiticity_defect(rec.mat);
                report.residuals["trace_deviation"] = std::abs(rec.mat.trace().real() - 1.0);
                if (!out->empty()) {
                    write_json_file(*out, operator_to_json(rec));
                    report.results["out"] = *out;
                }
                return emit(report, start, 0);
            };
        });
    }

    // ---- maxent-tree ----
    {
        auto* sub = app.add_subcommand("maxent-tree",
                                       "Petz-factorize the maximum-entropy tree state");
        auto set_path = std::make_shared<std::string>();
        auto root = std::make_shared<std::string>();
        auto out = std::make_shared<std::string>();
        auto oracle = std::make_shared<bool>(false);
        sub->add_option("--marginals", *set_path, "marginal-set JSON")->required();
        sub->add_option("--root", *root, "root node of the constructive order");
        sub->add_option("--out", *out, "write the reconstructed state here");
        sub->add_flag("--oracle", *oracle, "cross-check against the dual-ascent solver");
        add_global_flags(sub, flags);
        sub->callback([&, set_path, root, out, oracle]() {
            action = [&, set_path, root, out, oracle]() {
                RunReport report = base_report("maxent-tree", flags);
                report.add_input(*set_path);
                const MarginalSet set = load_marginal_set(*set_path, std::max(flags.tol, 1e-8));
                const AssociatedGraph g = set.graph();
                const std::string chosen_root =
                    root->empty() ? *std::min_element(g.nodes.begin(), g.nodes.end()) : *root;
                const TreeReconstruction rec =
                    petz_factorize(set, constructive_order(g, chosen_root), flags.tol,
                                   flags.cutoff_rel);
                report.results = reconstruction_to_json(rec);
                report.results["root"] = chosen_root;
                report.residuals = Json(rec.residuals);
                if (*oracle) {
                    const MaxentResult ref = maxent_bruteforce(set);
                    report.results["oracle_trace_distance"] = trace_distance(ref.state, rec.rho);
                    report.results["oracle_entropy_gap"] =
                        std::abs(von_neumann_entropy(ref.state) - rec.closed_form_entropy_bits);
                    report.results["oracle_iterations"] = ref.iterations;
                }
                if (!out->empty()) {
                    save_operator(rec.rho, *out);
                    report.results["out"] = *out;
                }
                return emit(report, start, 0);
            };
        });
    }

    // ---- decide ----
    {
        auto* sub = app.add_subcommand("decide", "maximum-entropy threshold decision");
        auto set_path = std::make_shared<std::string>();
        auto k = std::make_shared<double>();
        sub->add_option("--marginals", *set_path, "marginal-set JSON")->required();
        sub->add_option("--k", *k, "entropy threshold in bits")->required();
        add_global_flags(sub, flags);
        sub->callback([&, set_path, k]() {
            action = [&, set_path, k]() {
                RunReport report = base_report("decide", flags);
                report.add_input(*set_path);
                const MarginalSet set = load_marginal_set(*set_path, std::max(flags.tol, 1e-8));
                const MecmpVerdict v = mecmp_decide(set, *k, flags.tol);
                report.results["accept"] = v.accept;
                report.results["entropy_bits"] = v.entropy_bits;
                report.results["k"] = *k;
                report.residuals = Json(v.certificate.residuals);
                return emit(report, start, v.accept ? 0 : 1);
            };
        });
    }

    // ---- chains ----
    {
        auto* sub = app.add_subcommand("chains", "enumerate the 3-chains of a graph");
        auto graph_path = std::make_shared<std::string>();
        sub->add_option("--graph", *graph_path, "graph JSON")->required();
        add_global_flags(sub, flags);
        sub->callback([&, graph_path]() {
            action = [&, graph_path]() {
                RunReport report = base_report("chains", flags);
                report.add_input(*graph_path);
                const AssociatedGraph g = load_graph(*graph_path);
                const auto chains = enumerate_3chains(g);
                Json list = Json::array();
                for (const auto& c : chains) list.push_back({c.left, c.center, c.right});
                report.results["chains"] = std::move(list);
                report.results["count"] = chains.size();
                report.results["is_tree"] = g.is_tree();
                return emit(report, start, 0);
            };
        });
    }

    // ---- chowliu ----
    {
        auto* sub = app.add_subcommand("chowliu", "learn the best-fitting Markov tree");
        auto set_path = std::make_shared<std::string>();
        auto truth_path = std::make_shared<std::string>();
        auto out = std::make_shared<std::string>();
        auto oracle = std::make_shared<bool>(false);
        sub->add_option("--marginals", *set_path, "complete pairwise marginal-set JSON")
            ->required();
        sub->add_option("--truth", *truth_path, "global state for divergence diagnostics");
        sub->add_option("--out", *out, "write the reconstructed state here");
        sub->add_flag("--oracle", *oracle,
                      "compare against exhaustive tree enumeration (needs --truth, n <= 5)");
        add_global_flags(sub, flags);
        sub->callback([&, set_path, truth_path, out, oracle]() {
            action = [&, set_path, truth_path, out, oracle]() {
                RunReport report = base_report("chowliu", flags);
                report.add_input(*set_path);
                const MarginalSet set = load_marginal_set(*set_path, std::max(flags.tol, 1e-8));
                const ChowLiuResult res = quantum_chow_liu(set, flags.tol);
                Json edges = Json::array();
                for (const auto& [a, b] : res.tree.edges) edges.push_back({a, b});
                report.results["tree_edges"] = std::move(edges);
                report.results["weights"] = weights_to_json(res.weights);
                report.results["entropy_bits"] = res.reconstruction.closed_form_entropy_bits;
                report.residuals = Json(res.reconstruction.residuals);

                std::vector<DensityOperator> tree_pairs;
                for (const auto& [a, b] : res.tree.edges) tree_pairs.push_back(set.pair_of(a, b));
                const MarginalSet tree_set = make_marginal_set(set.layout, std::move(tree_pairs),
                                                               set.consistency_tol);
                report.results["delta_s_reconstruction"] =
                    delta_s(tree_set, res.reconstruction.rho, flags.tol);

                if (!truth_path->empty()) {
                    report.add_input(*truth_path);
                    const DensityOperator truth = load_operator(*truth_path);
                    const DivergenceIdentity id =
                        relative_entropy_gap(truth, res.reconstruction, flags.tol);
                    report.results["divergence_lhs"] = id.lhs;
                    report.results["divergence_rhs"] = id.rhs;
                    report.residuals["divergence_identity"] = id.residual;
                    report.results["delta_s_truth"] = delta_s(tree_set, truth, flags.tol);
                    if (*oracle) {
                        const BestTreeResult best = brute_force_best_tree(truth, flags.tol);
                        report.results["oracle_trees_considered"] = best.trees_considered;
                        report.results["oracle_divergence"] = best.divergence;
                        report.results["oracle_agreement"] =
                            best.tree.edges == res.tree.edges;
                    }
                } else if (*oracle) {
                    throw std::invalid_argument("chowliu: --oracle requires --truth");
                }
                if (!out->empty()) {
                    save_operator(res.reconstruction.rho, *out);
                    report.results["out"] = *out;
                }
                return emit(report, start, 0);
            };
        });
    }

    // ---- gadget ----
    {
        auto* sub = app.add_subcommand("gadget", "build the entropy-gap reduction pair");
        auto mu0_path = std::make_shared<std::string>(), mu1_path = std::make_shared<std::string>();
        auto prefix = std::make_shared<std::string>();
        sub->add_option("--mu0", *mu0_path, "operator JSON")->required();
        sub->add_option("--mu1", *mu1_path, "operator JSON")->required();
        sub->add_option("--out-prefix", *prefix, "write <prefix>_rho_prime.json and "
                                                 "<prefix>_rho_doubleprime.json");
        add_global_flags(sub, flags);
        sub->callback([&, mu0_path, mu1_path, prefix]() {
            action = [&, mu0_path, mu1_path, prefix]() {
                RunReport report = base_report("gadget", flags);
                report.add_input(*mu0_path);
                report.add_input(*mu1_path);
                const GadgetPair pair =
                    build_gadget_pair(load_operator(*mu0_path), load_operator(*mu1_path));
                const EntropyGapReport gap = entropy_gap(pair);
                report.results["entropy_gap_bits"] = gap.gap_bits;
                report.results["gap_identity_value"] = gap.identity_value;
                report.residuals["gap_identity"] = gap.identity_residual;
                report.residuals["a_marginal_distance"] = pair.a_marginal_distance;
                report.residuals["c_marginal_distance"] = pair.c_marginal_distance;
                if (!prefix->empty()) {
                    save_operator(pair.rho_prime, *prefix + "_rho_prime.json");
                    save_operator(pair.rho_doubleprime, *prefix + "_rho_doubleprime.json");
                    report.results["out"] = {*prefix + "_rho_prime.json",
                                             *prefix + "_rho_doubleprime.json"};
                }
                return emit(report, start, 0);
            };
        });
    }

    // ---- decide-3cqed ----
    {
        auto* sub = app.add_subcommand("decide-3cqed", "promise entropy-difference decision");
        auto r0 = std::make_shared<std::string>(), r1 = std::make_shared<std::string>();
        sub->add_option("--rho0", *r0, "operator JSON")->required();
        sub->add_option("--rho1", *r1, "operator JSON")->required();
        add_global_flags(sub, flags);
        sub->callback([&, r0, r1]() {
            action = [&, r0, r1]() {
                RunReport report = base_report("decide-3cqed", flags);
                report.add_input(*r0);
                report.add_input(*r1);
                const ThreeCqedDecision d =
                    decide_3cqed(load_operator(*r0), load_operator(*r1), flags.tol);
                report.results["s0_bits"] = d.s0;
                report.results["s1_bits"] = d.s1;
                report.results["gap_bits"] = d.s0 - d.s1;
                report.residuals["a_marginal_distance"] = d.a_marginal_distance;
                report.residuals["c_marginal_distance"] = d.c_marginal_distance;
                switch (d.verdict) {
                    case ThreeCqedVerdict::Accept:
                        report.results["verdict"] = "accept";
                        return emit(report, start, 0);
                    case ThreeCqedVerdict::Reject:
                        report.results["verdict"] = "reject";
                        return emit(report, start, 1);
                    default:
                        report.results["verdict"] = "violated-promise";
                        report.results["note"] = d.note;
                        return emit(report, start, 2);
                }
            };
        });
    }

    // ---- generate ----
    {
        auto* sub = app.add_subcommand("generate", "write seeded instances plus a manifest");
        auto kind = std::make_shared<std::string>();
        auto prefix = std::make_shared<std::string>();
        auto dim = std::make_shared<long>(2), rank = std::make_shared<long>(0);
        auto dim_a = std::make_shared<long>(2), dim_c = std::make_shared<long>(2);
        auto blocks = std::make_shared<std::string>("1x2,2x1");
        auto tree_kind = std::make_shared<std::string>("path");
        auto n = std::make_shared<long>(4);
        auto edge_dims = std::make_shared<std::string>("2x2");
        auto edge_rank = std::make_shared<long>(0);
        auto mode = std::make_shared<std::string>("random");
        sub->add_option("--kind", *kind, "density | qmc | qmt | gadget-mu-pair")->required();
        sub->add_option("--out-prefix", *prefix, "output file prefix")->required();
        sub->add_option("--dim", *dim, "dimension (density, gadget-mu-pair)")
            ->capture_default_str();
        sub->add_option("--rank", *rank, "rank (density; 0 = full)")->capture_default_str();
        sub->add_option("--dim-a", *dim_a, "A dimension (qmc)")->capture_default_str();
        sub->add_option("--dim-c", *dim_c, "C dimension (qmc)")->capture_default_str();
        sub->add_option("--blocks", *blocks, "qmc B-factorization, e.g. 1x2,2x1")
            ->capture_default_str();
        sub->add_option("--tree", *tree_kind, "qmt tree shape: path | star")
            ->capture_default_str();
        sub->add_option("--n", *n, "qmt node count")->capture_default_str();
        sub->add_option("--edge-dims", *edge_dims, "qmt per-edge factor dims LxR")
            ->capture_default_str();
        sub->add_option("--edge-rank", *edge_rank, "qmt edge state rank (0 = full)")
            ->capture_default_str();
        sub->add_option("--mode", *mode, "gadget-mu-pair: random | identical | orthogonal")
            ->capture_default_str();
        add_global_flags(sub, flags);
        sub->callback([&, kind, prefix, dim, rank, dim_a, dim_c, blocks, tree_kind, n, edge_dims,
                       edge_rank, mode]() {
            action = [&, kind, prefix, dim, rank, dim_a, dim_c, blocks, tree_kind, n, edge_dims,
                      edge_rank, mode]() {
                RunReport report = base_report("generate", flags);
                const std::uint64_t seed = flags.seed.value_or(1);
                report.seed = seed;
                Json manifest;
                manifest["kind"] = *kind;
                manifest["seed"] = seed;
                Json files = Json::array();

                if (*kind == "density") {
                    const long r = *rank == 0 ? *dim : *rank;
                    const DensityOperator rho = random_density(*dim, r, seed);
                    save_operator(rho, *prefix + ".json");
                    files.push_back(*prefix + ".json");
                    manifest["params"] = {{"dim", *dim}, {"rank", r}};
                    manifest["expected_invariants"] = {"hermitian", "psd", "unit trace"};
                } else if (*kind == "qmc") {
                    const DensityOperator rho = random_qmc(*dim_a, parse_blocks(*blocks), *dim_c,
                                                           seed);
                    save_operator(rho, *prefix + "_state.json");
                    Json chain;
                    chain["rho_ab"] = operator_to_json(partial_trace(rho, {"C"}));
                    chain["rho_bc"] = operator_to_json(partial_trace(rho, {"A"}));
                    write_json_file(*prefix + "_chain.json", chain);
                    files.push_back(*prefix + "_state.json");
                    files.push_back(*prefix + "_chain.json");
                    manifest["params"] = {{"dim_a", *dim_a}, {"dim_c", *dim_c},
                                          {"blocks", *blocks}};
                    manifest["expected_invariants"] = {"I(A:C|B) <= 1e-9",
                                                       "qmc_exists reconstructs the state"};
                } else if (*kind == "qmt") {
                    const auto nodes = node_names(*n);
                    const AssociatedGraph tree =
                        *tree_kind == "star"
                            ? star_graph(nodes.front(), {nodes.begin() + 1, nodes.end()})
                            : path_graph(nodes);
                    const QmtInstance inst = random_qmt(tree, parse_edge_dims(*edge_dims), seed,
                                                        4096, *edge_rank);
                    save_operator(inst.state, *prefix + "_state.json");
                    write_json_file(*prefix + "_marginals.json",
                                    marginal_set_to_json(inst.tree_marginals));
                    files.push_back(*prefix + "_state.json");
                    files.push_back(*prefix + "_marginals.json");
                    manifest["params"] = {{"tree", *tree_kind}, {"n", *n},
                                          {"edge_dims", *edge_dims}, {"edge_rank", *edge_rank}};
                    manifest["expected_invariants"] = {
                        "local QMC conditions pass on every 3-chain",
                        "petz_factorize round-trips the state",
                        "closed-form entropy matches the direct entropy"};
                } else if (*kind == "gadget-mu-pair") {
                    DensityOperator mu0 = random_density(*dim, *dim, seed);
                    DensityOperator mu1 = random_density(*dim, *dim, seed + 1);
                    if (*mode == "identical") {
                        mu1 = mu0;
                    } else if (*mode == "orthogonal") {
                        mu0 = basis_state(0, SystemLayout{{"S", *dim}});
                        mu1 = basis_state(1, SystemLayout{{"S", *dim}});
                    } else if (*mode != "random") {
                        throw std::invalid_argument("generate: unknown gadget-mu-pair mode '" +
                                                    *mode + "'");
                    }
                    save_operator(mu0, *prefix + "_mu0.json");
                    save_operator(mu1, *prefix + "_mu1.json");
                    files.push_back(*prefix + "_mu0.json");
                    files.push_back(*prefix + "_mu1.json");
                    manifest["params"] = {{"dim", *dim}, {"mode", *mode}};
                    manifest["expected_invariants"] = {
                        "gadget marginal compatibility <= 1e-10",
                        "entropy gap identity within 1e-9"};
                } else {
                    throw std::invalid_argument("generate: unknown kind '" + *kind + "'");
                }

                manifest["files"] = files;
                write_json_file(*prefix + "_manifest.json", manifest);
                report.results["manifest"] = *prefix + "_manifest.json";
                report.results["files"] = files;
                return emit(report, start, 0);
            };
        });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        Json err;
        err["error"] = "usage";
        err["message"] = e.what();
        std::cerr << err.dump(2) << std::endl;
        return 2;
    }

    try {
        return action ? action() : 2;
    } catch (const HypothesisError& e) {
        Json err;
        err["error"] = "hypothesis_violation";
        err["message"] = e.what();
        std::cerr << err.dump(2) << std::endl;
        return 2;
    } catch (const std::domain_error& e) {
        Json err;
        err["error"] = "domain_error";
        err["message"] = e.what();
        std::cerr << err.dump(2) << std::endl;
        return 2;
    } catch (const std::invalid_argument& e) {
        Json err;
        err["error"] = "invalid_input";
        err["message"] = e.what();
        std::cerr << err.dump(2) << std::endl;
        return 2;
    } catch (const std::exception& e) {
        Json err;
        err["error"] = "runtime_error";
        err["message"] = e.what();
        std::cerr << err.dump(2) << std::endl;
        return 2;
    }
}
