#include <CLI11.hpp>
#include <cstdlib>
#include <iostream>

#include "polyd/io.hpp"

using namespace polyd;

namespace {

int g_jobs = 1;

// "--partition" accepts the label string form ("1,1,-1,-1") or the JSON
// form ({"labels":[1,1,-1,-1]}).
TaggedPartition parse_partition_arg(const std::string& s, int n) {
    if (!s.empty() && s.front() == '{') {
        TaggedPartition P = partition_from_json(Json::parse(s));
        if (P.size() != n)
            throw std::invalid_argument("partition length mismatch: expected " + std::to_string(n) +
                                        " labels, got " + std::to_string(P.size()));
        return P;
    }
    return TaggedPartition::parse(s, n);
}

void print_matrix(std::ostream& os, const RatMatrix& M) {
    for (Eigen::Index i = 0; i < M.rows(); ++i) {
        for (Eigen::Index j = 0; j < M.cols(); ++j) os << (j ? "\t" : "") << M(i, j).str();
        os << "\n";
    }
}

int cmd_laplacian(const std::string& net_path, const std::string& out) {
    Network net = load_network(net_path);
    RatMatrix L = laplacian(net);
    if (out == "json") {
        Network lnet = Network::from_matrix(L);
        Json j = to_json(lnet);
        j["schema_version"] = kSchemaVersion;
        std::cout << j.dump(2) << "\n";
    } else {
        print_matrix(std::cout, L);
    }
    return 0;
}

int cmd_classify(const std::string& net_path, const std::string& partition, const std::string& out) {
    Network net = load_network(net_path);
    TaggedPartition P = parse_partition_arg(partition, net.n);
    if (out == "json") {
        std::cout << classification_report_json(net, P).dump(2) << "\n";
        return 0;
    }
    auto flags = classify(net, P);
    std::cout << "partition " << P.str() << " (p=" << P.num_parts() << ", q=" << P.num_counterparts()
              << ", r=" << (P.has_zero_part() ? 1 : 0) << ")\n";
    std::cout << "  invariant under W: " << (flags.invariant_under_W ? "yes" : "no") << "\n";
    std::cout << "  invariant under L: " << (flags.invariant_under_L ? "yes" : "no") << "\n";
    auto yn = [](bool b) { return b ? "yes" : "no"; };
    if (P.is_standard()) {
        std::cout << "  balanced: " << yn(flags.balanced)
                  << "  exo-balanced: " << yn(flags.exo_balanced)
                  << "  strictly-exo: " << yn(flags.strictly_exo_balanced) << "\n";
    } else {
        std::cout << "  odd-balanced: " << yn(flags.odd_balanced)
                  << "  linear-balanced: " << yn(flags.linear_balanced)
                  << "  even-odd-balanced: " << yn(flags.even_odd_balanced) << "\n";
    }
    std::cout << "  preserved by: ";
    bool first = true;
    for (auto c : preserving_system_classes(flags)) {
        std::cout << (first ? "" : ", ") << to_string(c);
        first = false;
    }
    std::cout << (first ? "(none)" : "") << "\n";
    return 0;
}

int cmd_lattice(const std::string& net_path, const std::string& matrix, const std::string& method,
                int max_n, const std::string& out) {
    Network net = load_network(net_path);
    auto m = lattice_method_from_string(method);
    std::vector<std::pair<std::string, RatMatrix>> targets;
    if (matrix == "W" || matrix == "both") targets.emplace_back("W", net.W);
    if (matrix == "L" || matrix == "both") targets.emplace_back("L", laplacian(net));
    if (targets.empty()) throw CLI::ValidationError("--matrix must be W, L or both");

    Json out_json = Json::array();
    for (auto& [tag, M] : targets) {
        InvariantLattice lat;
        std::vector<std::string> warnings;
        if (m == LatticeMethod::brute) {
            lat = lattice_bruteforce(M, max_n, g_jobs, tag);
        } else if (m == LatticeMethod::eigen) {
            auto r = lattice_eigen(M, {}, tag);
            lat = std::move(r.lattice);
            warnings = std::move(r.warnings);
        } else {
            lat = lattice_bruteforce(M, max_n, g_jobs, tag);
            auto r = lattice_eigen(M, {}, tag);
            warnings = std::move(r.warnings);
            if (r.lattice.elements != lat.elements)
                warnings.push_back("eigen method disagreed with brute force; brute force kept");
        }
        if (out == "dot") {
            std::cout << hasse_dot(lat);
        } else if (out == "json") {
            Json j = to_json(lat, net);
            j["warnings"] = warnings;
            out_json.push_back(std::move(j));
        } else {
            std::cout << "lattice " << tag << ": " << lat.elements.size() << " elements\n";
            for (const auto& P : lat.elements)
                std::cout << "  " << P.str() << "  (dim " << P.dimension() << ")\n";
            for (const auto& w : warnings) std::cout << "  warning: " << w << "\n";
        }
    }
    if (out == "json") std::cout << out_json.dump(2) << "\n";
    return 0;
}

int cmd_quotient(const std::string& net_path, const std::string& partition, const std::string& kind,
                 const std::string& out) {
    Network net = load_network(net_path);
    TaggedPartition P = parse_partition_arg(partition, net.n);
    QuotientKind qk = quotient_kind_from_string(kind);  // bad kind is a usage error
    QuotientNetwork q;
    try {
        q = make_quotient(net, P, qk);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    if (out == "dot") std::cout << to_dot(q);
    else std::cout << to_json(q).dump(2) << "\n";
    return 0;
}

int cmd_simulate(const std::string& net_path, const std::string& partition, const std::string& cls_s,
                 std::uint64_t seed, double dt, int steps, double tol, int trials, bool expect_fail,
                 const std::string& mode) {
    Network net = load_network(net_path);
    TaggedPartition P = parse_partition_arg(partition, net.n);
    SystemClass cls = system_class_from_string(cls_s);
    const double horizon = dt * steps;

    if (mode == "restriction") {
        auto rep = restriction_consistency(net, P, cls, seed, dt, steps, tol);
        std::cout << to_json(rep).dump(2) << "\n";
        return rep.pass ? 0 : 1;
    }
    if (expect_fail) {
        auto res = falsify_flow_invariance(net, P, cls, trials, horizon, 1e-3, dt, seed);
        std::cout << to_json(res).dump(2) << "\n";
        return res.falsified ? 0 : 1;
    }
    auto cert = certify_flow_invariance(net, P, cls, trials, horizon, tol, dt, seed, g_jobs);
    std::cout << to_json(cert).dump(2) << "\n";
    return cert.pass ? 0 : 1;
}

int cmd_report(const std::string& net_path, const std::string& method, int max_n,
               const std::string& out) {
    Network net = load_network(net_path);
    auto rep = synchrony_antisynchrony_report(net, lattice_method_from_string(method), max_n, g_jobs);
    if (out == "json") {
        std::cout << to_json(rep).dump(2) << "\n";
        return 0;
    }
    std::cout << "synchrony/anti-synchrony subspaces: " << rep.entries.size() << " (|L_W| = "
              << rep.lattice_W.elements.size() << ", |L_L| = " << rep.lattice_L.elements.size()
              << ")\n";
    for (const auto& e : rep.entries) {
        std::cout << "  " << e.partition.str() << "  W:" << (e.in_W ? "y" : "n")
                  << " L:" << (e.in_L ? "y" : "n") << "  classes:";
        for (auto c : e.classes) std::cout << " " << to_string(c);
        std::cout << "\n";
    }
    for (const auto& [k, v] : rep.counts) std::cout << "  " << k << ": " << v << "\n";
    for (const auto& w : rep.warnings) std::cout << "  warning: " << w << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"synchrony and anti-synchrony subspaces of weighted networks"};
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--jobs", g_jobs, "worker threads for lattice filtering and simulation trials")
        ->default_val(1);
    if (const char* env = std::getenv("POLYD_JOBS")) g_jobs = std::max(1, std::atoi(env));

    std::string net_path, partition, out = "text", matrix = "both", method = "brute";
    std::string kind, cls_s, mode = "invariance";
    int max_n = 8, steps = 10000, trials = 5;
    double dt = 1e-3, tol = 1e-8;
    std::uint64_t seed = 2024;
    bool expect_fail = false;

    auto* lap = app.add_subcommand("laplacian", "print the Laplacian matrix L = D - W");
    lap->add_option("--network", net_path, "network JSON file")->required();
    lap->add_option("--out", out, "output format: text|json");

    auto* cls = app.add_subcommand("classify", "classify a tagged partition for a network");
    cls->add_option("--network", net_path)->required();
    cls->add_option("--partition", partition, "labels, e.g. \"1,1,-1,-1\"")->required();
    cls->add_option("--out", out, "text|json");

    auto* lat = app.add_subcommand("lattice", "invariant generalized polydiagonals of W and/or L");
    lat->add_option("--network", net_path)->required();
    lat->add_option("--matrix", matrix, "W|L|both");
    lat->add_option("--method", method, "brute|eigen|both");
    lat->add_option("--max-n", max_n, "brute-force cell-count limit");
    lat->add_option("--out", out, "text|json|dot");

    auto* quo = app.add_subcommand("quotient", "quotient or symbolic quotient network");
    quo->add_option("--network", net_path)->required();
    quo->add_option("--partition", partition)->required();
    quo->add_option("--kind", kind, "balanced|exo|odd|linear|eo")->required();
    quo->add_option("--out", out, "json|dot");

    auto* sim = app.add_subcommand("simulate", "certify flow invariance numerically");
    sim->add_option("--network", net_path)->required();
    sim->add_option("--partition", partition)->required();
    sim->add_option("--class", cls_s, "I_G|I_G0|I_Godd|I_Gl|I_Geo")->required();
    sim->add_option("--seed", seed);
    sim->add_option("--dt", dt);
    sim->add_option("--steps", steps);
    sim->add_option("--tol", tol);
    sim->add_option("--trials", trials);
    sim->add_flag("--expect-fail", expect_fail, "look for a sampled system that escapes");
    sim->add_option("--mode", mode, "invariance|restriction");

    auto* rep = app.add_subcommand("report", "full synchrony/anti-synchrony report");
    rep->add_option("--network", net_path)->required();
    rep->add_option("--method", method, "brute|eigen|both");
    rep->add_option("--max-n", max_n);
    rep->add_option("--out", out, "text|json");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (*lap) return cmd_laplacian(net_path, out);
        if (*cls) return cmd_classify(net_path, partition, out);
        if (*lat) return cmd_lattice(net_path, matrix, method, max_n, out);
        if (*quo) return cmd_quotient(net_path, partition, kind, out);
        if (*sim) return cmd_simulate(net_path, partition, cls_s, seed, dt, steps, tol, trials,
                                      expect_fail, mode);
        if (*rep) return cmd_report(net_path, method, max_n, out);
    } catch (const LatticeSizeError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
