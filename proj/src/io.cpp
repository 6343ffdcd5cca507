#include "polyd/io.hpp"

#include <fstream>
#include <set>

namespace polyd {

namespace {

Rational weight_from_json(const Json& v) {
    if (v.is_string()) return Rational::parse(v.get<std::string>());
    if (v.is_number_integer()) return Rational(static_cast<long>(v.get<long long>()));
    throw std::invalid_argument(
        "network: weights must be strings (\"3\", \"-3/2\", \"2.3\") or integers");
}

}  // namespace

Network network_from_json(const Json& j) {
    if (!j.contains("n") || !j["n"].is_number_integer())
        throw std::invalid_argument("network: missing integer field \"n\"");
    const int n = j["n"].get<int>();
    if (n < 1) throw std::invalid_argument("network: n must be positive");

    RatMatrix W = RatMatrix::Zero(n, n);
    if (j.contains("weights")) {
        const auto& rows = j["weights"];
        if (!rows.is_array() || static_cast<int>(rows.size()) != n)
            throw std::invalid_argument("network: \"weights\" must be an n x n array");
        for (int i = 0; i < n; ++i) {
            if (!rows[i].is_array() || static_cast<int>(rows[i].size()) != n)
                throw std::invalid_argument("network: \"weights\" must be an n x n array");
            for (int k = 0; k < n; ++k) W(i, k) = weight_from_json(rows[i][k]);
        }
    } else if (j.contains("edges")) {
        std::set<std::pair<int, int>> seen;
        for (const auto& e : j["edges"]) {
            int to = e.at("to").get<int>(), from = e.at("from").get<int>();
            if (to < 1 || to > n || from < 1 || from > n)
                throw std::invalid_argument("network: edge endpoint out of range");
            if (!seen.insert({to, from}).second)
                throw std::invalid_argument("network: duplicate edge (to=" + std::to_string(to) +
                                            ", from=" + std::to_string(from) + ")");
            W(to - 1, from - 1) = weight_from_json(e.at("weight"));
        }
    } else {
        throw std::invalid_argument("network: need \"weights\" or \"edges\"");
    }
    return Network::from_matrix(std::move(W));
}

Network load_network(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open network file '" + path + "'");
    Json j;
    in >> j;
    return network_from_json(j);
}

Json to_json(const Network& net) {
    Json rows = Json::array();
    for (int i = 0; i < net.n; ++i) {
        Json row = Json::array();
        for (int k = 0; k < net.n; ++k) row.push_back(net.W(i, k).str());
        rows.push_back(std::move(row));
    }
    return Json{{"n", net.n}, {"weights", std::move(rows)}};
}

TaggedPartition partition_from_json(const Json& j) {
    if (!j.contains("labels") || !j["labels"].is_array())
        throw std::invalid_argument("partition: missing \"labels\" array");
    std::vector<int> raw;
    for (const auto& v : j["labels"]) raw.push_back(v.get<int>());
    return TaggedPartition::canonicalize(raw);
}

Json to_json(const TaggedPartition& P) {
    return Json{{"labels", P.labels()},
                {"p", P.num_parts()},
                {"q", P.num_counterparts()},
                {"r", P.has_zero_part() ? 1 : 0},
                {"dimension", P.dimension()},
                {"standard", P.is_standard()}};
}

Json to_json(const BlockConditionReport& rep) {
    Json conds = Json::array();
    for (const auto& c : rep.conditions)
        conds.push_back(Json{{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
    return Json{{"pass", rep.overall}, {"conditions", std::move(conds)}};
}

Json to_json(const ClassificationFlags& f) {
    return Json{{"invariant_under_W", f.invariant_under_W},
                {"invariant_under_L", f.invariant_under_L},
                {"balanced", f.balanced},
                {"exo_balanced", f.exo_balanced},
                {"strictly_exo_balanced", f.strictly_exo_balanced},
                {"odd_balanced", f.odd_balanced},
                {"linear_balanced", f.linear_balanced},
                {"even_odd_balanced", f.even_odd_balanced}};
}

Json classes_to_json(const std::set<SystemClass>& classes) {
    Json a = Json::array();
    for (auto c : {SystemClass::IG, SystemClass::IG0, SystemClass::IGodd, SystemClass::IGl,
                   SystemClass::IGeo})
        if (classes.count(c)) a.push_back(to_string(c));
    return a;
}

Json classification_report_json(const Network& net, const TaggedPartition& P) {
    auto flags = classify(net, P);
    Json j{{"schema_version", kSchemaVersion}};
    j["partition"] = to_json(P);
    j["flags"] = to_json(flags);
    j["preserving_classes"] = classes_to_json(preserving_system_classes(flags));
    if (!P.is_null()) {
        j["block_conditions_W"] = to_json(check_block_conditions_W(net, P));
        j["block_conditions_L"] = to_json(check_block_conditions_L_via_W(net, P));
    }
    return j;
}

Json to_json(const QuotientNetwork& q) {
    Json cells = Json::array();
    for (size_t i = 0; i < q.cell_names.size(); ++i) {
        const char* tag = q.cell_tags[i] == CellTag::plus ? "plus"
                        : q.cell_tags[i] == CellTag::minus ? "minus"
                                                           : "zero";
        cells.push_back(Json{{"name", q.cell_names[i]},
                             {"tag", tag},
                             {"representative", q.representatives[i] + 1}});
    }
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < q.matrix.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index k = 0; k < q.matrix.cols(); ++k) row.push_back(q.matrix(i, k).str());
        rows.push_back(std::move(row));
    }
    return Json{{"schema_version", kSchemaVersion},
                {"kind", to_string(q.kind)},
                {"cells", std::move(cells)},
                {"matrix", std::move(rows)}};
}

Json to_json(const InvariantLattice& lat, const Network& net) {
    Json els = Json::array();
    for (const auto& P : lat.elements) {
        Json e = to_json(P);
        e["flags"] = to_json(classify(net, P));
        els.push_back(std::move(e));
    }
    return Json{{"schema_version", kSchemaVersion},
                {"matrix", lat.matrix_tag},
                {"count", lat.elements.size()},
                {"elements", std::move(els)}};
}

Json to_json(const SynchronyReport& rep) {
    Json entries = Json::array();
    for (const auto& e : rep.entries) {
        Json je = to_json(e.partition);
        je["in_W"] = e.in_W;
        je["in_L"] = e.in_L;
        je["flags"] = to_json(e.flags);
        je["classes"] = classes_to_json(e.classes);
        entries.push_back(std::move(je));
    }
    Json counts;
    for (const auto& [k, v] : rep.counts) counts[k] = v;
    return Json{{"schema_version", kSchemaVersion},
                {"counts", std::move(counts)},
                {"elements", std::move(entries)},
                {"warnings", rep.warnings}};
}

Json to_json(const InvarianceCertificate& cert) {
    return Json{{"schema_version", kSchemaVersion},
                {"pass", cert.pass},
                {"tol", cert.tol},
                {"per_trial_max_residual", cert.per_trial_residual},
                {"blowup_redraws", cert.blowup_redraws}};
}

Json to_json(const FalsificationResult& res) {
    return Json{{"schema_version", kSchemaVersion},
                {"falsified", res.falsified},
                {"max_residual", res.max_residual},
                {"samples", res.samples}};
}

Json to_json(const RestrictionReport& rep) {
    return Json{{"schema_version", kSchemaVersion},
                {"pass", rep.pass},
                {"max_deviation", rep.max_deviation},
                {"tol", rep.tol}};
}

}  // namespace polyd
