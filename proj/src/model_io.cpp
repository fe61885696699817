#include <json.hpp>

#include "auditkit/error.hpp"
#include "auditkit/models.hpp"

namespace auditkit {

namespace {

using nlohmann::json;

json estimates_to_json(const std::vector<ParamEstimate>& v) {
    json arr = json::array();
    for (const auto& e : v) arr.push_back({{"name", e.name}, {"value", e.value}, {"std_error", e.std_error}});
    return arr;
}

std::vector<ParamEstimate> estimates_from_json(const json& arr) {
    std::vector<ParamEstimate> out;
    for (const auto& e : arr) {
        out.push_back({e.at("name").get<std::string>(), e.at("value").get<double>(),
                       e.at("std_error").get<double>()});
    }
    return out;
}

json summary_to_json(const TrainingSummary& s) {
    return {{"iterations", s.iterations}, {"converged", s.converged}, {"warnings", s.warnings}};
}

TrainingSummary summary_from_json(const json& j) {
    TrainingSummary s;
    s.iterations = j.at("iterations").get<int>();
    s.converged = j.at("converged").get<bool>();
    s.warnings = j.at("warnings").get<std::vector<std::string>>();
    return s;
}

}  // namespace

std::string model_to_json(const Model& m) {
    json doc;
    doc["feature_names"] = m.feature_names();
    switch (m.kind()) {
        case Model::Kind::logistic: {
            const auto& lg = m.logistic();
            doc["kind"] = "logistic";
            doc["coefficients"] = estimates_to_json(lg.coefficients);
            doc["summary"] = summary_to_json(lg.summary);
            break;
        }
        case Model::Kind::mlogrm: {
            const auto& ml = m.mlogrm();
            doc["kind"] = "mlogrm";
            doc["group_names"] = ml.group_names;
            json groups = json::array();
            for (const auto& coefs : ml.group_coefficients) groups.push_back(estimates_to_json(coefs));
            doc["group_coefficients"] = groups;
            doc["hyper"] = {{"mu_alpha", ml.hyper.mu_alpha},
                            {"sigma_alpha", ml.hyper.sigma_alpha},
                            {"mu_beta", ml.hyper.mu_beta},
                            {"sigma_beta", ml.hyper.sigma_beta}};
            doc["summary"] = summary_to_json(ml.summary);
            break;
        }
        case Model::Kind::random_forest: {
            const auto& rf = m.forest();
            doc["kind"] = "random_forest";
            doc["features_per_split"] = rf.features_per_split;
            doc["seed"] = rf.seed;
            json trees = json::array();
            for (const DecisionTree& t : rf.trees) {
                json nodes = json::array();
                for (const TreeNode& nd : t.nodes) {
                    nodes.push_back(json::array({nd.feature, nd.threshold, nd.left, nd.right,
                                                 nd.leaf_fraction, nd.sample_count, nd.impurity_decrease}));
                }
                trees.push_back(std::move(nodes));
            }
            doc["trees"] = std::move(trees);
            break;
        }
    }
    return doc.dump(2);
}

Model model_from_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        fail("ParseError", std::string("model JSON: ") + e.what());
    }
    const std::string kind = doc.at("kind").get<std::string>();
    const auto feature_names = doc.at("feature_names").get<std::vector<std::string>>();
    if (kind == "logistic") {
        FittedLogistic lg;
        lg.feature_names = feature_names;
        lg.coefficients = estimates_from_json(doc.at("coefficients"));
        lg.summary = summary_from_json(doc.at("summary"));
        return Model(std::move(lg));
    }
    if (kind == "mlogrm") {
        FittedMlogrm ml;
        ml.feature_names = feature_names;
        ml.group_names = doc.at("group_names").get<std::vector<std::string>>();
        for (const auto& coefs : doc.at("group_coefficients")) {
            ml.group_coefficients.push_back(estimates_from_json(coefs));
        }
        const auto& h = doc.at("hyper");
        ml.hyper.mu_alpha = h.at("mu_alpha").get<double>();
        ml.hyper.sigma_alpha = h.at("sigma_alpha").get<double>();
        ml.hyper.mu_beta = h.at("mu_beta").get<std::vector<double>>();
        ml.hyper.sigma_beta = h.at("sigma_beta").get<std::vector<double>>();
        ml.summary = summary_from_json(doc.at("summary"));
        return Model(std::move(ml));
    }
    if (kind == "random_forest") {
        FittedForest rf;
        rf.feature_names = feature_names;
        rf.features_per_split = doc.at("features_per_split").get<std::size_t>();
        rf.seed = doc.at("seed").get<std::uint64_t>();
        for (const auto& tj : doc.at("trees")) {
            DecisionTree t;
            for (const auto& nj : tj) {
                TreeNode nd;
                nd.feature = nj.at(0).get<int>();
                nd.threshold = nj.at(1).get<double>();
                nd.left = nj.at(2).get<int>();
                nd.right = nj.at(3).get<int>();
                nd.leaf_fraction = nj.at(4).get<double>();
                nd.sample_count = nj.at(5).get<std::size_t>();
                nd.impurity_decrease = nj.at(6).get<double>();
                t.nodes.push_back(nd);
            }
            rf.trees.push_back(std::move(t));
        }
        return Model(std::move(rf));
    }
    fail("ConfigError", "unknown model kind '" + kind + "'");
}

}  // namespace auditkit
