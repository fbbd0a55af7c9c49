#include "cec/cli/document.hpp"

#include <cmath>
#include <cstdio>

#include "cec/error.hpp"

namespace cec::cli {

namespace {

Json matrix_json(const SymMatrix& m) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < m.dim(); ++i) {
        Json row = Json::array();
        for (std::size_t j = 0; j < m.dim(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

SymMatrix matrix_from_json(const Json& j) {
    const std::size_t dim = j.size();
    std::vector<double> flat;
    flat.reserve(dim * dim);
    for (const auto& row : j) {
        if (row.size() != dim) throw DataError("document: covariance is not square");
        for (const auto& v : row) flat.push_back(v.get<double>());
    }
    return SymMatrix::from_rows(dim, flat);
}

void write_number(std::string& out, double v) {
    if (!std::isfinite(v)) {
        out += "null";
        return;
    }
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    out += buf;
}

void write_inline(std::string& out, const Json& j);

void write_scalar(std::string& out, const Json& j) {
    switch (j.type()) {
        case Json::value_t::number_float: write_number(out, j.get<double>()); break;
        case Json::value_t::number_integer: out += std::to_string(j.get<std::int64_t>()); break;
        case Json::value_t::number_unsigned: out += std::to_string(j.get<std::uint64_t>()); break;
        default: out += j.dump(); break;
    }
}

void write_inline(std::string& out, const Json& j) {
    if (j.is_array()) {
        out += '[';
        bool first = true;
        for (const auto& v : j) {
            if (!first) out += ", ";
            first = false;
            write_inline(out, v);
        }
        out += ']';
    } else if (j.is_object()) {
        out += '{';
        bool first = true;
        for (const auto& [key, v] : j.items()) {
            if (!first) out += ", ";
            first = false;
            out += Json(key).dump();
            out += ": ";
            write_inline(out, v);
        }
        out += '}';
    } else {
        write_scalar(out, j);
    }
}

void write_block(std::string& out, const Json& j, std::size_t indent) {
    if (!j.is_object() || j.empty()) {
        write_inline(out, j);
        return;
    }
    out += "{\n";
    bool first = true;
    for (const auto& [key, v] : j.items()) {
        if (!first) out += ",\n";
        first = false;
        out.append(indent + 2, ' ');
        out += Json(key).dump();
        out += ": ";
        write_block(out, v, indent + 2);
    }
    out += '\n';
    out.append(indent, ' ');
    out += '}';
}

Json family_params_json(const FamilySpec& f) {
    Json p = Json::array();
    for (double v : f.parameters()) p.push_back(v);
    return p;
}

}  // namespace

FamilySpec make_family(std::string_view type, std::span<const double> params) {
    const Family kind = parse_family(type);
    auto expect = [&](std::size_t count) {
        if (params.size() != count) {
            throw ConfigError(std::string(family_name(kind)) + ": expected " + std::to_string(count) +
                              " parameter value(s), got " + std::to_string(params.size()));
        }
    };
    switch (kind) {
        case Family::All: expect(0); return FamilySpec::all();
        case Family::Spherical: expect(0); return FamilySpec::spherical();
        case Family::Diagonal: expect(0); return FamilySpec::diagonal();
        case Family::FixedRadius: expect(1); return FamilySpec::fixed_radius(params[0]);
        case Family::FixedEigenvalues: return FamilySpec::fixed_eigenvalues({params.begin(), params.end()});
        case Family::FixedCovariance: {
            const auto dim = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(params.size()))));
            if (dim == 0 || dim * dim != params.size()) throw ConfigError("covariance: parameter is not a square matrix");
            return FamilySpec::fixed_covariance(SymMatrix::from_rows(dim, params));
        }
    }
    throw ConfigError("unknown cluster type");
}

Json make_document(const RunSpec& spec, const CecResult& result, const DocumentExtras& extras) {
    Json doc;
    doc["schema"] = kSchemaVersion;

    Json run;
    run["input"] = spec.input ? Json(*spec.input) : Json(nullptr);
    run["generate"] = spec.generate ? Json(*spec.generate) : Json(nullptr);
    run["points"] = spec.points;
    run["centers"] = spec.centers;
    run["type"] = spec.types;
    run["param"] = spec.params;
    run["nstart"] = spec.nstart;
    run["iter_max"] = spec.iter_max;
    run["card_min"] = spec.card_min;
    run["init"] = spec.init;
    run["method"] = spec.method;
    run["seed"] = spec.seed;
    doc["run"] = std::move(run);

    Json res;
    res["cluster"] = result.membership;
    res["probabilities"] = result.probabilities;
    res["centers"] = result.means;
    Json covs = Json::array();
    for (const auto& c : result.covariances) covs.push_back(matrix_json(c));
    res["covariances"] = std::move(covs);
    Json models = Json::array();
    for (const auto& c : result.model_covariances) models.push_back(matrix_json(c));
    res["covariances_model"] = std::move(models);
    Json types = Json::array();
    Json params = Json::array();
    for (const auto& f : result.families) {
        types.push_back(std::string(f.name()));
        params.push_back(family_params_json(f));
    }
    res["types"] = std::move(types);
    res["params"] = std::move(params);
    res["cost_function"] = result.energy_trace;
    res["nclusters"] = result.nclusters_trace;
    res["final_cost_function"] = result.final_energy;
    res["final_nclusters"] = result.means.size();
    res["iterations"] = result.iterations;
    res["card_min"] = result.card_min;
    res["best_start"] = result.best_start;
    doc["result"] = std::move(res);

    if (extras.ellipses) {
        Json list = Json::array();
        for (const auto& e : *extras.ellipses) {
            Json item;
            item["center"] = e.center;
            item["axes"] = Json::array({Json(e.axes[0]), Json(e.axes[1])});
            item["radii_1sd"] = Json::array({e.radii[0], e.radii[1]});
            item["radii_2sd"] = Json::array({2.0 * e.radii[0], 2.0 * e.radii[1]});
            list.push_back(std::move(item));
        }
        doc["ellipses"] = std::move(list);
    }
    if (extras.oracle) {
        Json o;
        o["energy"] = extras.oracle->energy;
        o["cluster"] = extras.oracle->labeling;
        doc["oracle"] = std::move(o);
    }
    if (extras.elapsed_seconds) doc["time"] = *extras.elapsed_seconds;
    return doc;
}

std::string serialize(const Json& doc) {
    std::string out;
    write_block(out, doc, 0);
    out += '\n';
    return out;
}

Json parse_document(const std::string& text) {
    try {
        return Json::parse(text);
    } catch (const Json::exception& e) {
        throw DataError(std::string("malformed result document: ") + e.what());
    }
}

CecResult result_from_document(const Json& doc) {
    try {
        if (doc.at("schema").get<int>() != kSchemaVersion) throw DataError("unsupported document schema");
        const auto& r = doc.at("result");
        CecResult out;
        out.membership = r.at("cluster").get<Assignment>();
        out.probabilities = r.at("probabilities").get<std::vector<double>>();
        out.means = r.at("centers").get<std::vector<Vector>>();
        for (const auto& c : r.at("covariances")) out.covariances.push_back(matrix_from_json(c));
        for (const auto& c : r.at("covariances_model")) out.model_covariances.push_back(matrix_from_json(c));
        const auto& types = r.at("types");
        const auto& params = r.at("params");
        if (types.size() != params.size()) throw DataError("document: types and params differ in length");
        for (std::size_t i = 0; i < types.size(); ++i) {
            const auto p = params[i].get<std::vector<double>>();
            out.families.push_back(make_family(types[i].get<std::string>(), p));
        }
        out.energy_trace = r.at("cost_function").get<std::vector<double>>();
        out.nclusters_trace = r.at("nclusters").get<std::vector<std::size_t>>();
        out.final_energy = r.at("final_cost_function").get<double>();
        out.iterations = r.at("iterations").get<std::size_t>();
        out.card_min = r.at("card_min").get<std::size_t>();
        out.best_start = r.at("best_start").get<std::size_t>();
        return out;
    } catch (const Json::exception& e) {
        throw DataError(std::string("result document: ") + e.what());
    }
}

RunSpec run_spec_from_document(const Json& doc) {
    try {
        const auto& r = doc.at("run");
        RunSpec s;
        if (!r.at("input").is_null()) s.input = r.at("input").get<std::string>();
        if (!r.at("generate").is_null()) s.generate = r.at("generate").get<std::string>();
        s.points = r.at("points").get<std::size_t>();
        s.centers = r.at("centers").get<std::size_t>();
        s.types = r.at("type").get<std::vector<std::string>>();
        s.params = r.at("param").get<std::vector<std::vector<double>>>();
        s.nstart = r.at("nstart").get<std::size_t>();
        s.iter_max = r.at("iter_max").get<std::size_t>();
        s.card_min = r.at("card_min").get<std::string>();
        s.init = r.at("init").get<std::string>();
        s.method = r.at("method").get<std::string>();
        s.seed = r.at("seed").get<std::uint64_t>();
        return s;
    } catch (const Json::exception& e) {
        throw DataError(std::string("result document: ") + e.what());
    }
}

}  // namespace cec::cli
