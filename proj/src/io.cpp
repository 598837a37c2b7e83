#include "biloc/io.hpp"

#include <cstdio>
#include <fstream>

namespace biloc {

namespace {

const json* find_key(const json& j, const char* key, const char* where) {
    auto it = j.find(key);
    if (it == j.end())
        throw io_error(std::string(where) + ": missing field '" + key + "'");
    return &*it;
}

void expect_schema(const json& j, const char* schema) {
    const json* s = find_key(j, "schema", schema);
    if (!s->is_string() || s->get<std::string>() != schema)
        throw io_error(std::string("expected schema '") + schema + "'");
}

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

json mat_to_json(const Mat& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            row.push_back({m(i, j).real(), m(i, j).imag()});
        rows.push_back(std::move(row));
    }
    return rows;
}

Mat mat_from_json(const json& j) {
    if (!j.is_array() || j.empty()) throw io_error("matrix: expected a nonempty array of rows");
    const size_t rows = j.size();
    const size_t cols = j[0].size();
    Mat m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (size_t r = 0; r < rows; ++r) {
        if (!j[r].is_array() || j[r].size() != cols)
            throw io_error("matrix: ragged rows");
        for (size_t c = 0; c < cols; ++c) {
            const json& e = j[r][c];
            if (!e.is_array() || e.size() != 2)
                throw io_error("matrix: entries must be [re, im] pairs");
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                cplx(e[0].get<double>(), e[1].get<double>());
        }
    }
    return m;
}

namespace {

json algebra_to_json(const MatrixAlgebra& alg) {
    json blocks = json::array();
    for (auto [n, m] : alg.blocks) blocks.push_back({n, m});
    return {{"ambient_dim", alg.ambient_dim},
            {"blocks", std::move(blocks)},
            {"embedding", mat_to_json(alg.embedding)}};
}

MatrixAlgebra algebra_from_json(const json& j) {
    const json* bl = find_key(j, "blocks", "algebra");
    std::vector<std::pair<int, int>> blocks;
    for (const auto& b : *bl) {
        if (!b.is_array() || b.size() != 2) throw io_error("algebra: blocks must be [n, m]");
        blocks.emplace_back(b[0].get<int>(), b[1].get<int>());
    }
    int d = find_key(j, "ambient_dim", "algebra")->get<int>();
    Mat u = mat_from_json(*find_key(j, "embedding", "algebra"));
    return make_block_algebra(d, std::move(blocks), std::move(u));
}

}  // namespace

json scenario_to_json(const Scenario& s) {
    json j = {{"schema", "biloc-scenario/1"},
              {"dim", s.dim},
              {"labels", {s.labels[0], s.labels[1], s.labels[2]}},
              {"algebras",
               {{"A", algebra_to_json(s.alg_A)},
                {"B", algebra_to_json(s.alg_B)},
                {"C", algebra_to_json(s.alg_C)}}}};
    if (s.tensor_dims)
        j["tensor_dims"] = {(*s.tensor_dims)[0], (*s.tensor_dims)[1], (*s.tensor_dims)[2],
                            (*s.tensor_dims)[3]};
    return j;
}

ScenarioPtr scenario_from_json(const json& j) {
    expect_schema(j, "biloc-scenario/1");
    int dim = find_key(j, "dim", "scenario")->get<int>();
    if (dim > max_ambient_dim()) throw domain_error("scenario too large");
    const json* algs = find_key(j, "algebras", "scenario");
    MatrixAlgebra a = algebra_from_json(*find_key(*algs, "A", "algebras"));
    MatrixAlgebra b = algebra_from_json(*find_key(*algs, "B", "algebras"));
    MatrixAlgebra c = algebra_from_json(*find_key(*algs, "C", "algebras"));
    if (a.ambient_dim != dim || b.ambient_dim != dim || c.ambient_dim != dim)
        throw domain_error("scenario: algebra dimensions disagree with dim");
    std::optional<std::array<int, 4>> tdims;
    if (auto it = j.find("tensor_dims"); it != j.end()) {
        if (!it->is_array() || it->size() != 4) throw io_error("scenario: bad tensor_dims");
        tdims = std::array<int, 4>{(*it)[0].get<int>(), (*it)[1].get<int>(), (*it)[2].get<int>(),
                                   (*it)[3].get<int>()};
    }
    std::shared_ptr<Scenario> sc =
        std::make_shared<Scenario>(dim, std::move(a), std::move(b), std::move(c), tdims);
    if (auto it = j.find("labels"); it != j.end() && it->is_array() && it->size() == 3)
        for (int k = 0; k < 3; ++k)
            sc->labels[static_cast<size_t>(k)] = (*it)[static_cast<size_t>(k)].get<std::string>();
    return sc;
}

json state_to_json(const NetworkState& st) {
    json j = {{"schema", "biloc-state/1"},
              {"dim", static_cast<int>(st.rho.rows())},
              {"rho", mat_to_json(st.rho)}};
    if (st.source_form) {
        j["source_form"] = {{"dims",
                             {st.source_form->dims[0], st.source_form->dims[1],
                              st.source_form->dims[2], st.source_form->dims[3]}},
                            {"rho_AB", mat_to_json(st.source_form->rho_AB)},
                            {"rho_BC", mat_to_json(st.source_form->rho_BC)}};
    }
    return j;
}

NetworkState state_from_json(const json& j, ScenarioPtr scenario) {
    expect_schema(j, "biloc-state/1");
    Mat rho = mat_from_json(*find_key(j, "rho", "state"));
    NetworkState st = NetworkState::from_density(std::move(rho), std::move(scenario));
    if (auto it = j.find("source_form"); it != j.end()) {
        SourceForm sf;
        const json& d = *find_key(*it, "dims", "source_form");
        if (!d.is_array() || d.size() != 4) throw io_error("source_form: bad dims");
        for (int k = 0; k < 4; ++k)
            sf.dims[static_cast<size_t>(k)] = d[static_cast<size_t>(k)].get<int>();
        sf.rho_AB = mat_from_json(*find_key(*it, "rho_AB", "source_form"));
        sf.rho_BC = mat_from_json(*find_key(*it, "rho_BC", "source_form"));
        if (sf.rho_AB.rows() != sf.dims[0] * sf.dims[1] ||
            sf.rho_BC.rows() != sf.dims[2] * sf.dims[3])
            throw domain_error("source_form: factor dimensions do not match");
        st.source_form = std::move(sf);
    }
    return st;
}

json observables_to_json(const ObservableSet& obs) {
    return {{"schema", "biloc-observables/1"}, {"dim", static_cast<int>(obs.A0.rows())},
            {"A0", mat_to_json(obs.A0)},       {"A1", mat_to_json(obs.A1)},
            {"B0", mat_to_json(obs.B0)},       {"B1", mat_to_json(obs.B1)},
            {"C0", mat_to_json(obs.C0)},       {"C1", mat_to_json(obs.C1)}};
}

ObservableSet observables_from_json(const json& j, ScenarioPtr scenario) {
    expect_schema(j, "biloc-observables/1");
    return ObservableSet::create(std::move(scenario),
                                 mat_from_json(*find_key(j, "A0", "observables")),
                                 mat_from_json(*find_key(j, "A1", "observables")),
                                 mat_from_json(*find_key(j, "B0", "observables")),
                                 mat_from_json(*find_key(j, "B1", "observables")),
                                 mat_from_json(*find_key(j, "C0", "observables")),
                                 mat_from_json(*find_key(j, "C1", "observables")));
}

json report_to_json(const BilocalReport& rep) {
    json res = json::object();
    for (const auto& [k, v] : rep.residuals) res[k] = v;
    return {{"schema", "biloc-report/1"},
            {"I", rep.I},
            {"J", rep.J},
            {"S", rep.S},
            {"residuals", std::move(res)}};
}

json trace_to_json(const OptimizationTrace& tr, std::uint64_t seed) {
    json per = json::array();
    for (const auto& r : tr.per_restart)
        per.push_back({{"S", r.S}, {"iterations", r.iterations}, {"converged", r.converged}});
    json j = {{"schema", "biloc-trace/1"},
              {"seed", seed},
              {"best_S", tr.best_S},
              {"s_values", tr.s_values},
              {"iterations", tr.iterations},
              {"converged", tr.converged},
              {"best_restart", tr.best_restart},
              {"per_restart", std::move(per)},
              {"best_observables",
               {{"A0", mat_to_json(tr.best.A0)},
                {"A1", mat_to_json(tr.best.A1)},
                {"B0", mat_to_json(tr.best.B0)},
                {"B1", mat_to_json(tr.best.B1)},
                {"C0", mat_to_json(tr.best.C0)},
                {"C1", mat_to_json(tr.best.C1)}}}};
    if (tr.best_sources)
        j["best_sources"] = {{"rho_AB", mat_to_json(tr.best_sources->rho_AB)},
                             {"rho_BC", mat_to_json(tr.best_sources->rho_BC)}};
    if (!tr.warnings.empty()) j["warnings"] = tr.warnings;
    return j;
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw io_error("parse error in " + path + ": " + e.what());
    }
}

void save_json_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot write " + path);
    out << j.dump(2) << "\n";
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::string out = "param,S_best,converged,iters\n";
    for (const auto& r : rows) {
        out += fmt_double(r.param);
        out += ",";
        out += fmt_double(r.S_best);
        out += ",";
        out += r.converged ? "1" : "0";
        out += ",";
        out += std::to_string(r.iters);
        out += "\n";
    }
    return out;
}

std::string probability_csv(const ProbabilityTable& t) {
    std::string out = "x,y,z,a,b,c,p\n";
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
            for (int z = 0; z < 2; ++z)
                for (int a = 0; a < 2; ++a)
                    for (int b = 0; b < 2; ++b)
                        for (int c = 0; c < 2; ++c) {
                            char head[32];
                            std::snprintf(head, sizeof head, "%d,%d,%d,%d,%d,%d,", x, y, z, a,
                                          b, c);
                            out += head;
                            out += fmt_double(t.at(x, y, z, a, b, c));
                            out += "\n";
                        }
    return out;
}

void save_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot write " + path);
    out << text;
}

}  // namespace biloc
