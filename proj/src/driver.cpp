#include "fnirenberg/driver.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "fnirenberg/error.hpp"
#include "fnirenberg/interaction.hpp"

namespace fnir {

namespace {

template <class F>
auto stage(std::string_view name, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const SyntaxError& e) {
        throw Error(e.kind(), std::string(name) + ": " + e.message());
    } catch (const Error& e) {
        throw Error(e.kind(), std::string(name) + ": " + e.message());
    }
}

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorKind::InvalidInput, what); }

Vector read_vector(const json& j, const std::string& key) {
    if (!j.is_array()) bad(key + " must be an array of numbers");
    Vector v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_number()) bad(key + "[" + std::to_string(i) + "] must be a number");
        v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
    }
    return v;
}

json vector_json(const Vector& v) {
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
    return a;
}

json number_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

template <class T>
void read_opt(const json& obj, const char* key, T& out) {
    if (!obj.contains(key)) return;
    try {
        out = obj.at(key).get<T>();
    } catch (const json::exception&) {
        bad(std::string("key '") + key + "' has the wrong type");
    }
}

void check_keys(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
    if (!obj.is_object()) bad(where + " must be an object");
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        bool ok = false;
        for (const char* a : allowed) ok = ok || key == a;
        if (!ok) bad("unknown key '" + key + "' in " + where);
    }
}

json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Io, "cannot read " + path.string());
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        bad(path.string() + ": malformed JSON: " + e.what());
    }
}

json matrix_json(const Matrix& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) rows.push_back(vector_json(m.row(i).transpose()));
    return rows;
}

json members_json(const std::vector<std::size_t>& m) {
    json a = json::array();
    for (std::size_t i : m) a.push_back(i);
    return a;
}

}  // namespace

ProblemSpec parse_problem(const json& doc) {
    check_keys(doc, "problem", {"n", "sigma", "K", "tolerances", "constants", "census", "search", "flow"});
    ProblemSpec spec;
    if (!doc.contains("n") || !doc["n"].is_number_integer()) bad("problem needs an integer 'n'");
    if (!doc.contains("sigma") || !doc["sigma"].is_number()) bad("problem needs a real 'sigma'");
    spec.n = doc["n"].get<int>();
    spec.sigma = doc["sigma"].get<double>();
    if (spec.n < 2) bad("n must be at least 2");
    if (!(spec.sigma > 0.0 && spec.sigma < 1.0)) bad("sigma must lie in (0, 1)");

    if (!doc.contains("K")) bad("problem needs a 'K' source");
    const json& K = doc["K"];
    check_keys(K, "K", {"expr", "critical_points"});
    if (K.contains("expr") == K.contains("critical_points")) bad("K needs exactly one of 'expr' or 'critical_points'");
    if (K.contains("expr")) {
        if (!K["expr"].is_string()) bad("K.expr must be a string");
        spec.K_expr = K["expr"].get<std::string>();
    } else {
        if (!K["critical_points"].is_array()) bad("K.critical_points must be an array");
        std::size_t idx = 0;
        for (const json& c : K["critical_points"]) {
            const std::string where = "critical_points[" + std::to_string(idx++) + "]";
            check_keys(c, where, {"y", "frame", "K", "beta", "b"});
            PointSpec ps;
            if (!c.contains("y") || !c.contains("K") || !c.contains("beta") || !c.contains("b"))
                bad(where + " needs y, K, beta and b");
            ps.y = read_vector(c["y"], where + ".y");
            if (!c["K"].is_number() || !c["beta"].is_number()) bad(where + ": K and beta must be numbers");
            ps.K = c["K"].get<double>();
            ps.beta = c["beta"].get<double>();
            ps.b = read_vector(c["b"], where + ".b");
            if (c.contains("frame")) {
                if (!c["frame"].is_array()) bad(where + ".frame must be an array of axes");
                std::vector<Vector> axes;
                for (const json& ax : c["frame"]) axes.push_back(read_vector(ax, where + ".frame"));
                ps.frame = std::move(axes);
            }
            spec.points.push_back(std::move(ps));
        }
    }

    if (doc.contains("tolerances")) {
        const json& t = doc["tolerances"];
        check_keys(t, "tolerances",
                   {"grad_tol", "beta_tol", "beta_consistency_tol", "degeneracy_rel_tol", "bsum_tol"});
        read_opt(t, "grad_tol", spec.tol.grad_tol);
        read_opt(t, "beta_tol", spec.tol.beta_tol);
        read_opt(t, "beta_consistency_tol", spec.tol.beta_consistency_tol);
        read_opt(t, "degeneracy_rel_tol", spec.tol.degeneracy_rel_tol);
        read_opt(t, "bsum_tol", spec.tol.bsum_tol);
    }
    if (doc.contains("constants")) {
        const json& c = doc["constants"];
        check_keys(c, "constants", {"c0", "c1tilde_mode"});
        read_opt(c, "c0", spec.c0);
        if (c.contains("c1tilde_mode")) {
            if (!c["c1tilde_mode"].is_string()) bad("constants.c1tilde_mode must be a string");
            spec.mode = parse_mode(c["c1tilde_mode"].get<std::string>());
        }
    }
    if (doc.contains("census")) {
        const json& c = doc["census"];
        check_keys(c, "census", {"max_p", "ordered_tuples", "force"});
        read_opt(c, "max_p", spec.max_p);
        read_opt(c, "ordered_tuples", spec.ordered_tuples);
        read_opt(c, "force", spec.force);
    }
    if (doc.contains("search")) {
        const json& s = doc["search"];
        check_keys(s, "search", {"seed", "n_starts"});
        read_opt(s, "seed", spec.seed);
        read_opt(s, "n_starts", spec.n_starts);
    }
    if (doc.contains("flow")) spec.flow = doc["flow"];
    return spec;
}

ProblemSpec load_problem(const std::filesystem::path& path) { return parse_problem(read_json_file(path)); }

json problem_to_json(const ProblemSpec& spec) {
    json j;
    j["n"] = spec.n;
    j["sigma"] = spec.sigma;
    if (spec.K_expr) {
        j["K"]["expr"] = *spec.K_expr;
    } else {
        json pts = json::array();
        for (const PointSpec& p : spec.points) {
            json o{{"y", vector_json(p.y)}, {"K", p.K}, {"beta", p.beta}, {"b", vector_json(p.b)}};
            if (p.frame) {
                json axes = json::array();
                for (const Vector& a : *p.frame) axes.push_back(vector_json(a));
                o["frame"] = axes;
            }
            pts.push_back(o);
        }
        j["K"]["critical_points"] = pts;
    }
    j["tolerances"] = {{"grad_tol", spec.tol.grad_tol},
                       {"beta_tol", spec.tol.beta_tol},
                       {"beta_consistency_tol", spec.tol.beta_consistency_tol},
                       {"degeneracy_rel_tol", spec.tol.degeneracy_rel_tol},
                       {"bsum_tol", spec.tol.bsum_tol}};
    j["constants"] = {{"c0", spec.c0}, {"c1tilde_mode", std::string(mode_name(spec.mode))}};
    j["census"] = {{"max_p", spec.max_p}, {"ordered_tuples", spec.ordered_tuples}, {"force", spec.force}};
    j["search"] = {{"seed", spec.seed}, {"n_starts", spec.n_starts}};
    if (!spec.flow.is_null()) j["flow"] = spec.flow;
    return j;
}

std::string report_hash(const json& report) {
    json copy = report;
    if (copy.is_object()) copy.erase("hash");
    const std::string text = copy.dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

PointTable build_point_table(const ProblemSpec& spec) {
    PointTable table;
    const int n = spec.n;
    std::vector<CriticalPoint> raw;

    if (spec.K_expr) {
        const Expression K = stage("parse", [&] { return parse_expression(*spec.K_expr); });
        SearchOptions so;
        so.n_starts = spec.n_starts;
        so.grad_tol = spec.tol.grad_tol;
        so.seed = spec.seed;
        const SearchResult found = stage("detect", [&] { return find_critical_points(K, n, so); });
        for (const std::string& w : found.warnings) table.warnings.push_back(w);
        const std::vector<double> radii = default_radii();
        for (std::size_t i = 0; i < found.points.size(); ++i) {
            try {
                raw.push_back(fitted_critical_point(K, found.points[i], 0, radii, spec.tol.beta_consistency_tol,
                                                    so.fd_step));
            } catch (const Error& e) {
                if (e.kind() != ErrorKind::NotFlat && e.kind() != ErrorKind::AxisDegenerate) throw;
                table.caveats.push_back("flatness fit failed at detected point " + std::to_string(i) + ": " +
                                        e.what());
            }
        }
    } else {
        for (std::size_t i = 0; i < spec.points.size(); ++i) {
            const PointSpec& ps = spec.points[i];
            stage("input", [&] {
                if (ps.y.size() != n + 1)
                    throw Error(ErrorKind::DimensionMismatch, "critical point " + std::to_string(i) + " needs " +
                                                                  std::to_string(n + 1) + " coordinates");
                CriticalPoint cp;
                cp.y = SpherePoint(ps.y);
                cp.frame = ps.frame ? frame_from_axes(cp.y, *ps.frame) : normal_frame(cp.y, 0);
                cp.K_val = ps.K;
                cp.beta = ps.beta;
                cp.b = ps.b;
                cp.exact = true;
                raw.push_back(std::move(cp));
                return 0;
            });
        }
    }

    for (std::size_t i = 0; i < raw.size(); ++i) {
        try {
            validate_critical_point(raw[i], n, spec.tol.bsum_tol);
        } catch (const Error& e) {
            if (!spec.K_expr) throw Error(e.kind(), "validate: critical point " + std::to_string(i) + ": " + e.message());
            table.caveats.push_back("detected point " + std::to_string(i) + " rejected: " + e.what());
            continue;
        }
        for (const ClassifiedPoint& q : table.points)
            if (geodesic_distance(q.point.y, raw[i].y) <= 1e-6)
                throw Error(ErrorKind::CoincidentPoints,
                            "validate: critical point " + std::to_string(i) + " duplicates an earlier one");
        table.points.push_back({raw[i], classify(raw[i], n, spec.sigma, spec.tol.beta_tol)});
    }
    if (table.points.empty())
        table.warnings.emplace_back("no critical points: a K on a compact sphere is expected to have some");
    return table;
}

CertifyResult certify(const ProblemSpec& spec) {
    CertifyResult result;
    std::vector<std::string> warnings;
    if (spec.n - 2.0 * spec.sigma <= 1.0)
        warnings.emplace_back("n - 2 sigma <= 1: the range 1 < beta <= n - 2 sigma is empty");

    const PointTable table = build_point_table(spec);
    warnings.insert(warnings.end(), table.warnings.begin(), table.warnings.end());
    const Constants consts = stage("constants", [&] { return build_constants(spec.n, spec.sigma, spec.c0, spec.mode); });
    const A1Report a1 = stage("A1", [&] {
        return check_A1(table.points, consts, spec.max_p, spec.tol.degeneracy_rel_tol);
    });
    CensusOptions co;
    co.max_p = spec.max_p;
    co.force = spec.force;
    const Census census = stage("census", [&] { return enumerate_families(table.points, a1, spec.n, co); });
    const Theorem regime = determine_regime(table.points, spec.n, spec.sigma);
    Certificate cert = evaluate_certificate(census.records, regime, table.points.size(), 12, spec.ordered_tuples);

    std::vector<std::string> caveats = table.caveats;
    for (const auto& d : census.degenerate) {
        std::string m = "A1 fails: interaction matrix of {";
        for (std::size_t k = 0; k < d.size(); ++k) m += (k ? "," : "") + std::to_string(d[k]);
        caveats.push_back(m + "} has a vanishing least eigenvalue");
    }
    if (census.truncated) caveats.emplace_back("max_p truncates the enumeration: sums are partial");
    caveats.insert(caveats.end(), cert.caveats.begin(), cert.caveats.end());
    cert.caveats = caveats;

    // small but resolved margins are reported without invalidating the verdict
    for (const A1Entry& e : a1.tuples)
        if (e.sign != SpectralSign::Degenerate && e.matrix.rho_margin < 1e-6)
            warnings.push_back("A1 margin " + std::to_string(e.matrix.rho_margin) + " is small for a tuple of size " +
                               std::to_string(e.matrix.p()));

    std::string verdict;
    if (regime == Theorem::NotApplicable) {
        verdict = "not-applicable";
        result.exit_code = exit_code::kNotApplicable;
    } else if (!cert.caveats.empty()) {
        verdict = "caveats";
        result.exit_code = exit_code::kNotApplicable;
    } else if (cert.exists.value_or(false)) {
        verdict = "exists";
        result.exit_code = exit_code::kCertified;
    } else {
        verdict = "inconclusive";
        result.exit_code = exit_code::kInconclusive;
    }

    json report;
    report["tool"] = {{"name", std::string(kToolName)}, {"version", std::string(kToolVersion)}};
    report["problem"] = problem_to_json(spec);
    report["constants"] = {{"c0", consts.c0},
                           {"c1", consts.c1},
                           {"c1_tilde", consts.c1_tilde},
                           {"c1tilde_mode", std::string(mode_name(consts.mode))},
                           {"c1_tilde_paper_header", consts.c1_tilde_paper_header},
                           {"c1_tilde_proof_step", consts.c1_tilde_proof_step},
                           {"c2", consts.c2},
                           {"c5", consts.c5},
                           {"c_n_sigma", consts.c_n_sigma},
                           {"max_quadrature_gap", consts.max_quadrature_gap}};

    json pts = json::array();
    for (std::size_t i = 0; i < table.points.size(); ++i) {
        const ClassifiedPoint& cp = table.points[i];
        pts.push_back({{"index", i},
                       {"y", vector_json(cp.point.y.coords())},
                       {"frame", matrix_json(cp.point.frame.axes.transpose())},
                       {"K", cp.point.K_val},
                       {"beta", cp.point.beta},
                       {"b", vector_json(cp.point.b)},
                       {"b_sum", cp.point.b_sum()},
                       {"exact", cp.point.exact},
                       {"fit_residual", cp.point.fit_residual},
                       {"grad_norm", cp.point.grad_norm},
                       {"in_K_plus", cp.cls.in_K_plus},
                       {"beta_critical", cp.cls.in_K_beta_critical},
                       {"itilde", cp.cls.itilde}});
    }
    report["critical_points"] = pts;

    json a1j = json::array();
    for (const A1Entry& e : a1.tuples)
        a1j.push_back({{"members", members_json(e.matrix.members)},
                       {"entries", matrix_json(e.matrix.entries)},
                       {"rho", e.matrix.rho},
                       {"rho_margin", e.matrix.rho_margin},
                       {"sign", std::string(sign_name(e.sign))}});
    report["A1"] = {{"stratum", members_json(a1.stratum)},
                    {"holds", a1.holds},
                    {"truncated", a1.truncated},
                    {"tuples", a1j}};

    json fam = {{"beta_critical", json::array()}, {"sub_critical", json::array()}, {"cross", json::array()}};
    for (const TupleRecord& r : census.records) {
        json rec = {{"members", members_json(r.members)}, {"index", r.index_inf}, {"sign", r.sign}};
        if (r.rho) rec["rho"] = *r.rho;
        switch (r.family) {
            case Family::BetaCritical: fam["beta_critical"].push_back(rec); break;
            case Family::SubCritical: fam["sub_critical"].push_back(rec); break;
            case Family::Cross: fam["cross"].push_back(rec); break;
        }
    }
    report["families"] = fam;

    json cj = {{"theorem", std::string(theorem_name(cert.theorem))},
               {"A", cert.A},
               {"B", cert.B},
               {"cross", cert.cross},
               {"S", cert.S},
               {"exists", cert.exists ? json(*cert.exists) : json(nullptr)},
               {"brute_force_agrees", cert.brute_force_agrees},
               {"caveats", cert.caveats}};
    if (cert.S_ordered) cj["S_ordered"] = *cert.S_ordered;
    report["certificate"] = cj;
    report["euler_trace"] = euler_trace(census.records, regime);
    report["warnings"] = warnings;
    report["verdict"] = verdict;
    report["exit_code"] = result.exit_code;
    report["hash"] = report_hash(report);

    result.report = std::move(report);
    result.certificate = std::move(cert);
    return result;
}

FlowConfig parse_flow_config(const json& doc, FlowConfig c) {
    if (doc.is_null()) return c;
    check_keys(doc, "flow", {"epsilon", "M1", "delta", "rho_ball", "lambda_cap", "dt_init", "dt_min", "t_max",
                             "max_steps", "rel_tol", "hysteresis", "alpha_min", "alpha_max", "pp_fraction"});
    read_opt(doc, "epsilon", c.epsilon);
    read_opt(doc, "M1", c.M1);
    read_opt(doc, "delta", c.delta);
    read_opt(doc, "rho_ball", c.rho_ball);
    read_opt(doc, "lambda_cap", c.lambda_cap);
    read_opt(doc, "dt_init", c.dt_init);
    read_opt(doc, "dt_min", c.dt_min);
    read_opt(doc, "t_max", c.t_max);
    read_opt(doc, "max_steps", c.max_steps);
    read_opt(doc, "rel_tol", c.rel_tol);
    read_opt(doc, "hysteresis", c.hysteresis);
    read_opt(doc, "alpha_min", c.alpha_min);
    read_opt(doc, "alpha_max", c.alpha_max);
    read_opt(doc, "pp_fraction", c.pp_fraction);
    return c;
}

json flow_config_to_json(const FlowConfig& c) {
    return {{"epsilon", c.epsilon},     {"M1", c.M1},           {"delta", c.delta},
            {"rho_ball", c.rho_ball},   {"lambda_cap", c.lambda_cap}, {"dt_init", c.dt_init},
            {"dt_min", c.dt_min},       {"t_max", c.t_max},     {"max_steps", c.max_steps},
            {"rel_tol", c.rel_tol},     {"hysteresis", c.hysteresis}, {"alpha_min", c.alpha_min},
            {"alpha_max", c.alpha_max}, {"pp_fraction", c.pp_fraction}};
}

InitialSpec parse_initial(const json& doc, int n) {
    check_keys(doc, "initial", {"bubbles", "flow"});
    if (!doc.contains("bubbles") || !doc["bubbles"].is_array() || doc["bubbles"].empty())
        bad("initial state needs a nonempty 'bubbles' array");
    InitialSpec init;
    std::size_t idx = 0;
    for (const json& b : doc["bubbles"]) {
        const std::string where = "bubbles[" + std::to_string(idx++) + "]";
        check_keys(b, where, {"a", "lambda"});
        if (!b.contains("a") || !b.contains("lambda") || !b["lambda"].is_number()) bad(where + " needs a and lambda");
        const Vector a = read_vector(b["a"], where + ".a");
        if (a.size() != n + 1)
            throw Error(ErrorKind::DimensionMismatch, where + ".a needs " + std::to_string(n + 1) + " coordinates");
        init.points.emplace_back(a);
        init.lambdas.push_back(b["lambda"].get<double>());
    }
    if (doc.contains("flow")) init.flow = doc["flow"];
    return init;
}

InitialSpec load_initial(const std::filesystem::path& path, int n) { return parse_initial(read_json_file(path), n); }

FlowModel build_flow_model(const ProblemSpec& spec) {
    FlowModel model;
    model.n = spec.n;
    model.sigma = spec.sigma;
    model.consts = stage("constants", [&] { return build_constants(spec.n, spec.sigma, spec.c0, spec.mode); });
    model.points = build_point_table(spec).points;
    if (spec.K_expr) model.K = parse_expression(*spec.K_expr);
    if (model.points.empty() && !model.K)
        throw Error(ErrorKind::InvalidInput, "flow: the problem has neither K nor critical points");
    return model;
}

void write_trajectory_csv(std::ostream& os, const std::vector<TrajectorySample>& traj) {
    if (traj.empty()) return;
    const std::size_t p = traj.front().lambdas.size();
    const int dim = traj.front().points.front().dim() + 1;
    os << "time";
    for (std::size_t i = 0; i < p; ++i) os << ",lambda_" << i;
    for (std::size_t i = 0; i < p; ++i)
        for (int k = 0; k < dim; ++k) os << ",a_" << i << "_" << k;
    for (std::size_t i = 0; i < p; ++i) os << ",zone_" << i << ",anchor_" << i << ",L_" << i;
    os << ",region,pairing\n";
    os << std::setprecision(17);
    for (const TrajectorySample& s : traj) {
        os << s.time;
        for (double l : s.lambdas) os << "," << l;
        for (const SpherePoint& a : s.points)
            for (int k = 0; k < dim; ++k) os << "," << a[k];
        for (const BubbleTag& t : s.tags) {
            os << "," << zone_name(t.zone) << ",";
            if (t.anchor) os << *t.anchor;
            os << "," << (t.anchor ? (t.L2 ? "L2" : "L1") : "");
        }
        os << "," << s.region << "," << s.pairing << "\n";
    }
}

FlowRunResult flow_cmd(const ProblemSpec& spec, const InitialSpec& initial, const FlowRunOptions& opts) {
    const FlowModel model = build_flow_model(spec);
    FlowConfig config = stage("config", [&] { return parse_flow_config(initial.flow, parse_flow_config(spec.flow)); });
    if (opts.t_max) config.t_max = *opts.t_max;
    if (opts.lambda_cap) config.lambda_cap = *opts.lambda_cap;
    stage("config", [&] {
        config.validate();
        return 0;
    });

    std::ofstream log;
    if (opts.log) {
        log.open(*opts.log);
        if (!log) throw Error(ErrorKind::Io, "cannot write trajectory log " + opts.log->string());
    }

    const ReducedState state = stage("initial", [&] {
        ReducedState s = make_state(initial.points, initial.lambdas, model);
        validate_state(s, model, config);
        return s;
    });
    FlowRunResult result;
    result.outcome = stage("flow", [&] { return run_to_infinity(state, model, config, opts.log.has_value()); });
    const FlowOutcome& out = result.outcome;

    if (opts.log) {
        write_trajectory_csv(log, out.trajectory);
        if (!log) throw Error(ErrorKind::Io, "failed while writing " + opts.log->string());
    }

    json final_state = json::array();
    for (std::size_t i = 0; i < out.final_state.p(); ++i) {
        const BubbleTag& t = out.final_state.tags[i];
        final_state.push_back({{"a", vector_json(out.final_state.points[i].coords())},
                               {"lambda", out.final_state.lambdas[i]},
                               {"alpha", out.final_state.alphas[i]},
                               {"zone", std::string(zone_name(t.zone))},
                               {"anchor", t.anchor ? json(*t.anchor) : json(nullptr)}});
    }
    json tuple = json::array(), weights = json::array();
    for (std::size_t i = 0; i < out.limit_tuple.size(); ++i) {
        tuple.push_back(out.limit_tuple[i] ? json(*out.limit_tuple[i]) : json(nullptr));
        weights.push_back(number_or_null(out.limit_weights[i]));
    }

    json report;
    report["tool"] = {{"name", std::string(kToolName)}, {"version", std::string(kToolVersion)}};
    report["problem"] = problem_to_json(spec);
    report["config"] = flow_config_to_json(config);
    report["outcome"] = std::string(outcome_name(out.kind));
    report["reason"] = out.reason;
    report["time"] = out.final_state.time;
    report["steps"] = out.steps;
    report["rejected_steps"] = out.rejected;
    report["final_state"] = final_state;
    report["limit_tuple"] = tuple;
    report["limit_weights"] = weights;
    report["pairing"] = {{"violations", out.pairing_violations}, {"max", number_or_null(out.max_pairing)}};
    report["pp_check"] = {{"checks", out.pp_checks}, {"violations", out.pp_violations}};
    report["theorem_bound_c"] = out.theorem_bound_c;
    report["vbar_estimate_max"] = out.vbar_estimate_max;
    report["hash"] = report_hash(report);
    result.report = std::move(report);
    result.exit_code = 0;
    return result;
}

}  // namespace fnir
