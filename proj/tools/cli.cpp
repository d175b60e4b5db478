#include "cli.hpp"

#include "report.hpp"

#include "kmsphase/errors.hpp"
#include "kmsphase/kernels.hpp"
#include "kmsphase/words.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

namespace kmsctl {

using namespace kmsphase;

namespace {

struct Options {
    std::string model_path;
    std::string model_json;
    double margin = PartitionConfig{}.margin;
    double critical_tolerance = CriticalConfig{}.tolerance;
    double invariance_tolerance = InvarianceConfig{}.tolerance;
    std::uint64_t max_words = WordConfig{}.max_words;
    double oa_eigen_tolerance = OaConfig{}.eigen_tolerance;
    double oa_null_tolerance = OaConfig{}.null_tolerance;
    int oa_max_dimension = OaConfig{}.max_dimension;

    [[nodiscard]] CriticalConfig critical() const { return {critical_tolerance, CriticalConfig{}.permutation_slack}; }
    [[nodiscard]] OaConfig oa() const {
        OaConfig c;
        c.eigen_tolerance = oa_eigen_tolerance;
        c.null_tolerance = oa_null_tolerance;
        c.max_dimension = oa_max_dimension;
        return c;
    }
    [[nodiscard]] Json echo() const {
        return {{"margin", number(margin)},
                {"critical_tolerance", number(critical_tolerance)},
                {"invariance_tolerance", number(invariance_tolerance)},
                {"max_words", max_words},
                {"oa_eigen_tolerance", number(oa_eigen_tolerance)},
                {"oa_null_tolerance", number(oa_null_tolerance)},
                {"oa_max_dimension", oa_max_dimension}};
    }
};

[[noreturn]] void config_error(const std::string& message) { throw Error(ErrorCode::ConfigParse, message); }

double parse_real(const std::string& text, const std::string& what) {
    std::string s = text;
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (s == "inf" || s == "+inf" || s == "infinity") return kInfiniteBeta;
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size()) config_error("cannot parse " + what + " '" + text + "'");
    return v;
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(item);
    return out;
}

std::vector<double> parse_list(const std::string& text, const std::string& what) {
    std::vector<double> out;
    for (const auto& item : split(text, ',')) out.push_back(parse_real(item, what));
    return out;
}

Json read_json_text(const std::string& text, const std::string& what) {
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        config_error(what + " is not valid JSON: " + e.what());
    }
}

Json read_json_file(const std::string& path, const std::string& what) {
    std::ifstream in(path);
    if (!in) config_error("cannot open " + what + " '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return read_json_text(buf.str(), what + " '" + path + "'");
}

double json_real(const Json& j, const std::string& what) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) return parse_real(j.get<std::string>(), what);
    config_error(what + " must be a number");
}

SystemModel parse_model(const Json& j) {
    if (!j.is_object()) config_error("model must be a JSON object");
    if (!j.contains("matrix") || !j["matrix"].is_array()) config_error("model needs a \"matrix\" array of rows");
    if (!j.contains("energies") || !j["energies"].is_array()) config_error("model needs an \"energies\" array");
    IntMatrix A;
    for (std::size_t r = 0; r < j["matrix"].size(); ++r) {
        const Json& row = j["matrix"][r];
        if (!row.is_array()) config_error("matrix row " + std::to_string(r) + " is not an array");
        std::vector<int> out;
        for (const Json& e : row) {
            if (!e.is_number()) throw Error(ErrorCode::NotBoolean, "matrix row " + std::to_string(r) + " has a non-numeric entry", r);
            const double v = e.get<double>();
            if (v != 0.0 && v != 1.0) {
                throw Error(ErrorCode::NotBoolean, "matrix row " + std::to_string(r) + " has entry " + e.dump(), r);
            }
            out.push_back(static_cast<int>(v));
        }
        A.push_back(std::move(out));
    }
    std::vector<double> energies;
    for (const Json& e : j["energies"]) energies.push_back(json_real(e, "energy"));
    std::vector<std::string> labels;
    if (j.contains("labels")) {
        if (!j["labels"].is_array()) config_error("\"labels\" must be an array of strings");
        for (const Json& l : j["labels"]) {
            if (!l.is_string()) config_error("\"labels\" must be an array of strings");
            labels.push_back(l.get<std::string>());
        }
    }
    return build_model(A, energies, std::move(labels));
}

SystemModel load_model(const Options& opt) {
    if (!opt.model_json.empty()) return parse_model(read_json_text(opt.model_json, "inline model"));
    if (opt.model_path.empty()) config_error("no model given; use --model <file> or --model-json <text>");
    return parse_model(read_json_file(opt.model_path, "model file"));
}

Json model_header(const SystemModel& model, const Options& opt) {
    Json j;
    j["m"] = model.size();
    j["labels"] = model.labels();
    j["config"] = opt.echo();
    return j;
}

std::vector<double> parse_grid(const std::string& spec) {
    const auto parts = split(spec, ':');
    if (parts.size() != 3) config_error("sweep must be b0:b1:steps");
    const double b0 = parse_real(parts[0], "sweep start");
    const double b1 = parse_real(parts[1], "sweep end");
    const double steps = parse_real(parts[2], "sweep steps");
    if (!std::isfinite(b0) || !std::isfinite(b1) || b1 < b0) config_error("sweep needs finite b0 <= b1");
    if (steps < 1 || steps != std::floor(steps) || steps > 1e6) config_error("sweep steps must be an integer in [1, 1e6]");
    const auto n = static_cast<std::size_t>(steps);
    if (n == 1) {
        if (b0 != b1) config_error("a one-point sweep needs b0 = b1");
        return {b0};
    }
    std::vector<double> grid(n);
    for (std::size_t i = 0; i < n; ++i) grid[i] = b0 + (b1 - b0) * static_cast<double>(i) / static_cast<double>(n - 1);
    grid.back() = b1;
    return grid;
}

std::string csv_real(double x) {
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

// --- subcommands -----------------------------------------------------------

int cmd_analyze(const Options& opt, std::ostream& out) {
    const SystemModel model = load_model(opt);
    Json j = model_header(model, opt);
    j["properties"] = to_json(properties(model));
    j["column_space"] = to_json(model.columns());
    j["critical"] = to_json(beta_c(model, opt.critical()));
    out << dump(j);
    return kOk;
}

int cmd_partition(const Options& opt, const std::string& beta_text, const std::string& sweep, std::ostream& out) {
    const SystemModel model = load_model(opt);
    if (!sweep.empty()) {
        const auto grid = parse_grid(sweep);
        const double bc = beta_c(model, opt.critical()).beta_c;
        const auto rows = parallel::sweep(model, grid, bc, opt.margin);
        out << "beta,spectral_radius,z_total,regime\n";
        for (const auto& r : rows) {
            out << csv_real(r.beta) << ',' << csv_real(r.spectral_radius) << ','
                << (r.z_total ? csv_real(*r.z_total) : std::string("inf")) << ',' << r.regime << '\n';
        }
        return kOk;
    }
    if (beta_text.empty()) config_error("partition needs --beta or --sweep");
    const double beta = parse_real(beta_text, "beta");
    Json j = model_header(model, opt);
    j["partition"] = to_json(evaluate(model, beta, PartitionConfig{opt.margin}));
    out << dump(j);
    return kOk;
}

int cmd_critical(const Options& opt, std::ostream& out) {
    const SystemModel model = load_model(opt);
    Json j = model_header(model, opt);
    j["critical"] = to_json(beta_c(model, opt.critical()));
    out << dump(j);
    return kOk;
}

int cmd_kms(const Options& opt, const std::string& beta_text, std::ostream& out) {
    const SystemModel model = load_model(opt);
    const double beta = parse_real(beta_text, "beta");
    ClassifyConfig cfg;
    cfg.critical = opt.critical();
    Json j = model_header(model, opt);
    j["phase"] = to_json(model, classify_ta(model, beta, cfg));
    out << dump(j);
    return kOk;
}

int cmd_oa(const Options& opt, const std::string& beta_text, bool scan, std::ostream& out) {
    const SystemModel model = load_model(opt);
    Json j = model_header(model, opt);
    if (scan) {
        Json list = Json::array();
        for (const auto& c : oa_beta_scan(model, opt.oa(), opt.critical())) {
            Json e = to_json(c.simplex);
            e["component"] = c.component;
            list.push_back(e);
        }
        j["scan"] = list;
    } else {
        if (beta_text.empty()) config_error("oa needs --beta or --scan");
        j["simplex"] = to_json(kms_oa(model, parse_real(beta_text, "beta"), opt.oa()));
    }
    out << dump(j);
    return kOk;
}

QState parse_state(const SystemModel& model, const Json& j) {
    if (!j.is_object() || !j.contains("beta") || !j.contains("atom_masses")) {
        config_error("state needs \"beta\" and \"atom_masses\"");
    }
    const double beta = json_real(j["beta"], "beta");
    const auto& space = model.columns();
    Eigen::VectorXd atoms = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(space.d()));
    const Json& a = j["atom_masses"];
    if (a.is_array()) {
        if (a.size() != space.d()) {
            throw Error(ErrorCode::DimensionMismatch, "atom_masses has " + std::to_string(a.size()) +
                                                          " entries; the column space has " + std::to_string(space.d()));
        }
        for (std::size_t c = 0; c < a.size(); ++c) atoms[static_cast<Eigen::Index>(c)] = json_real(a[c], "atom mass");
    } else if (a.is_object()) {
        for (auto it = a.begin(); it != a.end(); ++it) {
            std::size_t c = 0;
            while (c < space.d() && bit_string(space.points[c]) != it.key()) ++c;
            if (c == space.d()) config_error("'" + it.key() + "' is not a column of the matrix");
            atoms[static_cast<Eigen::Index>(c)] = json_real(it.value(), "atom mass");
        }
    } else {
        config_error("atom_masses must be an object keyed by column bit-strings or an array");
    }
    for (Eigen::Index c = 0; c < atoms.size(); ++c)
        if (atoms[c] < 0.0) throw Error(ErrorCode::NegativeEntry, "negative atom mass", static_cast<std::size_t>(c));
    if (std::abs(atoms.sum() - 1.0) > 1e-9) {
        throw Error(ErrorCode::NotNormalized, "atom masses sum to " + csv_real(atoms.sum()) + ", expected 1");
    }
    return state_from_atoms(model, beta, atoms, StateType::Finite);
}

int cmd_check_state(const Options& opt, const std::string& path, const std::string& inline_state, bool exhaustive,
                    std::ostream& out) {
    const SystemModel model = load_model(opt);
    const Json sj = inline_state.empty() ? read_json_file(path, "state file") : read_json_text(inline_state, "inline state");
    const QState state = parse_state(model, sj);
    InvarianceConfig icfg;
    icfg.tolerance = opt.invariance_tolerance;
    StatesConfig scfg;
    scfg.invariance = icfg;

    const bool scan = exhaustive && model.size() <= icfg.exhaustive_cap;
    const InvarianceVerdict verdict = is_subinvariant(model, state.beta, state, scan, icfg);
    Json j = model_header(model, opt);
    j["state"] = to_json(model, state);
    j["verdict"] = to_json(verdict);
    j["factors_through_oa"] = verdict.invariant;
    j["decomposition"] = verdict.subinvariant ? to_json(model, decompose(model, state.beta, state, scfg)) : Json(nullptr);
    out << dump(j);
    return kOk;
}

struct StarArgs {
    std::string family = "default";
    std::string terms;
    double abscissa = 0.0;
    std::string drop = "auto";
    std::string beta;
    std::string levels = "8,32,128,512";
    std::string ts = "0,1";
};

int cmd_star(const Options& opt, const StarArgs& args, std::ostream& out) {
    StarSpec spec;
    if (args.family == "default") {
        spec.family = StarFamily::Default;
    } else if (args.family == "list") {
        spec.family = StarFamily::UserList;
        spec.terms = parse_list(args.terms, "term");
        spec.declared_abscissa = args.abscissa;
    } else {
        config_error("unknown star family '" + args.family + "'");
    }
    if (args.drop != "auto") {
        const double d = parse_real(args.drop, "drop");
        if (d < 0 || d != std::floor(d) || d > 1e6) config_error("drop must be 'auto' or a nonnegative integer");
        spec.drop = static_cast<int>(d);
    }
    const StarSystem sys = build_star(spec);
    const double beta = args.beta.empty() ? sys.beta_bar() : parse_real(args.beta, "beta");

    Json j;
    j["config"] = opt.echo();
    const ZetaEnclosure z_bar = sys.zeta(sys.beta_bar());
    j["certification"] = {{"family", args.family},
                          {"drop", sys.drop()},
                          {"beta_bar", number(sys.beta_bar())},
                          {"zeta_at_beta_bar", to_json(z_bar)},
                          {"two_pow_beta_bar", number(std::pow(2.0, sys.beta_bar()))},
                          {"condition_holds", z_bar.upper < std::pow(2.0, sys.beta_bar())},
                          {"tail_certified", sys.tail_certified()}};
    const StarPartition part = star_partition(sys, beta);
    j["partition"] = to_json(part);

    Json table = Json::array();
    for (double kd : parse_list(args.levels, "truncation level")) {
        if (kd < 1 || kd != std::floor(kd)) config_error("truncation levels must be positive integers");
        const auto K = static_cast<std::size_t>(kd);
        if (auto n = sys.term_count(); n && K > *n) continue;
        const SystemModel trunc = truncate(sys, K);
        const PartitionReport rep = evaluate(trunc, beta, PartitionConfig{opt.margin});
        Json row;
        row["K"] = K;
        row["beta_c"] = number(beta_c(trunc, opt.critical()).beta_c);
        if (rep.convergent() && part.z0_words) {
            const TruncationBounds b = truncation_bounds(sys, beta, K);
            const double z0 = (*rep.z_y)[0];
            row["z0_words"] = number(z0);
            row["z0_gap"] = number(*part.z0_words - z0);
            row["z0_bound"] = number(b.z0);
            row["z_total"] = number(*rep.z_total);
            row["z_total_gap"] = number(*part.z_total - *rep.z_total);
            row["z_total_bound"] = number(b.z_total);
        } else {
            row["z0_words"] = "divergent";
        }
        table.push_back(row);
    }
    j["truncations"] = table;

    Json states = Json::array();
    std::vector<StarState> computed;
    for (double t : parse_list(args.ts, "t")) {
        computed.push_back(star_kms_at_critical(sys, t));
        states.push_back(to_json(computed.back()));
    }
    j["critical_states"] = states;
    double spread = 0.0;
    for (const auto& a : computed)
        for (const auto& b : computed) spread = std::max(spread, std::abs(a.atom_a - b.atom_a));
    j["critical_states_spread"] = number(spread);
    out << dump(j);
    return kOk;
}

int cmd_oracle(const Options& opt, const std::string& beta_text, int length, int source, int target,
               std::ostream& out) {
    const SystemModel model = load_model(opt);
    Endpoints ends;
    if (source >= 0) ends.source = static_cast<Generator>(source);
    if (target >= 0) ends.target = static_cast<Generator>(target);
    WordConfig wc;
    wc.max_words = opt.max_words;
    const auto rows = shell_table(model, parse_real(beta_text, "beta"), length, ends, wc);
    out << "n,count,shell_sum\n";
    for (const auto& r : rows) out << r.n << ',' << r.count << ',' << csv_real(r.sum) << '\n';
    return kOk;
}

void report_error(const Error& e, std::ostream& err) {
    Json j;
    j["error"] = std::string(to_string(e.code()));
    j["message"] = e.what();
    j["index"] = e.index() ? Json(*e.index()) : Json(nullptr);
    err << dump(j);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"KMS phase diagrams of Toeplitz-Cuntz-Krieger systems", "kmsctl"};
    app.require_subcommand(1);
    app.fallthrough();
    Options opt;
    app.add_option("--model", opt.model_path, "model JSON file {labels?, matrix, energies}");
    app.add_option("--model-json", opt.model_json, "model JSON given inline");
    app.add_option("--margin", opt.margin, "near-critical margin on the spectral radius");
    app.add_option("--critical-tol", opt.critical_tolerance, "bisection width for beta_c");
    app.add_option("--invariance-tol", opt.invariance_tolerance, "tolerance on invariance gaps");
    app.add_option("--max-words", opt.max_words, "enumeration cap");
    app.add_option("--oa-eigen-tol", opt.oa_eigen_tolerance, "|lambda - 1| threshold");
    app.add_option("--oa-null-tol", opt.oa_null_tolerance, "relative null-space threshold");
    app.add_option("--oa-max-dim", opt.oa_max_dimension, "largest eigenspace handled");

    std::string beta, sweep, state_path, state_json;
    bool scan = false, exhaustive = false;
    int length = 8, source = -1, target = -1;
    StarArgs star;

    auto* analyze = app.add_subcommand("analyze", "properties, column space and critical report");
    auto* partition = app.add_subcommand("partition", "partition functions at one beta, or a CSV sweep");
    partition->add_option("--beta", beta);
    partition->add_option("--sweep", sweep, "b0:b1:steps, inclusive uniform grid");
    auto* critical = app.add_subcommand("critical", "beta_c and the Perron vector");
    auto* kms = app.add_subcommand("kms", "KMS_beta states on T_A");
    kms->add_option("--beta", beta)->required();
    auto* oa = app.add_subcommand("oa", "KMS_beta states on O_A");
    oa->add_option("--beta", beta);
    oa->add_flag("--scan", scan, "all betas carrying O_A states");
    auto* check = app.add_subcommand("check-state", "subinvariance verdict and decomposition of a state");
    check->add_option("--state", state_path, "state JSON {beta, atom_masses}");
    check->add_option("--state-json", state_json, "state JSON given inline");
    check->add_flag("--exhaustive", exhaustive, "also scan every disjoint (X, Y)");
    auto* starcmd = app.add_subcommand("star", "the star family at and above criticality");
    starcmd->add_option("--family", star.family, "default | list");
    starcmd->add_option("--terms", star.terms, "comma-separated N_k for --family list");
    starcmd->add_option("--abscissa", star.abscissa, "declared abscissa for --family list");
    starcmd->add_option("--drop", star.drop, "auto | number of leading terms to drop");
    starcmd->add_option("--beta", star.beta, "defaults to the abscissa");
    starcmd->add_option("--K", star.levels, "comma-separated truncation levels");
    starcmd->add_option("--t", star.ts, "comma-separated mixing parameters of the critical states");
    auto* oracle = app.add_subcommand("oracle", "per-shell brute-force word sums as CSV");
    oracle->add_option("--beta", beta)->required();
    oracle->add_option("--length", length, "largest word length");
    oracle->add_option("--source", source, "fixed first letter");
    oracle->add_option("--target", target, "fixed last letter");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kValidation;
    }

    try {
        if (*analyze) return cmd_analyze(opt, out);
        if (*partition) return cmd_partition(opt, beta, sweep, out);
        if (*critical) return cmd_critical(opt, out);
        if (*kms) return cmd_kms(opt, beta, out);
        if (*oa) return cmd_oa(opt, beta, scan, out);
        if (*check) {
            if (state_path.empty() && state_json.empty()) config_error("check-state needs --state or --state-json");
            return cmd_check_state(opt, state_path, state_json, exhaustive, out);
        }
        if (*starcmd) return cmd_star(opt, star, out);
        if (*oracle) return cmd_oracle(opt, beta, length, source, target, out);
    } catch (const Error& e) {
        report_error(e, err);
        return is_validation_error(e.code()) ? kValidation : kNumeric;
    } catch (const std::exception& e) {
        err << dump(Json{{"error", "Internal"}, {"message", e.what()}, {"index", nullptr}});
        return kNumeric;
    }
    return kValidation;
}

}  // namespace kmsctl
