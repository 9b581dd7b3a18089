#include "crnsign/cli.hpp"

#include "crnsign/report.hpp"
#include "crnsign/textio.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

namespace crnsign::cli {

using report::Json;

namespace {

/// Bad command-line values; reported like usage errors.
class UsageError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

struct Outcome {
    Json json = Json::object();
    std::string plain;
    bool ok = true;
};

std::vector<std::string> split(const std::string &text, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, sep)) {
        item.erase(0, item.find_first_not_of(" \t"));
        item.erase(item.find_last_not_of(" \t") + 1);
        out.push_back(item);
    }
    return out;
}

Rational parse_number(const std::string &text) {
    try {
        return parse_rational(text);
    } catch (const std::invalid_argument &) {
    }
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception &) {
        used = 0;
    }
    if (used == 0 || used != text.size() || !std::isfinite(v))
        throw UsageError("not a number: '" + text + "'");
    return Rational(v);
}

std::vector<Rational> parse_numbers(const std::string &text, const char *what) {
    std::vector<Rational> out;
    for (const auto &tok : split(text, ','))
        out.push_back(parse_number(tok));
    if (out.empty())
        throw UsageError(std::string("empty ") + what);
    return out;
}

std::vector<double> to_doubles(const std::vector<Rational> &v) {
    std::vector<double> out;
    for (const auto &q : v)
        out.push_back(q.get_d());
    return out;
}

Network load(const CliConfig &cfg) {
    std::string text;
    if (cfg.input == "-") {
        text.assign(std::istreambuf_iterator<char>(std::cin), {});
    } else {
        std::ifstream in(cfg.input, std::ios::binary);
        if (!in)
            throw UsageError("cannot read " + cfg.input);
        text.assign(std::istreambuf_iterator<char>(in), {});
    }
    return parse_network(text, {cfg.permissive});
}

std::vector<double> rates_for(const Network &net, const CliConfig &cfg,
                              std::vector<Rational> *exact = nullptr) {
    std::vector<Rational> r;
    if (!cfg.rates.empty()) {
        r = parse_numbers(cfg.rates, "rate list");
        if (r.size() != net.reaction_count())
            throw UsageError("--rates needs " + std::to_string(net.reaction_count()) + " values, got " +
                             std::to_string(r.size()));
        for (const auto &q : r)
            if (sgn(q) <= 0)
                throw UsageError("rates must be positive");
    } else {
        for (double k : net.rates_or(1.0))
            r.push_back(Rational(k));
    }
    if (exact)
        *exact = r;
    return to_doubles(r);
}

std::vector<Rational> point_for(std::size_t d, const CliConfig &cfg) {
    if (cfg.x0.empty())
        return std::vector<Rational>(d, Rational(1));
    std::vector<Rational> x = parse_numbers(cfg.x0, "point");
    if (x.size() != d)
        throw UsageError("--x0 needs " + std::to_string(d) + " values, got " + std::to_string(x.size()));
    return x;
}

Eigen::VectorXd to_eigen(const std::vector<double> &v) {
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

std::vector<double> parse_grid(const std::string &spec) {
    auto parts = split(spec, ':');
    if (parts.size() != 3)
        throw UsageError("--k-grid expects lo:hi:n");
    double lo = parse_number(parts[0]).get_d(), hi = parse_number(parts[1]).get_d();
    Rational n = parse_number(parts[2]);
    if (n.get_den() != 1 || n < 2)
        throw UsageError("--k-grid point count must be an integer >= 2");
    try {
        return log_grid(lo, hi, static_cast<std::size_t>(n.get_d()));
    } catch (const std::invalid_argument &e) {
        throw UsageError(e.what());
    }
}

SignFixOptions fix_options(const CliConfig &cfg) {
    SignFixOptions opt;
    opt.rate = cfg.rate;
    if (!(cfg.rate > 0.0))
        throw UsageError("--rate must be positive");
    if (!cfg.order.empty()) {
        std::vector<std::size_t> order;
        for (const auto &q : parse_numbers(cfg.order, "order")) {
            if (q.get_den() != 1 || q < 1)
                throw UsageError("--order takes class numbers starting at 1");
            order.push_back(static_cast<std::size_t>(q.get_d()) - 1);
        }
        opt.order = std::move(order);
    }
    return opt;
}

void write_file(const std::string &path, const std::string &text) {
    std::ofstream f(path, std::ios::binary);
    if (!f || !(f << text))
        throw UsageError("cannot write " + path);
}

std::string matrix_lines(const Json &rows, const std::string &indent) {
    std::ostringstream out;
    for (const auto &row : rows) {
        out << indent;
        for (std::size_t j = 0; j < row.size(); ++j)
            out << (j ? " " : "") << (row[j].is_string() ? row[j].get<std::string>() : row[j].dump());
        out << "\n";
    }
    return out.str();
}

std::string plain_network(const Network &net) {
    std::ostringstream out;
    out << "species (" << net.species_count() << "):";
    for (const auto &sp : net.species())
        out << " " << sp.name;
    out << "\nreactions (" << net.reaction_count() << "):\n";
    for (std::size_t j = 0; j < net.reaction_count(); ++j)
        out << "  R" << j + 1 << ": " << reaction_to_string(net, j) << "\n";
    return out.str();
}

std::string plain_classes(const Json &classes) {
    std::ostringstream out;
    out << "bad classes: " << classes.size() << "\n";
    for (std::size_t c = 0; c < classes.size(); ++c) {
        const auto &pe = classes[c]["positive_entry"];
        out << "  " << c + 1 << ": +" << pe["value"].get<std::string>() << " at ("
            << pe["species"].get<std::string>() << ", R" << pe["reaction"] << "), "
            << classes[c]["submatrices"].size() << " submatrices\n";
    }
    return out.str();
}

std::string plain_kernels(const Json &k) {
    std::ostringstream out;
    out << "rank " << k["rank"] << ", dim ker " << k["right_exact"].size() << ", dim left ker "
        << k["left_exact"].size() << ", conserving " << (k["conserving"].get<bool>() ? "yes" : "no")
        << "\n";
    return out.str();
}

std::string plain_deficiency(const Json &d) {
    std::ostringstream out;
    out << "n " << d["n"] << ", ell " << d["ell"] << ", s " << d["s"] << ", delta " << d["delta"]
        << "\n";
    return out.str();
}

Outcome cmd_analyze(const CliConfig &cfg) {
    Network net = load(cfg);
    RationalMatrix s = stoichiometric_matrix(net);
    auto classes = find_bad_submatrices(s);
    Outcome o;
    o.json["network"] = report::network(net);
    o.json["signcheck"] = report::signcheck(net, {cfg.samples ? cfg.samples : 100, cfg.seed});
    o.json["badclasses"] = report::badclasses(net, classes);
    o.json["kernels"] = report::kernels(s);
    o.json["deficiency"] = report::deficiency(net);

    const Json &sc = o.json["signcheck"];
    std::ostringstream p;
    p << plain_network(net) << plain_classes(o.json["badclasses"]);
    if (sc["jacobian_status"].is_null()) {
        p << "not in reaction form; Jacobian sign status undefined\n";
        o.ok = false;
    } else {
        p << "jacobian sign status:\n" << matrix_lines(sc["jacobian_status"], "  ");
        p << "ambiguous entries: " << sc["ambiguous_entries"].size() << "\n";
        for (const auto &e : sc["ambiguous_entries"])
            p << "  (" << e[0].get<std::string>() << ", " << e[1].get<std::string>() << ")\n";
        o.ok = sc["respects_sign_pattern"].get<bool>();
    }
    p << plain_kernels(o.json["kernels"]) << plain_deficiency(o.json["deficiency"]);
    o.plain = p.str();
    return o;
}

Outcome cmd_signfix(const CliConfig &cfg) {
    Network net = load(cfg);
    FixReport rep = sign_fix(net, fix_options(cfg));
    Outcome o;
    o.json["network"] = report::network(net);
    o.json["badclasses"] = report::badclasses(net, rep.classes);
    o.json["fixreport"] = report::fixreport(rep);
    o.json["kernels"] = report::kernels(rep);
    o.json["deficiency"] = report::deficiency(rep);
    if (!cfg.output.empty())
        write_file(cfg.output, serialize_network(rep.result()));

    const Json &fr = o.json["fixreport"];
    bool corr = true;
    for (const auto &c : o.json["kernels"]["correspondence"])
        corr = corr && c.get<bool>();
    o.ok = corr && fr["result"]["bad_classes"] == 0 && fr["result"]["ambiguous_entries"] == 0;

    std::ostringstream p;
    p << plain_classes(o.json["badclasses"]);
    for (const auto &st : fr["steps"])
        p << "step: class " << st["class"] << ", moved " << st["moved_value"].get<std::string>()
          << " " << st["species"].get<std::string>() << " out of R" << st["reaction"] << ", added "
          << st["added_reaction_text"].get<std::string>() << " as R" << st["added_reaction"] << "\n";
    p << "fixed stoichiometric matrix:\n"
      << matrix_lines(fr["result"]["stoichiometry_exact"], "  ") << "fixed network:\n"
      << fr["result"]["text"].get<std::string>() << "remaining bad classes "
      << fr["result"]["bad_classes"] << ", ambiguous entries " << fr["result"]["ambiguous_entries"]
      << ", kernel correspondence " << (corr ? "holds" : "FAILS") << "\n";
    o.plain = p.str();
    return o;
}

Outcome cmd_altfix(const CliConfig &cfg, std::ostream &err) {
    err << "warning: altfix is a demonstration; it breaks the equilibria correspondence\n";
    Network net = load(cfg);
    AltFixReport alt = altfix(net);
    Outcome o;
    o.json["network"] = report::network(net);
    o.json["altfix"] = report::altfix(net, alt);
    o.json["kernels"] = report::kernels(alt.s);
    o.ok = alt.kernel_dim == alt.kernel_dim_tilde && alt.conserving == alt.conserving_tilde;

    std::ostringstream p;
    p << "S:\n"
      << matrix_lines(o.json["altfix"]["s_exact"], "  ") << "S tilde:\n"
      << matrix_lines(o.json["altfix"]["s_tilde_exact"], "  ") << "dim ker " << alt.kernel_dim
      << " -> " << alt.kernel_dim_tilde << ", dim left ker " << alt.left_kernel_dim << " -> "
      << alt.left_kernel_dim_tilde << ", conserving " << (alt.conserving ? "yes" : "no") << " -> "
      << (alt.conserving_tilde ? "yes" : "no") << "\n";
    o.plain = p.str();
    return o;
}

Outcome cmd_deficiency(const CliConfig &cfg) {
    Network net = load(cfg);
    Outcome o;
    o.json["network"] = report::network(net);
    if (net.in_reaction_form()) {
        FixReport rep = sign_fix(net, fix_options(cfg));
        o.json["deficiency"] = report::deficiency(rep);
    } else {
        o.json["deficiency"] = report::deficiency(net);
    }
    const Json &d = o.json["deficiency"];
    o.ok = d["delta"] == 0;

    std::ostringstream p;
    p << "complexes:";
    for (const auto &c : d["complexes"])
        p << " " << c.get<std::string>();
    p << "\n" << plain_deficiency(d);
    if (d.contains("fixed")) {
        p << "after sign fixing: " << plain_deficiency(d["fixed"]);
        for (const auto &a : d["audit"])
            p << "  step " << a["step"] << ": dn " << a["dn"] << ", dl " << a["dl"] << ", ds "
              << a["ds"] << ", ddelta " << a["dd"] << "\n";
    }
    o.plain = p.str();
    return o;
}

Outcome cmd_equilibria(const CliConfig &cfg) {
    Network net = load(cfg);
    report::EquilibriaInput in;
    in.rates = rates_for(net, cfg);
    in.x0 = to_eigen(to_doubles(point_for(net.species_count(), cfg)));
    for (Eigen::Index i = 0; i < in.x0.size(); ++i)
        if (!(in.x0(i) > 0.0))
            throw UsageError("--x0 must be positive");
    in.options.allow_boundary = cfg.allow_boundary;
    if (!cfg.clamp.empty())
        for (const auto &name : split(cfg.clamp, ',')) {
            auto idx = net.species_index(name);
            if (!idx)
                throw UsageError("unknown species in --clamp: " + name);
            in.options.clamped.push_back(*idx);
        }

    MassActionSystem sys(net, in.rates);
    EquilibriumResult eq = find_equilibrium(sys, in.x0, in.options);
    FixReport rep = net.in_reaction_form() ? sign_fix(net, fix_options(cfg))
                                           : FixReport{{net}, {}, {}, {}};
    std::optional<EquilibriumPair> lifted;
    double project_error = 0.0;
    const double tol = std::max(1e-8, eq.tolerance);
    if (eq.converged) {
        lifted = lift_equilibrium(rep, in.rates, eq.x, tol);
        Eigen::VectorXd back = project_equilibrium(rep, in.rates, lifted->x_hat, tol);
        project_error = max_abs(back - eq.x);
    }
    if (!cfg.trajectory.empty()) {
        if (!(cfg.dt > 0.0) || !(cfg.t_end > 0.0))
            throw UsageError("--t-end and --dt must be positive");
        std::ofstream csv(cfg.trajectory);
        if (!csv)
            throw UsageError("cannot write " + cfg.trajectory);
        write_trajectory_csv(csv, simulate(sys, in.x0, cfg.t_end, cfg.dt), net);
    }

    Outcome o;
    o.json["network"] = report::network(net);
    o.json["equilibria"] = report::equilibria(rep, in, eq, lifted, project_error);
    o.ok = eq.converged && lifted && lifted->residual_hat <= tol && project_error <= 1e-12;

    std::ostringstream p;
    p << (eq.converged ? "equilibrium" : "no equilibrium found") << " (" << eq.message
      << ", residual " << eq.residual << "):";
    for (Eigen::Index i = 0; i < eq.x.size(); ++i)
        p << " " << net.species_name(static_cast<std::size_t>(i)) << "=" << eq.x(i);
    p << "\n";
    if (lifted) {
        p << "lifted to the fixed network (residual " << lifted->residual_hat << "):";
        for (Eigen::Index i = 0; i < lifted->x_hat.size(); ++i)
            p << " " << rep.result().species_name(static_cast<std::size_t>(i)) << "="
              << lifted->x_hat(i);
        p << "\n";
    }
    o.plain = p.str();
    return o;
}

Outcome cmd_spectra(const CliConfig &cfg) {
    Network net = load(cfg);
    report::SpectraInput in;
    in.k_grid = parse_grid(cfg.k_grid);
    in.rates = rates_for(net, cfg, &in.rates_exact);
    in.x_hat_exact = point_for(net.species_count(), cfg);
    for (const auto &q : in.x_hat_exact)
        if (sgn(q) <= 0)
            throw UsageError("--x0 must be positive");
    std::vector<double> xh = to_doubles(in.x_hat_exact);
    xh.push_back(1.0);
    in.x_hat = to_eigen(xh);
    in.det_samples = cfg.samples ? cfg.samples : 20;
    in.seed = cfg.seed;
    if (cfg.class_index < 1)
        throw UsageError("--class starts at 1");
    in.class_index = cfg.class_index - 1;

    Outcome o;
    o.json["network"] = report::network(net);
    auto classes = find_bad_submatrices(stoichiometric_matrix(net));
    if (classes.empty()) {
        o.json["spectra"] = nullptr;
        o.ok = false;
        o.plain = "no bad class to fix\n";
        return o;
    }
    FixReport single = fix_single(net, in.class_index, cfg.rate);
    bool passed = false;
    o.json["spectra"] = report::spectra(single, in, passed);
    o.ok = passed;

    const Json &sp = o.json["spectra"];
    std::ostringstream p;
    p << "fixing class " << sp["class"] << " (" << sp["species"].get<std::string>() << ", R"
      << sp["reaction"] << ")\n";
    for (const auto &row : sp["per_k"])
        p << "  k " << row["k"].dump() << ": matched error " << row["matched_error"].dump()
          << ", escaper " << row["escaper"][0].dump() << ", det J_hat " << row["det_j_hat"].dump()
          << "\n";
    p << "slope " << sp["slope"].dump() << ", verdict " << sp["verdict_j"].get<std::string>()
      << " / " << sp["verdict_j_hat"].get<std::string>() << ", " << (passed ? "pass" : "FAIL")
      << "\n";
    o.plain = p.str();
    return o;
}

Outcome cmd_graph(const CliConfig &cfg) {
    Network net = load(cfg);
    if (cfg.fixed)
        net = sign_fix(net, fix_options(cfg)).result();
    SRGraph g = build_graph(net);
    auto cycles = find_bad_cycles(g);
    Outcome o;
    o.json["network"] = report::network(net);
    o.json["graph"] = report::graph(net, g, cycles);
    if (!cfg.output.empty())
        write_file(cfg.output, export_dot(g));
    o.ok = cycles.empty();
    o.plain = export_dot(g);
    return o;
}

Outcome cmd_decompose(const CliConfig &cfg) {
    Network net = load(cfg);
    MassActionSystem sys(net, rates_for(net, cfg));
    ComplexesDecomposition dec = complexes_decomposition(sys);
    const std::size_t samples = cfg.samples ? cfg.samples : 50;
    double e = verify_decomposition(sys, dec, samples, cfg.seed);
    Outcome o;
    o.json["network"] = report::network(net);
    o.json["deficiency"] = report::deficiency(net);
    o.json["decomposition"] = report::decomposition(net, dec, e, samples, cfg.seed);
    o.ok = e <= 1e-10;

    std::ostringstream p;
    p << "complexes:";
    for (const auto &c : o.json["decomposition"]["complexes"])
        p << " " << c.get<std::string>();
    p << "\nY:\n"
      << matrix_lines(o.json["decomposition"]["y_exact"], "  ") << "A_k:\n"
      << matrix_lines(o.json["decomposition"]["a_k_f64"], "  ")
      << "max relative error of S v = Y A_k psi: " << e << "\n";
    o.plain = p.str();
    return o;
}

} // namespace

int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
    CliConfig cfg;
    CLI::App app{"Sign-pattern analysis and sign fixing of chemical reaction networks", "crnsign"};
    app.require_subcommand(1);
    app.footer(kGrammarHelp);

    auto common = [&](CLI::App *sub) {
        sub->add_option("file", cfg.input, "network file, '-' for stdin")->required();
        auto *json = sub->add_flag("--json", "JSON report (default)");
        sub->add_flag("--plain", cfg.plain, "human-readable summary")->excludes(json);
        sub->add_option("--report", cfg.report_path, "write the report here instead of stdout");
        sub->add_option("--seed", cfg.seed, "seed of all randomized checks")->capture_default_str();
        sub->add_flag("--check", cfg.check, "exit 1 when the subcommand's check fails");
        sub->add_flag("--permissive", cfg.permissive,
                      "accept species on both sides of a reaction");
    };
    auto fixing = [&](CLI::App *sub) {
        sub->add_option("--order", cfg.order, "class order, e.g. 2,1");
        sub->add_option("--rate", cfg.rate, "rate of added reactions")->capture_default_str();
    };
    auto kinetic = [&](CLI::App *sub) {
        sub->add_option("--rates", cfg.rates, "k1,k2,... for the input reactions");
        sub->add_option("--x0", cfg.x0, "positive point x1,x2,...");
    };

    auto *analyze = app.add_subcommand(
        "analyze", "sign pattern, bad classes, kernels, deficiency (check: Jacobian signed)");
    common(analyze);
    analyze->add_option("--samples", cfg.samples, "converse sampling draws (default 100)");

    auto *signfix = app.add_subcommand(
        "signfix", "apply the sign fix (check: result signed and kernels correspond)");
    common(signfix);
    fixing(signfix);
    signfix->add_option("-o,--output", cfg.output, "write the fixed network here");

    auto *alt = app.add_subcommand(
        "altfix", "demonstration, breaks equilibria correspondence (check: kernels preserved)");
    common(alt);

    auto *defi = app.add_subcommand("deficiency", "deficiency and per-step audit (check: delta = 0)");
    common(defi);
    fixing(defi);

    auto *equi = app.add_subcommand(
        "equilibria", "mass-action equilibrium and its lift (check: found and lifted)");
    common(equi);
    fixing(equi);
    kinetic(equi);
    equi->add_flag("--allow-boundary", cfg.allow_boundary, "accept boundary equilibria");
    equi->add_option("--clamp", cfg.clamp, "species held at their x0 value");
    equi->add_option("--trajectory", cfg.trajectory, "write an RK4 trajectory as CSV");
    equi->add_option("--t-end", cfg.t_end, "trajectory end time")->capture_default_str();
    equi->add_option("--dt", cfg.dt, "trajectory step")->capture_default_str();

    auto *spec = app.add_subcommand(
        "spectra", "eigenvalues of a one-step fix over a k grid (check: all criteria)");
    common(spec);
    kinetic(spec);
    spec->add_option("--k-grid", cfg.k_grid, "lo:hi:n, log spaced")->capture_default_str();
    spec->add_option("--class", cfg.class_index, "bad class to fix")->capture_default_str();
    spec->add_option("--samples", cfg.samples, "det sign samples (default 20)");

    auto *graph = app.add_subcommand(
        "graph", "species-reaction graph, DOT with --plain or -o (check: no bad cycle)");
    common(graph);
    fixing(graph);
    graph->add_flag("--fixed", cfg.fixed, "graph of the sign-fixed network");
    graph->add_option("-o,--output", cfg.output, "write DOT here");

    auto *dec = app.add_subcommand(
        "decompose", "S v = Y A_k psi decomposition (check: identity holds)");
    common(dec);
    kinetic(dec);
    dec->add_option("--samples", cfg.samples, "random points (default 50)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &) {
        auto subs = app.get_subcommands();
        out << (subs.empty() ? app.help() : subs.front()->help());
        return ok;
    } catch (const CLI::CallForAllHelp &) {
        out << app.help("", CLI::AppFormatMode::All);
        return ok;
    } catch (const CLI::ParseError &e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return input_error;
    }
    cfg.subcommand = app.get_subcommands().front()->get_name();

    Outcome o;
    try {
        if (cfg.subcommand == "analyze")
            o = cmd_analyze(cfg);
        else if (cfg.subcommand == "signfix")
            o = cmd_signfix(cfg);
        else if (cfg.subcommand == "altfix")
            o = cmd_altfix(cfg, err);
        else if (cfg.subcommand == "deficiency")
            o = cmd_deficiency(cfg);
        else if (cfg.subcommand == "equilibria")
            o = cmd_equilibria(cfg);
        else if (cfg.subcommand == "spectra")
            o = cmd_spectra(cfg);
        else if (cfg.subcommand == "graph")
            o = cmd_graph(cfg);
        else
            o = cmd_decompose(cfg);

        std::string text = cfg.plain ? o.plain : o.json.dump(2) + "\n";
        if (cfg.report_path.empty())
            out << text;
        else
            write_file(cfg.report_path, text);
    } catch (const ParseError &e) {
        err << "error: " << cfg.input << ":" << e.line() << ":" << e.column() << ": "
            << to_string(e.kind()) << ": " << e.detail() << "\n\n"
            << kGrammarHelp;
        return input_error;
    } catch (const UsageError &e) {
        err << "error: " << e.what() << "\n\n" << app.get_subcommands().front()->help();
        return input_error;
    } catch (const std::invalid_argument &e) {
        // ModelError, FixError and rejected arguments
        err << "error: " << e.what() << "\n";
        return input_error;
    } catch (const ConsistencyError &e) {
        err << "internal cross-check failed: " << e.what() << "\n";
        return check_failed;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << "\n";
        return check_failed;
    }
    return (cfg.check && !o.ok) ? check_failed : ok;
}

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    std::vector<const char *> argv;
    argv.push_back("crnsign");
    for (const auto &a : args)
        argv.push_back(a.c_str());
    return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

} // namespace crnsign::cli
