#include "hermrel/cli.hpp"

#include <algorithm>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "hermrel/census.hpp"
#include "hermrel/classify.hpp"
#include "hermrel/verify.hpp"
#include "json.hpp"

namespace hermrel::cli {

namespace {

using nlohmann::ordered_json;

enum class Format { text, json, csv };

struct Globals {
    std::string field = "2^2";
    std::string format = "text";
    FieldPtr ctx;
    Format fmt = Format::text;
};

struct SweepFlags {
    std::uint64_t samples = 1000;
    std::uint64_t seed = kDefaultSeed;
    unsigned workers = 1;
    bool exhaustive = false;
    std::string plan_file;
    std::uint64_t extension_samples = 100;
    std::uint64_t budget = kDefaultExhaustiveBudget;
    std::vector<std::string> checks;
    bool timing = false;
};

ordered_json codes(const Mat3& m) {
    ordered_json j = ordered_json::array();
    for (Elem e : m.a) j.push_back(e.code);
    return j;
}

template <class P>
ordered_json codes(const P& pt) {
    return ordered_json::array({pt.c[0].code, pt.c[1].code, pt.c[2].code});
}

ordered_json codes(const std::vector<Elem>& v) {
    ordered_json j = ordered_json::array();
    for (Elem e : v) j.push_back(e.code);
    return j;
}

std::string join(const std::vector<Elem>& v) {
    std::string s;
    for (Elem e : v) s += (s.empty() ? "" : " ") + std::to_string(e.code);
    return s;
}

std::string poly_string(const PolyFp& poly) {
    std::string s;
    for (std::size_t i = poly.size(); i-- > 0;) {
        if (poly[i] == 0) continue;
        if (!s.empty()) s += " + ";
        if (poly[i] != 1 || i == 0) s += std::to_string(poly[i]);
        if (i > 0) s += i == 1 ? "t" : "t^" + std::to_string(i);
    }
    return s.empty() ? "0" : s;
}

Elem element(const FieldCtx& f, std::uint64_t v, const char* what) {
    if (v >= f.q()) throw Error(Errc::InvalidArgument, std::string(what) + " = " + std::to_string(v) + " is not below q");
    return Elem{static_cast<std::uint32_t>(v)};
}

void dump(std::ostream& out, const ordered_json& j) { out << j.dump(2) << '\n'; }

int field_info(const Globals& g, bool tables, std::optional<std::uint64_t> elem, std::ostream& out) {
    const FieldCtx& f = *g.ctx;
    if (g.fmt == Format::json) {
        ordered_json j;
        j["field"] = f.spec().str();
        j["p"] = f.p();
        j["m"] = f.m();
        j["q"] = f.q();
        j["sqrt_q"] = f.sqrt_q();
        j["modulus"] = f.modulus();
        j["modulus_code"] = f.modulus_code();
        j["modulus_text"] = poly_string(f.modulus());
        j["generator"] = f.generator().code;
        j["subfield"] = codes(f.subfield_elements());
        if (elem) {
            const Elem a = element(f, *elem, "element");
            j["element"] = {{"code", a.code},
                            {"frobenius", f.frob(a).code},
                            {"trace", f.trace(a).code},
                            {"norm", f.norm(a).code},
                            {"norm_of_zero", a.code == 0},
                            {"log", a.code == 0 ? ordered_json(nullptr) : ordered_json(f.log(a))}};
        }
        if (tables) {
            ordered_json exp = ordered_json::array(), log = ordered_json::array(), frob = ordered_json::array();
            for (std::uint32_t k = 0; k + 1 < f.q(); ++k) exp.push_back(f.exp(k).code);
            for (std::uint32_t c = 0; c < f.q(); ++c) {
                log.push_back(c == 0 ? ordered_json(nullptr) : ordered_json(f.log(Elem{c})));
                frob.push_back(f.frob(Elem{c}).code);
            }
            j["tables"] = {{"exp", exp}, {"log", log}, {"frobenius", frob}};
        }
        dump(out, j);
        return kExitOk;
    }
    if (tables || g.fmt == Format::csv) {
        const char sep = g.fmt == Format::csv ? ',' : ' ';
        if (g.fmt == Format::text) {
            out << "field " << f.spec().str() << "\nmodulus " << poly_string(f.modulus()) << "\ngenerator "
                << f.generator().code << '\n';
        }
        out << "code" << sep << "log" << sep << "frobenius" << sep << "trace" << sep << "norm\n";
        for (std::uint32_t c = 0; c < f.q(); ++c) {
            const Elem a{c};
            out << c << sep << (c == 0 ? std::string("-") : std::to_string(f.log(a))) << sep << f.frob(a).code << sep
                << f.trace(a).code << sep << f.norm(a).code << '\n';
        }
        return kExitOk;
    }
    out << "field " << f.spec().str() << "\np " << f.p() << "\nm " << f.m() << "\nq " << f.q() << "\nsqrt_q "
        << f.sqrt_q() << "\nmodulus " << poly_string(f.modulus()) << "\nmodulus_code " << f.modulus_code()
        << "\ngenerator " << f.generator().code << "\nsubfield " << join(f.subfield_elements()) << '\n';
    if (elem) {
        const Elem a = element(f, *elem, "element");
        out << "element " << a.code << "\nfrobenius " << f.frob(a).code << "\ntrace " << f.trace(a).code << "\nnorm "
            << f.norm(a).code << (a.code == 0 ? " (norm of zero)" : "") << '\n';
        if (a.code != 0) out << "log " << f.log(a) << '\n';
    }
    return kExitOk;
}

int points(const Globals& g, const std::string& matrix, bool only_inflexions, std::ostream& out) {
    const Curve c(g.ctx, parse_matrix(*g.ctx, matrix));
    const HermitianForm form = c.form();
    const auto pts = form.points();
    std::vector<ProjPoint> infl;
    for (const auto& pt : pts)
        if (form.is_inflexion(pt)) infl.push_back(pt);

    if (g.fmt == Format::json) {
        ordered_json j;
        j["A"] = codes(c.matrix().mat());
        j["q"] = g.ctx->q();
        if (!only_inflexions) {
            j["N"] = pts.size();
            ordered_json arr = ordered_json::array();
            for (const auto& pt : pts) arr.push_back(codes(pt));
            j["points"] = arr;
        }
        ordered_json arr = ordered_json::array();
        for (const auto& pt : infl) arr.push_back(codes(pt));
        j["inflexions"] = arr;
        if (only_inflexions) j["count"] = infl.size();
        dump(out, j);
        return kExitOk;
    }
    const auto& list = only_inflexions ? infl : pts;
    if (g.fmt == Format::csv) {
        out << "x,y,z,inflexion\n";
        for (const auto& pt : list) {
            const bool is_infl = std::binary_search(infl.begin(), infl.end(), pt);
            out << pt.c[0].code << ',' << pt.c[1].code << ',' << pt.c[2].code << ',' << (is_infl ? 1 : 0) << '\n';
        }
        return kExitOk;
    }
    out << "q " << g.ctx->q() << "\nA " << format_matrix(c.matrix().mat()) << '\n';
    if (!only_inflexions) out << "N " << pts.size() << '\n';
    out << "inflexions " << infl.size() << '\n';
    for (const auto& pt : list) {
        out << format_point(pt);
        if (!only_inflexions && std::binary_search(infl.begin(), infl.end(), pt)) out << " inflexion";
        out << '\n';
    }
    return kExitOk;
}

int classify_cmd(const Globals& g, const std::string& matrix, std::ostream& out) {
    const Curve c(g.ctx, parse_matrix(*g.ctx, matrix));
    const Classification k = classify(c);
    const std::string type = type_label(k.cls);
    std::optional<std::uint32_t> invariant;
    if (std::holds_alternative<TypeB>(k.cls) || std::holds_alternative<TypeC>(k.cls)) {
        invariant = canonical_invariant(k.cls).code;
    }
    if (g.fmt == Format::json) {
        ordered_json j;
        j["q"] = g.ctx->q();
        j["A"] = codes(c.matrix().mat());
        j["type"] = type;
        j["invariant"] = invariant ? ordered_json(*invariant) : ordered_json(nullptr);
        j["omega"] = k.normal ? ordered_json(k.normal->omega.code) : ordered_json(nullptr);
        j["transform"] = k.normal ? codes(k.normal->transform.mat()) : ordered_json(nullptr);
        j["n_points"] = k.n_points;
        j["n_inflexions"] = k.n_inflexions;
        dump(out, j);
        return kExitOk;
    }
    const std::string inv = invariant ? std::to_string(*invariant) : "";
    const std::string omega = k.normal ? std::to_string(k.normal->omega.code) : "";
    const std::string transform = k.normal ? format_matrix(k.normal->transform.mat()) : "";
    if (g.fmt == Format::csv) {
        out << "q,A,type,invariant,omega,transform,n_points,n_inflexions\n"
            << g.ctx->q() << ',' << format_matrix(c.matrix().mat()) << ',' << type << ',' << inv << ',' << omega << ','
            << transform << ',' << k.n_points << ',' << k.n_inflexions << '\n';
        return kExitOk;
    }
    out << "q " << g.ctx->q() << "\nA " << format_matrix(c.matrix().mat()) << "\ntype " << type << '\n';
    if (invariant) out << "invariant " << inv << '\n';
    if (k.normal) out << "omega " << omega << "\ntransform " << transform << '\n';
    out << "n_points " << k.n_points << "\nn_inflexions " << k.n_inflexions << '\n';
    return kExitOk;
}

int equiv_cmd(const Globals& g, const std::string& a, const std::string& b, bool brute, std::uint64_t budget,
              std::ostream& out) {
    const Curve c1(g.ctx, parse_matrix(*g.ctx, a));
    const Curve c2(g.ctx, parse_matrix(*g.ctx, b));
    const Equivalence e = equivalent(c1, c2, brute ? EquivMethod::bruteforce : EquivMethod::theorem, budget);
    const std::string method = brute ? "bruteforce" : "theorem";
    if (g.fmt == Format::json) {
        ordered_json j;
        j["q"] = g.ctx->q();
        j["A"] = codes(c1.matrix().mat());
        j["B"] = codes(c2.matrix().mat());
        j["method"] = method;
        j["equivalent"] = e.equivalent;
        j["witness"] = e.witness ? codes(e.witness->mat()) : ordered_json(nullptr);
        dump(out, j);
    } else if (g.fmt == Format::csv) {
        out << "q,A,B,method,equivalent,witness\n"
            << g.ctx->q() << ',' << format_matrix(c1.matrix().mat()) << ',' << format_matrix(c2.matrix().mat()) << ','
            << method << ',' << (e.equivalent ? "true" : "false") << ','
            << (e.witness ? format_matrix(e.witness->mat()) : "") << '\n';
    } else {
        out << "method " << method << "\nequivalent " << (e.equivalent ? "yes" : "no") << '\n';
        if (e.witness) out << "witness " << format_matrix(e.witness->mat()) << '\n';
    }
    return kExitOk;
}

int table1_cmd(const Globals& g, unsigned workers, std::ostream& out) {
    const Table1Report rep = class_census(g.ctx, workers);
    auto opt_str = [](const auto& v) { return v ? std::to_string(*v) : std::string(); };
    if (g.fmt == Format::json) {
        ordered_json j;
        j["q"] = rep.q;
        ordered_json rows = ordered_json::array();
        for (const auto& r : rep.rows) {
            rows.push_back({{"type", r.type},
                            {"classes", r.classes},
                            {"N_q", r.n_points ? ordered_json(*r.n_points) : ordered_json(nullptr)},
                            {"inflexions", r.n_inflexions ? ordered_json(*r.n_inflexions) : ordered_json(nullptr)}});
        }
        j["rows"] = rows;
        j["notes"] = rep.notes;
        j["violations"] = rep.violations;
        dump(out, j);
    } else {
        out << "type,classes,N_q,inflexions\n";
        for (const auto& r : rep.rows) {
            out << r.type << ',' << r.classes << ',' << opt_str(r.n_points) << ',' << opt_str(r.n_inflexions) << '\n';
        }
        if (g.fmt == Format::text) {
            for (const auto& n : rep.notes) out << "# note: " << n << '\n';
            for (const auto& v : rep.violations) out << "# violation: " << v << '\n';
        }
    }
    return rep.violations.empty() ? kExitOk : kExitViolations;
}

int solve_cmd(const Globals& g, const std::string& kind, std::optional<std::uint64_t> alpha_in,
              std::optional<std::uint64_t> beta_in, std::ostream& out) {
    const FieldCtx& f = *g.ctx;
    if (!beta_in) throw Error(Errc::InvalidArgument, "--beta is required");
    const Elem beta = element(f, *beta_in, "beta");
    std::optional<Elem> alpha;
    std::vector<Elem> roots;
    std::string equation;
    if (kind == "artin-schreier") {
        equation = "X^e - X - beta";
        roots = solve_artin_schreier(f, beta);
    } else if (kind == "kummer") {
        equation = "X^(e-1) - beta";
        roots = solve_kummer(f, beta);
    } else {
        if (!alpha_in) throw Error(Errc::InvalidArgument, "--alpha is required for semilinear");
        alpha = element(f, *alpha_in, "alpha");
        equation = "X^e + alpha X + beta";
        roots = solve_semilinear(f, *alpha, beta);
    }
    if (g.fmt == Format::json) {
        ordered_json j;
        j["equation"] = equation;
        j["q"] = f.q();
        j["alpha"] = alpha ? ordered_json(alpha->code) : ordered_json(nullptr);
        j["beta"] = beta.code;
        j["roots"] = codes(roots);
        j["count"] = roots.size();
        dump(out, j);
    } else if (g.fmt == Format::csv) {
        out << "root\n";
        for (Elem r : roots) out << r.code << '\n';
    } else {
        out << "equation " << equation << "\ncount " << roots.size() << "\nroots " << join(roots) << '\n';
    }
    return kExitOk;
}

SweepPlan build_plan(const Globals& g, const SweepFlags& fl, const CLI::App& sub) {
    SweepPlan plan;
    if (!fl.plan_file.empty()) plan = SweepPlan::parse_file(fl.plan_file);
    const bool plan_given = !fl.plan_file.empty();
    auto given = [&](const char* name) { return sub.count(name) > 0; };
    if (!plan_given || sub.get_parent()->count("--field") > 0) plan.field = g.ctx->spec();
    if (!plan_given || given("--samples")) plan.samples = fl.samples;
    if (!plan_given || given("--seed")) plan.seed = fl.seed;
    if (!plan_given || given("--workers")) plan.workers = std::max(1u, fl.workers);
    if (!plan_given || given("--exhaustive")) plan.exhaustive = fl.exhaustive || plan.exhaustive;
    if (!plan_given || given("--extension-samples")) plan.extension_samples = fl.extension_samples;
    if (!plan_given || given("--budget")) plan.budget = fl.budget;
    for (const auto& c : fl.checks) plan.checks.insert(parse_check(c));
    return plan;
}

int sweep_cmd(const Globals& g, const std::string& kind, const SweepPlan& plan, bool timing, std::ostream& out) {
    SweepReport rep;
    if (kind == "congruence") rep = sweep_congruence(plan);
    else if (kind == "bounds") rep = sweep_corollary_bounds(plan);
    else rep = sweep_properties(plan);

    if (g.fmt == Format::json) {
        out << to_json(rep, timing) << '\n';
    } else if (g.fmt == Format::csv) {
        out << to_csv(rep);
    } else {
        out << "sweep " << rep.sweep << "\nfield " << rep.field << "\nmode " << (rep.exhaustive ? "exhaustive" : "sampled")
            << '\n';
        if (!rep.exhaustive) out << "samples " << rep.samples << "\nseed " << rep.seed << '\n';
        out << "curves " << rep.totals.curves << "\nsingular_rejected " << rep.totals.singular_rejected << '\n';
        if (rep.totals.extension_curves) out << "extension_curves " << rep.totals.extension_curves << '\n';
        for (const auto& [key, count] : rep.histogram) {
            out << "N " << key.first << " inflexions " << key.second << " count " << count << '\n';
        }
        for (const auto& [m, count] : rep.m_histogram()) out << "m " << m << " count " << count << '\n';
        out << "violations " << rep.violations.size() << '\n';
        for (const auto& v : rep.violations) {
            out << "violation " << v.index << ' ' << v.check << " [" << v.matrix << "] " << v.detail << '\n';
        }
        if (timing && rep.timing) {
            out << std::fixed << std::setprecision(3) << "seconds " << rep.timing->seconds << "\ncurves_per_second_per_worker "
                << rep.timing->curves_per_second_per_worker << '\n';
        }
    }
    return rep.ok() ? kExitOk : kExitViolations;
}

int verify_cmd(const Globals& g, const VerifyOptions& opt, bool timing, std::ostream& out) {
    const auto results = verify_all(g.ctx, opt);
    const bool all = std::all_of(results.begin(), results.end(), [](const SuiteResult& r) { return r.passed; });
    if (g.fmt == Format::json) {
        ordered_json j;
        j["field"] = g.ctx->spec().str();
        j["q"] = g.ctx->q();
        ordered_json suites = ordered_json::array();
        for (const auto& r : results) {
            ordered_json s = {{"name", r.name}, {"passed", r.passed}, {"skipped", r.skipped}, {"detail", r.detail}};
            if (timing) s["seconds"] = r.seconds;
            suites.push_back(s);
        }
        j["suites"] = suites;
        j["passed"] = all;
        dump(out, j);
    } else if (g.fmt == Format::csv) {
        out << "suite,passed,skipped,detail\n";
        for (const auto& r : results) {
            out << r.name << ',' << r.passed << ',' << r.skipped << ",\"" << r.detail << "\"\n";
        }
    } else {
        for (const auto& r : results) {
            out << (r.passed ? (r.skipped ? "SKIP " : "PASS ") : "FAIL ") << r.name << ": " << r.detail;
            if (timing) out << std::fixed << std::setprecision(2) << " (" << r.seconds << " s)";
            out << '\n';
        }
        out << (all ? "all suites passed" : "some suites failed") << '\n';
    }
    return all ? kExitOk : kExitViolations;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Hermitian-relative plane curves (x^e, y^e, z^e) A (x, y, z)^t = 0 over F_q, e = sqrt(q).", "hermrel"};
    app.require_subcommand(1, 1);
    app.fallthrough();

    Globals g;
    app.add_option("--field", g.field, "field spec p^2m[:modulus-code], e.g. 3^2")->capture_default_str();
    app.add_option("--format", g.format, "output format")
        ->check(CLI::IsMember({"text", "json", "csv"}))
        ->capture_default_str();

    auto* info = app.add_subcommand("field-info", "modulus, generator, subfield and optional tables");
    bool tables = false;
    std::optional<std::uint64_t> info_elem;
    info->add_flag("--tables", tables, "print log, Frobenius, trace and norm of every element");
    info->add_option("--element", info_elem, "element code to describe");

    std::string matrix, other;
    auto* pts = app.add_subcommand("points", "rational points and their count");
    pts->add_option("--matrix,matrix", matrix, "nine row-major element codes")->required();
    auto* infl = app.add_subcommand("inflexions", "rational inflexions");
    infl->add_option("--matrix,matrix", matrix, "nine row-major element codes")->required();
    auto* cls = app.add_subcommand("classify", "type A/B/C with canonical invariant");
    cls->add_option("--matrix,matrix", matrix, "nine row-major element codes")->required();

    auto* eq = app.add_subcommand("equiv", "projective equivalence of two curves");
    bool brute = false;
    std::uint64_t brute_budget = kDefaultBruteforceBudget;
    eq->add_option("--matrix,matrix", matrix, "first matrix")->required();
    eq->add_option("--other,other", other, "second matrix")->required();
    eq->add_flag("--bruteforce", brute, "search all of PGL(3, q)");
    eq->add_option("--budget", brute_budget, "largest PGL(3, q) order searched")->capture_default_str();

    auto* t1 = app.add_subcommand("table1", "class census of the omega-form curves");
    unsigned census_workers = 1;
    t1->add_option("--workers", census_workers)->capture_default_str();

    auto* solve = app.add_subcommand("solve", "roots of the Artin-Schreier, Kummer or semilinear equation");
    std::string solve_kind;
    std::optional<std::uint64_t> alpha, beta;
    solve->add_option("kind", solve_kind)->required()->check(CLI::IsMember({"artin-schreier", "kummer", "semilinear"}));
    solve->add_option("--alpha", alpha, "alpha code (semilinear)");
    solve->add_option("--beta", beta, "beta code");

    SweepFlags fl;
    auto add_sweep_flags = [](CLI::App* sub, SweepFlags& fl) {
        sub->add_option("--samples", fl.samples)->capture_default_str();
        sub->add_option("--seed", fl.seed)->capture_default_str();
        sub->add_option("--workers", fl.workers)->capture_default_str();
        sub->add_flag("--timing", fl.timing, "include wall-clock statistics");
    };
    auto* sw = app.add_subcommand("sweep", "sampled or exhaustive sweep over matrices");
    std::string sweep_kind;
    sw->add_option("kind", sweep_kind)->required()->check(CLI::IsMember({"congruence", "bounds", "props"}));
    add_sweep_flags(sw, fl);
    sw->add_flag("--exhaustive", fl.exhaustive, "all q^9 tuples");
    sw->add_option("--plan", fl.plan_file, "plan file with key=value lines");
    sw->add_option("--extension-samples", fl.extension_samples, "curves also checked over F_q^2")->capture_default_str();
    sw->add_option("--budget", fl.budget, "largest q^9 for exhaustive mode")->capture_default_str();
    sw->add_option("--checks", fl.checks, "extra checks")->delimiter(',');

    auto* va = app.add_subcommand("verify-all", "every verification suite for one field");
    SweepFlags vf;
    vf.samples = 10000;
    add_sweep_flags(va, vf);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        g.ctx = FieldCtx::build(FieldSpec::parse(g.field));
        g.fmt = g.format == "json" ? Format::json : g.format == "csv" ? Format::csv : Format::text;

        if (*info) return field_info(g, tables, info_elem, out);
        if (*pts) return points(g, matrix, false, out);
        if (*infl) return points(g, matrix, true, out);
        if (*cls) return classify_cmd(g, matrix, out);
        if (*eq) return equiv_cmd(g, matrix, other, brute, brute_budget, out);
        if (*t1) return table1_cmd(g, census_workers, out);
        if (*solve) return solve_cmd(g, solve_kind, alpha, beta, out);
        if (*sw) return sweep_cmd(g, sweep_kind, build_plan(g, fl, *sw), fl.timing, out);
        if (*va) {
            VerifyOptions opt;
            opt.samples = vf.samples;
            opt.seed = vf.seed;
            opt.workers = std::max(1u, vf.workers);
            return verify_cmd(g, opt, vf.timing, out);
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}

}  // namespace hermrel::cli
