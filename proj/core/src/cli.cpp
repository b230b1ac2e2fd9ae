#include "sil/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "sil/matrix_classify.hpp"
#include "sil/model_io.hpp"

namespace sil {

namespace {

int default_digits() {
    if (const char* env = std::getenv("SIL_PRECISION_DIGITS")) {
        int d = std::atoi(env);
        if (d >= RotationNumber::kMinDigits) return d;
    }
    return 50;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

struct LoadedModel {
    SurfaceModel model;
    std::string hash;
};

LoadedModel load_model(const std::string& path) {
    std::string raw;
    SurfaceModel model = parse_model_file(path, &raw);
    return {std::move(model), content_hash(raw)};
}

void emit_or_print(const std::string& text, const std::string& out_path,
                   std::ostream& out) {
    if (out_path.empty())
        out << text;
    else
        write_file(out_path, text);
}

int cmd_index(const std::string& model_path, const std::string& orbit,
              long max_m, const std::string& out_path, std::ostream& out) {
    auto loaded = load_model(model_path);
    const auto& c = loaded.model.by_name(orbit);
    const int n = loaded.model.n();
    std::ostringstream csv;
    csv << "m,i_maslov,i_viterbo,nullity,good\n";
    IterateWalker walker(c.germ);
    for (long m = 1; m <= max_m; ++m) {
        long idx = walker.next();
        csv << m << "," << idx << "," << idx - n << "," << walker.nullity() << ","
            << (walker.good() ? "good" : "bad") << "\n";
    }
    emit_or_print(csv.str(), out_path, out);
    return 0;
}

int cmd_mean(const std::string& model_path, std::ostream& out) {
    auto loaded = load_model(model_path);
    for (const auto& c : loaded.model.characteristics()) {
        MeanIndex mi = mean_index(c.germ);
        int s = mi.is_structurally_zero(loaded.model.relations())
                    ? 0
                    : mi.sign(loaded.model.relations());
        ExactReal v = mi.reduced_value(loaded.model.relations());
        out << c.name << ": " << mi.str() << "  in " << "["
            << v.lo().get_d() << ", " << v.hi().get_d() << "]"
            << "  sign " << (s > 0 ? "+" : s < 0 ? "-" : "0") << "\n";
    }
    return 0;
}

int cmd_jump(const std::string& model_path, long count, long scan_limit,
             const std::string& delta_s, const std::string& eps_s, long mbar,
             const std::string& out_path, bool dual, const std::string& dual_out,
             int workers, std::ostream& out, std::ostream& err) {
    auto loaded = load_model(model_path);
    Rat delta = rat_from_string(delta_s);
    Rat eps = rat_from_string(eps_s);
    std::optional<long> mbar_opt;
    if (mbar > 0) mbar_opt = mbar;
    std::vector<PathGerm> germs;
    for (const auto& c : loaded.model.characteristics()) germs.push_back(c.germ);
    JumpInstance instance = JumpInstance::make(
        std::move(germs), loaded.model.n(), loaded.model.relations(), delta,
        mbar_opt);
    ScanOptions opts;
    opts.eps = eps;
    opts.scan_limit = scan_limit;
    opts.workers = workers;
    auto res = solve_paths(instance, count, opts);
    for (size_t i = 0; i < res.found.size(); ++i) {
        const auto& cert = res.found[i];
        std::string text = emit_certificate(cert, loaded.hash);
        if (!out_path.empty()) {
            std::string path = out_path;
            if (res.found.size() > 1 || count > 1) {
                auto dot = path.rfind('.');
                std::string stem = dot == std::string::npos ? path : path.substr(0, dot);
                std::string ext = dot == std::string::npos ? "" : path.substr(dot);
                path = stem + "." + std::to_string(i + 1) + ext;
            }
            write_file(path, text);
            out << "certificate N=" << cert.N.get_str() << " -> " << path << "\n";
        } else {
            out << text;
        }
    }
    if (dual && !res.found.empty()) {
        auto dres = dual_certificate(instance, res.found.front(), opts);
        if (dres.found.empty()) {
            err << "dual certificate: scan limit exhausted\n";
            return 4;
        }
        std::string text = emit_certificate(dres.found.front(), loaded.hash);
        if (!dual_out.empty()) {
            write_file(dual_out, text);
            out << "dual certificate N=" << dres.found.front().N.get_str() << " -> "
                << dual_out << "\n";
        } else {
            out << text;
        }
    }
    if (res.exhausted) {
        err << "scan limit exhausted: found " << res.found.size() << " of " << count
            << "\n";
        return 4;
    }
    return 0;
}

int cmd_verify(const std::string& model_path, const std::string& cert_path,
               std::ostream& out, std::ostream& err) {
    auto loaded = load_model(model_path);
    std::string cert_hash;
    JumpCertificate cert = parse_certificate(read_file(cert_path), &cert_hash);
    if (!cert_hash.empty() && cert_hash != loaded.hash) {
        err << "FAIL model_hash: certificate was issued for " << cert_hash
            << ", model file hashes to " << loaded.hash << "\n";
        return 1;
    }
    std::vector<PathGerm> germs;
    for (const auto& c : loaded.model.characteristics()) germs.push_back(c.germ);
    JumpInstance instance =
        JumpInstance::make(std::move(germs), loaded.model.n(),
                           loaded.model.relations(), cert.delta, cert.mbar);
    VerifyReport report = verify_certificate(instance, cert);
    for (const auto& c : report.checks) {
        out << (c.pass ? "PASS " : "FAIL ") << c.display;
        if (!c.orbit.empty()) out << " " << c.orbit;
        if (c.m != 0) out << " m=" << c.m;
        out << ": " << c.lhs << (c.pass ? " == " : " != ") << c.rhs << "\n";
    }
    if (!report.all_pass) {
        err << "verification failed at " << report.first_violation << "\n";
        return 1;
    }
    out << "all checks pass\n";
    return 0;
}

int cmd_resonance(const std::string& model_path, const std::string& tol_s,
                  std::ostream& out) {
    auto loaded = load_model(model_path);
    auto rep = resonance_residuals(loaded.model, rat_from_string(tol_s));
    out << "r_plus in [" << rep.r_plus.lo().get_d() << ", "
        << rep.r_plus.hi().get_d() << "]\n";
    out << "r_minus in [" << rep.r_minus.lo().get_d() << ", "
        << rep.r_minus.hi().get_d() << "]"
        << (rep.minus_empty ? " (empty sum)" : "") << "\n";
    out << (rep.admissible ? "admissible" : "inadmissible") << "\n";
    return rep.admissible ? 0 : 1;
}

int cmd_perfect(const std::string& model_path, std::ostream& out) {
    auto loaded = load_model(model_path);
    auto rep = is_perfect(loaded.model);
    if (rep.perfect) {
        out << "perfect\n";
        return 0;
    }
    out << "not perfect:\n";
    for (const auto& v : rep.violations)
        out << "  " << v.orbit << " m=" << v.m << " index " << v.index << "\n";
    return 1;
}

int cmd_report(const std::string& model_path, const std::string& out_path,
               const std::string& delta_s, const std::string& eps_s,
               long scan_limit, int workers, std::ostream& out) {
    auto loaded = load_model(model_path);
    ReportOptions opts;
    opts.delta = rat_from_string(delta_s);
    opts.eps = rat_from_string(eps_s);
    opts.scan_limit = scan_limit;
    opts.workers = workers;
    LedgerReport rep = multiplicity_report(loaded.model, opts);
    out << "lower bound " << rep.multiplicity_bound << "; non-hyperbolic: ";
    for (size_t i = 0; i < rep.non_hyperbolic.size(); ++i)
        out << (i ? ", " : "") << rep.non_hyperbolic[i];
    if (rep.non_hyperbolic.empty()) out << "none";
    out << "\n";
    out << "N=" << rep.cert.N.get_str() << " N'=" << rep.dual.N.get_str()
        << " window [" << rep.window_lo << ", " << rep.window_hi << "]\n";
    out << "counts: +e=" << rep.counts.plus_even << " +o=" << rep.counts.plus_odd
        << " -e=" << rep.counts.minus_even << " -o=" << rep.counts.minus_odd
        << "\n";
    if (!out_path.empty()) write_file(out_path, emit_report(rep, loaded.hash));
    return 0;
}

int cmd_ellipsoid(const std::string& axes_csv, const std::string& out_path,
                  std::ostream& out) {
    EllipsoidSpec spec;
    std::stringstream ss(axes_csv);
    std::string tok;
    int cap = default_digits();
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        if (tok.find('.') == std::string::npos) {
            spec.axes.push_back(AxisValue::from_rat(rat_from_string(tok)));
        } else {
            int have = 0;
            decimal_to_rat(tok, &have);
            int digits = std::min(have, cap);
            if (digits < RotationNumber::kMinDigits)
                throw ParseError("axis literal needs at least " +
                                 std::to_string(RotationNumber::kMinDigits) +
                                 " fractional digits: " + tok);
            std::string trimmed = tok;
            auto dot = trimmed.find('.');
            trimmed = trimmed.substr(0, dot + 1 + digits);
            spec.axes.push_back(AxisValue::from_decimal(trimmed, digits));
        }
    }
    std::string text = emit_ellipsoid_model(spec);
    emit_or_print(text, out_path, out);
    return 0;
}

int cmd_abstract(const std::string& instance_path, long count,
                 long scan_limit, const std::string& eps_s, int workers,
                 std::ostream& out, std::ostream& err) {
    AbstractJumpInstance instance =
        parse_abstract_instance(read_file(instance_path));
    ScanOptions opts;
    opts.eps = rat_from_string(eps_s);
    opts.scan_limit = scan_limit;
    opts.workers = workers;
    auto res = solve_abstract(instance, count, opts);
    for (const auto& sol : res.found) {
        out << "N=" << sol.N.get_str() << " m=[";
        for (size_t i = 0; i < sol.m.size(); ++i)
            out << (i ? "," : "") << sol.m[i].get_str();
        out << "] Delta=[";
        for (size_t i = 0; i < sol.Delta.size(); ++i)
            out << (i ? "," : "") << sol.Delta[i];
        out << "] chi=[";
        for (size_t i = 0; i < sol.chi.size(); ++i) out << (i ? "," : "") << sol.chi[i];
        out << "]\n";
    }
    if (res.exhausted) {
        err << "scan limit exhausted: found " << res.found.size() << " of " << count
            << "\n";
        return 4;
    }
    return 0;
}

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err) {
    CLI::App app{"sil: exact index iteration and common index jump certificates"};
    app.require_subcommand(1);

    std::string model_path, orbit, out_path, cert_path, instance_path, axes;
    std::string dual_out;
    std::string delta_s = "1/20", eps_s = "1/1000", tol_s = "1/1000000000";
    long max_m = 20, count = 1, scan_limit = 10000000, mbar = 0;
    int workers = 1;
    bool dual = false;

    auto* c_index = app.add_subcommand("index", "iterate table (CSV)");
    c_index->add_option("--model", model_path)->required();
    c_index->add_option("--orbit", orbit)->required();
    c_index->add_option("--max", max_m);
    c_index->add_option("--out", out_path);

    auto* c_mean = app.add_subcommand("mean", "mean indices and signs");
    c_mean->add_option("--model", model_path)->required();

    auto* c_jump = app.add_subcommand("jump", "search jump certificates");
    c_jump->add_option("--model", model_path)->required();
    c_jump->add_option("--count", count);
    c_jump->add_option("--scan-limit", scan_limit);
    c_jump->add_option("--delta", delta_s);
    c_jump->add_option("--eps", eps_s);
    c_jump->add_option("--mbar", mbar);
    c_jump->add_option("--out", out_path);
    c_jump->add_flag("--dual", dual);
    c_jump->add_option("--dual-out", dual_out);
    c_jump->add_option("--workers", workers);

    auto* c_verify = app.add_subcommand("verify", "re-check a certificate");
    c_verify->add_option("--model", model_path)->required();
    c_verify->add_option("--cert", cert_path)->required();

    auto* c_res = app.add_subcommand("resonance", "resonance residuals");
    c_res->add_option("--model", model_path)->required();
    c_res->add_option("--tol", tol_s);

    auto* c_perf = app.add_subcommand("perfect", "perfectness scan");
    c_perf->add_option("--model", model_path)->required();

    auto* c_report = app.add_subcommand("report", "multiplicity report");
    c_report->add_option("--model", model_path)->required();
    c_report->add_option("--out", out_path);
    c_report->add_option("--delta", delta_s);
    c_report->add_option("--eps", eps_s);
    c_report->add_option("--scan-limit", scan_limit);
    c_report->add_option("--workers", workers);

    auto* c_ell = app.add_subcommand("ellipsoid", "emit an ellipsoid model");
    c_ell->add_option("--axes", axes)->required();
    c_ell->add_option("--out", out_path);

    auto* c_abs = app.add_subcommand("abstract-jump", "abstract jump search");
    c_abs->add_option("--instance", instance_path)->required();
    c_abs->add_option("--count", count);
    c_abs->add_option("--scan-limit", scan_limit);
    c_abs->add_option("--eps", eps_s);
    c_abs->add_option("--workers", workers);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return 0;
        }
        err << "usage error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (*c_index) return cmd_index(model_path, orbit, max_m, out_path, out);
        if (*c_mean) return cmd_mean(model_path, out);
        if (*c_jump)
            return cmd_jump(model_path, count, scan_limit, delta_s, eps_s, mbar,
                            out_path, dual, dual_out, workers, out, err);
        if (*c_verify) return cmd_verify(model_path, cert_path, out, err);
        if (*c_res) return cmd_resonance(model_path, tol_s, out);
        if (*c_perf) return cmd_perfect(model_path, out);
        if (*c_report)
            return cmd_report(model_path, out_path, delta_s, eps_s, scan_limit,
                              workers, out);
        if (*c_ell) return cmd_ellipsoid(axes, out_path, out);
        if (*c_abs)
            return cmd_abstract(instance_path, count, scan_limit, eps_s, workers,
                                out, err);
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const PrecisionError& e) {
        err << "precision/undecidable: " << e.what() << "\n";
        return 3;
    } catch (const ScanExhausted& e) {
        err << "scan exhausted: " << e.what() << "\n";
        return 4;
    } catch (const InfiniteMorseCount& e) {
        err << "check failure: " << e.what() << "\n";
        return 1;
    } catch (const CheckFailure& e) {
        err << "check failure: " << e.what() << "\n";
        return 1;
    } catch (const HypothesisError& e) {
        err << "check failure: " << e.what() << "\n";
        return 1;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}

} // namespace sil
