// Batch CLI: generate CM-space points, run the verification suites, evolve
// the integrable flows, and emit interpolation curves.
//
// Exit codes: 0 all checks pass, 1 a verification failed, 2 config/IO error.
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "ccm/coords.hpp"
#include "ccm/curves.hpp"
#include "ccm/dynamics.hpp"
#include "ccm/serialize.hpp"
#include "ccm/verify.hpp"

namespace {

constexpr const char* kVersion = "cyclic-cm 0.1.0";

ccm::cplx parse_complex(const std::string& text) {
    const auto comma = text.find(',');
    if (comma == std::string::npos) return {std::stod(text), 0.0};
    return {std::stod(text.substr(0, comma)), std::stod(text.substr(comma + 1))};
}

std::vector<ccm::cplx> parse_coupling_list(const std::string& text) {
    std::vector<ccm::cplx> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto semi = text.find(';', pos);
        const std::string part =
            text.substr(pos, semi == std::string::npos ? std::string::npos : semi - pos);
        if (!part.empty()) out.push_back(parse_complex(part));
        if (semi == std::string::npos) break;
        pos = semi + 1;
    }
    return out;
}

std::uint64_t env_seed_fallback(std::uint64_t cli_seed, bool seed_given) {
    if (seed_given) return cli_seed;
    if (const char* env = std::getenv("CYCLIC_CM_SEED")) return std::strtoull(env, nullptr, 10);
    return cli_seed;
}

void write_text(const std::string& path, const std::string& text) {
    if (path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream os(path, std::ios::binary);
    if (!os) throw ccm::ConfigError("cannot open output file: " + path);
    os << text;
}

struct CommonConfig {
    int m = 2, n = 2, d = 0;
    std::string g_text;
    std::uint64_t seed = 20240901;
    bool seed_given = false;
};

// Coupling from --g when given, otherwise seeded-random regular.
ccm::Coupling resolve_coupling(const CommonConfig& cfg, ccm::SampleRng& rng) {
    if (!cfg.g_text.empty()) {
        const auto g = parse_coupling_list(cfg.g_text);
        if (static_cast<int>(g.size()) != cfg.m)
            throw ccm::ConfigError("--g must list exactly m complex entries");
        ccm::Coupling coupling = ccm::derived_constants(cfg.m, g);
        const ccm::RegularityCertificate cert = ccm::is_regular(coupling);
        if (!cert.regular)
            throw ccm::ConfigError("coupling is not regular: " + cert.reason);
        return coupling;
    }
    for (int tries = 0; tries < 200; ++tries) {
        std::vector<ccm::cplx> g(cfg.m);
        for (ccm::cplx& x : g) x = rng.unit_disk() + ccm::cplx{0.15, 0.1};
        ccm::Coupling coupling = ccm::derived_constants(cfg.m, g);
        if (std::abs(coupling.abs_g) >= 0.3 && ccm::is_regular(coupling).regular)
            return coupling;
    }
    throw ccm::ConfigError("failed to draw a regular coupling");
}

void add_common(CLI::App* cmd, CommonConfig& cfg) {
    cmd->add_option("--m", cfg.m, "cyclic group order (>= 1)")->check(CLI::PositiveNumber);
    cmd->add_option("--n", cfg.n, "number of particles (>= 1)")->check(CLI::PositiveNumber);
    cmd->add_option("--d", cfg.d, "spin dimension (0 = spinless)")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--g", cfg.g_text, "coupling as re,im;re,im;... (m entries)");
    cmd->add_option("--seed", cfg.seed, "rng seed (env CYCLIC_CM_SEED is the fallback)")
        ->each([&cfg](const std::string&) { cfg.seed_given = true; });
}

int cmd_gen(const CommonConfig& cfg, const std::string& out) {
    ccm::SampleRng rng(env_seed_fallback(cfg.seed, cfg.seed_given));
    const ccm::Coupling coupling = resolve_coupling(cfg, rng);
    const ccm::SampledPoint sp = ccm::sample(rng, cfg.m, cfg.n, coupling, cfg.d);
    const ccm::Quadruple quad = ccm::build_dual(sp.point, coupling, sp.framing);

    ccm::json doc{{"version", kVersion},
                  {"seed", env_seed_fallback(cfg.seed, cfg.seed_given)},
                  {"coupling", ccm::to_json(coupling)},
                  {"point", ccm::to_json(sp.point)},
                  {"quadruple", ccm::to_json(quad)},
                  {"moment_residual", ccm::moment_residual(quad, coupling)}};
    if (sp.framing) doc["framing"] = ccm::to_json(*sp.framing);
    write_text(out, ccm::dump(doc) + "\n");
    return 0;
}

int cmd_verify(const ccm::VerifyOptions& opt, const std::optional<std::string>& suite,
               const std::string& out, const std::string& format) {
    const std::vector<ccm::SuiteResult> results = ccm::run_suites(opt, suite);
    bool all_pass = true;
    for (const ccm::SuiteResult& r : results) all_pass = all_pass && r.pass;

    if (format == "csv") {
        std::string text = "suite,cases,max_residual,tolerance,pass\n";
        for (const ccm::SuiteResult& r : results) {
            text += r.name + "," + std::to_string(r.cases) + "," +
                    std::to_string(r.max_residual) + "," + std::to_string(r.tolerance) + "," +
                    (r.pass ? "1" : "0") + "\n";
        }
        write_text(out, text);
    } else {
        ccm::json suites = ccm::json::array();
        for (const ccm::SuiteResult& r : results) {
            suites.push_back(ccm::json{{"name", r.name},
                                       {"cases", r.cases},
                                       {"max_residual", r.max_residual},
                                       {"tolerance", r.tolerance},
                                       {"pass", r.pass},
                                       {"note", r.note}});
        }
        ccm::json doc{{"version", kVersion},
                      {"seed", opt.seed},
                      {"cases", opt.cases},
                      {"suites", std::move(suites)},
                      {"pass", all_pass}};
        write_text(out, ccm::dump(doc) + "\n");
    }
    return all_pass ? 0 : 1;
}

int cmd_evolve(const CommonConfig& cfg, int K, const std::string& t_text, int steps,
               bool crosscheck, const std::string& out, const std::string& format) {
    ccm::SampleRng rng(env_seed_fallback(cfg.seed, cfg.seed_given));
    const ccm::Coupling coupling = resolve_coupling(cfg, rng);
    const ccm::SampledPoint sp = ccm::sample(rng, cfg.m, cfg.n, coupling, cfg.d);
    const ccm::cplx t_total = parse_complex(t_text);
    if (K < 1 || K > cfg.n) throw ccm::ConfigError("--K must satisfy 1 <= K <= n");
    if (steps < 1) throw ccm::ConfigError("--steps must be >= 1");

    const int kmax = std::min(3, cfg.n);
    ccm::json rows = ccm::json::array();
    std::string csv = "t_re,t_im";
    for (int j = 0; j < cfg.n; ++j)
        csv += ",phi" + std::to_string(j) + "_re,phi" + std::to_string(j) + "_im";
    for (int j = 0; j < cfg.n; ++j)
        csv += ",pos" + std::to_string(j) + "_re,pos" + std::to_string(j) + "_im";
    for (int K2 = 1; K2 <= kmax; ++K2)
        csv += ",H" + std::to_string(K2) + "_re,H" + std::to_string(K2) + "_im";
    csv += "\n";

    for (int s = 0; s <= steps; ++s) {
        const ccm::cplx t = t_total * (double(s) / steps);
        const ccm::SpectralPoint at = ccm::evolve(sp.point, {K, t, 1});
        const std::vector<ccm::cplx> pos = ccm::positions(at, coupling, sp.framing);
        ccm::json hrow = ccm::json::object();
        std::string line = std::to_string(t.real()) + "," + std::to_string(t.imag());
        ccm::json phi = ccm::json::array(), posj = ccm::json::array();
        for (int j = 0; j < cfg.n; ++j) {
            phi.push_back(ccm::to_json(at.phi[j]));
            line += "," + std::to_string(at.phi[j].real()) + "," +
                    std::to_string(at.phi[j].imag());
        }
        for (int j = 0; j < cfg.n; ++j) {
            posj.push_back(ccm::to_json(pos[j]));
            line += "," + std::to_string(pos[j].real()) + "," + std::to_string(pos[j].imag());
        }
        for (int K2 = 1; K2 <= kmax; ++K2) {
            const ccm::cplx h = ccm::H_spectral(at, K2);
            hrow["H" + std::to_string(K2)] = ccm::to_json(h);
            line += "," + std::to_string(h.real()) + "," + std::to_string(h.imag());
        }
        rows.push_back(ccm::json{{"t", ccm::to_json(t)},
                                 {"phi", std::move(phi)},
                                 {"positions", std::move(posj)},
                                 {"H", std::move(hrow)}});
        csv += line + "\n";
    }

    ccm::json doc{{"version", kVersion},
                  {"seed", env_seed_fallback(cfg.seed, cfg.seed_given)},
                  {"K", K},
                  {"steps", steps},
                  {"coupling", ccm::to_json(coupling)},
                  {"point", ccm::to_json(sp.point)},
                  {"rows", std::move(rows)}};

    if (crosscheck) {
        if (cfg.m != 1) throw ccm::ConfigError("--crosscheck-m1 requires --m 1");
        if (cfg.n < 2) throw ccm::ConfigError("--crosscheck-m1 needs n >= 2 (uses H_2)");
        // independent route: start from a q-model point, recover spectral
        // coordinates, flow them exactly, and compare projected positions
        // against RK4 of the particle equations of motion
        ccm::QModelPoint qp;
        qp.m = 1;
        qp.n = cfg.n;
        qp.q.resize(cfg.n);
        qp.p.resize(cfg.n);
        for (int j = 0; j < cfg.n; ++j) {
            qp.q[j] = ccm::cplx{-1.5 + 3.0 * j / std::max(1, cfg.n - 1), 0.0} +
                      0.2 * rng.unit_disk();
            qp.p[j] = 0.5 * rng.unit_disk();
        }
        const ccm::Quadruple qquad = ccm::build_qmodel(qp, coupling);
        const ccm::OrbitCoordinates rec = ccm::recover_spectral(qquad, coupling);
        const ccm::cplx gamma = -coupling.abs_g * coupling.abs_g;
        ccm::json cross = ccm::json::array();
        double worst = 0.0;
        for (const double tt : {0.1, 0.5, 1.0}) {
            const ccm::SpectralPoint moved = ccm::evolve(rec.point, {2, ccm::cplx{tt, 0.0}, 1});
            const std::vector<ccm::cplx> via_spec = ccm::positions(moved, coupling);
            const ccm::QModelPoint ode = ccm::integrate_eom(qp, gamma, ccm::cplx{tt, 0.0}, 4000);
            const double dist = ccm::multiset_distance(via_spec, ode.q);
            worst = std::max(worst, dist);
            cross.push_back(ccm::json{{"t", tt}, {"distance", dist}});
        }
        doc["crosscheck_m1"] = ccm::json{{"rows", std::move(cross)}, {"max_distance", worst},
                                         {"pass", worst <= 1e-6}};
        if (worst > 1e-6) {
            write_text(out, format == "csv" ? csv : ccm::dump(doc) + "\n");
            return 1;
        }
    }

    write_text(out, format == "csv" ? csv : ccm::dump(doc) + "\n");
    return 0;
}

int cmd_curve(const CommonConfig& cfg, int delta, int samples, const std::string& out,
              const std::string& csv_out) {
    ccm::SampleRng rng(env_seed_fallback(cfg.seed, cfg.seed_given));
    const ccm::Coupling coupling = resolve_coupling(cfg, rng);
    const ccm::SampledPoint sp = ccm::sample(rng, cfg.m, cfg.n, coupling, cfg.d);
    const ccm::CurvePolys curve = ccm::curve_polys(sp.point, coupling, sp.framing, delta);

    double lam_max = 0.0;
    for (const ccm::cplx& l : sp.point.lambda) lam_max = std::max(lam_max, std::abs(l));
    std::vector<ccm::cplx> zs(samples);
    for (ccm::cplx& z : zs) z = rng.annulus(0.5 * lam_max, 1.6 * lam_max);
    const ccm::QuotientSamples qs = ccm::quotient_samples(curve, zs);

    ccm::json doc{{"version", kVersion},
                  {"seed", env_seed_fallback(cfg.seed, cfg.seed_given)},
                  {"coupling", ccm::to_json(coupling)},
                  {"point", ccm::to_json(sp.point)},
                  {"curve", ccm::to_json(curve)},
                  {"incidence_residual", ccm::incidence_check(curve, sp.point)},
                  {"samples_written", qs.samples.size()},
                  {"skipped_poles", qs.skipped_poles}};
    if (qs.skipped_poles > 0)
        std::cerr << "warning: skipped " << qs.skipped_poles << " pole z-values\n";
    write_text(out, ccm::dump(doc) + "\n");
    write_text(csv_out, ccm::quotient_samples_csv(qs));
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Calogero-Moser spaces for the cyclic quiver: generation, verification, flows, curves"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    CommonConfig gen_cfg;
    std::string gen_out = "gen.json";
    CLI::App* gen = app.add_subcommand("gen", "sample a point and its dual quadruple");
    add_common(gen, gen_cfg);
    gen->add_option("--out", gen_out, "output JSON path ('-' = stdout)");

    ccm::VerifyOptions vopt;
    bool vseed_given = false;
    std::optional<std::string> vsuite;
    std::string vsuite_text, verify_out = "-", verify_format = "json";
    CLI::App* verify = app.add_subcommand("verify", "run the verification suites");
    verify->add_option("--seed", vopt.seed, "rng seed")
        ->each([&vseed_given](const std::string&) { vseed_given = true; });
    verify->add_option("--cases", vopt.cases, "random cases per suite")->check(CLI::PositiveNumber);
    verify->add_option("--suite", vsuite_text, "run only this suite");
    verify->add_option("--out", verify_out, "report path ('-' = stdout)");
    verify->add_option("--format", verify_format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
    verify->add_option("--tol-lemma1", vopt.tol.lemma1, "override tolerance");
    verify->add_option("--tol-lemma2-identity", vopt.tol.lemma2_identity, "override tolerance");
    verify->add_option("--tol-lemma2-lu", vopt.tol.lemma2_lu, "override tolerance");
    verify->add_option("--tol-constraint", vopt.tol.constraint, "override tolerance");
    verify->add_option("--tol-thm1", vopt.tol.thm1, "override tolerance");
    verify->add_option("--tol-thm2", vopt.tol.thm2, "override tolerance");
    verify->add_option("--tol-bracket", vopt.tol.bracket, "override tolerance");
    verify->add_option("--tol-eq16", vopt.tol.eq16, "override tolerance");
    verify->add_option("--tol-key", vopt.tol.key_identity, "override tolerance");
    verify->add_option("--tol-spin-partials", vopt.tol.spin_partials, "override tolerance");
    verify->add_option("--tol-gauge-acd", vopt.tol.gauge_acd, "override tolerance");
    verify->add_option("--tol-gauge-recover", vopt.tol.gauge_recover, "override tolerance");
    verify->add_option("--tol-roundtrip", vopt.tol.roundtrip, "override tolerance");
    verify->add_option("--tol-ham-equality", vopt.tol.ham_equality, "override tolerance");
    verify->add_option("--tol-ham-conservation", vopt.tol.ham_conservation, "override tolerance");
    verify->add_option("--tol-crosscheck-m1", vopt.tol.crosscheck_m1, "override tolerance");
    verify->add_option("--tol-divisibility", vopt.tol.divisibility, "override tolerance");
    verify->add_option("--tol-incidence", vopt.tol.incidence, "override tolerance");
    verify->add_option("--tol-equivariance", vopt.tol.equivariance, "override tolerance");
    verify->add_option("--tol-quotient", vopt.tol.quotient, "override tolerance");
    verify->add_option("--tol-quotient-ab", vopt.tol.quotient_ab, "override tolerance");

    CommonConfig evo_cfg;
    int evo_K = 1, evo_steps = 20;
    std::string evo_t = "1.0", evo_out = "-", evo_format = "json";
    bool evo_cross = false;
    CLI::App* evolve = app.add_subcommand("evolve", "exact flow of H_K with projected positions");
    add_common(evolve, evo_cfg);
    evolve->add_option("--K", evo_K, "Hamiltonian index (1..n)");
    evolve->add_option("--t", evo_t, "total flow time, re or re,im");
    evolve->add_option("--steps", evo_steps, "number of output rows")->check(CLI::PositiveNumber);
    evolve->add_flag("--crosscheck-m1", evo_cross, "compare against RK4 of the particle system");
    evolve->add_option("--out", evo_out, "output path ('-' = stdout)");
    evolve->add_option("--format", evo_format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}));

    CommonConfig curve_cfg;
    int curve_delta = 1, curve_samples = 64;
    std::string curve_out = "curve.json", curve_csv = "curve_samples.csv";
    CLI::App* curve = app.add_subcommand("curve", "interpolation curve and quotient samples");
    add_common(curve, curve_cfg);
    curve->add_option("--delta", curve_delta, "1 = phi-curve, 2 = theta-curve")
        ->check(CLI::IsMember({1, 2}));
    curve->add_option("--samples", curve_samples, "number of z samples")
        ->check(CLI::PositiveNumber);
    curve->add_option("--out", curve_out, "curve JSON path");
    curve->add_option("--csv", curve_csv, "samples CSV path");

    try {
        app.parse(argc, argv);
        if (gen->parsed()) return cmd_gen(gen_cfg, gen_out);
        if (verify->parsed()) {
            vopt.seed = env_seed_fallback(vopt.seed, vseed_given);
            if (!vsuite_text.empty()) vsuite = vsuite_text;
            return cmd_verify(vopt, vsuite, verify_out, verify_format);
        }
        if (evolve->parsed())
            return cmd_evolve(evo_cfg, evo_K, evo_t, evo_steps, evo_cross, evo_out, evo_format);
        if (curve->parsed())
            return cmd_curve(curve_cfg, curve_delta, curve_samples, curve_out, curve_csv);
        return 2;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
