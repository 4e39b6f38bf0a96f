// Command-line front end: evaluate subspace perturbation bounds on matrix
// files, reproduce the sharpness examples, run Monte Carlo campaigns, and run
// the property-verification suites.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "sintheta/bounds.hpp"
#include "sintheta/harness.hpp"
#include "sintheta/io.hpp"
#include "sintheta/verify.hpp"

namespace {

using sintheta::io::json;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;          // I/O, parse, or usage errors
constexpr int kExitInapplicable = 2;   // theorem precondition failed

void write_output(const std::string& out_path, const std::string& payload) {
    if (out_path.empty()) {
        std::cout << payload;
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw std::invalid_argument(out_path + ": cannot open for writing");
    out << payload;
}

std::string render(const json& doc, const std::vector<sintheta::TrialRecord>& records,
                   const std::string& format) {
    if (format == "csv") return sintheta::io::records_csv(records);
    return doc.dump(2) + "\n";
}

std::uint64_t resolve_seed(const CLI::Option* seed_opt, std::uint64_t flag_value) {
    if (seed_opt != nullptr && seed_opt->count() > 0) return flag_value;
    if (const char* env = std::getenv("SPECTRAL_PERTURB_SEED")) return std::stoull(env);
    return flag_value;
}

std::vector<double> parse_spectrum(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(std::stod(cell));
    return out;
}

int cmd_bound(const std::string& pop_path, const std::string& samp_path, std::size_t r,
              std::size_t s, const std::string& mode, const std::string& out_path,
              const std::string& format) {
    const sintheta::DenseMatrix pop = sintheta::io::read_matrix_file(pop_path);
    const sintheta::DenseMatrix samp = sintheta::io::read_matrix_file(samp_path);
    const sintheta::BlockSelection sel(r, s);
    const json flags{{"pop", pop_path}, {"samp", samp_path}, {"r", r}, {"s", s},
                     {"mode", mode},    {"format", format}};

    std::vector<sintheta::TrialRecord> records(1);
    records[0].trial_index = 0;
    try {
        if (mode == "symmetric") {
            records[0].report = sintheta::variant_bounds(sintheta::SymmetricMatrix(pop),
                                                         sintheta::SymmetricMatrix(samp), sel);
        } else {
            const auto side = (mode == "svd-left") ? sintheta::SingularSide::left
                                                   : sintheta::SingularSide::right;
            records[0].report = sintheta::svd_variant_bounds(pop, samp, sel, side);
            records[0].factor_check = sintheta::svd_factor_inequality_check(pop, samp);
        }
    } catch (const sintheta::PreconditionError& e) {
        json rec{{"trial_index", 0}, {"inapplicable", e.what()}};
        const json doc = sintheta::io::make_document("bound", flags, 0,
                                                     json::array({rec}), json(nullptr));
        write_output(out_path, doc.dump(2) + "\n");
        std::cerr << "inapplicable: " << e.what() << "\n";
        return kExitInapplicable;
    }
    const json doc = sintheta::io::make_document(
        "bound", flags, 0, json::array({sintheta::io::to_json(records[0])}), json(nullptr));
    write_output(out_path, render(doc, records, format));
    return kExitOk;
}

int cmd_sharpness(const std::string& example, std::size_t p, std::size_t d, double epsilon,
                  const std::string& emit_dir, const std::string& out_path) {
    std::vector<sintheta::TrialRecord> records(1);
    json row;
    if (example == "diag") {
        auto [pop, samp] = sintheta::gen_sharpness_diag(p, d, epsilon);
        records[0].report = sintheta::variant_bounds(pop, samp, sintheta::BlockSelection(1, d));
        const auto& rep = records[0].report;
        row = json{{"example", "diag"},
                   {"p", p},
                   {"d", d},
                   {"epsilon", epsilon},
                   {"observed_alignment", rep.observed_alignment_distance},
                   {"alignment_bound", rep.variant_align.bound},
                   {"ratio", rep.variant_align.ratio ? json(*rep.variant_align.ratio)
                                                     : json(nullptr)}};
        if (!emit_dir.empty()) {
            std::filesystem::create_directories(emit_dir);
            sintheta::io::write_matrix_file(emit_dir + "/pop.csv", pop.dense());
            sintheta::io::write_matrix_file(emit_dir + "/samp.csv", samp.dense());
        }
    } else {
        auto [pop, samp] = sintheta::gen_sharpness_rotation(epsilon);
        records[0].report = sintheta::variant_bounds(pop, samp, sintheta::BlockSelection(1, 1));
        const auto& rep = records[0].report;
        row = json{{"example", "rotation"},
                   {"epsilon", epsilon},
                   {"observed_sin_theta", rep.observed_sin_theta_op},
                   {"corollary_sin_bound", rep.corollary_sin->bound},
                   {"ratio", rep.corollary_sin->ratio ? json(*rep.corollary_sin->ratio)
                                                      : json(nullptr)},
                   {"oriented_difference", rep.corollary_diff->observed}};
        if (!emit_dir.empty()) {
            std::filesystem::create_directories(emit_dir);
            sintheta::io::write_matrix_file(emit_dir + "/pop.csv", pop.dense());
            sintheta::io::write_matrix_file(emit_dir + "/samp.csv", samp.dense());
        }
    }
    const json flags{{"example", example}, {"p", p}, {"d", d}, {"epsilon", epsilon}};
    json rec = sintheta::io::to_json(records[0]);
    rec["table_row"] = row;
    const json doc =
        sintheta::io::make_document("sharpness", flags, 0, json::array({rec}), json(nullptr));
    write_output(out_path, doc.dump(2) + "\n");
    return kExitOk;
}

int cmd_montecarlo(sintheta::EnsembleSpec spec, std::size_t parallel,
                   const std::string& out_path, const std::string& format, json flags) {
    spec.validate();
    try {
        const auto result = sintheta::run_campaign(spec, parallel);
        json records = json::array();
        for (const auto& rec : result.records) records.push_back(sintheta::io::to_json(rec));
        const json doc = sintheta::io::make_document("montecarlo", std::move(flags), spec.seed,
                                                     std::move(records),
                                                     sintheta::io::to_json(result.summary));
        write_output(out_path, render(doc, result.records, format));
        return kExitOk;
    } catch (const sintheta::CampaignViolation& e) {
        json counterexample{{"trial_index", e.trial_index},
                            {"message", e.what()},
                            {"pop",
                             {{"rows", e.pop.rows()}, {"cols", e.pop.cols()},
                              {"data", e.pop.data()}}},
                            {"samp",
                             {{"rows", e.samp.rows()}, {"cols", e.samp.cols()},
                              {"data", e.samp.data()}}}};
        const json doc = sintheta::io::make_document("montecarlo", std::move(flags), spec.seed,
                                                     json::array(),
                                                     json{{"violation", counterexample}});
        write_output(out_path, doc.dump(2) + "\n");
        std::cerr << "soundness violation: " << e.what() << "\n";
        return kExitError;
    }
}

int cmd_verify(const std::string& suite, std::size_t trials, std::uint64_t seed,
               bool inject_failure) {
    sintheta::verify::SuiteOptions opt;
    opt.trials = trials;
    opt.seed = seed;
    opt.inject_failure = inject_failure;
    bool ok = true;
    if (suite == "identities" || suite == "all")
        ok = sintheta::verify::run_suite(sintheta::verify::identity_checks(), opt, std::cout) && ok;
    if (suite == "bounds" || suite == "all") {
        auto bopt = opt;
        bopt.inject_failure = inject_failure && suite == "bounds";
        ok = sintheta::verify::run_suite(sintheta::verify::bound_checks(), bopt, std::cout) && ok;
    }
    std::cout << (ok ? "all properties hold" : "FAILURES above") << " (suite " << suite
              << ", trials " << trials << ", seed " << seed << ")\n";
    return ok ? kExitOk : kExitError;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Subspace perturbation bounds: principal angles, sin-theta distances, "
                 "and eigenvector/singular-vector stability bounds"};
    app.require_subcommand(1);

    // bound
    std::string pop_path, samp_path, mode = "symmetric", out_path, format = "json";
    std::size_t r = 1, s = 1;
    auto* bound = app.add_subcommand("bound", "Evaluate bounds for one matrix pair");
    bound->add_option("pop", pop_path, "Population matrix file (csv or json)")->required();
    bound->add_option("samp", samp_path, "Perturbed matrix file (csv or json)")->required();
    bound->add_option("--r", r, "First selected index (1-based)");
    bound->add_option("--s", s, "Last selected index (1-based)");
    bound->add_option("--mode", mode, "symmetric | svd-right | svd-left")
        ->check(CLI::IsMember({"symmetric", "svd-right", "svd-left"}));
    bound->add_option("--out", out_path, "Output file (stdout when omitted)");
    bound->add_option("--format", format, "json | csv")->check(CLI::IsMember({"json", "csv"}));

    // sharpness
    std::string example = "diag", emit_dir;
    std::size_t sh_p = 4, sh_d = 2;
    double epsilon = 0.1;
    std::string sh_out;
    auto* sharp = app.add_subcommand("sharpness", "Reproduce a sharpness example");
    sharp->add_option("--example", example, "diag | rotation")
        ->check(CLI::IsMember({"diag", "rotation"}));
    sharp->add_option("--p", sh_p, "Ambient dimension (diag example)");
    sharp->add_option("--d", sh_d, "Block dimension (diag example)");
    sharp->add_option("--epsilon", epsilon, "Perturbation parameter");
    sharp->add_option("--emit-matrices", emit_dir, "Directory to write pop/samp matrices to");
    sharp->add_option("--out", sh_out, "Output file (stdout when omitted)");

    // montecarlo
    std::string ensemble = "spiked", spectrum_csv, mc_out, mc_format = "json";
    std::size_t mc_p = 20, mc_q = 0, mc_trials = 200, mc_r = 1, mc_s = 1, mc_parallel = 1;
    double noise = 0.05, top_value = 5.0, bulk_value = 1.0;
    std::uint64_t mc_seed = 42;
    auto* mc = app.add_subcommand("montecarlo", "Run a random-ensemble soundness campaign");
    mc->add_option("--ensemble", ensemble, "spiked | rectangular")
        ->check(CLI::IsMember({"spiked", "rectangular"}));
    mc->add_option("--p", mc_p, "Rows / symmetric dimension");
    mc->add_option("--q", mc_q, "Columns (rectangular only)");
    mc->add_option("--spectrum", spectrum_csv,
                   "Explicit descending spectrum, comma-separated (overrides --top/--bulk)");
    mc->add_option("--top", top_value, "Parametric spectrum: value of the leading d entries");
    mc->add_option("--bulk", bulk_value, "Parametric spectrum: value of the remaining entries");
    mc->add_option("--noise", noise, "Noise scale");
    mc->add_option("--trials", mc_trials, "Number of trials");
    auto* mc_seed_opt = mc->add_option("--seed", mc_seed, "Campaign seed");
    mc->add_option("--r", mc_r, "First selected index");
    mc->add_option("--s", mc_s, "Last selected index");
    mc->add_option("--out", mc_out, "Output file (stdout when omitted)");
    mc->add_option("--format", mc_format, "json | csv")->check(CLI::IsMember({"json", "csv"}));
    mc->add_option("--parallel", mc_parallel, "Worker threads (output is schedule-independent)");

    // verify
    std::string suite = "all";
    std::size_t vf_trials = 50;
    std::uint64_t vf_seed = 1;
    bool inject_failure = false;
    auto* vf = app.add_subcommand("verify", "Run the property suites");
    vf->add_option("--suite", suite, "identities | bounds | all")
        ->check(CLI::IsMember({"identities", "bounds", "all"}));
    vf->add_option("--trials", vf_trials, "Trials per property");
    auto* vf_seed_opt = vf->add_option("--seed", vf_seed, "Suite seed");
    vf->add_flag("--inject-failure", inject_failure)->group("");  // test-only hook, hidden

    CLI11_PARSE(app, argc, argv);

    try {
        if (bound->parsed()) return cmd_bound(pop_path, samp_path, r, s, mode, out_path, format);
        if (sharp->parsed()) {
            try {
                return cmd_sharpness(example, sh_p, sh_d, epsilon, emit_dir, sh_out);
            } catch (const std::invalid_argument& e) {
                std::cerr << "error: " << e.what() << "\n";
                return kExitInapplicable;  // generator precondition violations
            }
        }
        if (mc->parsed()) {
            sintheta::EnsembleSpec spec;
            spec.kind = (ensemble == "spiked") ? sintheta::EnsembleKind::spiked_symmetric
                                               : sintheta::EnsembleKind::rectangular;
            spec.p = mc_p;
            spec.q = mc_q;
            spec.noise_scale = noise;
            spec.trials = mc_trials;
            spec.seed = resolve_seed(mc_seed_opt, mc_seed);
            spec.selection = sintheta::BlockSelection(mc_r, mc_s);
            if (!spectrum_csv.empty()) {
                spec.spectrum = parse_spectrum(spectrum_csv);
            } else if (spec.kind == sintheta::EnsembleKind::spiked_symmetric) {
                spec.spectrum.assign(mc_p, bulk_value);
                for (std::size_t i = 0; i < spec.selection.d() && i < mc_p; ++i)
                    spec.spectrum[i] = top_value;
            } else {
                throw std::invalid_argument("montecarlo: rectangular ensemble needs --spectrum");
            }
            const json flags{{"ensemble", ensemble},       {"p", mc_p},
                             {"q", mc_q},                  {"spectrum", spec.spectrum},
                             {"noise", noise},             {"trials", mc_trials},
                             {"r", mc_r},                  {"s", mc_s},
                             {"format", mc_format}};
            return cmd_montecarlo(spec, mc_parallel, mc_out, mc_format, flags);
        }
        if (vf->parsed())
            return cmd_verify(suite, vf_trials, resolve_seed(vf_seed_opt, vf_seed),
                              inject_failure);
    } catch (const sintheta::PreconditionError& e) {
        std::cerr << "inapplicable: " << e.what() << "\n";
        return kExitInapplicable;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitError;
}
