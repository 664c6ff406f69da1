// uclab: batch runner for the uncertainty-constant toolkit.
//
// Exit status: 0 when every check of the run passed, 1 when a check failed,
// 2 on invalid configuration or a computation error.

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "uclab/uclab.hpp"

namespace {

using uclab::Error;
using uclab::ErrorKind;
using uclab::json;

[[noreturn]] void config_error(const std::string& what) { throw Error(ErrorKind::ConfigInvalid, "cli", what); }

struct Range {
    int lo = 0;
    int hi = 0;
};

Range parse_levels(const std::string& text) {
    const auto dots = text.find("..");
    if (dots == std::string::npos) config_error("--levels expects a..b");
    Range r;
    const std::string a = text.substr(0, dots);
    const std::string b = text.substr(dots + 2);
    const auto ra = std::from_chars(a.data(), a.data() + a.size(), r.lo);
    const auto rb = std::from_chars(b.data(), b.data() + b.size(), r.hi);
    if (ra.ec != std::errc{} || ra.ptr != a.data() + a.size() || rb.ec != std::errc{} ||
        rb.ptr != b.data() + b.size()) {
        config_error("--levels expects integers a..b, got '" + text + "'");
    }
    if (r.lo < 0 || r.hi <= r.lo) config_error("--levels must be strictly increasing and non-negative");
    if (r.hi > 22) config_error("--levels upper end above 22 is not supported");
    return r;
}

struct RealRange {
    double lo = 0.0;
    double hi = 0.0;
};

RealRange parse_real_range(const std::string& text, const char* flag) {
    const auto dots = text.find("..", 1);
    if (dots == std::string::npos) config_error(std::string(flag) + " expects lo..hi");
    RealRange r;
    try {
        std::size_t used = 0;
        const std::string a = text.substr(0, dots);
        const std::string b = text.substr(dots + 2);
        r.lo = std::stod(a, &used);
        if (used != a.size()) throw std::invalid_argument(a);
        r.hi = std::stod(b, &used);
        if (used != b.size()) throw std::invalid_argument(b);
    } catch (const std::exception&) {
        config_error(std::string(flag) + " expects numbers lo..hi, got '" + text + "'");
    }
    if (!(r.hi > r.lo)) config_error(std::string(flag) + " must satisfy lo < hi");
    return r;
}

std::uint64_t seed_from_env() {
    const char* env = std::getenv("UCLAB_SEED");
    if (env == nullptr || *env == '\0') return 20240917u;
    std::uint64_t v = 0;
    const std::string s(env);
    const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc{} || r.ptr != s.data() + s.size()) config_error("UCLAB_SEED must be an unsigned integer");
    return v;
}

uclab::PeriodicSignal random_signal(std::mt19937_64& rng, int max_support) {
    std::uniform_int_distribution<int> len(1, max_support);
    std::uniform_int_distribution<int> start(-max_support, max_support);
    std::normal_distribution<double> g;
    const int n = len(rng);
    std::vector<uclab::cplx> c(static_cast<std::size_t>(n));
    for (auto& v : c) v = {g(rng), g(rng)};
    return {start(rng), std::move(c)};
}

void positive(double v, const char* flag) {
    if (!(v > 0.0)) config_error(std::string(flag) + " must be positive");
}

void write_output(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) config_error("cannot write '" + path + "'");
    out << text;
}

uclab::json load_json(const std::string& path) {
    if (path.empty()) config_error("--in is required");
    return uclab::io::read_json_file(path);
}

struct Common {
    std::string in;
    std::string out;
    std::string levels = "4..10";
    double q_base = 2.0;
    double c_est = 0.0;
    double tol = 0.0;
    int grid = 500;
    unsigned workers = 0;
    std::string wavelet = "gauss-deriv";
};

int run_uc_periodic(const Common& c) {
    const uclab::PeriodicSignal f = uclab::io::periodic_from_json(load_json(c.in));
    write_output(c.out, uclab::io::to_json(uclab::breitenberger_uc(f)).dump() + "\n");
    return 0;
}

int run_uc_line(const Common& c, bool use_wavelet) {
    uclab::LineUCReport r;
    if (use_wavelet) {
        r = uclab::heisenberg_reference(uclab::builtin_wavelet(c.wavelet));
    } else {
        const json j = load_json(c.in);
        r = j.contains("nodes") ? uclab::uc_line_spectrum(uclab::io::spectrum_from_json(j))
                                : uclab::uc_line_sampled(uclab::io::sampled_from_json(j));
    }
    write_output(c.out, uclab::io::to_json(r).dump() + "\n");
    return 0;
}

int run_frame(const Common& c, const std::string& mask_name, int J, int trials) {
    if (J < 1 || J > 16) config_error("--J must be in [1, 16]");
    const double tol = c.tol > 0.0 ? c.tol : 1e-12;
    const uclab::MaskSpec mask = mask_name == "haar" ? uclab::haar_mask() : uclab::io::mask_from_json(load_json(mask_name));
    const uclab::WaveletFrameLevels fr = uclab::build_frame(mask, J, -1, c.workers);

    json levels = json::array();
    bool ok = true;
    for (int j = 1; j <= J; ++j) {
        const double dev = uclab::uep_matrix_check(fr, j);
        ok = ok && dev < tol;
        levels.push_back({{"j", j}, {"uep_deviation", dev}, {"refinement_residual", uclab::refinement_residual(fr, j - 1)}});
    }
    std::mt19937_64 rng(seed_from_env());
    double worst_telescoped = 0.0;
    double worst_parseval = 0.0;
    const int degree = std::min(16, 1 << (J - 1));
    for (int t = 0; t < trials; ++t) {
        std::normal_distribution<double> g;
        std::vector<uclab::cplx> v(2 * static_cast<std::size_t>(degree) + 1);
        for (auto& x : v) x = {g(rng), g(rng)};
        const uclab::PeriodicSignal f = uclab::normalized(uclab::PeriodicSignal(-degree, std::move(v)));
        worst_telescoped = std::max(worst_telescoped, std::abs(uclab::telescoped_residual(fr, f)));
        worst_parseval = std::max(worst_parseval, std::abs(uclab::parseval_residual(fr, f)));
    }
    ok = ok && worst_telescoped < std::max(tol, 1e-10);
    json summary = {{"J", J},
                    {"support_radius", fr.support_radius},
                    {"levels", levels},
                    {"trials", trials},
                    {"test_degree", degree},
                    {"max_telescoped_residual", worst_telescoped},
                    {"max_parseval_residual", worst_parseval},
                    {"scaling_limit_defect", uclab::scaling_limit_defect(fr, J)},
                    {"con1_window", 4},
                    {"pass", ok}};
    if (!c.out.empty()) write_output(c.out, uclab::io::to_json(fr).dump() + "\n");
    std::cout << summary.dump() << "\n";
    return ok ? 0 : 1;
}

int run_pipeline(const Common& c) {
    const Range r = parse_levels(c.levels);
    const auto levels = uclab::periodized_levels(uclab::builtin_wavelet(c.wavelet), r.lo, r.hi, c.q_base, c.workers);
    uclab::PipelineOptions opt;
    opt.workers = c.workers;
    if (c.tol > 0.0) opt.slack = c.tol;
    const uclab::PipelineTrace trace = uclab::three_halves_pipeline(levels, c.c_est, opt);
    std::ostringstream csv;
    uclab::io::write_pipeline_csv(csv, trace);
    write_output(c.out, csv.str());
    const bool ok = trace.conditions.all_pass() && trace.bound_holds && trace.gap_shrinking;
    json summary = {{"conditions", uclab::io::to_json(trace.conditions)},
                    {"bound_holds", trace.bound_holds},
                    {"gap_shrinking", trace.gap_shrinking},
                    {"max_recentre_mismatch", trace.max_recentre_mismatch},
                    {"slack", trace.slack},
                    {"pass", ok}};
    (c.out.empty() ? std::cerr : std::cout) << summary.dump() << "\n";
    return ok ? 0 : 1;
}

int run_convergence(const Common& c) {
    const Range r = parse_levels(c.levels);
    const uclab::SpectrumFn fn = uclab::builtin_wavelet(c.wavelet);
    const double target = uclab::heisenberg_reference(fn).uc;
    const auto levels = uclab::periodized_levels(fn, r.lo, r.hi, c.q_base, c.workers);
    std::vector<double> uc(levels.size());
    uclab::parallel_for(levels.size(), c.workers, [&](std::size_t i) {
        uc[i] = uclab::breitenberger_uc(levels[i].psi).uc;
    });
    std::ostringstream csv;
    csv << "j,q_j,uc_periodic,abs_gap\n";
    bool monotone = true;
    for (std::size_t i = 0; i < levels.size(); ++i) {
        const double gap = std::abs(uc[i] - target);
        if (i > 0) monotone = monotone && gap < std::abs(uc[i - 1] - target);
        uclab::io::write_csv_row(csv, {static_cast<double>(levels[i].j), levels[i].q, uc[i], gap});
    }
    csv << "target,," << uclab::io::format_double(target) << ",0\n";
    write_output(c.out, csv.str());
    (c.out.empty() ? std::cerr : std::cout)
        << json{{"wavelet", c.wavelet}, {"uc_h", target}, {"gap_monotone", monotone}, {"pass", monotone}}.dump()
        << "\n";
    return monotone ? 0 : 1;
}

int run_scan(const Common& c, double eps, const std::string& alpha_text, const std::string& beta_text) {
    if (c.grid < 2 || c.grid > 20000) config_error("--grid must be in [2, 20000]");
    const RealRange a = parse_real_range(alpha_text, "--alpha");
    const RealRange b = parse_real_range(beta_text, "--beta");
    const uclab::SystemResidual floor = uclab::zero_eps_solution();

    std::ofstream csv;
    uclab::ScanOptions opt;
    opt.workers = c.workers;
    if (!c.out.empty()) {
        csv.open(c.out);
        if (!csv) config_error("cannot write '" + c.out + "'");
        csv << uclab::io::kScanCsvHeader << '\n';
        opt.sink = [&csv](const uclab::SystemResidual& r) { uclab::io::write_scan_row(csv, r); };
    }
    const uclab::ScanResult res = uclab::scan_no_solution(eps, {a.lo, a.hi}, {b.lo, b.hi}, c.grid, opt);
    std::optional<uclab::SystemResidual> polished;
    if (res.evaluated > 0) polished = uclab::polish_system(res.argmin.alpha, res.argmin.beta, eps);
    const double threshold = 10.0 * floor.norm();
    const bool applies = eps != 0.0;
    const bool ok = !applies || res.min_residual > threshold;
    json summary = {{"eps", eps},
                    {"grid", c.grid},
                    {"evaluated", res.evaluated},
                    {"skipped_near_pole", res.skipped},
                    {"min_residual", res.min_residual},
                    {"argmin", uclab::io::to_json(res.argmin)},
                    {"zero_eps_floor", floor.norm()},
                    {"threshold", threshold},
                    {"pass", ok}};
    if (polished) {
        summary["polished"] = uclab::io::to_json(*polished);
        summary["polished_residual"] = polished->norm();
    }
    std::cout << summary.dump() << "\n";
    return ok ? 0 : 1;
}

int run_identities(const Common& c, double q, int count) {
    positive(q, "--q");
    const double tol = c.tol > 0.0 ? c.tol : 1e-10;
    std::vector<uclab::PeriodicSignal> signals;
    if (!c.in.empty()) {
        signals.push_back(uclab::io::periodic_from_json(load_json(c.in)));
    } else {
        if (count < 1) config_error("--count must be positive");
        std::mt19937_64 rng(seed_from_env());
        for (int i = 0; i < count; ++i) signals.push_back(random_signal(rng, 64));
    }
    double worst = 0.0;
    double worst_item3 = 0.0;
    json rows = json::array();
    for (const auto& f : signals) {
        const uclab::EmbeddingIdentities id = uclab::embedding_identities(f, q);
        worst = std::max(worst, id.max_exact_residual());
        worst_item3 = std::max(worst_item3, id.item3_residual);
        if (signals.size() == 1) rows.push_back(uclab::io::to_json(id));
    }
    const bool ok = worst < tol && worst_item3 < tol;
    json summary = {{"q", q},
                    {"signals", signals.size()},
                    {"max_exact_residual", worst},
                    {"max_item3_residual", worst_item3},
                    {"tol", tol},
                    {"pass", ok}};
    if (!rows.empty()) summary["identities"] = rows.front();
    write_output(c.out, summary.dump() + "\n");
    return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"uclab: uncertainty constants of periodic and real-line wavelets"};
    app.require_subcommand(1);
    Common c;
    c.workers = uclab::default_workers();

    auto add_common = [&](CLI::App* s) {
        s->add_option("--out", c.out, "output file (default stdout)");
        s->add_option("--workers", c.workers, "worker threads")->check(CLI::PositiveNumber);
        s->add_option("--tol", c.tol, "tolerance for the run's checks")->check(CLI::PositiveNumber);
    };

    auto* uc_periodic = app.add_subcommand("uc-periodic", "Breitenberger UC of a PeriodicSignal JSON");
    uc_periodic->add_option("--in", c.in, "PeriodicSignal JSON")->required();
    add_common(uc_periodic);

    auto* uc_line = app.add_subcommand("uc-line", "Heisenberg UC of sampled or piecewise-linear input");
    uc_line->add_option("--in", c.in, "SampledLineSignal or PiecewiseLinearSpectrum JSON");
    auto* uc_line_wavelet = uc_line->add_option("--wavelet", c.wavelet, "built-in spectrum instead of --in");
    add_common(uc_line);

    std::string mask = "haar";
    int frame_j = 8;
    int trials = 10;
    auto* frame = app.add_subcommand("frame", "build a periodic Parseval wavelet frame and check it");
    frame->add_option("--mask", mask, "'haar' or a mask JSON path");
    frame->add_option("--J", frame_j, "finest level");
    frame->add_option("--trials", trials, "random test polynomials")->check(CLI::NonNegativeNumber);
    add_common(frame);

    auto* pipeline = app.add_subcommand("pipeline", "three-halves pipeline over periodized levels");
    auto* convergence = app.add_subcommand("convergence", "UC_B of periodized levels against UC_H");
    for (auto* s : {pipeline, convergence}) {
        s->add_option("--wavelet", c.wavelet, "gauss-deriv | mexican-gauss | gaussian");
        s->add_option("--levels", c.levels, "level range a..b");
        s->add_option("--q-base", c.q_base, "q_j = base^j");
        add_common(s);
    }
    pipeline->add_option("--c-est", c.c_est, "bound C for the conditions (<= 0: estimate)");

    double eps = 0.5;
    std::string alpha_range = "0.1..20";
    std::string beta_range = "-20..20";
    auto* scan = app.add_subcommand("minimizer-scan", "grid scan of the reduced minimization system");
    scan->add_option("--eps", eps, "constraint value epsilon");
    scan->add_option("--grid", c.grid, "points per axis");
    scan->add_option("--alpha", alpha_range, "alpha range lo..hi");
    scan->add_option("--beta", beta_range, "beta range lo..hi");
    add_common(scan);

    double q = 8.0;
    int count = 100;
    auto* identities = app.add_subcommand("identities", "exact embedding identities");
    identities->add_option("--in", c.in, "PeriodicSignal JSON (default: random signals)");
    identities->add_option("--q", q, "grid density");
    identities->add_option("--count", count, "number of random signals");
    add_common(identities);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (c.workers == 0) config_error("--workers must be positive");
        positive(c.q_base, "--q-base");
        if (c.tol < 0.0) config_error("--tol must be positive");
        if (*uc_periodic) return run_uc_periodic(c);
        if (*uc_line) {
            if (c.in.empty() && uc_line_wavelet->count() == 0) config_error("uc-line needs --in or --wavelet");
            return run_uc_line(c, c.in.empty());
        }
        if (*frame) return run_frame(c, mask, frame_j, trials);
        if (*pipeline) return run_pipeline(c);
        if (*convergence) return run_convergence(c);
        if (*scan) return run_scan(c, eps, alpha_range, beta_range);
        if (*identities) return run_identities(c, q, count);
    } catch (const Error& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "cli: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
