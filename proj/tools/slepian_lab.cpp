// Experiment runner: each subcommand reproduces one table/figure/theorem
// check and writes plot-ready CSV/JSON. Exit codes: 0 all gated checks pass,
// 1 usage or I/O error, 2 gated check failed.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "slepian_lab/experiments.hpp"

namespace sl = slepian_lab;
using nlohmann::json;

namespace {

std::string sibling_json_path(const std::string& csv_path) {
    const auto dot = csv_path.find_last_of('.');
    if (dot == std::string::npos) return csv_path + ".json";
    return csv_path.substr(0, dot) + ".json";
}

void write_json_file(const std::string& path, const json& j) {
    auto os = sl::io::open_output(path);
    os << j.dump(2) << '\n';
}

double resolve_epsilon(const std::string& text, double dt) {
    if (text == "auto") return 8.0 * std::sqrt(dt);
    return std::stod(text);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"slepian-lab: Slepian-process and first-level-bridge experiments"};
    app.require_subcommand(1);

    std::uint64_t seed = 20250101;
    unsigned threads = 0;
    app.add_option("--seed", seed, "master seed (64-bit)")->capture_default_str();
    app.add_option("--threads", threads,
                   "worker threads (0 = SLEPIAN_LAB_THREADS env or hardware)")
        ->capture_default_str();

    // rw-exact
    auto* rw_exact = app.add_subcommand("rw-exact", "exact first-level-bridge law (rationals)");
    int re_n = 4;
    std::string re_out = "rw_exact.csv";
    int re_table_max = 0;
    rw_exact->add_option("--n", re_n, "even bridge length, 2..12")->required();
    rw_exact->add_option("--output,-o", re_out, "law CSV path")->capture_default_str();
    rw_exact->add_option("--ratio-table-max", re_table_max,
                         "also tabulate max/min ratios for n = 2.. this value");

    // rw-max-cdf
    auto* rw_max = app.add_subcommand("rw-max-cdf", "scaled-maximum CDF of the first level bridge");
    int rm_n = 100;
    double rm_x = 1.3;
    std::size_t rm_reps = 100000;
    std::string rm_out = "rw_max_cdf.csv";
    rw_max->add_option("--n", rm_n, "even bridge length")->required();
    rw_max->add_option("--x", rm_x, "evaluation point of the scaled-max CDF")->capture_default_str();
    rw_max->add_option("--replicates", rm_reps, "Monte Carlo replicates")->capture_default_str();
    rw_max->add_option("--output,-o", rm_out, "CSV path")->capture_default_str();

    // slepian-first-passage
    auto* fp = app.add_subcommand("slepian-first-passage",
                                  "law of the first Slepian zero vs the closed form");
    double fp_dt = 0.0009765625;
    std::size_t fp_reps = 100000;
    std::string fp_out = "first_passage.csv";
    fp->add_option("--dt", fp_dt, "grid step (1/dt integer)")->capture_default_str();
    fp->add_option("--replicates", fp_reps, "Monte Carlo replicates")->capture_default_str();
    fp->add_option("--output,-o", fp_out, "histogram CSV path")->capture_default_str();

    // quadruple-gof
    auto* qg = app.add_subcommand("quadruple-gof",
                                  "accepted (S0,S1,F,G) histogram vs the quadruple density");
    double qg_dt = 0.000244140625;
    std::size_t qg_accept = 100000;
    std::string qg_out = "quadruples.csv";
    qg->add_option("--dt", qg_dt, "grid step")->capture_default_str();
    qg->add_option("--accepted", qg_accept, "accepted quadruples to collect")->capture_default_str();
    qg->add_option("--output,-o", qg_out, "accepted-sample CSV path")->capture_default_str();

    // shepp
    auto* sh = app.add_subcommand("shepp", "Shepp survival integral P(F > t), integer t");
    int sh_t = 1;
    int sh_points = 64;
    double sh_radius = 8.0;
    std::string sh_method = "tensor";
    std::string sh_out = "shepp.json";
    sh->add_option("--t", sh_t, "integer horizon, 1..3")->required();
    sh->add_option("--points", sh_points, "quadrature points per axis")->capture_default_str();
    sh->add_option("--radius", sh_radius, "Gaussian truncation radius")->capture_default_str();
    sh->add_option("--method", sh_method, "tensor | qmc")->capture_default_str();
    sh->add_option("--output,-o", sh_out, "JSON path")->capture_default_str();

    // embed
    auto* em = app.add_subcommand("embed", "allocation-time embedding of Brownian bridge");
    double em_dt = 0.000244140625;
    std::string em_eps = "auto";
    std::size_t em_reps = 1000;
    double em_cap = 64.0;
    std::string em_out = "embed.csv";
    em->add_option("--dt", em_dt, "grid step")->capture_default_str();
    em->add_option("--epsilon", em_eps, "band half-width, or 'auto' (= 8 sqrt(dt))")
        ->capture_default_str();
    em->add_option("--replicates", em_reps, "embedding replicates")->capture_default_str();
    em->add_option("--cap", em_cap, "horizon cap in time units")->capture_default_str();
    em->add_option("--output,-o", em_out, "embedding CSV path")->capture_default_str();

    // report
    auto* rp = app.add_subcommand("report", "aggregate JSON reports into one summary");
    std::vector<std::string> rp_inputs;
    std::string rp_out = "report.json";
    rp->add_option("inputs", rp_inputs, "JSON report files")->required();
    rp->add_option("--output,-o", rp_out, "summary JSON path")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? 0 : 1;
    }

    try {
        if (*rw_exact) {
            auto res = sl::experiments::run_rw_exact(re_n);
            {
                auto os = sl::io::open_output(re_out);
                sl::rwbridge::write_csv(res.law, os);
            }
            if (re_table_max >= 2) {
                auto os = sl::io::open_output(sibling_json_path(re_out) + ".ratios.csv");
                os << "n,ratio_num,ratio_den,ratio_float\n";
                for (int k = 2; k <= re_table_max; k += 2) {
                    const auto ratio = sl::rwbridge::max_min_ratio(sl::rwbridge::exact_bridge_law(k));
                    os << k << ',' << numerator(ratio).str() << ',' << denominator(ratio).str() << ','
                       << sl::io::g9(ratio.convert_to<double>()) << '\n';
                }
            }
            const auto ratio = res.ratio.convert_to<double>();
            std::cout << "rw-exact n=" << re_n << ": states=" << res.law.probabilities.size()
                      << " max/min=" << sl::io::g9(ratio) << (res.pass ? " [ok]" : " [FAIL]") << '\n';
            return res.pass ? 0 : 2;
        }
        if (*rw_max) {
            auto row = sl::experiments::run_rw_max_cdf({seed, 0}, rm_n, rm_x, rm_reps, threads);
            auto os = sl::io::open_output(rm_out);
            os << "n,x,estimate,std_error,ks_cdf,gap\n";
            os << row.n << ',' << sl::io::g9(row.x) << ',' << sl::io::g9(row.est.estimate) << ','
               << sl::io::g9(row.est.std_error) << ',' << sl::io::g9(row.ks_value) << ','
               << sl::io::g9(row.gap) << '\n';
            std::cout << "rw-max-cdf n=" << rm_n << " x=" << rm_x << ": " << row.est.estimate
                      << " +/- " << row.est.std_error << " (ks gap " << row.gap << ")\n";
            return 0;
        }
        if (*fp) {
            auto res = sl::experiments::run_first_passage({seed, 0}, fp_dt, fp_reps, threads);
            {
                auto os = sl::io::open_output(fp_out);
                sl::experiments::write_csv(res, os);
            }
            write_json_file(sibling_json_path(fp_out), sl::experiments::to_json(res));
            std::cout << "slepian-first-passage: P(F<=1)=" << res.p_f_le_1 << " (target "
                      << res.p_f_le_1_target << "), chi2 p=" << res.chi2.p_value
                      << (res.pass ? " [ok]" : " [FAIL]") << '\n';
            return res.pass ? 0 : 2;
        }
        if (*qg) {
            auto res = sl::experiments::run_quadruple_gof({seed, 0}, qg_dt, qg_accept, threads);
            {
                auto os = sl::io::open_output(qg_out);
                sl::experiments::write_csv(res, os);
            }
            write_json_file(sibling_json_path(qg_out), sl::experiments::to_json(res));
            std::cout << "quadruple-gof: accepted=" << res.accepted << " rate=" << res.acceptance_rate
                      << " chi2 p=" << res.chi2.p_value << (res.pass ? " [ok]" : " [FAIL]") << '\n';
            return res.pass ? 0 : 2;
        }
        if (*sh) {
            sl::quadrature::QuadratureSpec spec;
            spec.points_per_axis = sh_points;
            spec.radius = sh_radius;
            spec.method = sh_method == "qmc" ? sl::quadrature::Method::quasi_random
                                             : sl::quadrature::Method::tensor_grid;
            auto res = sl::experiments::run_shepp(sh_t, spec);
            write_json_file(sh_out, sl::experiments::to_json(res));
            std::cout << "shepp t=" << sh_t << ": value=" << sl::io::g9(res.value)
                      << (res.target ? " target=" + sl::io::g9(*res.target) : "")
                      << (res.pass ? " [ok]" : " [FAIL]") << '\n';
            return res.pass ? 0 : 2;
        }
        if (*em) {
            const double eps = resolve_epsilon(em_eps, em_dt);
            auto res = sl::experiments::run_embed({seed, 0}, em_dt, eps, em_reps, em_cap, threads);
            {
                auto os = sl::io::open_output(em_out);
                sl::experiments::write_csv(res, os);
            }
            write_json_file(sibling_json_path(em_out), sl::experiments::to_json(res));
            std::cout << "embed: found " << res.found << "/" << res.replicates << " (epsilon=" << eps
                      << ", degenerate " << res.degenerate << ")"
                      << (res.pass ? " [ok]" : " [FAIL]") << '\n';
            return res.pass ? 0 : 2;
        }
        if (*rp) {
            json summary{{"schema", 1}, {"count", rp_inputs.size()}};
            json reports = json::array();
            bool all_pass = true;
            for (const auto& path : rp_inputs) {
                std::ifstream is(path);
                if (!is) throw std::runtime_error("cannot read report: " + path);
                json j;
                is >> j;
                if (j.contains("pass") && !j["pass"].get<bool>()) all_pass = false;
                reports.push_back(std::move(j));
            }
            summary["all_pass"] = all_pass;
            summary["reports"] = std::move(reports);
            write_json_file(rp_out, summary);
            std::cout << "report: " << rp_inputs.size() << " inputs, all_pass="
                      << (all_pass ? "true" : "false") << '\n';
            return all_pass ? 0 : 2;
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
