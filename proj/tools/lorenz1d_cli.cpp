#include "lorenz1d/lorenz1d.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <thread>

using namespace lorenz1d;
using nlohmann::json;

namespace {

constexpr int exit_precondition = 2;
constexpr int exit_numerical = 3;
constexpr int exit_io = 4;

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

int fail(int code, const std::string& kind, const std::string& message)
{
    std::cerr << json{{"error", kind}, {"message", message}, {"exit_code", code}}.dump() << "\n";
    return code;
}

// key=value lines; '#' starts a comment
std::map<std::string, std::string> read_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot read config file " + path);
    std::map<std::string, std::string> out;
    std::string line;
    int lineno = 0;
    auto trim = [](std::string s) {
        s.erase(0, s.find_first_not_of(" \t\r"));
        s.erase(s.find_last_not_of(" \t\r") + 1);
        return s;
    };
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line.substr(0, line.find('#')));
        if (line.empty())
            continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw PreconditionError(path + ":" + std::to_string(lineno) + ": expected key=value");
        out[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return out;
}

// Config entries become flags placed right after the subcommand, unless the
// same flag is already on the command line.
std::vector<std::string> merge_config(const std::vector<std::string>& args)
{
    std::string path;
    std::vector<std::string> rest;
    for (std::size_t k = 0; k < args.size(); ++k) {
        if (args[k] == "--config" && k + 1 < args.size())
            path = args[++k];
        else if (args[k].rfind("--config=", 0) == 0)
            path = args[k].substr(9);
        else
            rest.push_back(args[k]);
    }
    if (path.empty())
        return rest;
    auto cfg = read_config(path);
    std::vector<std::string> extra;
    for (const auto& [key, value] : cfg) {
        // T_max, t_max and t-max name the same flag
        std::string flag = "--" + key;
        std::replace(flag.begin(), flag.end(), '_', '-');
        std::transform(flag.begin(), flag.end(), flag.begin(), [](unsigned char ch) { return char(std::tolower(ch)); });
        bool given = std::any_of(rest.begin(), rest.end(),
                                 [&](const std::string& a) { return a == flag || a.rfind(flag + "=", 0) == 0; });
        if (!given) {
            extra.push_back(flag);
            extra.push_back(value);
        }
    }
    // argv[0], subcommand, then config flags
    std::size_t at = std::min<std::size_t>(2, rest.size());
    rest.insert(rest.begin() + long(at), extra.begin(), extra.end());
    return rest;
}

std::string fmt(double v)
{
    if (std::isnan(v))
        return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

json stream_json(const std::optional<SymbolStream>& s)
{
    return s ? json(s->text()) : json(nullptr);
}

json kneading_json(const KneadingInvariant& k)
{
    return {{"plus_prefix", k.plus_prefix},
            {"minus_prefix", k.minus_prefix},
            {"eta_plus", stream_json(k.eta_plus)},
            {"eta_minus", stream_json(k.eta_minus)},
            {"certified_periodic", k.certified_periodic},
            {"plus_near_ties", k.plus_near_ties},
            {"minus_near_ties", k.minus_near_ties}};
}

// Runs cell(j) for j < n on a worker pool; results come back in index order.
template <class Row>
std::vector<Row> run_cells(std::size_t n, unsigned threads, const std::function<Row(std::size_t)>& cell)
{
    std::vector<Row> rows(n);
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t j; (j = next++) < n;)
            rows[j] = cell(j);
    };
    threads = std::max(1u, std::min<unsigned>(threads, unsigned(std::max<std::size_t>(n, 1))));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < threads; ++t)
        pool.emplace_back(work);
    work();
    for (auto& t : pool)
        t.join();
    return rows;
}

std::string cell_error(const std::exception& e)
{
    std::string m = e.what();
    std::replace(m.begin(), m.end(), ',', ';');
    return m;
}

struct FlowArgs {
    FlowOptions o;
    void add(CLI::App* c)
    {
        c->add_option("--tol", o.tol, "integrator tolerance")->check(CLI::Range(1e-13, 1e-4));
        c->add_option("--delta", o.delta, "separatrix offset from the origin")->check(CLI::Range(1e-14, 1e-4));
        c->add_option("--t-max", o.t_max, "integration time cap")->check(CLI::PositiveNumber);
        c->add_option("--bound-x", o.bound_x, "section half width in x")->check(CLI::PositiveNumber);
        c->add_option("--bound-y", o.bound_y, "section half width in y")->check(CLI::PositiveNumber);
    }
};

const std::string csv_version = "# lorenz1d-csv v1 ";

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Expanding Lorenz maps, beta-transformations and the Lorenz flow"};
    app.require_subcommand(1);
    app.fallthrough();
    std::string out_path;
    app.add_option("--out", out_path, "write the artifact here instead of stdout");

    double beta = 1.7, alpha = std::nan("");
    std::size_t symbols = 64, max_period = 12, terms = 40, grid = 4096;
    double s = 1.3, r = 1.3;
    int sr_grid = 64, period = 3, twists = 0;
    LorenzParams lp{10, 28, 8.0 / 3};
    FlowArgs fa;
    double sigma1 = 10.2, rho1 = 30.38;
    std::size_t points = 9;
    unsigned threads = std::max(1u, std::thread::hardware_concurrency());
    std::string scan_kind = "beta";
    double lo = 1.0, hi = 2.0, lo2 = 1.0, hi2 = 2.0;
    std::size_t cells = 512, cells2 = 1;

    auto add_beta = [&](CLI::App* c) { c->add_option("--beta", beta, "slope in (1,2]")->check(CLI::Range(1.0, 2.0)); };

    auto* knead = app.add_subcommand("knead", "kneading invariant of F_beta or F_{beta,alpha}");
    add_beta(knead);
    knead->add_option("--alpha", alpha, "offset; omit for the symmetric map")->check(CLI::Range(0.0, 1.0));
    knead->add_option("--symbols", symbols, "prefix length")->check(CLI::Range(1, 4096));

    auto* classify = app.add_subcommand("classify", "locate beta on the epsilon ladder");
    add_beta(classify);

    auto* renorm = app.add_subcommand("renorm", "renormalization tower");
    add_beta(renorm);

    auto* periods = app.add_subcommand("periods", "period set by periodic-orbit search");
    add_beta(periods);
    periods->add_option("--max", max_period, "largest period")->check(CLI::Range(1, 20));

    auto* rotation = app.add_subcommand("rotation", "rotation interval estimate");
    add_beta(rotation);

    auto* dens = app.add_subcommand("density", "invariant density as CSV");
    add_beta(dens);
    dens->add_option("--terms", terms, "series terms")->check(CLI::Range(8, 200));
    dens->add_option("--grid", grid, "grid cells")->check(CLI::Range(256, 1 << 20));

    auto* hsr = app.add_subcommand("hsr", "two-slope map H_{s,r} and its conjugate beta-transformation");
    hsr->add_option("--s", s, "left slope")->required();
    hsr->add_option("--r", r, "right slope")->required();

    auto* hsr_region = app.add_subcommand("hsr-region", "region curves L(s), U(s) as CSV");
    hsr_region->add_option("--grid", sr_grid, "number of s values")->check(CLI::Range(1, 1000000));

    auto* fknead = app.add_subcommand("flow-knead", "separatrix kneading of the Lorenz flow");
    fknead->add_option("--sigma", lp.sigma);
    fknead->add_option("--rho", lp.rho);
    fknead->add_option("--mu", lp.mu);
    fknead->add_option("--symbols", symbols, "symbols to extract")->check(CLI::Range(2, 1000));
    fa.add(fknead);

    auto* fsweep = app.add_subcommand("flow-sweep", "k10 and fitted beta along a segment in (sigma,rho)");
    fsweep->add_option("--sigma", lp.sigma, "start sigma");
    fsweep->add_option("--rho", lp.rho, "start rho");
    fsweep->add_option("--mu", lp.mu);
    fsweep->add_option("--sigma-end", sigma1);
    fsweep->add_option("--rho-end", rho1);
    fsweep->add_option("--points", points)->check(CLI::Range(1, 100000));
    fsweep->add_option("--symbols", symbols)->check(CLI::Range(2, 1000));
    fsweep->add_option("--threads", threads)->check(CLI::Range(1, 1024));
    fa.add(fsweep);

    auto* tmpl = app.add_subcommand("template", "Lorenz words with braids on L(k,k)");
    tmpl->add_option("--period", period)->check(CLI::Range(1, 16));
    tmpl->add_option("--twists", twists, "even number of half twists per strip");

    auto* scan = app.add_subcommand("scan", "grid scan over beta, (s,r) or (sigma,rho) as CSV");
    scan->add_option("--kind", scan_kind)->check(CLI::IsMember({"beta", "sr", "flow"}));
    scan->add_option("--lo", lo, "first axis lower end");
    scan->add_option("--hi", hi, "first axis upper end");
    scan->add_option("--cells", cells, "first axis cells")->check(CLI::Range(1, 1000000));
    scan->add_option("--lo2", lo2, "second axis lower end");
    scan->add_option("--hi2", hi2, "second axis upper end");
    scan->add_option("--cells2", cells2, "second axis cells")->check(CLI::Range(1, 1000000));
    scan->add_option("--max", max_period, "largest period for beta cells")->check(CLI::Range(1, 16));
    scan->add_option("--mu", lp.mu);
    scan->add_option("--symbols", symbols)->check(CLI::Range(2, 1000));
    scan->add_option("--threads", threads)->check(CLI::Range(1, 1024));
    fa.add(scan);

    std::vector<std::string> args(argv, argv + argc);
    try {
        args = merge_config(args);
    } catch (const IoError& e) {
        return fail(exit_io, "io", e.what());
    } catch (const std::exception& e) {
        return fail(exit_precondition, "config", e.what());
    }
    std::vector<const char*> cargv;
    for (auto& a : args)
        cargv.push_back(a.c_str());

    try {
        app.parse(int(cargv.size()), cargv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return fail(exit_precondition, "usage", e.what());
    }

    std::ostringstream out;
    int status = 0;
    try {
        if (*knead) {
            auto m = std::isnan(alpha) ? PiecewiseAffineMap(symmetric_beta(beta)) : beta_transform(beta, alpha);
            json j = kneading_json(kneading(m, symbols));
            j["beta"] = beta;
            j["alpha"] = std::isnan(alpha) ? 1 - beta / 2 : alpha;
            out << j.dump(2) << "\n";
        } else if (*classify) {
            auto c = classify_beta(beta);
            out << json{{"beta", beta},
                        {"kind", to_string(c.kind)},
                        {"interval_index", c.index},
                        {"certificate", c.certificate},
                        {"certified", c.certified},
                        {"epsilon_lo", c.eps_lo},
                        {"epsilon_hi", c.eps_hi}}
                       .dump(2)
                << "\n";
        } else if (*renorm) {
            json tower = json::array();
            for (const auto& g : renorm_tower(beta))
                tower.push_back({{"l", g.l}, {"r", g.r}, {"u", g.u}, {"v", g.v}, {"child_beta", child_beta(g)}});
            out << tower.dump(2) << "\n";
        } else if (*periods) {
            auto p = period_set(symmetric_beta(beta), max_period);
            out << json{{"beta", beta}, {"max", max_period}, {"periods", p}}.dump(2) << "\n";
        } else if (*rotation) {
            auto ri = rotation_interval_estimate(symmetric_beta(beta));
            json w = json::array();
            for (const auto& d : ri.witnesses)
                w.push_back({{"value", d.value},
                             {"num", d.num},
                             {"den", d.den},
                             {"word", d.witness ? json(d.witness->str()) : json(nullptr)}});
            out << json{{"beta", beta}, {"a", ri.a}, {"b", ri.b}, {"witnesses", w}}.dump(2) << "\n";
        } else if (*dens) {
            auto d = density(symmetric_beta(beta), terms, grid);
            out << csv_version << "density\nx,density\n";
            for (std::size_t j = 0; j < d.grid.size(); ++j)
                out << fmt(d.grid[j]) << "," << fmt(d.values[j]) << "\n";
        } else if (*hsr) {
            if (!(s > 1 && s < 2 && r > 1 && r < 2))
                throw PreconditionError("s and r must lie in (1,2)");
            auto H = two_slope_map(s, r);
            auto cb = conjugate_beta_alpha(s, r);
            json j{{"s", s},
                   {"r", r},
                   {"c", H.critical()},
                   {"in_region", in_region(s, r)},
                   {"beta", cb.beta},
                   {"alpha", cb.alpha},
                   {"kneading_prefix", {cb.plus_prefix, cb.minus_prefix}},
                   {"certificate", cb.certificate}};
            if (in_region(s, r)) {
                auto p = cycle_points(s, r);
                j["z0"] = p.z0;
                j["z1"] = p.z1;
            } else {
                j["z0"] = nullptr;
                j["z1"] = nullptr;
            }
            out << j.dump(2) << "\n";
        } else if (*hsr_region) {
            out << csv_version << "hsr-region\ns,L,U\n";
            const double top = std::sqrt(2.0);
            for (int j = 1; j <= sr_grid; ++j) {
                double sj = 1 + (top - 1) * j / sr_grid;
                auto c = region_curves(sj);
                out << fmt(sj) << "," << fmt(c.L) << "," << fmt(c.U) << "\n";
            }
        } else if (*fknead) {
            auto k = separatrix_kneading(lp, symbols, fa.o);
            out << json{{"sigma", lp.sigma},
                        {"rho", lp.rho},
                        {"mu", lp.mu},
                        {"omega0", k.omega0},
                        {"omega1", k.omega1},
                        {"omega0_raw", k.omega0_raw},
                        {"mirror_index", k.mirror_index},
                        {"status", to_string(k.status)},
                        {"fitted_beta", k.fitted_beta},
                        {"match_len", k.match_len},
                        {"realizable", k.realizable},
                        {"k10", k.k10}}
                       .dump(2)
                << "\n";
            // near-W truncation is a flag; timeout and escape are failures
            if (k.status == FlowStatus::timeout || k.status == FlowStatus::escape)
                status = exit_numerical;
        } else if (*fsweep) {
            if (!in_region_P(lp) || !in_region_P({sigma1, rho1, lp.mu}))
                throw PreconditionError("sweep endpoints must lie in region P");
            auto rows = run_cells<std::string>(points, threads, [&](std::size_t j) {
                double t = points == 1 ? 0.0 : double(j) / double(points - 1);
                LorenzParams q{lp.sigma + (sigma1 - lp.sigma) * t, lp.rho + (rho1 - lp.rho) * t, lp.mu};
                std::string row = fmt(q.sigma) + "," + fmt(q.rho) + "," + fmt(q.mu) + ",";
                try {
                    auto k = separatrix_kneading(q, symbols, fa.o);
                    return row + std::to_string(k.k10) + "," + fmt(k.fitted_beta) + "," + to_string(k.status) + ",";
                } catch (const std::exception& e) {
                    return row + ",nan,error," + cell_error(e);
                }
            });
            out << csv_version << "flow-sweep\nsigma,rho,mu,k10,fitted_beta,status,error\n";
            for (auto& row : rows)
                out << row << "\n";
        } else if (*tmpl) {
            json arr = json::array();
            for (const auto& w : enumerate_lorenz_words(std::size_t(period))) {
                auto b = lorenz_braid(w, {twists, twists});
                arr.push_back({{"word", w.str()}, {"braid", b.text()}, {"trip", trip_number(w)}, {"positive", b.positive()}});
            }
            out << arr.dump(2) << "\n";
        } else if (*scan) {
            if (!(lo < hi) || !(lo2 <= hi2))
                throw PreconditionError("scan bounds must satisfy lo < hi");
            if (double(cells) * double(cells2) > 1e6)
                throw PreconditionError("scan grid exceeds 10^6 cells");
            const std::size_t n = cells * cells2;
            auto axis = [](double a, double b, std::size_t m, std::size_t j) {
                return m == 1 ? b : a + (b - a) * double(j + 1) / double(m);
            };
            std::string header;
            std::function<std::string(std::size_t)> cell;
            if (scan_kind == "beta") {
                header = "beta,kind,interval_index,certified,period_count,error";
                cell = [&](std::size_t j) {
                    double b = axis(lo, hi, cells, j);
                    std::string row = fmt(b) + ",";
                    try {
                        auto c = classify_beta(b);
                        auto p = period_set(symmetric_beta(b), max_period);
                        return row + to_string(c.kind) + "," + std::to_string(c.index) + "," +
                               (c.certified ? "1" : "0") + "," + std::to_string(p.size()) + ",";
                    } catch (const std::exception& e) {
                        return row + ",,,," + cell_error(e);
                    }
                };
            } else if (scan_kind == "sr") {
                header = "s,r,in_region,L,U,beta,alpha,certificate,error";
                cell = [&](std::size_t j) {
                    double sj = axis(lo, hi, cells, j / cells2), rj = axis(lo2, hi2, cells2, j % cells2);
                    std::string row = fmt(sj) + "," + fmt(rj) + ",";
                    try {
                        bool inside = sj < std::sqrt(2.0) && in_region(sj, rj);
                        std::string curves = ",,";
                        if (sj > 1 && sj <= std::sqrt(2.0)) {
                            auto c = region_curves(sj);
                            curves = fmt(c.L) + "," + fmt(c.U) + ",";
                        }
                        auto cb = conjugate_beta_alpha(sj, rj);
                        return row + (inside ? "1," : "0,") + curves + fmt(cb.beta) + "," + fmt(cb.alpha) + "," +
                               (cb.certificate ? "1" : "0") + ",";
                    } catch (const std::exception& e) {
                        return row + ",,,,,," + cell_error(e);
                    }
                };
            } else {
                header = "sigma,rho,mu,status,k10,fitted_beta,match_len,error";
                cell = [&](std::size_t j) {
                    LorenzParams q{axis(lo, hi, cells, j / cells2), axis(lo2, hi2, cells2, j % cells2), lp.mu};
                    std::string row = fmt(q.sigma) + "," + fmt(q.rho) + "," + fmt(q.mu) + ",";
                    try {
                        auto k = separatrix_kneading(q, symbols, fa.o);
                        return row + to_string(k.status) + "," + std::to_string(k.k10) + "," + fmt(k.fitted_beta) + "," +
                               std::to_string(k.match_len) + ",";
                    } catch (const std::exception& e) {
                        return row + "error,,,," + cell_error(e);
                    }
                };
            }
            auto rows = run_cells<std::string>(n, threads, cell);
            out << csv_version << "scan-" << scan_kind << "\n" << header << "\n";
            for (auto& row : rows)
                out << row << "\n";
        }
    } catch (const PreconditionError& e) {
        return fail(exit_precondition, "precondition", e.what());
    } catch (const NumericalError& e) {
        return fail(exit_numerical, "numerical", e.what());
    } catch (const std::exception& e) {
        return fail(exit_numerical, "internal", e.what());
    }

    if (out_path.empty()) {
        std::cout << out.str();
    } else {
        std::ofstream f(out_path, std::ios::binary);
        if (!(f << out.str()) || !f.flush())
            return fail(exit_io, "io", "cannot write " + out_path);
    }
    return status;
}
