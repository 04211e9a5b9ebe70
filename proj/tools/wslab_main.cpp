// wslab: command-line laboratory for weak slice conditions on decorated
// planar domains. Subcommands build domains, answer metric queries, check
// slice datasets, and run the packaged experiment scenarios.

#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "wslab/decorations.hpp"
#include "wslab/errors.hpp"
#include "wslab/experiments.hpp"
#include "wslab/grid.hpp"
#include "wslab/io.hpp"
#include "wslab/metrics.hpp"
#include "wslab/slices.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

constexpr const char* kToolVersion = "wslab 1.0.0";

using namespace wslab;

struct UsageError {
    std::string message;
};

const char* verdict_str(Verdict v) {
    switch (v) {
        case Verdict::Pass: return "pass";
        case Verdict::Fail: return "fail";
        default: return "approx";
    }
}

Point2 parse_point(const std::string& flag, const std::string& s) {
    double x = 0.0, y = 0.0;
    char tail = 0;
    if (std::sscanf(s.c_str(), "%lf,%lf%c", &x, &y, &tail) != 2)
        throw UsageError{flag + ": expected 'x,y' decimals, got '" + s + "'"};
    return {x, y};
}

std::vector<double> parse_double_list(const std::string& flag, const std::string& s) {
    std::vector<double> out;
    size_t pos = 0;
    while (pos < s.size()) {
        size_t next = s.find(',', pos);
        if (next == std::string::npos) next = s.size();
        std::string item = s.substr(pos, next - pos);
        try {
            size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw UsageError{flag + ": expected comma-separated decimals, got '" + item + "'"};
        }
        pos = next + 1;
    }
    if (out.empty()) throw UsageError{flag + ": empty list"};
    return out;
}

// "a..b" inclusive integer range, or a comma-separated list
std::vector<int> parse_int_range(const std::string& flag, const std::string& s) {
    std::vector<int> out;
    size_t dots = s.find("..");
    if (dots != std::string::npos) {
        int a = 0, b = 0;
        char tail = 0;
        if (std::sscanf(s.c_str(), "%d..%d%c", &a, &b, &tail) != 2 || a > b)
            throw UsageError{flag + ": expected 'a..b' with a <= b, got '" + s + "'"};
        for (int v = a; v <= b; ++v) out.push_back(v);
        return out;
    }
    size_t pos = 0;
    while (pos < s.size()) {
        size_t next = s.find(',', pos);
        if (next == std::string::npos) next = s.size();
        std::string item = s.substr(pos, next - pos);
        try {
            size_t used = 0;
            out.push_back(std::stoi(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw UsageError{flag + ": expected integers or 'a..b', got '" + item + "'"};
        }
        pos = next + 1;
    }
    if (out.empty()) throw UsageError{flag + ": empty list"};
    return out;
}

std::vector<double> default_alphas() {
    std::vector<double> out;
    for (int k = 0; k < 16; ++k) out.push_back(k / 16.0);
    return out;
}

bool wants(const std::vector<std::string>& formats, const char* what) {
    for (const auto& f : formats)
        if (f == what) return true;
    return false;
}

struct OutputSink {
    std::string dir;
    std::vector<std::string> formats;
    std::string command;

    void write(const std::string& name, const std::string& text) const {
        std::filesystem::create_directories(dir);
        std::string path = dir + "/" + name;
        write_text_atomic(path, text);
        std::printf("wrote %s\n", path.c_str());
    }

    // provenance sidecar: tool version + the full parameter echo
    void provenance(const std::string& base, const std::string& echo) const {
        std::string o = "{\"kind\":\"provenance\",\"tool\":\"";
        o += kToolVersion;
        o += "\",\"command\":\"";
        o += command;
        o += "\",\"params\":";
        // reuse the JSON string quoting from the domain serializer by hand:
        // echoes are plain ASCII key=value strings, quotes suffice
        std::string esc;
        for (char c : echo) {
            if (c == '"' || c == '\\') esc += '\\';
            esc += c;
        }
        o += "\"" + esc + "\"}\n";
        write(base + ".run.json", o);
    }
};

DecoratedSquareSpec spec_from_flags(const std::string& family, double alpha0,
                                    double alpha1, double p, double q, int jmin,
                                    int jmax, const std::vector<double>& a_list) {
    DonorParams d;
    d.family = family_from_tag(family);
    d.alpha0 = alpha0;
    d.alpha1 = alpha1;
    d.p = p;
    d.q = q;
    DecoratedSquareSpec spec;
    spec.donors = {d};
    spec.mode = CombineMode::Single;
    spec.j_min = jmin;
    spec.j_max = jmax;
    spec.a_list = a_list;
    return spec;
}

int emit_experiment(const ExperimentReport& rep, const OutputSink& sink,
                    const PlanarDomain* figure_domain) {
    std::string base = output_basename(rep.scenario, rep.params_echo);
    if (wants(sink.formats, "report")) sink.write(base + ".json", experiment_to_json(rep));
    if (wants(sink.formats, "table")) sink.write(base + ".csv", experiment_to_csv(rep));
    if (wants(sink.formats, "figure") && figure_domain) {
        SvgOptions opt;
        opt.draw_midlines = true;
        sink.write(base + ".svg", domain_to_svg(*figure_domain, opt));
    }
    sink.provenance(base, rep.params_echo);
    for (const CheckReport& cr : rep.checks)
        std::printf("%-32s %s\n", cr.scenario.c_str(), verdict_str(cr.overall()));
    std::printf("overall: %s\n", verdict_str(rep.overall));
    return rep.overall == Verdict::Fail ? 1 : 0;
}

int emit_check(const CheckReport& rep, const OutputSink& sink,
               const std::string& echo, const PlanarDomain& dom,
               const WsliceDataset& ds) {
    std::string base = output_basename(rep.scenario, echo);
    if (wants(sink.formats, "report")) sink.write(base + ".json", check_report_to_json(rep));
    if (wants(sink.formats, "figure")) {
        SvgOptions opt;
        for (const SliceRegion& s : ds.slices) opt.overlay_regions.push_back(s.shape);
        opt.overlay_points = {ds.x, ds.y};
        sink.write(base + ".svg", domain_to_svg(dom, opt));
    }
    sink.provenance(base, echo);
    int failed = 0;
    for (const CheckEntry& e : rep.entries) {
        if (e.verdict == Verdict::Fail) {
            ++failed;
            std::printf("fail: %s\n", e.condition.c_str());
        }
    }
    std::printf("%zu conditions checked, %d failed, overall: %s\n",
                rep.entries.size(), failed, verdict_str(rep.overall()));
    return rep.overall() == Verdict::Fail ? 1 : 0;
}

// window covering the dataset content with a proportional margin
Bbox dataset_window(const WsliceDataset& ds) {
    Bbox w{ds.x.x, ds.x.y, ds.x.x, ds.x.y};
    auto grow = [&w](Point2 p) {
        w.x0 = std::min(w.x0, p.x);
        w.y0 = std::min(w.y0, p.y);
        w.x1 = std::max(w.x1, p.x);
        w.y1 = std::max(w.y1, p.y);
    };
    grow(ds.y);
    for (const SliceRegion& s : ds.slices)
        for (Point2 p : s.shape) grow(p);
    double pad = 0.05 * std::max(w.x1 - w.x0, w.y1 - w.y0);
    if (pad <= 0.0) pad = 0.5;
    return {w.x0 - pad, w.y0 - pad, w.x1 + pad, w.y1 + pad};
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"laboratory for weak slice conditions on decorated planar domains"};
    app.set_version_flag("--version", kToolVersion);
    app.set_config("--config", "", "read option defaults from an INI file (flags override)");
    app.require_subcommand(1);

    int threads = 0;
    app.add_option("--threads", threads, "cap OpenMP worker threads (0 = library default)");

    std::string out_dir = ".";
    std::vector<std::string> formats = {"report", "table", "figure"};
    auto add_common = [&](CLI::App* s) {
        s->add_option("--out-dir", out_dir, "output directory")
            ->envname("WSLAB_OUT_DIR")
            ->capture_default_str();
        s->add_option("--formats", formats, "requested outputs")
            ->delimiter(',')
            ->check(CLI::IsMember({"report", "table", "figure"}));
    };
    const std::vector<std::string> family_tags = {"ex32", "thm43", "ex44", "ex45", "ex46"};

    // ---- gen-domain
    struct {
        std::string family = "ex32";
        double alpha0 = 0.5, alpha1 = 0.75, p = 3.0, q = 6.0;
        int jmin = 2, jmax = 4;
        std::vector<double> a_list;
    } gd;
    CLI::App* sgen = app.add_subcommand("gen-domain", "build a decorated-square domain file and figure");
    sgen->add_option("--family", gd.family, "decoration family tag")
        ->check(CLI::IsMember(family_tags))
        ->capture_default_str();
    sgen->add_option("--alpha0", gd.alpha0, "family exponent parameter")->capture_default_str();
    sgen->add_option("--alpha1", gd.alpha1, "second exponent (two-layer family only)")->capture_default_str();
    sgen->add_option("--p", gd.p, "extent exponent")->capture_default_str();
    sgen->add_option("--q", gd.q, "width exponent")->capture_default_str();
    sgen->add_option("--jmin", gd.jmin, "first decoration index")->capture_default_str();
    sgen->add_option("--jmax", gd.jmax, "last decoration index")->capture_default_str();
    sgen->add_option("--a-list", gd.a_list, "explicit attachment heights, one per index")
        ->delimiter(',');
    add_common(sgen);

    // ---- dist
    struct {
        std::string domain_file, xs, ys, window;
        double alpha = 0.0, h = 0.0;
    } di;
    CLI::App* sdist = app.add_subcommand("dist", "grid distance between two points in a domain file");
    sdist->add_option("--domain", di.domain_file, "domain JSON file")->required();
    sdist->add_option("--x", di.xs, "first point as 'x,y'")->required();
    sdist->add_option("--y", di.ys, "second point as 'x,y'")->required();
    sdist->add_option("--alpha", di.alpha, "metric exponent in [0,1]")->capture_default_str();
    sdist->add_option("--mesh", di.h, "mesh width (0 = automatic)")->capture_default_str();
    sdist->add_option("--window", di.window, "grid window as 'x0,y0,x1,y1' (default: domain box)");
    add_common(sdist);

    // ---- check-wslice / check-slice
    struct {
        std::string domain_file, dataset_file, path_file;
        double h = 0.0;
    } cw, cs;
    CLI::App* scheck = app.add_subcommand("check-wslice", "evaluate a slice dataset against its domain");
    scheck->add_option("--domain", cw.domain_file, "domain JSON file")->required();
    scheck->add_option("--dataset", cw.dataset_file, "dataset JSON file")->required();
    scheck->add_option("--mesh", cw.h, "mesh width (0 = automatic)")->capture_default_str();
    add_common(scheck);

    CLI::App* sslice = app.add_subcommand("check-slice", "evaluate the four-part slice condition");
    sslice->add_option("--domain", cs.domain_file, "domain JSON file")->required();
    sslice->add_option("--dataset", cs.dataset_file, "dataset JSON file")->required();
    sslice->add_option("--path", cs.path_file, "path-estimate JSON file with the candidate route");
    sslice->add_option("--mesh", cs.h, "mesh width (0 = automatic)")->capture_default_str();
    add_common(sslice);

    // ---- experiment scenarios
    CLI::App* sexp = app.add_subcommand("experiment", "run a packaged experiment scenario");
    sexp->require_subcommand(1);

    struct {
        int jmin = 2, jmax = 3, pairs = 50;
        double c_cap = 32.0;
        uint64_t seed = 1;
    } e32;
    CLI::App* x32 = sexp->add_subcommand("ex32", "seeded positive checks on the original decoration");
    x32->add_option("--jmin", e32.jmin)->capture_default_str();
    x32->add_option("--jmax", e32.jmax)->capture_default_str();
    x32->add_option("--pairs", e32.pairs, "sampled pairs per decoration")->capture_default_str();
    x32->add_option("--c-cap", e32.c_cap, "largest constant tried")->capture_default_str();
    x32->add_option("--seed", e32.seed)->capture_default_str();
    add_common(x32);

    struct {
        int jmin = 2, jmax = 4;
        double C = 10.0;
    } e43;
    CLI::App* x43 = sexp->add_subcommand("thm43", "designed failure pair scan across decorations");
    x43->add_option("--jmin", e43.jmin)->capture_default_str();
    x43->add_option("--jmax", e43.jmax)->capture_default_str();
    x43->add_option("--C", e43.C, "constant the witness argues against")->capture_default_str();
    add_common(x43);

    struct {
        std::string family = "thm43", alphas, js = "2..12";
        double alpha0 = 0.5, p = 3.0, q = 6.0;
        int grid_jmax = 0;
        uint64_t seed = 1;
    } esc;
    CLI::App* xsc = sexp->add_subcommand("scaling", "exact trip costs and the log-ratio identity");
    xsc->add_option("--family", esc.family)->check(CLI::IsMember(family_tags))->capture_default_str();
    xsc->add_option("--alpha0", esc.alpha0)->capture_default_str();
    xsc->add_option("--p", esc.p)->capture_default_str();
    xsc->add_option("--q", esc.q)->capture_default_str();
    xsc->add_option("--alphas", esc.alphas, "comma-separated exponents (default 0,0.1,..,0.9)");
    xsc->add_option("--js", esc.js, "decoration indices, 'a..b' or list")->capture_default_str();
    xsc->add_option("--grid-jmax", esc.grid_jmax, "measure grids for j up to this (0 = none)")
        ->capture_default_str();
    xsc->add_option("--seed", esc.seed)->capture_default_str();
    add_common(xsc);

    struct AlphaSetOpts {
        std::string family, alphas, grid_js;
        double alpha0 = 0.5, alpha1 = 0.75, p = 3.0, q = 6.0;
        int jmin = 2, jmax = 4;
    };
    AlphaSetOpts eas;
    CLI::App* xas = sexp->add_subcommand("alpha-set", "exact admissible-exponent classification");
    xas->add_option("--family", eas.family, "decoration family tag")
        ->check(CLI::IsMember(family_tags))
        ->required();
    xas->add_option("--alpha0", eas.alpha0)->capture_default_str();
    xas->add_option("--alpha1", eas.alpha1)->capture_default_str();
    xas->add_option("--p", eas.p)->capture_default_str();
    xas->add_option("--q", eas.q)->capture_default_str();
    xas->add_option("--jmin", eas.jmin)->capture_default_str();
    xas->add_option("--jmax", eas.jmax)->capture_default_str();
    xas->add_option("--alphas", eas.alphas, "sampled exponents (default 0,1/16,..,15/16)");
    xas->add_option("--grid-js", eas.grid_js, "indices to corroborate on grids, 'a..b' or list");
    add_common(xas);

    AlphaSetOpts e44; // same flags, family pinned
    CLI::App* x44 = sexp->add_subcommand("ex44", "exponent classification of the long-approach family");
    x44->add_option("--alpha0", e44.alpha0)->capture_default_str();
    x44->add_option("--p", e44.p)->capture_default_str();
    x44->add_option("--q", e44.q)->capture_default_str();
    x44->add_option("--jmin", e44.jmin)->capture_default_str();
    x44->add_option("--jmax", e44.jmax)->capture_default_str();
    x44->add_option("--alphas", e44.alphas, "sampled exponents (default 0,1/16,..,15/16)");
    x44->add_option("--grid-js", e44.grid_js, "indices to corroborate on grids");
    add_common(x44);

    AlphaSetOpts e46;
    CLI::App* x46 = sexp->add_subcommand("ex46", "exponent classification of the two-layer family");
    x46->add_option("--alpha0", e46.alpha0)->capture_default_str();
    x46->add_option("--alpha1", e46.alpha1)->capture_default_str();
    x46->add_option("--p", e46.p)->capture_default_str();
    x46->add_option("--q", e46.q)->capture_default_str();
    x46->add_option("--jmin", e46.jmin)->capture_default_str();
    x46->add_option("--jmax", e46.jmax)->capture_default_str();
    x46->add_option("--alphas", e46.alphas, "sampled exponents (default 0,1/16,..,15/16)");
    x46->add_option("--grid-js", e46.grid_js, "indices to corroborate on grids");
    add_common(x46);

    struct {
        std::string js = "2..8";
        double alpha0 = 0.5, p = 3.0, q = 6.0;
    } e45;
    CLI::App* x45 = sexp->add_subcommand("ex45", "trip-cost trajectories of the width-modified family");
    x45->add_option("--alpha0", e45.alpha0)->capture_default_str();
    x45->add_option("--p", e45.p)->capture_default_str();
    x45->add_option("--q", e45.q)->capture_default_str();
    x45->add_option("--js", e45.js, "decoration indices, 'a..b' or list")->capture_default_str();
    add_common(x45);

    struct {
        std::string family_a, family_b, mode = "union", alphas;
        double alpha0_a = 0.5, alpha0_b = 0.5, alpha1_a = 0.75, alpha1_b = 0.75;
        double p_a = 3.0, q_a = 6.0, p_b = 3.0, q_b = 6.0;
        int jmin = 2, jmax = 4;
    } ecb;
    CLI::App* xcb = sexp->add_subcommand("combine", "set algebra of two decoration families");
    xcb->add_option("--family-a", ecb.family_a)->check(CLI::IsMember(family_tags))->required();
    xcb->add_option("--family-b", ecb.family_b)->check(CLI::IsMember(family_tags))->required();
    xcb->add_option("--mode", ecb.mode)->check(CLI::IsMember({"union", "intersection"}))
        ->capture_default_str();
    xcb->add_option("--alpha0-a", ecb.alpha0_a)->capture_default_str();
    xcb->add_option("--alpha0-b", ecb.alpha0_b)->capture_default_str();
    xcb->add_option("--alpha1-a", ecb.alpha1_a)->capture_default_str();
    xcb->add_option("--alpha1-b", ecb.alpha1_b)->capture_default_str();
    xcb->add_option("--p-a", ecb.p_a)->capture_default_str();
    xcb->add_option("--q-a", ecb.q_a)->capture_default_str();
    xcb->add_option("--p-b", ecb.p_b)->capture_default_str();
    xcb->add_option("--q-b", ecb.q_b)->capture_default_str();
    xcb->add_option("--jmin", ecb.jmin)->capture_default_str();
    xcb->add_option("--jmax", ecb.jmax)->capture_default_str();
    xcb->add_option("--alphas", ecb.alphas, "sampled exponents (default 0,1/16,..,15/16)");
    add_common(xcb);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help / --version
        std::fprintf(stderr, "usage error: %s\n", e.what());
        return 2;
    }

#ifdef _OPENMP
    if (threads > 0) omp_set_num_threads(threads);
#endif

    try {
        OutputSink sink{out_dir, formats, ""};

        if (sgen->parsed()) {
            sink.command = "gen-domain";
            DecoratedSquareSpec spec =
                spec_from_flags(gd.family, gd.alpha0, gd.alpha1, gd.p, gd.q,
                                gd.jmin, gd.jmax, gd.a_list);
            PlanarDomain dom = build_domain(spec);
            std::string echo = spec_canonical_echo(spec);
            std::string base = output_basename("domain", echo);
            if (wants(formats, "report")) sink.write(base + ".json", domain_to_json(dom));
            if (wants(formats, "figure")) {
                SvgOptions opt;
                opt.draw_midlines = true;
                sink.write(base + ".svg", domain_to_svg(dom, opt));
            }
            sink.provenance(base, echo);
            return 0;
        }

        if (sdist->parsed()) {
            sink.command = "dist";
            std::string text = read_text(di.domain_file);
            PlanarDomain dom = domain_from_json(text);
            Point2 x = parse_point("--x", di.xs);
            Point2 y = parse_point("--y", di.ys);
            Bbox w = dom.box;
            if (!di.window.empty()) {
                std::vector<double> v = parse_double_list("--window", di.window);
                if (v.size() != 4 || v[0] >= v[2] || v[1] >= v[3])
                    throw UsageError{"--window: expected 'x0,y0,x1,y1' with x0<x1, y0<y1"};
                w = {v[0], v[1], v[2], v[3]};
            }
            double h = di.h > 0.0 ? di.h : auto_h(dom, w);
            GridGraph g = build_grid(dom, w, h);
            PathEstimate pe = d_alpha_grid(g, x, y, di.alpha);
            std::printf("d_alpha = %.12g  (alpha=%g, h=%g, %zu path vertices)\n",
                        pe.value, di.alpha, h, pe.vertices.size());
            std::string echo = "domain=" + hex8(fnv1a64(text)) + ";x=" + di.xs +
                               ";y=" + di.ys + ";alpha=" + g17(di.alpha) +
                               ";h=" + g17(h) + ";window=" + g17(w.x0) + "," +
                               g17(w.y0) + "," + g17(w.x1) + "," + g17(w.y1);
            std::string base = output_basename("dist", echo);
            if (wants(formats, "report")) sink.write(base + ".json", path_to_json(pe));
            if (wants(formats, "figure")) {
                SvgOptions opt;
                opt.overlay_paths = {pe.vertices};
                opt.overlay_points = {x, y};
                sink.write(base + ".svg", domain_to_svg(dom, opt));
            }
            sink.provenance(base, echo);
            return 0;
        }

        if (scheck->parsed() || sslice->parsed()) {
            bool full = sslice->parsed();
            auto& o = full ? cs : cw;
            sink.command = full ? "check-slice" : "check-wslice";
            std::string dom_text = read_text(o.domain_file);
            std::string ds_text = read_text(o.dataset_file);
            PlanarDomain dom = domain_from_json(dom_text);
            WsliceDataset ds = dataset_from_json(ds_text);
            Bbox w = dataset_window(ds);
            double h = o.h > 0.0 ? o.h : auto_h(dom, w);
            GridGraph g = build_grid(dom, w, h);
            std::string echo = "domain=" + hex8(fnv1a64(dom_text)) +
                               ";dataset=" + hex8(fnv1a64(ds_text)) + ";h=" + g17(h);
            CheckReport rep;
            if (full) {
                Polyline route;
                const Polyline* route_ptr = nullptr;
                if (!o.path_file.empty()) {
                    route = path_from_json(read_text(o.path_file)).vertices;
                    route_ptr = &route;
                    echo += ";path=" + hex8(fnv1a64(o.path_file));
                }
                rep = check_slice_condition(dom, g, ds, route_ptr);
            } else {
                rep = evaluate_dataset(dom, g, ds);
            }
            return emit_check(rep, sink, echo, dom, ds);
        }

        if (x32->parsed()) {
            sink.command = "experiment ex32";
            ExperimentReport rep =
                run_positive_checks(e32.jmin, e32.jmax, e32.pairs, e32.c_cap, e32.seed);
            PlanarDomain dom =
                build_domain(single_spec(Family::Ex32, 0.5, e32.jmin, e32.jmax));
            return emit_experiment(rep, sink, &dom);
        }

        if (x43->parsed()) {
            sink.command = "experiment thm43";
            ExperimentReport rep = run_witness_scan(e43.jmin, e43.jmax, e43.C);
            PlanarDomain dom = build_domain(
                single_spec(Family::Thm43ThinShort, 0.5, e43.jmin, e43.jmax));
            return emit_experiment(rep, sink, &dom);
        }

        if (xsc->parsed()) {
            sink.command = "experiment scaling";
            std::vector<double> alphas =
                esc.alphas.empty()
                    ? std::vector<double>{0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9}
                    : parse_double_list("--alphas", esc.alphas);
            std::vector<int> js = parse_int_range("--js", esc.js);
            ExperimentReport rep =
                scaling_table(family_from_tag(esc.family), esc.alpha0, esc.p, esc.q,
                              alphas, js, esc.grid_jmax, esc.seed);
            return emit_experiment(rep, sink, nullptr);
        }

        auto run_alpha_set_cmd = [&](const AlphaSetOpts& o, const std::string& family,
                                     const char* cmd) {
            sink.command = cmd;
            std::vector<double> alphas = o.alphas.empty()
                                             ? default_alphas()
                                             : parse_double_list("--alphas", o.alphas);
            std::vector<int> js;
            if (!o.grid_js.empty()) js = parse_int_range("--grid-js", o.grid_js);
            DecoratedSquareSpec spec = spec_from_flags(family, o.alpha0, o.alpha1,
                                                       o.p, o.q, o.jmin, o.jmax, {});
            ExperimentReport rep = run_alpha_set(spec, alphas, js);
            PlanarDomain dom = build_domain(spec);
            return emit_experiment(rep, sink, &dom);
        };
        if (xas->parsed()) return run_alpha_set_cmd(eas, eas.family, "experiment alpha-set");
        if (x44->parsed()) return run_alpha_set_cmd(e44, "ex44", "experiment ex44");
        if (x46->parsed()) return run_alpha_set_cmd(e46, "ex46", "experiment ex46");

        if (x45->parsed()) {
            sink.command = "experiment ex45";
            std::vector<int> js = parse_int_range("--js", e45.js);
            ExperimentReport rep = run_width_modifier_study(e45.alpha0, e45.p, e45.q, js);
            PlanarDomain dom = build_domain(
                single_spec(Family::Ex45, e45.alpha0, js.front(),
                            std::min(js.front() + 2, js.back()), e45.p, e45.q));
            return emit_experiment(rep, sink, &dom);
        }

        if (xcb->parsed()) {
            sink.command = "experiment combine";
            std::vector<double> alphas = ecb.alphas.empty()
                                             ? default_alphas()
                                             : parse_double_list("--alphas", ecb.alphas);
            DecoratedSquareSpec a =
                spec_from_flags(ecb.family_a, ecb.alpha0_a, ecb.alpha1_a, ecb.p_a,
                                ecb.q_a, ecb.jmin, ecb.jmax, {});
            DecoratedSquareSpec b =
                spec_from_flags(ecb.family_b, ecb.alpha0_b, ecb.alpha1_b, ecb.p_b,
                                ecb.q_b, ecb.jmin, ecb.jmax, {});
            CombineMode mode = ecb.mode == "union" ? CombineMode::Union
                                                   : CombineMode::Intersection;
            ExperimentReport rep = run_combine(a, b, mode, alphas);
            return emit_experiment(rep, sink, nullptr);
        }

        std::fprintf(stderr, "usage error: no subcommand\n");
        return 2;
    } catch (const UsageError& e) {
        std::fprintf(stderr, "usage error: %s\n", e.message.c_str());
        return 2;
    } catch (const BadFile& e) {
        std::fprintf(stderr, "file error: %s\n", e.what());
        return 2;
    } catch (const Error& e) {
        std::fprintf(stderr, "spec error: %s\n", e.what());
        return 2;
    }
}
