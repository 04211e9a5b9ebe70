// Compares the serial reference kernels against the OpenMP ones: grid
// construction over the decorated square at several resolutions, then a
// batch of slice measurements on the finest grid. Wall-clock only; the
// equality of results is asserted (cheaply) along the way.

#include <chrono>
#include <cstdio>
#include <cstdlib>

#include "wslab/decorations.hpp"
#include "wslab/grid.hpp"
#include "wslab/metrics.hpp"
#include "wslab/slices.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace wslab;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

} // namespace

int main(int argc, char** argv) {
    int jmax = argc > 1 ? std::atoi(argv[1]) : 3;
    if (jmax < 2) jmax = 2;

#ifdef _OPENMP
    std::printf("OpenMP enabled, max threads %d\n", omp_get_max_threads());
#else
    std::printf("OpenMP not enabled in this build\n");
#endif

    DecoratedSquareSpec spec = single_spec(Family::Ex32, 0.5, 2, jmax);
    PlanarDomain dom = build_domain(spec);

    const double scales[] = {1.0, 0.5, 0.25};
    GridGraph finest;
    for (double s : scales) {
        const DecorationLandmarks& d = dom.landmarks.decorations.back();
        double h = s * d.min_width / 8.0;
        Bbox w{0.5, d.a - 4 * d.min_width, d.x_right + 4 * h,
               d.a + (d.box.y1 - d.a) + 4 * d.min_width};

        auto t0 = Clock::now();
        GridGraph gs = build_grid(dom, w, h, ExecMode::Serial);
        double ts = seconds_since(t0);

        t0 = Clock::now();
        GridGraph gp = build_grid(dom, w, h, ExecMode::OpenMP);
        double tp = seconds_since(t0);

        if (gs.size() != gp.size() || gs.adj_to.size() != gp.adj_to.size()) {
            std::printf("MISMATCH at h=%g: serial %zu nodes / %zu arcs, "
                        "parallel %zu nodes / %zu arcs\n",
                        h, gs.size(), gs.adj_to.size(), gp.size(), gp.adj_to.size());
            return 1;
        }
        std::printf("build_grid  h=%-10.3g %9zu nodes %10zu arcs   "
                    "serial %7.3fs   openmp %7.3fs   speedup %.2fx\n",
                    h, gs.size(), gs.adj_to.size(), ts, tp, ts / (tp > 0 ? tp : 1e-9));
        finest = std::move(gp);
    }

    // slice measurement batch on the finest grid: j = 2 corridor datasets
    const DecorationLandmarks& d2 = *dom.landmarks.find(2);
    double r2 = d2.diagonal.r;
    Point2 y{d2.x_left + 0.25 * (d2.x_right - d2.x_left), d2.a + 1.5 * r2};
    Point2 z{y.x, d2.a - 1.5 * r2};

    auto t0 = Clock::now();
    WsliceDataset ds = admissible_for_pair(dom, finest, 2, y, z);
    PairMeasurements m = measure_pair(dom, finest, ds);
    double tm = seconds_since(t0);
    double least = min_passing_C(m, ds.alpha).value_or(-1.0);
    std::printf("measure_pair: %zu slices in %.3fs, least passing constant %.3f\n",
                ds.slices.size(), tm, least);
    return 0;
}
