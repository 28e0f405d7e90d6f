// Benchmark comparing the serial reference kernels against the OpenMP paths:
// band sweep of the preservation check, join-partition labeling, and the
// scale-monotonicity decision. Each workload is verified to produce the same
// result on both paths before the timing is reported.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

#include "plmaps/entropy.hpp"
#include "plmaps/measure.hpp"
#include "plmaps/perturb.hpp"
#include "plmaps/plmap.hpp"

using plm::Exec;
using plm::PLMap;
using plm::Rat;

namespace {

double seconds(const std::function<void()>& fn) {
    auto start = std::chrono::steady_clock::now();
    fn();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void row(const std::string& name, double serial, double parallel, bool same) {
    std::printf("%-34s %10.3fs %10.3fs %8.2fx %s\n", name.c_str(), serial, parallel,
                parallel > 0 ? serial / parallel : 0.0, same ? "match" : "MISMATCH");
}

}  // namespace

int main() {
    std::printf("%-34s %11s %11s %9s %s\n", "workload", "serial", "parallel", "speedup",
                "results");

    {
        // 63 weight bands over roughly ten thousand segments.
        PLMap f = plm::perturb::nowhere_monotone_perturb(plm::maps::skeleton(), 2, Rat(1, 20))
                      .map;
        plm::measure::PreservationVerdict a, b;
        double ts = seconds([&] { a = plm::measure::check_measure_preserving(f, Exec::serial); });
        double tp =
            seconds([&] { b = plm::measure::check_measure_preserving(f, Exec::parallel); });
        row("preservation bands (skeleton F)", ts, tp, a.preserving == b.preserving);
    }

    {
        PLMap f = plm::maps::tent();
        plm::entropy::Partition p = plm::entropy::dyadic_partition(4);
        plm::entropy::LabeledPartition a, b;
        plm::entropy::JoinOptions serial_opts{plm::Budgets{}.cuts, Exec::serial};
        plm::entropy::JoinOptions parallel_opts{plm::Budgets{}.cuts, Exec::parallel};
        double ts = seconds([&] { a = plm::entropy::join_partition(f, p, 14, serial_opts); });
        double tp = seconds([&] { b = plm::entropy::join_partition(f, p, 14, parallel_opts); });
        bool same = a.cuts == b.cuts && a.words == b.words && a.groups.size() == b.groups.size();
        row("join labeling (tent, i=4, n=14)", ts, tp, same);
    }

    {
        PLMap base = plm::maps::skeleton();
        auto built = plm::perturb::nowhere_monotone_perturb(base, 4, Rat(3, 10));
        bool a = false, b = false;
        double ts = seconds([&] {
            a = plm::perturb::nowhere_monotone_at_scale(built.map, 4,
                                                        {plm::Budgets{}.cells, Exec::serial});
        });
        double tp = seconds([&] {
            b = plm::perturb::nowhere_monotone_at_scale(built.map, 4,
                                                        {plm::Budgets{}.cells, Exec::parallel});
        });
        row("monotonicity cells (skeleton F)", ts, tp, a == b);
    }

    return 0;
}
