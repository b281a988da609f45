// Runs both baselines with the default parameters and prints the headline
// numbers of the unmitigated pandemic.

#include "epigrowth/scenario.hpp"

#include <cstdio>

int main()
{
    using namespace epigrowth;

    const ModelParams params;
    const auto [no_pandemic, no_intervention] = run_baselines(params);
    const std::vector<Date> dates{Date(2020, 12, 31), Date(2025, 12, 31), Date(2030, 12, 31)};
    const SummaryMetrics m = summarize(no_intervention, no_pandemic, dates);

    std::printf("peak active infections  %.4g on %s\n", m.peak_active_infections, m.peak_date.to_string().c_str());
    std::printf("deaths by %s   %.4g\n", no_intervention.dates.back().to_string().c_str(), m.total_deaths);
    std::printf("largest output drop     %.1f%% on %s\n", m.max_output_drop_pct,
                m.max_output_drop_date.to_string().c_str());
    for (const auto& [date, ratio] : m.output_ratio_at) {
        std::printf("output vs no pandemic   %.3f on %s\n", ratio, date.to_string().c_str());
    }
    return 0;
}
