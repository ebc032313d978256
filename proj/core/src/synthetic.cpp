#include "socbench/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace soc {

// Desk-scale stand-in for real driving-trip data. Each trip draws a positive
// current signal; SOC follows by coulomb counting, so it is non-increasing
// within a trip. Voltage tracks SOC minus an IR drop, temperature drifts with
// accumulated I^2 heat, and the remaining features are pure-noise distractors.
Frame generate_synthetic(std::size_t n_rows, std::size_t n_features, std::uint64_t seed) {
    if (n_rows < 10 || n_features < 3)
        throw Error(ErrorCode::InvalidSize, "need n_rows >= 10 and n_features >= 3");

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    std::vector<double> trip_id(n_rows), current(n_rows), voltage(n_rows), temperature(n_rows);
    std::vector<double> target(n_rows);
    const std::size_t n_noise = n_features - 3;
    std::vector<std::vector<double>> noise(n_noise, std::vector<double>(n_rows));

    // battery: 60 Ah pack, 1 s sampling => percent per amp-second
    const double pct_per_amp_step = 100.0 / (60.0 * 3600.0);

    std::size_t row = 0;
    std::size_t trip = 0;
    while (row < n_rows) {
        const std::size_t trip_len =
            std::min(n_rows - row, 150 + static_cast<std::size_t>(unit(rng) * 250.0));
        double soc = 60.0 + 40.0 * unit(rng);
        double draw = 30.0 + 20.0 * unit(rng);  // AR(1) current level
        double heat = 0.0;
        double floor_soc = 101.0;
        for (std::size_t t = 0; t < trip_len; ++t, ++row) {
            draw = 0.9 * draw + 0.1 * 40.0 + 8.0 * gauss(rng);
            const double amps = std::max(0.0, draw);
            soc = std::clamp(soc - amps * pct_per_amp_step * 2.0, 0.0, 100.0);
            heat += amps * amps * 1e-4;

            trip_id[row] = static_cast<double>(trip);
            current[row] = amps;
            voltage[row] = 3.0 + 0.01 * soc - 0.0002 * amps + 0.001 * gauss(rng);
            temperature[row] = 22.0 + 0.005 * heat + 0.1 * gauss(rng);

            // bounded measurement noise, kept non-increasing within the trip
            double measured = soc + 0.05 * (2.0 * unit(rng) - 1.0);
            measured = std::min(measured, floor_soc);
            floor_soc = measured;
            target[row] = std::clamp(measured, 0.0, 100.0);
        }
        ++trip;
    }

    for (auto& col : noise)
        for (double& x : col) x = gauss(rng);

    std::vector<std::string> names = {"trip_id", "current", "voltage", "temperature"};
    std::vector<std::vector<double>> columns = {std::move(trip_id), std::move(current),
                                                std::move(voltage), std::move(temperature)};
    for (std::size_t j = 0; j < n_noise; ++j) {
        names.push_back("noise_" + std::to_string(j));
        columns.push_back(std::move(noise[j]));
    }
    names.push_back("soc");
    columns.push_back(std::move(target));
    return Frame(std::move(names), std::move(columns), "soc");
}

}  // namespace soc
