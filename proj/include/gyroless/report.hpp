#pragma once

#include <ostream>
#include <span>
#include <string>

#include "gyroless/scenario.hpp"

namespace gyroless {

/// Exact CSV header of write_csv.
inline constexpr const char* kCsvHeader =
    "t,w1,w2,w3,wh1,wh2,wh3,werr,a1,a2,a3,b1,b2,b3,ah1,ah2,ah3,bh1,bh2,bh3";

/// One row per sensor sample: true omega, estimate, |omega~|, measured body-frame
/// a and b, and the estimates a_hat, b_hat. 17 significant digits.
void write_csv(std::ostream& os, const RunResult& run);

/// gnuplot script plotting omega, its estimate and log |omega~| from `csv_path`.
void write_gnuplot_script(std::ostream& os, const std::string& csv_path);

/// Machine-readable run summary (certificate, fit, terminal error) as JSON.
[[nodiscard]] std::string run_summary_json(const RunResult& run);

/// Certificate as a JSON object.
[[nodiscard]] std::string certificate_json(const GainCertificate& cert);

/// CSV table (value is the swept quantity): value,k,k_star,decay_rate,terminal_error,steady_state_variance,ensemble.
void write_sweep_table(std::ostream& os, std::span<const SweepRow> rows);

}  // namespace gyroless
