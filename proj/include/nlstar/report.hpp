#pragma once

// CSV output for experiment records, summaries, trajectories and sweeps.

#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "nlstar/experiment.hpp"
#include "nlstar/format.hpp"

namespace nlstar {

inline constexpr const char* records_csv_header =
    "dfa_id,noise_kind,p,d_A_MN,d_A_AE,d_MN_AE,gain,gain_class,rounds,terminated_by,eld,wall_ms";

inline void write_records_csv(std::ostream& out, const std::vector<ExperimentRecord>& records) {
  out << records_csv_header << '\n';
  for (const auto& r : records) {
    out << r.dfa_id << ',' << to_string(r.noise) << ',' << (r.p ? format_double(*r.p) : "") << ','
        << format_double(r.d_a_mn.value) << ',' << format_double(r.d_a_ae.value) << ','
        << format_double(r.d_mn_ae.value) << ',' << format_double(r.gain) << ',' << to_string(r.gain_class) << ','
        << r.rounds << ',' << to_string(r.terminated_by) << ',' << (r.eld ? (*r.eld ? "yes" : "no") : "") << ','
        << static_cast<long long>(r.wall_ms + 0.5) << '\n';
  }
}

inline constexpr const char* summary_csv_header =
    "group,range_lo,range_hi,count,mean_d_A_MN,mean_d_A_AE,mean_d_MN_AE,mean_gain,stddev_d_A_AE,n_low,n_medium,"
    "n_high";

inline void write_summary_csv(std::ostream& out, const std::vector<BucketSummary>& buckets) {
  out << summary_csv_header << '\n';
  for (const auto& b : buckets) {
    out << '"' << b.label << '"' << ',' << format_double(b.range.lo) << ',' << format_double(b.range.hi) << ','
        << b.count << ',' << format_double(b.mean_d_a_mn) << ',' << format_double(b.mean_d_a_ae) << ','
        << format_double(b.mean_d_mn_ae) << ',' << format_double(b.mean_gain) << ','
        << format_double(b.stddev_d_a_ae) << ',' << b.n_low << ',' << b.n_medium << ',' << b.n_high << '\n';
  }
}

inline void write_trajectory_csv(std::ostream& out, const std::vector<ExperimentRecord>& records) {
  out << "dfa_id,p,round,d_A_AE\n";
  for (const auto& r : records) {
    for (const auto& point : r.trajectory) {
      out << r.dfa_id << ',' << (r.p ? format_double(*r.p) : "") << ',' << point.round << ','
          << format_double(point.d_a_ae) << '\n';
    }
  }
}

inline void write_sweep_csv(std::ostream& out, const std::vector<SweepCell>& cells, const char* parameter_name) {
  out << "p," << parameter_name << ",mean_gain,count\n";
  for (const auto& c : cells) {
    out << format_double(c.p) << ',' << format_double(c.parameter) << ',' << format_double(c.mean_gain) << ','
        << c.count << '\n';
  }
}

inline std::string records_csv(const std::vector<ExperimentRecord>& records) {
  std::ostringstream out;
  write_records_csv(out, records);
  return out.str();
}

} // namespace nlstar
