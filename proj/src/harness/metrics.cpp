#include "teamcraft/harness/metrics.hpp"

namespace teamcraft::harness {

namespace {

nlohmann::json opt(const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); }

}  // namespace

Metrics compute_metrics(const std::vector<int>& own, const std::vector<int>& other,
                        std::optional<double> sigma_other, double scale) {
  Metrics m;
  const std::size_t n = std::min(own.size(), other.size());
  m.episodes = static_cast<int>(n);
  if (n == 0) return m;
  double own_sum = 0.0;
  double other_sum = 0.0;
  double diff_sum = 0.0;
  double wins = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = own[i] * scale;
    const double b = other[i] * scale;
    own_sum += a;
    other_sum += b;
    diff_sum += a - b;
    if (own[i] > other[i]) {
      wins += 1.0;
    } else if (own[i] == other[i]) {
      wins += 0.5;
    }
  }
  const double ne = static_cast<double>(n);
  m.P = own_sum / ne;
  if (sigma_other) m.S = *sigma_other * scale - other_sum / ne;
  m.D = diff_sum / ne;
  m.W = wins / ne;
  return m;
}

Metrics mean_metrics(const std::vector<Metrics>& rows) {
  Metrics m;
  if (rows.empty()) return m;
  double s_sum = 0.0;
  int s_n = 0;
  for (const auto& r : rows) {
    m.episodes += r.episodes;
    m.P += r.P;
    m.D += r.D;
    m.W += r.W;
    if (r.S) {
      s_sum += *r.S;
      ++s_n;
    }
  }
  const double n = static_cast<double>(rows.size());
  m.P /= n;
  m.D /= n;
  m.W /= n;
  if (s_n > 0) m.S = s_sum / s_n;
  return m;
}

nlohmann::json to_json(const Metrics& m) {
  return {{"episodes", m.episodes}, {"P", m.P}, {"S", opt(m.S)}, {"D", m.D}, {"W", m.W}};
}

LatencyStats latency_stats(const std::vector<api::LlmCallRecord>& calls, const std::vector<int>& iteration_counts) {
  LatencyStats s;
  s.n_llm = static_cast<int>(calls.size());
  if (calls.empty()) return s;
  if (!iteration_counts.empty()) {
    double sum = 0.0;
    for (int i : iteration_counts) sum += i;
    s.iterations = sum / static_cast<double>(iteration_counts.size());
  }
  double t = 0.0;
  double out = 0.0;
  double rate = 0.0;
  int rated = 0;
  for (const auto& c : calls) {
    t += c.latency_s;
    out += c.output_tokens;
    if (c.latency_s > 0.0) {
      rate += c.output_tokens / c.latency_s;
      ++rated;
    }
  }
  const double n = static_cast<double>(calls.size());
  s.t_resp = t / n;
  s.n_out = out / n;
  if (rated > 0) s.r_tps = rate / rated;
  if (s.iterations) s.expected_idle_s = *s.t_resp * (*s.iterations - 1.0);
  return s;
}

nlohmann::json to_json(const LatencyStats& s) {
  return {{"n_llm", s.n_llm},
          {"T_resp", opt(s.t_resp)},
          {"N_out", opt(s.n_out)},
          {"R_tps", opt(s.r_tps)},
          {"I", opt(s.iterations)},
          {"expected_idle_s", opt(s.expected_idle_s)}};
}

}  // namespace teamcraft::harness
