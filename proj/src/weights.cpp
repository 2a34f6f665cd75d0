#include "dfrac/weights.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dfrac/errors.hpp"

namespace dfrac {

WeightSpec WeightSpec::parse(const std::string& name) {
  WeightSpec spec;
  if (name == "n_factorial") {
    spec.kind = WeightKind::n_factorial;
  } else if (name == "factorial") {
    spec.kind = WeightKind::factorial;
  } else if (name.rfind("geometric", 0) == 0) {
    spec.kind = WeightKind::geometric;
    const auto colon = name.find(':');
    if (colon != std::string::npos) spec.ratio = std::stod(name.substr(colon + 1));
    if (!(spec.ratio > 0.0)) throw DomainError("geometric weight needs a positive ratio");
  } else {
    throw ConfigError("unknown weight kind '" + name + "' (expected n_factorial, factorial, geometric[:r])");
  }
  return spec;
}

WeightedSpace admissibility(const WeightSpec& spec, int N) {
  if (N < 4) throw UsageError("admissibility: horizon must be >= 4");
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  WeightedSpace w;
  w.log_h.resize(static_cast<std::size_t>(N) + 1);
  for (int n = 0; n <= N; ++n) {
    double lh = 0.0;
    switch (spec.kind) {
      case WeightKind::n_factorial: lh = n == 0 ? kNegInf : std::log(static_cast<double>(n)) + std::lgamma(n + 1.0); break;
      case WeightKind::factorial: lh = std::lgamma(n + 1.0); break;
      case WeightKind::geometric: lh = n * std::log(spec.ratio); break;
      case WeightKind::custom: {
        if (static_cast<int>(spec.values.size()) <= N) throw UsageError("custom weight shorter than the window");
        const double h = spec.values[static_cast<std::size_t>(n)];
        if (!std::isfinite(h) || h < 0.0 || (n >= 1 && h <= 0.0)) {
          throw DomainError("custom weight must be positive for n >= 1 (h(0) may be 0)");
        }
        lh = h > 0.0 ? std::log(h) : kNegInf;
        break;
      }
    }
    w.log_h[n] = lh;
    if (lh == kNegInf) w.zero_set.push_back(n);
  }

  // Exact small values when representable, so that e.g. 1/18 comes out as
  // the correctly rounded quotient; otherwise log-sum-exp.
  const bool linear = *std::max_element(w.log_h.begin(), w.log_h.end()) < 700.0;
  std::vector<double> h(w.log_h.size());
  if (linear) {
    for (int n = 0; n <= N; ++n) {
      switch (spec.kind) {
        case WeightKind::n_factorial: h[n] = n * std::round(std::exp(std::lgamma(n + 1.0))); break;
        case WeightKind::factorial: h[n] = std::round(std::exp(std::lgamma(n + 1.0))); break;
        case WeightKind::geometric: h[n] = std::pow(spec.ratio, n); break;
        case WeightKind::custom: h[n] = spec.values[static_cast<std::size_t>(n)]; break;
      }
    }
    // lgamma is not exact; rebuild factorials by multiplication for n <= 20.
    if (spec.kind == WeightKind::n_factorial || spec.kind == WeightKind::factorial) {
      double fact = 1.0;
      for (int n = 0; n <= N; ++n) {
        if (n > 0) fact *= n;
        h[n] = spec.kind == WeightKind::factorial ? fact : n * fact;
      }
    }
  }

  w.ratios.assign(static_cast<std::size_t>(N) + 1, 0.0);
  double partial = 0.0;       // sum_{k<=n-2} h(k), linear domain
  double log_partial = kNegInf;
  for (int n = 0; n <= N; ++n) {
    if (n >= 2) {
      const double lk = w.log_h[n - 2];
      if (linear) {
        partial += h[n - 2];
      } else if (lk != kNegInf) {
        const double hi = std::max(log_partial, lk);
        log_partial = hi + std::log(std::exp(log_partial - hi) + std::exp(lk - hi));
      }
    }
    if (w.log_h[n] == kNegInf) continue;
    w.ratios[n] = linear ? partial / h[n] : (log_partial == kNegInf ? 0.0 : std::exp(log_partial - w.log_h[n]));
  }

  w.argmax = static_cast<int>(std::max_element(w.ratios.begin(), w.ratios.end()) - w.ratios.begin());
  w.H = w.ratios[w.argmax];

  bool decreasing = true;
  for (int n = N - N / 2; n < N; ++n) {
    if (!(w.ratios[n + 1] < w.ratios[n])) decreasing = false;
  }
  w.admissible = decreasing && w.ratios[N] < w.ratios[4] / 10.0;
  return w;
}

double weighted_norm(const VecSeq& u, const WeightedSpace& w) {
  if (u.horizon() > w.horizon()) throw UsageError("weighted_norm: sequence longer than the weight window");
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  double best = 0.0;
  for (int n = 0; n <= u.horizon(); ++n) {
    const double norm = u.state(n).norm();
    if (w.log_h[n] == kNegInf) {
      if (norm != 0.0) return std::numeric_limits<double>::infinity();
      continue;
    }
    if (norm == 0.0) continue;
    best = std::max(best, std::exp(std::log(norm) - w.log_h[n]));
  }
  return best;
}

}  // namespace dfrac
