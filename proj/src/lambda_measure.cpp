#include "sweepcoal/lambda_measure.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/beta.hpp>

#include "json.hpp"

namespace sweepcoal {

namespace {

using boost::math::beta;   // beta(a,b) and incomplete beta(a,b,x)
using boost::math::ibeta;  // regularized incomplete beta

void fail(const std::string& field, const std::string& why) {
  throw std::invalid_argument("lambda measure: " + field + " " + why);
}

double quad(const std::function<double(double)>& f, double lo, double hi) {
  return boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
      f, lo, hi, 12, 1e-10);
}

}  // namespace

void LambdaMeasure::validate() const {
  if (!(kingman_mass >= 0.0) || !std::isfinite(kingman_mass))
    fail("kingman", "must be finite and >= 0");
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    const auto& [p, w] = atoms[i];
    const std::string at = "atoms[" + std::to_string(i) + "]";
    if (!(p > 0.0 && p <= 1.0)) fail(at + ".x", "must lie in (0,1]");
    if (!(w > 0.0) || !std::isfinite(w)) fail(at + ".weight", "must be finite and > 0");
  }
  for (std::size_t i = 0; i < densities.size(); ++i) {
    const auto& d = densities[i];
    const std::string at = "densities[" + std::to_string(i) + "]";
    if (d.form == Density::Form::linear) {
      if (!(d.c > 0.0) || !std::isfinite(d.c)) fail(at + ".c", "must be finite and > 0");
      if (!(0.0 <= d.lo && d.lo < d.hi && d.hi <= 1.0))
        fail(at + ".lo/hi", "must satisfy 0 <= lo < hi <= 1");
    } else {
      if (d.xs.size() < 2 || d.hs.size() + 1 != d.xs.size())
        fail(at + ".xs/hs", "need xs ascending and hs one shorter");
      if (!(d.xs.front() >= 0.0 && d.xs.back() <= 1.0))
        fail(at + ".xs", "must lie in [0,1]");
      for (std::size_t j = 0; j + 1 < d.xs.size(); ++j)
        if (!(d.xs[j] < d.xs[j + 1])) fail(at + ".xs", "must be strictly ascending");
      for (std::size_t j = 0; j < d.hs.size(); ++j)
        if (!(d.hs[j] >= 0.0) || !std::isfinite(d.hs[j]))
          fail(at + ".hs", "must be finite and >= 0");
    }
  }
}

double LambdaMeasure::frequency_mass() const {
  double total = 0.0;
  for (const auto& [p, w] : atoms) total += w / (p * p);
  for (const auto& d : densities) {
    if (d.form == Density::Form::linear) {
      if (d.lo == 0.0) return std::numeric_limits<double>::infinity();
      total += d.c * std::log(d.hi / d.lo);
    } else {
      for (std::size_t j = 0; j < d.hs.size(); ++j) {
        if (d.hs[j] == 0.0) continue;
        if (d.xs[j] == 0.0) return std::numeric_limits<double>::infinity();
        total += d.hs[j] * (1.0 / d.xs[j] - 1.0 / d.xs[j + 1]);
      }
    }
  }
  return total;
}

double LambdaMeasure::total_mass() const {
  double total = kingman_mass;
  for (const auto& [p, w] : atoms) {
    (void)p;
    total += w;
  }
  for (const auto& d : densities) {
    if (d.form == Density::Form::linear)
      total += d.c * 0.5 * (d.hi * d.hi - d.lo * d.lo);
    else
      for (std::size_t j = 0; j < d.hs.size(); ++j)
        total += d.hs[j] * (d.xs[j + 1] - d.xs[j]);
  }
  return total;
}

double lambda_rate(const LambdaMeasure& m, int b, int k) {
  if (b < 2 || k < 2 || k > b)
    throw std::invalid_argument("lambda_rate: need 2 <= k <= b");
  double rate = (k == 2) ? m.kingman_mass : 0.0;
  for (const auto& [p, w] : m.atoms)
    rate += w * std::pow(p, k - 2) * std::pow(1.0 - p, b - k);
  const double a1 = k - 1, a2 = b - k + 1;  // exponents + 1 after the x^-? shift
  for (const auto& d : m.densities) {
    if (d.form == Density::Form::linear) {
      // integral of c * y^(k-1) (1-y)^(b-k) dy = c * [B_x(k, b-k+1)] at hi minus lo
      rate += d.c * (beta(k, b - k + 1, d.hi) - beta(k, b - k + 1, d.lo));
    } else {
      for (std::size_t j = 0; j < d.hs.size(); ++j) {
        if (d.hs[j] == 0.0) continue;
        rate += d.hs[j] * (beta(a1, a2, d.xs[j + 1]) - beta(a1, a2, d.xs[j]));
      }
    }
  }
  return rate;
}

TotalRates total_rates(const LambdaMeasure& m, int bmax) {
  if (bmax < 2) throw std::invalid_argument("total_rates: bmax >= 2");
  TotalRates out;
  out.bmax = bmax;
  out.lambda.assign(bmax + 1, 0.0);
  out.alpha.assign(bmax + 1, 0.0);
  for (int b = 2; b <= bmax; ++b) {
    double alpha = 0.0;
    for (const auto& [p, w] : m.atoms)
      alpha += (w / (p * p)) * excess_merge_probability(b, p);
    for (const auto& d : m.densities) {
      if (d.form == Density::Form::linear) {
        if (d.lo == 0.0 && d.hi == 1.0) {
          // closed form: harmonic number minus one
          double h = 0.0;
          for (int i = 1; i <= b; ++i) h += 1.0 / i;
          alpha += d.c * (h - 1.0);
        } else {
          alpha += quad(
              [&](double y) {
                return (d.c / y) * excess_merge_probability(b, y);
              },
              d.lo, d.hi);
        }
      } else {
        for (std::size_t j = 0; j < d.hs.size(); ++j) {
          if (d.hs[j] == 0.0) continue;
          alpha += quad(
              [&](double y) {
                return (d.hs[j] / (y * y)) * excess_merge_probability(b, y);
              },
              d.xs[j], d.xs[j + 1]);
        }
      }
    }
    out.alpha[b] = alpha;
    out.lambda[b] = m.kingman_mass * 0.5 * b * (b - 1) + alpha;
  }
  return out;
}

double excess_merge_probability(int b, double y) {
  if (y >= 1.0) return 1.0;
  if (y <= 0.0) return 0.0;
  const double by = b * y;
  if (by < 1e-5) {
    // series around 0 keeps the (1 - ...) difference from cancelling
    const double c2 = 0.5 * b * (b - 1) * y * y;
    return c2 * (1.0 - (b - 2) * y * 2.0 / 3.0);
  }
  const double t = std::exp((b - 1) * std::log1p(-y));
  return 1.0 - t * (1.0 - y + by);
}

std::vector<double> merger_size_law(const LambdaMeasure& m, int b, double lambda_b) {
  if (b < 2) throw std::invalid_argument("merger_size_law: b >= 2");
  std::vector<double> law(b + 1, 0.0);
  const double log_lambda = std::log(lambda_b);
  // log C(b,k) built incrementally along the row
  double log_choose = std::log(0.5 * b * (b - 1));  // k = 2
  for (int k = 2; k <= b; ++k) {
    if (k > 2) log_choose += std::log((b - k + 1.0) / k);
    // collect per-component log-rates, then combine level-shifted
    double best = -std::numeric_limits<double>::infinity();
    std::vector<double> logs;
    if (k == 2 && m.kingman_mass > 0.0) logs.push_back(std::log(m.kingman_mass));
    for (const auto& [p, w] : m.atoms) {
      if (p == 1.0) {
        if (k == b) logs.push_back(std::log(w));
        continue;
      }
      logs.push_back(std::log(w) + (k - 2) * std::log(p) +
                     (b - k) * std::log1p(-p));
    }
    for (const auto& d : m.densities) {
      if (d.form == Density::Form::linear) {
        const double r = ibeta(k, b - k + 1, d.hi) - ibeta(k, b - k + 1, d.lo);
        if (r > 0.0)
          logs.push_back(std::log(d.c) + std::lgamma(double(k)) +
                         std::lgamma(double(b - k + 1)) -
                         std::lgamma(double(b + 1)) + std::log(r));
      } else {
        for (std::size_t j = 0; j < d.hs.size(); ++j) {
          if (d.hs[j] == 0.0) continue;
          const double r =
              ibeta(k - 1, b - k + 1, d.xs[j + 1]) - ibeta(k - 1, b - k + 1, d.xs[j]);
          if (r > 0.0)
            logs.push_back(std::log(d.hs[j]) + std::lgamma(double(k - 1)) +
                           std::lgamma(double(b - k + 1)) -
                           std::lgamma(double(b)) + std::log(r));
        }
      }
    }
    if (logs.empty()) continue;
    for (double l : logs) best = std::max(best, l);
    double sum = 0.0;
    for (double l : logs) sum += std::exp(l - best);
    law[k] = std::exp(log_choose + best + std::log(sum) - log_lambda);
  }
  return law;
}

FrequencySampler::FrequencySampler(const LambdaMeasure& m) {
  for (const auto& [p, w] : m.atoms)
    comps_.push_back({w / (p * p), 0, p, 0.0, 0.0});
  for (const auto& d : m.densities) {
    if (d.form == Density::Form::linear) {
      if (d.lo == 0.0)
        throw std::invalid_argument(
            "frequency sampler: linear density reaching 0 has infinite mass");
      comps_.push_back({d.c * std::log(d.hi / d.lo), 1, d.lo, d.hi, 0.0});
    } else {
      for (std::size_t j = 0; j < d.hs.size(); ++j) {
        if (d.hs[j] == 0.0) continue;
        if (d.xs[j] == 0.0)
          throw std::invalid_argument(
              "frequency sampler: table density reaching 0 has infinite mass");
        comps_.push_back({d.hs[j] * (1.0 / d.xs[j] - 1.0 / d.xs[j + 1]), 2,
                          d.xs[j], d.xs[j + 1], 0.0});
      }
    }
  }
  cum_.reserve(comps_.size());
  for (const auto& c : comps_) {
    total_ += c.mass;
    cum_.push_back(total_);
  }
  if (comps_.empty())
    throw std::invalid_argument("frequency sampler: measure has no sweep part");
}

double FrequencySampler::sample(Rng& rng) const {
  const double u = rng.uniform01() * total_;
  std::size_t i =
      std::lower_bound(cum_.begin(), cum_.end(), u) - cum_.begin();
  if (i >= comps_.size()) i = comps_.size() - 1;
  const auto& c = comps_[i];
  switch (c.kind) {
    case 0:
      return c.a;
    case 1:
      // density 1/y on [a,b]: log-uniform
      return c.a * std::exp(rng.uniform01() * std::log(c.b / c.a));
    default: {
      // density 1/y^2 on [a,b]: 1/y uniform
      const double inv = 1.0 / c.a - rng.uniform01() * (1.0 / c.a - 1.0 / c.b);
      return 1.0 / inv;
    }
  }
}

std::string LambdaMeasure::to_json_string() const {
  nlohmann::ordered_json j;
  j["kingman"] = kingman_mass;
  j["atoms"] = nlohmann::ordered_json::array();
  for (const auto& [p, w] : atoms) j["atoms"].push_back({p, w});
  j["densities"] = nlohmann::ordered_json::array();
  for (const auto& d : densities) {
    nlohmann::ordered_json e;
    if (d.form == Density::Form::linear) {
      e["form"] = "linear";
      e["c"] = d.c;
      e["lo"] = d.lo;
      e["hi"] = d.hi;
    } else {
      e["form"] = "table";
      e["xs"] = d.xs;
      e["hs"] = d.hs;
    }
    j["densities"].push_back(e);
  }
  return j.dump(2);
}

LambdaMeasure LambdaMeasure::from_json_string(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("lambda measure: bad JSON: ") + e.what());
  }
  LambdaMeasure m;
  m.kingman_mass = j.value("kingman", 0.0);
  if (j.contains("atoms"))
    for (const auto& a : j.at("atoms"))
      m.atoms.emplace_back(a.at(0).get<double>(), a.at(1).get<double>());
  if (j.contains("densities"))
    for (const auto& e : j.at("densities")) {
      Density d;
      const std::string form = e.at("form").get<std::string>();
      if (form == "linear") {
        d.form = Density::Form::linear;
        d.c = e.at("c").get<double>();
        d.lo = e.value("lo", 0.0);
        d.hi = e.value("hi", 1.0);
      } else if (form == "table") {
        d.form = Density::Form::table;
        d.xs = e.at("xs").get<std::vector<double>>();
        d.hs = e.at("hs").get<std::vector<double>>();
      } else {
        throw std::invalid_argument("lambda measure: densities[].form must be 'linear' or 'table'");
      }
      m.densities.push_back(std::move(d));
    }
  m.validate();
  return m;
}

}  // namespace sweepcoal
