#include "tailsitter/airfoil.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <numbers>
#include <sstream>

#include <fmt/format.h>

namespace tailsitter {

namespace {

constexpr double kPeriodicTolerance = 1e-9;
constexpr std::size_t kMinRows = 4;

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

double parse_number(const std::string& field, std::size_t line_no) {
  const std::string t = trim(field);
  double value = 0.0;
  const auto* begin = t.data();
  const auto* end = t.data() + t.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (t.empty() || ec != std::errc{} || ptr != end || !std::isfinite(value)) {
    throw AeroTableError(AeroTableError::Kind::MalformedRow,
                         fmt::format("line {}: cannot parse number '{}'", line_no, t));
  }
  return value;
}

}  // namespace

AeroTable AeroTable::from_samples(std::vector<AeroSample> samples, std::string name, double reynolds) {
  using Kind = AeroTableError::Kind;
  if (samples.size() < kMinRows) {
    throw AeroTableError(Kind::TooFewRows,
                         fmt::format("airfoil table needs at least {} rows, got {}", kMinRows, samples.size()));
  }
  std::stable_sort(samples.begin(), samples.end(),
                   [](const AeroSample& a, const AeroSample& b) { return a.alpha_deg < b.alpha_deg; });
  for (std::size_t i = 1; i < samples.size(); ++i) {
    if (samples[i].alpha_deg == samples[i - 1].alpha_deg) {
      throw AeroTableError(Kind::DuplicateAlpha, fmt::format("duplicate alpha {}", samples[i].alpha_deg));
    }
  }
  for (const auto& s : samples) {
    if (s.c_d < 0.0) {
      throw AeroTableError(Kind::NegativeDrag, fmt::format("negative drag {} at alpha {}", s.c_d, s.alpha_deg));
    }
  }
  const auto& lo = samples.front();
  const auto& hi = samples.back();
  if (lo.alpha_deg != -180.0 || hi.alpha_deg != 180.0) {
    throw AeroTableError(Kind::DomainGap,
                         fmt::format("alpha must span [-180, 180], got [{}, {}]", lo.alpha_deg, hi.alpha_deg));
  }
  if (std::abs(lo.c_l - hi.c_l) > kPeriodicTolerance || std::abs(lo.c_d - hi.c_d) > kPeriodicTolerance ||
      std::abs(lo.c_m - hi.c_m) > kPeriodicTolerance) {
    throw AeroTableError(Kind::NonPeriodic, "coefficients at -180 and +180 differ");
  }

  AeroTable table;
  table.samples_ = std::move(samples);
  table.name_ = std::move(name);
  table.reynolds_ = reynolds;
  return table;
}

AeroTable load_aero_table(std::istream& source) {
  using Kind = AeroTableError::Kind;
  std::string name;
  double reynolds = 0.0;
  std::vector<AeroSample> samples;
  bool header_seen = false;
  std::string line;
  std::size_t line_no = 0;

  while (std::getline(source, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty()) continue;
    if (t.front() == '#') {
      const std::string body = trim(std::string_view(t).substr(1));
      if (body.starts_with("name:")) {
        name = trim(std::string_view(body).substr(5));
      } else if (body.starts_with("reynolds:")) {
        reynolds = parse_number(body.substr(9), line_no);
      }
      continue;
    }
    if (!header_seen) {
      if (t != "alpha_deg,cl,cd,cm") {
        throw AeroTableError(Kind::MalformedRow,
                             fmt::format("line {}: expected header 'alpha_deg,cl,cd,cm', got '{}'", line_no, t));
      }
      header_seen = true;
      continue;
    }
    std::vector<std::string> fields;
    std::stringstream ss(t);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.size() != 4) {
      throw AeroTableError(Kind::MalformedRow, fmt::format("line {}: expected 4 fields, got {}", line_no, fields.size()));
    }
    samples.push_back({parse_number(fields[0], line_no), parse_number(fields[1], line_no),
                       parse_number(fields[2], line_no), parse_number(fields[3], line_no)});
  }
  if (!header_seen) throw AeroTableError(Kind::MalformedRow, "missing header 'alpha_deg,cl,cd,cm'");
  return AeroTable::from_samples(std::move(samples), std::move(name), reynolds);
}

AeroTable load_aero_table_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(fmt::format("cannot open airfoil file '{}'", path));
  return load_aero_table(in);
}

AeroTable flat_plate_table(double step_deg) {
  if (!(step_deg > 0.0) || std::fmod(360.0, step_deg) != 0.0) {
    throw std::invalid_argument("flat_plate_table: step must divide 360");
  }
  const auto n = static_cast<int>(std::lround(360.0 / step_deg));
  std::vector<AeroSample> samples;
  samples.reserve(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i <= n; ++i) {
    const double deg = -180.0 + i * step_deg;
    const double a = deg * std::numbers::pi / 180.0;
    double c_l = 1.1 * std::sin(2.0 * a);
    double c_m = -0.05 * std::sin(a);
    if (i == 0 || i == n) {
      c_l = 0.0;
      c_m = 0.0;
    }
    samples.push_back({deg, c_l, 1.35 * (1.0 - std::cos(2.0 * a)) * 0.5 + 0.02, c_m});
  }
  return AeroTable::from_samples(std::move(samples), "synthetic flat plate", 0.0);
}

CubicSpline::CubicSpline(std::vector<double> x, std::vector<double> y) : x_(std::move(x)), y_(std::move(y)) {
  const std::size_t n = x_.size();
  if (n < 3 || y_.size() != n) throw std::invalid_argument("CubicSpline: need >= 3 matching knots");
  // Tridiagonal system for interior second derivatives, natural ends (m0 = mn = 0).
  m_.assign(n, 0.0);
  std::vector<double> c(n, 0.0), d(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double h0 = x_[i] - x_[i - 1];
    const double h1 = x_[i + 1] - x_[i];
    const double a = h0;
    const double b = 2.0 * (h0 + h1);
    const double r = 6.0 * ((y_[i + 1] - y_[i]) / h1 - (y_[i] - y_[i - 1]) / h0);
    const double denom = b - a * c[i - 1];
    c[i] = h1 / denom;
    d[i] = (r - a * d[i - 1]) / denom;
  }
  for (std::size_t i = n - 2; i >= 1; --i) {
    m_[i] = d[i] - c[i] * m_[i + 1];
  }
}

std::size_t CubicSpline::segment(double x) const {
  const auto it = std::upper_bound(x_.begin(), x_.end(), x);
  if (it == x_.begin()) return 0;
  const auto idx = static_cast<std::size_t>(it - x_.begin()) - 1;
  return std::min(idx, x_.size() - 2);
}

std::array<double, 2> CubicSpline::evaluate(double x) const {
  const std::size_t i = segment(x);
  const double h = x_[i + 1] - x_[i];
  const double a = (x_[i + 1] - x) / h;
  const double b = (x - x_[i]) / h;
  const double value = a * y_[i] + b * y_[i + 1] + ((a * a * a - a) * m_[i] + (b * b * b - b) * m_[i + 1]) * h * h / 6.0;
  const double slope = (y_[i + 1] - y_[i]) / h + ((1.0 - 3.0 * a * a) * m_[i] + (3.0 * b * b - 1.0) * m_[i + 1]) * h / 6.0;
  return {value, slope};
}

double CubicSpline::value(double x) const { return evaluate(x)[0]; }
double CubicSpline::derivative(double x) const { return evaluate(x)[1]; }

namespace {

CubicSpline column(const AeroTable& table, double AeroSample::*field) {
  std::vector<double> x, y;
  x.reserve(table.size());
  y.reserve(table.size());
  for (const auto& s : table.samples()) {
    x.push_back(s.alpha_deg);
    y.push_back(s.*field);
  }
  return {std::move(x), std::move(y)};
}

}  // namespace

AeroSpline::AeroSpline(const AeroTable& table)
    : c_l_(column(table, &AeroSample::c_l)),
      c_d_(column(table, &AeroSample::c_d)),
      c_m_(column(table, &AeroSample::c_m)),
      name_(table.name()) {}

double wrap_degrees(double alpha_deg) {
  if (alpha_deg >= -180.0 && alpha_deg <= 180.0) return alpha_deg;
  double a = std::fmod(alpha_deg + 180.0, 360.0);
  if (a < 0.0) a += 360.0;
  return a - 180.0;
}

AeroCoefficients AeroSpline::at_degrees(double alpha_deg) const {
  constexpr double kPerDegree = 180.0 / std::numbers::pi;
  const double a = wrap_degrees(alpha_deg);
  const auto cl = c_l_.evaluate(a);
  const auto cd = c_d_.evaluate(a);
  AeroCoefficients out;
  out.c_l = cl[0];
  out.c_d = cd[0];
  out.c_m = c_m_.value(a);
  out.dc_l = cl[1] * kPerDegree;
  out.dc_d = cd[1] * kPerDegree;
  return out;
}

AeroCoefficients AeroSpline::at(double alpha_rad) const { return at_degrees(alpha_rad * 180.0 / std::numbers::pi); }

AeroForces aero_forces(const AeroCoefficients& coeffs, double airspeed, const VehicleParams& params) {
  const double q_s = 0.5 * params.rho * airspeed * airspeed * params.s_wing();
  return {q_s * coeffs.c_l, q_s * coeffs.c_d, q_s * params.c_bar * coeffs.c_m};
}

}  // namespace tailsitter
