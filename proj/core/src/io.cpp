#include "teak/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json_builders.hpp"

namespace teak {

namespace {

using nlohmann::json;

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open for reading: " + path);
  return in;
}

std::string strip_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  out.push_back(cur);
  return out;
}

double parse_double(const std::string& s, const char* what) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') {
    throw IoError(std::string("bad ") + what + " value: " + s);
  }
  return v;
}

}  // namespace

void write_signal_csv(const SampledSignal& s, std::ostream& out) {
  out << "t,re,im\n";
  for (std::size_t i = 0; i < s.size(); ++i) {
    out << fmt17(s.time(i)) << ',' << fmt17(s.samples[i].real()) << ','
        << fmt17(s.samples[i].imag()) << '\n';
  }
}

void write_signal_csv(const SampledSignal& s, const std::string& path) {
  auto out = open_out(path);
  write_signal_csv(s, out);
}

SampledSignal read_signal_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || strip_cr(line) != "t,re,im") {
    throw IoError("signal CSV must start with header 't,re,im'");
  }
  std::vector<double> ts;
  std::vector<cplx> samples;
  while (std::getline(in, line)) {
    line = strip_cr(line);
    if (line.empty()) continue;
    const auto fields = split_fields(line);
    if (fields.size() != 3) throw IoError("signal CSV rows need 3 fields: " + line);
    ts.push_back(parse_double(fields[0], "t"));
    samples.emplace_back(parse_double(fields[1], "re"), parse_double(fields[2], "im"));
  }
  if (samples.size() < 2) throw IoError("signal CSV needs at least 2 samples");
  const double t0 = ts.front();
  const double dt = (ts.back() - ts.front()) / static_cast<double>(ts.size() - 1);
  return make_signal(t0, dt, std::move(samples));
}

SampledSignal read_signal_csv(const std::string& path) {
  auto in = open_in(path);
  return read_signal_csv(in);
}

std::vector<DerivativeTap> as_derivative_taps(const std::vector<ClassicalTap>& taps) {
  std::vector<DerivativeTap> out;
  out.reserve(taps.size());
  for (const auto& t : taps) {
    out.push_back({0, t.delay,
                   t.amplitude * cplx{std::cos(t.phase), std::sin(t.phase)}});
  }
  return out;
}

void write_taps_csv(const std::vector<DerivativeTap>& taps, const std::string& path) {
  auto out = open_out(path);
  out << "delay,order,gain_re,gain_im\n";
  for (const auto& t : taps) {
    out << fmt17(t.delay) << ',' << t.order << ',' << fmt17(t.gain.real()) << ','
        << fmt17(t.gain.imag()) << '\n';
  }
}

std::vector<DerivativeTap> read_taps_csv(const std::string& path) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line) || strip_cr(line) != "delay,order,gain_re,gain_im") {
    throw IoError("tap CSV must start with header 'delay,order,gain_re,gain_im'");
  }
  std::vector<DerivativeTap> taps;
  while (std::getline(in, line)) {
    line = strip_cr(line);
    if (line.empty()) continue;
    const auto fields = split_fields(line);
    if (fields.size() != 4) throw IoError("tap CSV rows need 4 fields: " + line);
    DerivativeTap t;
    t.delay = parse_double(fields[0], "delay");
    t.order = static_cast<int>(parse_double(fields[1], "order"));
    t.gain = {parse_double(fields[2], "gain_re"), parse_double(fields[3], "gain_im")};
    taps.push_back(t);
  }
  return taps;
}

std::string projection_to_json(const ProjectionResult& p) {
  return detail::projection_json(p).dump(2);
}

std::string snr_to_json(const SnrReport& r) { return detail::snr_json(r).dump(2); }

std::string membership_to_json(const MembershipReport& m) {
  return detail::membership_json(m).dump(2);
}

std::string error_to_json(const std::string& message) {
  json j{{"error", {{"message", message}}}};
  return j.dump(2);
}

}  // namespace teak
