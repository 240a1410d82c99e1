#include "bmatch/io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace bmatch {

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  assert(ec == std::errc());
  return std::string(buf, ptr);
}

namespace {

double parse_value(const std::string& token, std::size_t line_no) {
  if (token == "inf" || token == "INF" || token == "Inf")
    return std::numeric_limits<double>::infinity();
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc() || ptr != token.data() + token.size())
    throw ParseError("bad mark value '" + token + "'", line_no);
  return v;
}

}  // namespace

void write_marks(std::ostream& out, const MarkMatrix& m) {
  out << "n=" << m.size() << " orientation="
      << (m.orientation() == Orientation::kLowerIsBetter ? "lo" : "hi") << "\n";
  for (PeerId p = 0; p < m.size(); ++p) {
    for (PeerId q = 0; q < m.size(); ++q) {
      if (q) out << ' ';
      if (p == q || !m.finite(p, q))
        out << "inf";
      else
        out << format_double(m.at(p, q).value());
    }
    out << "\n";
  }
}

MarkMatrix read_marks(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw ParseError("empty marks file", 1);
  ++line_no;

  std::istringstream header(line);
  std::string n_field, orientation_field;
  header >> n_field >> orientation_field;
  if (n_field.rfind("n=", 0) != 0 || orientation_field.rfind("orientation=", 0) != 0)
    throw ParseError("expected header 'n=<count> orientation=<lo|hi>'", line_no);

  PeerId n = 0;
  {
    const std::string digits = n_field.substr(2);
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), n);
    if (ec != std::errc() || ptr != digits.data() + digits.size() || n < 0)
      throw ParseError("bad peer count '" + digits + "'", line_no);
  }
  const std::string o = orientation_field.substr(12);
  Orientation orientation;
  if (o == "lo")
    orientation = Orientation::kLowerIsBetter;
  else if (o == "hi")
    orientation = Orientation::kHigherIsBetter;
  else
    throw ParseError("orientation must be 'lo' or 'hi'", line_no);

  MarkMatrix m(n, orientation);
  for (PeerId p = 0; p < n; ++p) {
    if (!std::getline(in, line))
      throw ParseError("marks file ends after " + std::to_string(p) + " rows", line_no);
    ++line_no;
    std::istringstream row(line);
    std::string token;
    for (PeerId q = 0; q < n; ++q) {
      if (!(row >> token))
        throw ParseError("row has fewer than " + std::to_string(n) + " entries", line_no);
      const double v = parse_value(token, line_no);
      if (p != q && std::isfinite(v)) m.set(p, q, Mark::finite(v));
    }
    if (row >> token)
      throw ParseError("row has more than " + std::to_string(n) + " entries", line_no);
  }
  return m;
}

void write_instance(std::ostream& out, const PreferenceInstance& L) {
  for (PeerId p = 0; p < L.size(); ++p) {
    out << p << ':';
    for (PeerId q : L.list(p)) out << ' ' << q;
    out << "\n";
  }
}

PreferenceInstance read_instance(std::istream& in) {
  std::vector<std::pair<PeerId, std::vector<PeerId>>> parsed;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto colon = line.find(':');
    if (colon == std::string::npos)
      throw ParseError("expected 'p: q1 q2 ...'", line_no);

    PeerId p = 0;
    {
      std::istringstream head(line.substr(0, colon));
      if (!(head >> p) || p < 0) throw ParseError("bad peer id", line_no);
      std::string rest;
      if (head >> rest) throw ParseError("bad peer id", line_no);
    }
    std::vector<PeerId> list;
    std::istringstream tail(line.substr(colon + 1));
    PeerId q;
    while (tail >> q) list.push_back(q);
    if (!tail.eof()) throw ParseError("bad neighbor id", line_no);
    parsed.emplace_back(p, std::move(list));
  }

  const PeerId n = static_cast<PeerId>(parsed.size());
  std::vector<std::vector<PeerId>> lists(static_cast<std::size_t>(n));
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  for (auto& [p, list] : parsed) {
    if (p >= n || seen[static_cast<std::size_t>(p)])
      throw ParseError("peer lines must cover 0.." + std::to_string(n - 1) +
                       " exactly once", line_no);
    seen[static_cast<std::size_t>(p)] = true;
    lists[static_cast<std::size_t>(p)] = std::move(list);
  }
  return PreferenceInstance::from_lists(std::move(lists));
}

void write_configuration(std::ostream& out, const Configuration& c) {
  for (const Edge& e : c.links()) out << e.a << ' ' << e.b << "\n";
}

Configuration read_configuration(std::istream& in) {
  std::vector<Edge> links;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream row(line);
    PeerId a, b;
    if (!(row >> a >> b)) throw ParseError("expected 'p q'", line_no);
    std::string rest;
    if (row >> rest) throw ParseError("expected 'p q'", line_no);
    if (a < 0 || b < 0 || a == b) throw ParseError("bad edge", line_no);
    links.push_back(make_edge(a, b));
  }
  return Configuration(std::move(links));
}

void write_trace(std::ostream& out, const DynamicsResult& result) {
  using nlohmann::json;
  out << json{{"record", "meta"},
              {"policy", policy_name(result.policy)},
              {"seed", result.seed},
              {"steps", result.trace.size()},
              {"converged", result.converged}}
             .dump()
      << "\n";
  for (const StepRecord& r : result.trace) {
    json step{{"record", "step"},
              {"step", r.step},
              {"pair", {r.formed.a, r.formed.b}},
              {"blocking_before", r.blocking_before}};
    json dropped = json::array();
    if (r.dropped_by_a) dropped.push_back({r.dropped_by_a->a, r.dropped_by_a->b});
    if (r.dropped_by_b) dropped.push_back({r.dropped_by_b->a, r.dropped_by_b->b});
    step["dropped"] = std::move(dropped);
    out << step.dump() << "\n";
  }
  json links = json::array();
  for (const Edge& e : result.configuration.links()) links.push_back({e.a, e.b});
  out << json{{"record", "final"}, {"links", std::move(links)}}.dump() << "\n";
}

std::string to_dot(const Configuration& c, PeerId n) {
  std::ostringstream out;
  out << "graph configuration {\n";
  for (PeerId p = 0; p < n; ++p) out << "  " << p << ";\n";
  for (const Edge& e : c.links()) out << "  " << e.a << " -- " << e.b << ";\n";
  out << "}\n";
  return out.str();
}

namespace {

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  return out;
}

}  // namespace

MarkMatrix read_marks_file(const std::string& path) {
  auto in = open_in(path);
  return read_marks(in);
}

void write_marks_file(const std::string& path, const MarkMatrix& m) {
  auto out = open_out(path);
  write_marks(out, m);
}

PreferenceInstance read_instance_file(const std::string& path) {
  auto in = open_in(path);
  return read_instance(in);
}

void write_instance_file(const std::string& path, const PreferenceInstance& L) {
  auto out = open_out(path);
  write_instance(out, L);
}

Configuration read_configuration_file(const std::string& path) {
  auto in = open_in(path);
  return read_configuration(in);
}

void write_configuration_file(const std::string& path, const Configuration& c) {
  auto out = open_out(path);
  write_configuration(out, c);
}

}  // namespace bmatch
