#include "dxhog/io.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace dxhog {

namespace {

using nlohmann::json;

std::string json_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out;
}

std::vector<int> mask_indices(std::uint32_t mask) {
  std::vector<int> out;
  for (int q = 0; q < 32; ++q) {
    if (mask >> q & 1) out.push_back(q);
  }
  return out;
}

std::uint32_t indices_mask(const std::vector<int>& idx, int n, const char* what) {
  std::uint32_t mask = 0;
  for (int q : idx) {
    if (q < 0 || q >= n) throw std::invalid_argument(std::string(what) + ": index out of range");
    mask |= std::uint32_t{1} << q;
  }
  return mask;
}

void append_index_array(std::string& out, const std::vector<int>& idx) {
  out += '[';
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(idx[i]);
  }
  out += ']';
}

}  // namespace

std::string format_double_shortest(double v) {
  // "-0" would come back through the json readers as the integer 0 and lose
  // its sign; the decimal point forces the float path
  if (v == 0.0 && std::signbit(v)) return "-0.0";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string format_sig10(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

std::string circuit_to_json(const Circuit& c) {
  std::string out = "{\"n\":" + std::to_string(c.n) + ",\"ops\":[";
  bool first = true;
  for (const Gate& g : c.ops) {
    if (!first) out += ',';
    first = false;
    out += "{\"kind\":\"";
    out += gate_name(g.kind);
    out += "\",\"targets\":[";
    out += std::to_string(g.q0);
    if (gate_is_two_qubit(g.kind)) out += ',' + std::to_string(g.q1);
    out += ']';
    const int na = gate_angle_count(g.kind);
    if (na > 0) {
      out += ",\"angles\":[" + format_double_shortest(g.theta);
      if (na == 3) {
        out += ',' + format_double_shortest(g.phi);
        out += ',' + format_double_shortest(g.lambda);
      }
      out += ']';
    }
    out += '}';
  }
  out += "]}";
  return out;
}

Circuit circuit_from_json(const std::string& text) {
  const json j = json::parse(text);
  Circuit c;
  c.n = j.at("n").get<int>();
  if (c.n < 1) throw std::invalid_argument("circuit: n must be >= 1");
  for (const json& op : j.at("ops")) {
    Gate g{gate_kind_from_name(op.at("kind").get<std::string>())};
    const auto targets = op.at("targets").get<std::vector<int>>();
    const std::size_t want = gate_is_two_qubit(g.kind) ? 2 : 1;
    if (targets.size() != want) throw std::invalid_argument("circuit: wrong target count");
    g.q0 = targets[0];
    if (want == 2) g.q1 = targets[1];
    for (std::size_t i = 0; i < targets.size(); ++i) {
      if (targets[i] < 0 || targets[i] >= c.n) {
        throw std::invalid_argument("circuit: target out of range");
      }
    }
    const int na = gate_angle_count(g.kind);
    if (na > 0) {
      const auto angles = op.at("angles").get<std::vector<double>>();
      if (static_cast<int>(angles.size()) != na) {
        throw std::invalid_argument("circuit: wrong angle count");
      }
      g.theta = angles[0];
      if (na == 3) {
        g.phi = angles[1];
        g.lambda = angles[2];
      }
    }
    c.ops.push_back(g);
  }
  return c;
}

std::string template_to_json(const MeasurementTemplate& tpl) {
  std::string out = "{\"n\":" + std::to_string(tpl.n) + ",\"pivots\":";
  append_index_array(out, tpl.T);
  out += ",\"x_mask\":";
  append_index_array(out, mask_indices(tpl.x_mask));
  out += ",\"s_mask\":";
  append_index_array(out, mask_indices(tpl.s_mask));
  out += ",\"cz_edges\":[";
  for (std::size_t i = 0; i < tpl.cz_edges.size(); ++i) {
    if (i) out += ',';
    out += '[' + std::to_string(tpl.cz_edges[i].first) + ',' +
           std::to_string(tpl.cz_edges[i].second) + ']';
  }
  out += "],\"final_h\":";
  append_index_array(out, mask_indices(tpl.final_h));
  out += '}';
  return out;
}

MeasurementTemplate template_from_json(const std::string& text) {
  const json j = json::parse(text);
  MeasurementTemplate tpl;
  tpl.n = j.at("n").get<int>();
  if (tpl.n < 1 || tpl.n > 32) throw std::invalid_argument("template: n must be 1..32");
  tpl.T = j.at("pivots").get<std::vector<int>>();
  for (int q : tpl.T) {
    if (q < 0 || q >= tpl.n) throw std::invalid_argument("template: pivot out of range");
  }
  tpl.x_mask = indices_mask(j.at("x_mask").get<std::vector<int>>(), tpl.n, "x_mask");
  tpl.s_mask = indices_mask(j.at("s_mask").get<std::vector<int>>(), tpl.n, "s_mask");
  for (const json& e : j.at("cz_edges")) {
    const auto pair = e.get<std::vector<int>>();
    if (pair.size() != 2) throw std::invalid_argument("template: cz edge needs 2 qubits");
    if (pair[0] < 0 || pair[0] >= tpl.n || pair[1] < 0 || pair[1] >= tpl.n ||
        pair[0] == pair[1]) {
      throw std::invalid_argument("template: bad cz edge");
    }
    tpl.cz_edges.emplace_back(pair[0], pair[1]);
  }
  tpl.final_h = indices_mask(j.at("final_h").get<std::vector<int>>(), tpl.n, "final_h");
  return tpl;
}

void write_statevector(const std::string& path, const StateVector& sv) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  auto put_u64 = [&](std::uint64_t v) {
    char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<char>(v >> (8 * i));
    f.write(b, 8);
  };
  put_u64(static_cast<std::uint64_t>(sv.n));
  for (const cplx& a : sv.amps) {
    put_u64(std::bit_cast<std::uint64_t>(a.real()));
    put_u64(std::bit_cast<std::uint64_t>(a.imag()));
  }
  if (!f) throw std::runtime_error("write failed: " + path);
}

StateVector read_statevector(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open: " + path);
  auto get_u64 = [&]() {
    char b[8];
    f.read(b, 8);
    if (!f) throw std::runtime_error("truncated statevector file: " + path);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) {
      v |= static_cast<std::uint64_t>(static_cast<unsigned char>(b[i])) << (8 * i);
    }
    return v;
  };
  const std::uint64_t n = get_u64();
  if (n < 1 || n > 30) throw std::runtime_error("statevector header out of range");
  StateVector sv;
  sv.n = static_cast<int>(n);
  sv.amps.resize(sv.dim());
  for (cplx& a : sv.amps) {
    const double re = std::bit_cast<double>(get_u64());
    const double im = std::bit_cast<double>(get_u64());
    a = {re, im};
  }
  char extra;
  if (f.read(&extra, 1)) throw std::runtime_error("trailing bytes in statevector file");
  return sv;
}

std::string trial_record_line(const TrialRecord& rec) {
  std::string z(static_cast<std::size_t>(rec.n), '0');
  for (int q = 0; q < rec.n; ++q) {
    if (rec.z >> q & 1) z[static_cast<std::size_t>(q)] = '1';
  }
  std::string out = "{\"id\":" + std::to_string(rec.id);
  out += ",\"n\":" + std::to_string(rec.n);
  out += ",\"mode\":\"" + json_escape(rec.mode) + '"';
  out += ",\"z\":\"" + z + '"';
  out += ",\"score\":" + format_double_shortest(rec.score);
  out += ",\"state_seed\":" + std::to_string(rec.state_seed);
  out += ",\"meas_seed\":" + std::to_string(rec.meas_seed);
  out += ",\"noise_seed\":" + std::to_string(rec.noise_seed);
  out += '}';
  return out;
}

TrialRecord trial_record_from_line(const std::string& line) {
  const json j = json::parse(line);
  TrialRecord rec;
  rec.id = j.at("id").get<std::uint64_t>();
  rec.n = j.at("n").get<int>();
  if (rec.n < 1 || rec.n > 30) throw std::invalid_argument("record: n out of range");
  rec.mode = j.at("mode").get<std::string>();
  const std::string z = j.at("z").get<std::string>();
  if (z.size() != static_cast<std::size_t>(rec.n)) {
    throw std::invalid_argument("record: z length != n");
  }
  rec.z = 0;
  for (int q = 0; q < rec.n; ++q) {
    const char c = z[static_cast<std::size_t>(q)];
    if (c != '0' && c != '1') throw std::invalid_argument("record: z must be 0/1");
    if (c == '1') rec.z |= std::uint64_t{1} << q;
  }
  rec.score = j.at("score").get<double>();
  rec.state_seed = j.at("state_seed").get<std::uint64_t>();
  rec.meas_seed = j.at("meas_seed").get<std::uint64_t>();
  rec.noise_seed = j.at("noise_seed").get<std::uint64_t>();
  return rec;
}

std::string summary_to_json(const XebSummary& s) {
  return "{\"k\":" + std::to_string(s.k) + ",\"mean\":" + format_double_shortest(s.mean) +
         ",\"stderr\":" + format_double_shortest(s.stderr_) + '}';
}

std::string params_to_json(const AnsatzParamsFile& p) {
  std::string out = "{\"n\":" + std::to_string(p.n);
  out += ",\"depth\":" + std::to_string(p.depth);
  out += ",\"params\":[";
  for (std::size_t i = 0; i < p.params.size(); ++i) {
    if (i) out += ',';
    out += format_double_shortest(p.params[i]);
  }
  out += "],\"predicted_fidelity\":" + format_double_shortest(p.predicted_fidelity);
  out += ",\"overlap\":" + format_double_shortest(p.overlap);
  out += ",\"noise_factor\":" + format_double_shortest(p.noise_factor);
  out += ",\"seed\":" + std::to_string(p.seed);
  out += '}';
  return out;
}

AnsatzParamsFile params_from_json(const std::string& text) {
  const json j = json::parse(text);
  AnsatzParamsFile p;
  p.n = j.at("n").get<int>();
  p.depth = j.at("depth").get<int>();
  p.params = j.at("params").get<std::vector<double>>();
  p.predicted_fidelity = j.at("predicted_fidelity").get<double>();
  p.overlap = j.at("overlap").get<double>();
  p.noise_factor = j.at("noise_factor").get<double>();
  p.seed = j.at("seed").get<std::uint64_t>();
  return p;
}

AnsatzParamsFile params_from_json_file(const std::string& path) {
  return params_from_json(read_text_file(path));
}

Config config_from_json(const std::string& text) {
  const json j = json::parse(text);
  Config cfg;
  if (j.contains("c_slope")) cfg.noise.c_slope = j.at("c_slope").get<double>();
  if (j.contains("c_offset")) cfg.noise.c_offset = j.at("c_offset").get<double>();
  if (j.contains("eps_mem")) cfg.noise.eps_mem = j.at("eps_mem").get<double>();
  if (cfg.noise.c_slope < 0 || cfg.noise.c_offset < 0 || cfg.noise.eps_mem < 0) {
    throw std::invalid_argument("config: noise constants must be >= 0");
  }
  return cfg;
}

Config config_from_json_file(const std::string& path) {
  return config_from_json(read_text_file(path));
}

std::string read_text_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  f << text;
  if (!f) throw std::runtime_error("write failed: " + path);
}

}  // namespace dxhog
