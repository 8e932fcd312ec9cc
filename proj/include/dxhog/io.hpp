// Wire formats: circuit and template JSON, trial-record JSONL, the params
// file emitted by the optimizer, statevector binaries, and the config file.
//
// All writers build their output by hand with shortest-round-trip doubles so
// identical inputs produce byte-identical files on every platform; readers go
// through a JSON parser and accept any field order.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dxhog/protocol.hpp"
#include "dxhog/state.hpp"
#include "dxhog/stabilizer.hpp"
#include "dxhog/variational.hpp"

namespace dxhog {

// shortest decimal form that parses back to the same binary64
std::string format_double_shortest(double v);

// 10 significant digits, for human-facing output
std::string format_sig10(double v);

std::string circuit_to_json(const Circuit& c);
Circuit circuit_from_json(const std::string& text);

// masks serialized as ascending index arrays, matching the pivot list
std::string template_to_json(const MeasurementTemplate& tpl);
MeasurementTemplate template_from_json(const std::string& text);

// 8-byte little-endian qubit count, then 2^n (re, im) float64 pairs
void write_statevector(const std::string& path, const StateVector& sv);
StateVector read_statevector(const std::string& path);

// one record per line; z is an n-character '0'/'1' string, character q being
// qubit q (least significant bit first)
std::string trial_record_line(const TrialRecord& rec);
TrialRecord trial_record_from_line(const std::string& line);

std::string summary_to_json(const XebSummary& s);

struct AnsatzParamsFile {
  int n = 0;
  int depth = 0;
  std::vector<double> params;
  double predicted_fidelity = 0.0;
  double overlap = 0.0;
  double noise_factor = 0.0;
  std::uint64_t seed = 0;
};

std::string params_to_json(const AnsatzParamsFile& p);
AnsatzParamsFile params_from_json(const std::string& text);
AnsatzParamsFile params_from_json_file(const std::string& path);

struct Config {
  NoiseConstants noise;
};

// recognized keys: c_slope, c_offset, eps_mem; anything else is ignored
Config config_from_json(const std::string& text);
Config config_from_json_file(const std::string& path);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace dxhog
