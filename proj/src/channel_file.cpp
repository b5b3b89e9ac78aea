#include "crancap/channel_file.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>
#include <vector>

#include "crancap/util.hpp"

namespace crancap {

namespace {

// Lines with comments stripped, paired with their 1-based numbers.
struct LineReader {
  std::istream& in;
  int number = 0;

  // Next non-blank line; false at end of input.
  bool next(std::string& out) {
    std::string raw;
    while (std::getline(in, raw)) {
      ++number;
      std::size_t hash = raw.find('#');
      if (hash != std::string::npos) raw.erase(hash);
      std::size_t a = raw.find_first_not_of(" \t\r");
      if (a == std::string::npos) continue;
      std::size_t b = raw.find_last_not_of(" \t\r");
      out = raw.substr(a, b - a + 1);
      return true;
    }
    return false;
  }
};

double parse_number(const std::string& tok, int line) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(tok, &used);
  } catch (const std::exception&) {
    throw parse_error(line, "expected a number, got '" + tok + "'");
  }
  if (used != tok.size()) throw parse_error(line, "expected a number, got '" + tok + "'");
  if (!std::isfinite(v)) throw parse_error(line, "value '" + tok + "' is not finite");
  return v;
}

int parse_count(const std::string& tok, int line) {
  double v = parse_number(tok, line);
  if (v < 1 || v != std::floor(v) || v > 1e6)
    throw parse_error(line, "expected a positive integer, got '" + tok + "'");
  return static_cast<int>(v);
}

std::vector<std::string> split(const std::string& line) {
  std::istringstream ss(line);
  std::vector<std::string> toks;
  std::string t;
  while (ss >> t) toks.push_back(t);
  return toks;
}

}  // namespace

ChannelSpec load_channel(std::istream& in) {
  LineReader reader{in};
  std::string line;

  int relays = 0, in_alpha = 0, out_alpha = 0;
  while (true) {
    if (!reader.next(line)) throw parse_error(reader.number, "missing 'channel' section");
    std::vector<std::string> toks = split(line);
    if (toks[0] == "channel") {
      if (toks.size() != 1) throw parse_error(reader.number, "'channel' takes no arguments");
      break;
    }
    if (toks[0] == "M" || toks[0] == "X" || toks[0] == "Y") {
      if (toks.size() != 2)
        throw parse_error(reader.number, "'" + toks[0] + "' needs exactly one value");
      int v = parse_count(toks[1], reader.number);
      int& slot = toks[0] == "M" ? relays : toks[0] == "X" ? in_alpha : out_alpha;
      if (slot != 0) throw parse_error(reader.number, "duplicate '" + toks[0] + "' line");
      slot = v;
      continue;
    }
    throw parse_error(reader.number, "unexpected '" + toks[0] + "' before 'channel'");
  }
  if (relays == 0) throw parse_error(reader.number, "missing 'M' line");
  if (in_alpha == 0) throw parse_error(reader.number, "missing 'X' line");
  if (out_alpha == 0) throw parse_error(reader.number, "missing 'Y' line");
  if (relays > 8) throw parse_error(reader.number, "M exceeds the supported 8 relays");

  double table = std::pow(static_cast<double>(in_alpha), relays);
  if (table > 4096.0) throw parse_error(reader.number, "channel table exceeds 4096 input tuples");
  std::size_t inputs = static_cast<std::size_t>(table);

  DiscreteMac mac;
  mac.relays = relays;
  mac.in_alphabet = in_alpha;
  mac.out_alphabet = out_alpha;
  mac.rows.reserve(inputs * out_alpha);
  for (std::size_t r = 0; r < inputs; ++r) {
    if (!reader.next(line))
      throw parse_error(reader.number, "channel row " + std::to_string(r + 1) + " of " +
                                           std::to_string(inputs) + " is missing");
    std::vector<std::string> toks = split(line);
    if (toks.size() != static_cast<std::size_t>(out_alpha))
      throw parse_error(reader.number, "channel row has " + std::to_string(toks.size()) +
                                           " entries, expected " + std::to_string(out_alpha));
    double sum = 0.0;
    for (const std::string& tok : toks) {
      double v = parse_number(tok, reader.number);
      if (v < 0.0) throw parse_error(reader.number, "negative probability '" + tok + "'");
      mac.rows.push_back(v);
      sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-9)
      throw parse_error(reader.number, "channel row sums to " + fmt12(sum) + ", expected 1");
  }

  ChannelSpec spec;
  spec.mac = std::move(mac);

  if (!reader.next(line)) return spec;
  {
    std::vector<std::string> toks = split(line);
    if (toks[0] != "pmf")
      throw parse_error(reader.number, "unexpected '" + toks[0] + "' after the channel table");
    if (toks.size() != 1) throw parse_error(reader.number, "'pmf' takes no arguments");
  }

  std::vector<double> weights;
  weights.reserve(inputs);
  int pmf_line = reader.number;
  while (weights.size() < inputs && reader.next(line)) {
    for (const std::string& tok : split(line)) {
      if (weights.size() == inputs)
        throw parse_error(reader.number, "too many pmf entries, expected " +
                                             std::to_string(inputs));
      double v = parse_number(tok, reader.number);
      if (v < 0.0) throw parse_error(reader.number, "negative probability '" + tok + "'");
      weights.push_back(v);
      pmf_line = reader.number;
    }
  }
  if (weights.size() < inputs)
    throw parse_error(reader.number, "pmf has " + std::to_string(weights.size()) +
                                         " entries, expected " + std::to_string(inputs));
  if (reader.next(line)) throw parse_error(reader.number, "unexpected content after the pmf");

  double sum = 0.0;
  for (double v : weights) sum += v;
  if (std::abs(sum - 1.0) > 1e-9)
    throw parse_error(pmf_line, "pmf sums to " + fmt12(sum) + ", expected 1");

  JointPmf joint(std::vector<int>(relays, in_alpha), std::move(weights));
  try {
    spec.pmf = SymmetricPmf::from_joint(joint, 1e-9);
  } catch (const std::exception& e) {
    throw parse_error(pmf_line, std::string("pmf is not permutation symmetric: ") + e.what());
  }
  spec.has_pmf = true;
  return spec;
}

ChannelSpec load_channel_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw parse_error(0, "cannot open '" + path + "'");
  return load_channel(in);
}

}  // namespace crancap
