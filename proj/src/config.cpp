#include "mmlqg/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include "mmlqg/csv.hpp"
#include "mmlqg/errors.hpp"

namespace mmlqg {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double x = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw UsageError("config: value for '" + key + "' is not a number: " + v);
  }
}

long long parse_int(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const long long x = std::stoll(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw UsageError("config: value for '" + key + "' is not an integer: " + v);
  }
}

std::vector<int> parse_int_list(const std::string& key, const std::string& v) {
  std::vector<int> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    out.push_back(static_cast<int>(parse_int(key, item)));
  }
  if (out.empty()) throw UsageError("config: empty list for '" + key + "'");
  return out;
}

}  // namespace

RunConfig parse_config(std::istream& in) {
  RunConfig c;
  ModelParams& m = c.model;
  std::map<std::string, std::function<void(const std::string&)>> setters;

  auto real = [&](const char* key, double* field) {
    setters[key] = [key, field](const std::string& v) {
      *field = parse_double(key, v);
    };
  };
  real("A0", &m.A0);
  real("B0", &m.B0);
  real("C0", &m.C0);
  real("A", &m.A);
  real("B", &m.B);
  real("D", &m.D);
  real("alpha", &m.alpha);
  real("sigma", &m.sigma);
  real("Q0", &m.Q0);
  real("R0", &m.R0);
  real("H0", &m.H0);
  real("Q", &m.Q);
  real("R", &m.R);
  real("H", &m.H);
  real("T", &m.T);
  real("xi", &m.xi);
  real("x_mean", &m.x_mean);
  real("x_var", &m.x_var);
  real("state_cap", &c.state_cap);
  setters["M"] = [&c](const std::string& v) {
    c.M = static_cast<int>(parse_int("M", v));
  };
  setters["N"] = [&c](const std::string& v) {
    c.N = static_cast<int>(parse_int("N", v));
  };
  setters["n_paths"] = [&c](const std::string& v) {
    c.n_paths = static_cast<int>(parse_int("n_paths", v));
  };
  setters["workers"] = [&c](const std::string& v) {
    c.workers = static_cast<int>(parse_int("workers", v));
  };
  setters["seed"] = [&c](const std::string& v) {
    c.seed = static_cast<std::uint64_t>(parse_int("seed", v));
  };
  setters["N_list"] = [&c](const std::string& v) {
    c.N_list = parse_int_list("N_list", v);
  };
  setters["gap_N_list"] = [&c](const std::string& v) {
    c.gap_N_list = parse_int_list("gap_N_list", v);
  };
  setters["responder_k"] = [&c](const std::string& v) {
    if (v != "recomputed" && v != "frozen") {
      throw UsageError("config: responder_k must be 'recomputed' or 'frozen'");
    }
    c.responder_k = v;
  };

  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw UsageError("config: line " + std::to_string(line_no) +
                       " is not 'key = value': " + line);
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto it = setters.find(key);
    if (it == setters.end()) {
      throw UsageError("config: unknown key '" + key + "'");
    }
    it->second(value);
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("config: cannot open " + path);
  return parse_config(in);
}

std::vector<std::pair<std::string, std::string>> config_echo(
    const RunConfig& c) {
  std::vector<std::pair<std::string, std::string>> out;
  auto fmt = CsvWriter::format_double;
  const ModelParams& m = c.model;
  out.emplace_back("A0", fmt(m.A0));
  out.emplace_back("B0", fmt(m.B0));
  out.emplace_back("C0", fmt(m.C0));
  out.emplace_back("A", fmt(m.A));
  out.emplace_back("B", fmt(m.B));
  out.emplace_back("D", fmt(m.D));
  out.emplace_back("alpha", fmt(m.alpha));
  out.emplace_back("sigma", fmt(m.sigma));
  out.emplace_back("Q0", fmt(m.Q0));
  out.emplace_back("R0", fmt(m.R0));
  out.emplace_back("H0", fmt(m.H0));
  out.emplace_back("Q", fmt(m.Q));
  out.emplace_back("R", fmt(m.R));
  out.emplace_back("H", fmt(m.H));
  out.emplace_back("T", fmt(m.T));
  out.emplace_back("xi", fmt(m.xi));
  out.emplace_back("x_mean", fmt(m.x_mean));
  out.emplace_back("x_var", fmt(m.x_var));
  out.emplace_back("M", std::to_string(c.M));
  out.emplace_back("N", std::to_string(c.N));
  auto list = [](const std::vector<int>& xs) {
    std::string s;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (i) s += ",";
      s += std::to_string(xs[i]);
    }
    return s;
  };
  out.emplace_back("N_list", list(c.N_list));
  out.emplace_back("gap_N_list", list(c.gap_N_list));
  out.emplace_back("n_paths", std::to_string(c.n_paths));
  out.emplace_back("seed", std::to_string(c.seed));
  out.emplace_back("workers", std::to_string(c.workers));
  out.emplace_back("state_cap", fmt(c.state_cap));
  out.emplace_back("responder_k", c.responder_k);
  return out;
}

}  // namespace mmlqg
