#include "kvwave/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "kvwave/error.hpp"

namespace kvwave {

namespace {

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

[[noreturn]] void invalid(const std::string& field, const std::string& why) {
  throw Error(ErrorCode::ValidationError, field + ": " + why);
}

double to_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || p != v.data() + v.size()) invalid(key, "expected a number, got '" + v + "'");
  return out;
}

long long to_int(const std::string& key, const std::string& v) {
  long long out = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || p != v.data() + v.size()) invalid(key, "expected an integer, got '" + v + "'");
  return out;
}

bool to_bool(const std::string& key, const std::string& v) {
  std::string s = v;
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char ch) { return std::tolower(ch); });
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  invalid(key, "expected a boolean, got '" + v + "'");
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(v);
  while (std::getline(is, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

Command to_command(const std::string& v) {
  static const std::map<std::string, Command> names = {
      {"simulate", Command::simulate}, {"scan", Command::scan},         {"quasimode", Command::quasimode},
      {"audit", Command::audit},       {"spectrum", Command::spectrum}, {"stationary", Command::stationary}};
  auto it = names.find(v);
  if (it == names.end()) invalid("command", "unknown command '" + v + "'");
  return it->second;
}

using Setter = std::function<void(RunConfig&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"command", [](RunConfig& r, const auto&, const auto& v) { r.command = to_command(v); }},
      {"c", [](RunConfig& r, const auto& k, const auto& v) { r.params.c = to_double(k, v); }},
      {"d", [](RunConfig& r, const auto& k, const auto& v) { r.params.d = to_double(k, v); }},
      {"support_lo", [](RunConfig& r, const auto& k, const auto& v) { r.params.damping_support.lo = to_double(k, v); }},
      {"support_hi", [](RunConfig& r, const auto& k, const auto& v) { r.params.damping_support.hi = to_double(k, v); }},
      {"N", [](RunConfig& r, const auto& k, const auto& v) {
         long long n = to_int(k, v);
         if (n < 2 || n % 2 != 0) invalid(k, "must be an even integer >= 2");
         r.N = static_cast<std::size_t>(n);
       }},
      {"T", [](RunConfig& r, const auto& k, const auto& v) { r.T = to_double(k, v); }},
      {"dt", [](RunConfig& r, const auto& k, const auto& v) { r.dt = to_double(k, v); }},
      {"init", [](RunConfig& r, const auto& k, const auto& v) {
         if (v != "sine" && v != "random") invalid(k, "expected sine or random");
         r.init = v;
       }},
      {"smooth", [](RunConfig& r, const auto& k, const auto& v) { r.smooth = to_bool(k, v); }},
      {"beta_min", [](RunConfig& r, const auto& k, const auto& v) { r.beta_min = to_double(k, v); }},
      {"beta_max", [](RunConfig& r, const auto& k, const auto& v) { r.beta_max = to_double(k, v); }},
      {"beta_points", [](RunConfig& r, const auto& k, const auto& v) { r.beta_points = to_double(k, v); }},
      {"beta_spacing", [](RunConfig& r, const auto& k, const auto& v) {
         if (v != "linear" && v != "log") invalid(k, "expected linear or log");
         r.beta_log = v == "log";
       }},
      {"insert_quasimodes", [](RunConfig& r, const auto& k, const auto& v) { r.insert_quasimodes = to_bool(k, v); }},
      {"n_max", [](RunConfig& r, const auto& k, const auto& v) { r.n_max = static_cast<int>(to_int(k, v)); }},
      {"gamma", [](RunConfig& r, const auto& k, const auto& v) {
         r.gamma = to_double(k, v);
         r.has_gamma = true;
       }},
      {"tol", [](RunConfig& r, const auto& k, const auto& v) { r.tol = to_double(k, v); }},
      {"max_iter", [](RunConfig& r, const auto& k, const auto& v) { r.max_iter = static_cast<int>(to_int(k, v)); }},
      {"n_list", [](RunConfig& r, const auto& k, const auto& v) {
         r.n_list.clear();
         for (const auto& item : split_list(v)) r.n_list.push_back(static_cast<int>(to_int(k, item)));
       }},
      {"mesh_factor", [](RunConfig& r, const auto& k, const auto& v) { r.mesh_factor = static_cast<int>(to_int(k, v)); }},
      {"strict_theta", [](RunConfig& r, const auto& k, const auto& v) { r.strict_theta = to_bool(k, v); }},
      {"quantities", [](RunConfig& r, const auto&, const auto& v) { r.quantities = split_list(v); }},
      {"shift_re", [](RunConfig& r, const auto& k, const auto& v) { r.shift_re = to_double(k, v); }},
      {"shift_im", [](RunConfig& r, const auto& k, const auto& v) { r.shift_im = to_double(k, v); }},
      {"shift_step", [](RunConfig& r, const auto& k, const auto& v) { r.shift_step = to_double(k, v); }},
      {"probes", [](RunConfig& r, const auto& k, const auto& v) { r.probes = static_cast<int>(to_int(k, v)); }},
      {"output", [](RunConfig& r, const auto&, const auto& v) { r.output = v; }},
      {"seed", [](RunConfig& r, const auto& k, const auto& v) {
         long long s = to_int(k, v);
         if (s < 0) invalid(k, "must be nonnegative");
         r.seed = static_cast<std::uint64_t>(s);
       }},
  };
  return table;
}

std::vector<std::pair<std::string, std::string>> read_key_values(const std::string& text) {
  std::vector<std::pair<std::string, std::string>> out;
  std::set<std::string> seen;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::string t = trim(line);
    if (t.empty()) continue;
    auto eq = t.find('=');
    if (eq == std::string::npos)
      throw Error(ErrorCode::ParseError, "line " + std::to_string(lineno) + ": expected key=value");
    std::string key = trim(t.substr(0, eq));
    std::string value = trim(t.substr(eq + 1));
    if (key.empty()) throw Error(ErrorCode::ParseError, "line " + std::to_string(lineno) + ": empty key");
    if (!seen.insert(key).second)
      throw Error(ErrorCode::ParseError, "line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
    out.emplace_back(key, value);
  }
  return out;
}

std::string json_scalar(const nlohmann::json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number()) {
    std::ostringstream os;
    os.precision(17);
    os << v.get<double>();
    return os.str();
  }
  throw Error(ErrorCode::ParseError, "unsupported JSON value " + v.dump());
}

std::vector<std::pair<std::string, std::string>> read_json(const std::string& text) {
  std::set<std::string> seen;
  std::string duplicate;
  auto cb = [&](int depth, nlohmann::json::parse_event_t event, nlohmann::json& parsed) {
    if (event == nlohmann::json::parse_event_t::key && depth == 1) {
      auto key = parsed.get<std::string>();
      if (!seen.insert(key).second && duplicate.empty()) duplicate = key;
    }
    return true;
  };
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text, cb);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
  if (!duplicate.empty()) throw Error(ErrorCode::ParseError, "duplicate key '" + duplicate + "'");
  if (!doc.is_object()) throw Error(ErrorCode::ParseError, "JSON config must be an object");
  std::vector<std::pair<std::string, std::string>> out;
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    std::string value;
    if (it->is_array()) {
      for (std::size_t i = 0; i < it->size(); ++i) value += (i ? "," : "") + json_scalar((*it)[i]);
    } else {
      value = json_scalar(*it);
    }
    out.emplace_back(it.key(), value);
  }
  return out;
}

void validate(RunConfig& r, bool has_command) {
  if (!has_command) invalid("command", "missing");
  const bool spectral = r.command == Command::quasimode || r.command == Command::audit ||
                        (r.command == Command::scan && r.insert_quasimodes);
  try {
    validate_params(r.params, spectral ? Purpose::quasimode : Purpose::simulate);
  } catch (const Error& e) {
    std::string field = e.code() == ErrorCode::NegativeD ? "d"
                        : e.code() == ErrorCode::EmptySupport ? "support"
                                                              : "c";
    if (e.code() == ErrorCode::ValidationError && r.params.c > 1.0) field = "d";
    invalid(field, e.detail());
  }
  if (!(r.T > 0.0)) invalid("T", "must be positive");
  if (r.dt < 0.0) invalid("dt", "must be positive");
  if (r.beta_min < 0.0) invalid("beta_min", "must be nonnegative");
  if (r.beta_max < r.beta_min) invalid("beta_max", "must not be below beta_min");
  if (!(r.beta_points > 0.0)) invalid("beta_points", "must be positive");
  if (r.beta_log && !(r.beta_min > 0.0)) invalid("beta_min", "log spacing needs beta_min > 0");
  if (r.has_gamma && r.gamma < 0.0) invalid("gamma", "must be nonnegative");
  if (!(r.tol > 0.0)) invalid("tol", "must be positive");
  if (r.max_iter < 1) invalid("max_iter", "must be positive");
  if (r.n_max < 0) invalid("n_max", "must be nonnegative");
  if (r.mesh_factor < 1) invalid("mesh_factor", "must be positive");
  if (r.probes < 1) invalid("probes", "must be positive");
  for (int n : r.n_list)
    if (n < 1) invalid("n_list", "mode indices must be >= 1");

  if (r.n_list.empty()) {
    if (r.command == Command::quasimode) r.n_list = {2, 4, 8, 16};
    if (r.command == Command::audit) r.n_list = {10, 20, 40, 80};
  }
  if (r.command == Command::audit && r.n_list.size() < 2) invalid("n_list", "audit needs two or more entries");
  if (r.output.empty()) r.output = to_string(r.command) + ".csv";
}

}  // namespace

std::string to_string(Command c) {
  switch (c) {
    case Command::simulate: return "simulate";
    case Command::scan: return "scan";
    case Command::quasimode: return "quasimode";
    case Command::audit: return "audit";
    case Command::spectrum: return "spectrum";
    case Command::stationary: return "stationary";
  }
  return "unknown";
}

RunConfig parse_config(const std::string& text, const Overrides& overrides) {
  std::string t = trim(text);
  auto entries = (!t.empty() && t.front() == '{') ? read_json(t) : read_key_values(text);

  std::map<std::string, std::string> merged;
  std::vector<std::string> order;
  for (auto& [k, v] : entries) {
    merged[k] = v;
    order.push_back(k);
  }
  for (const auto& [k, v] : overrides) {
    if (!merged.count(k)) order.push_back(k);
    merged[k] = v;
  }

  RunConfig r;
  bool has_command = false;
  for (const auto& key : order) {
    auto it = setters().find(key);
    if (it == setters().end()) invalid(key, "unknown key");
    it->second(r, key, merged[key]);
    has_command = has_command || key == "command";
  }
  validate(r, has_command);
  return r;
}

}  // namespace kvwave
