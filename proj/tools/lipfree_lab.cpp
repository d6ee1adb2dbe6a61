// lipfree-lab: command-line front end over the lipfree C API.
#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "lipfree/lipfree.h"

namespace {

using Json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitDomain = 1;
constexpr int kExitUsage = 2;

int exit_code(lf_status s) {
  switch (s) {
    case LF_OK: return kExitOk;
    case LF_DOMAIN_FAILURE:
    case LF_VERIFICATION_FAILED: return kExitDomain;
    default: return kExitUsage;
  }
}

struct Outcome {
  int code = kExitOk;
  std::optional<std::string> report;  // JSON text
  std::string error;
};

// Runs one C API call producing a JSON string.
Outcome call(const std::function<lf_status(char**)>& fn) {
  char* text = nullptr;
  lf_status s = fn(&text);
  Outcome out;
  out.code = exit_code(s);
  if (text) {
    out.report = text;
    lf_string_free(text);
  }
  if (s != LF_OK) out.error = lf_last_error();
  return out;
}

struct ReadError {
  std::string message;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ReadError{"cannot read '" + path + "'"};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void flatten(const Json& j, const std::string& prefix, std::ostream& out) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) flatten(v, prefix.empty() ? k : prefix + "." + k, out);
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "[" + std::to_string(i) + "]", out);
  } else {
    std::string value = j.is_string() ? j.get<std::string>() : j.dump();
    if (value.find_first_of(",\"\n") != std::string::npos) {
      std::string quoted = "\"";
      for (char c : value) quoted += c == '"' ? std::string("\"\"") : std::string(1, c);
      value = quoted + "\"";
    }
    out << prefix << "," << value << "\n";
  }
}

struct Settings {
  std::vector<std::string> inputs;
  std::string output;
  std::string format = "json";
  unsigned jobs = 1;
  double epsilon = 0.1;
  bool epsilon_set = false;
  std::uint64_t seed = 0;
  bool integer_certificate = false;
  std::string family;
  std::size_t points = 8, blocks = 20, support = 3, n = 0;
  std::int64_t N = 4;
  double scale = 1.0, exponent = 0.5;
};

using Task = std::function<Outcome()>;

Outcome run_batch(const std::vector<std::string>& labels, const std::vector<Task>& tasks, unsigned jobs,
                  bool force_array) {
  std::vector<Outcome> results(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      try {
        results[i] = tasks[i]();
      } catch (const ReadError& e) {
        results[i] = Outcome{kExitUsage, std::nullopt, e.message};
      }
    }
  };
  const unsigned threads = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(tasks.size())));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  if (!force_array && results.size() == 1) return results.front();
  Outcome merged;
  Json arr = Json::array();
  for (std::size_t i = 0; i < results.size(); ++i) {
    const Outcome& r = results[i];
    merged.code = std::max(merged.code, r.code);
    Json entry{{"input", labels[i]}, {"exit_code", r.code}};
    entry["result"] = r.report ? Json::parse(*r.report) : Json(nullptr);
    if (!r.error.empty()) {
      entry["error"] = r.error;
      if (!merged.error.empty()) merged.error += "\n";
      merged.error += labels[i] + ": " + r.error;
    }
    arr.push_back(std::move(entry));
  }
  merged.report = arr.dump(2);
  return merged;
}

int finish(const Outcome& outcome, const Settings& s) {
  if (!outcome.error.empty()) std::cerr << "lipfree-lab: " << outcome.error << "\n";
  if (!outcome.report) return outcome.code;
  std::string text = *outcome.report;
  if (s.format == "csv") {
    std::ostringstream csv;
    csv << "# lossy: flattened from the JSON report\nkey,value\n";
    flatten(Json::parse(text), "", csv);
    text = csv.str();
  } else {
    text += "\n";
  }
  if (s.output.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(s.output, std::ios::binary);
    if (!out || !(out << text)) {
      std::cerr << "lipfree-lab: cannot write '" << s.output << "'\n";
      return kExitUsage;
    }
  }
  return outcome.code;
}

// One task per input file.
Outcome per_input(const Settings& s, const std::function<lf_status(const char*, char**)>& fn) {
  if (s.inputs.empty()) return Outcome{kExitUsage, std::nullopt, "--input is required"};
  std::vector<Task> tasks;
  for (const auto& path : s.inputs) {
    tasks.push_back([path, fn] {
      const std::string text = read_file(path);
      return call([&](char** out) { return fn(text.c_str(), out); });
    });
  }
  return run_batch(s.inputs, tasks, s.jobs, false);
}

// Either a (first, second) pair of files or files holding both documents
// under `first_key` and `second_key`.
Outcome paired(const Settings& s, const char* first_key, const char* second_key, const char* detect_key,
               const std::function<lf_status(const char*, const char*, char**)>& fn) {
  if (s.inputs.empty()) return Outcome{kExitUsage, std::nullopt, "--input is required"};
  std::string first_text;
  try {
    first_text = read_file(s.inputs.front());
  } catch (const ReadError& e) {
    return Outcome{kExitUsage, std::nullopt, e.message};
  }
  Json probe = Json::parse(first_text, nullptr, false);
  if (!probe.is_discarded() && probe.is_object() && probe.contains(detect_key)) {
    if (s.inputs.size() != 2) {
      return Outcome{kExitUsage, std::nullopt, "expected two inputs: the " + std::string(first_key) + " and the " +
                                                    second_key};
    }
    std::vector<Task> tasks{[&s, first_text, fn] {
      const std::string second = read_file(s.inputs[1]);
      return call([&](char** out) { return fn(first_text.c_str(), second.c_str(), out); });
    }};
    return run_batch({s.inputs[1]}, tasks, 1, false);
  }
  std::vector<Task> tasks;
  for (const auto& path : s.inputs) {
    tasks.push_back([path, first_key, second_key, fn] {
      Json j = Json::parse(read_file(path), nullptr, false);
      if (j.is_discarded() || !j.is_object() || !j.contains(first_key) || !j.contains(second_key)) {
        return Outcome{kExitUsage, std::nullopt,
                       "'" + path + "' must hold '" + first_key + "' and '" + second_key + "'"};
      }
      const std::string a = j.at(first_key).dump(), b = j.at(second_key).dump();
      return call([&](char** out) { return fn(a.c_str(), b.c_str(), out); });
    });
  }
  return run_batch(s.inputs, tasks, s.jobs, false);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lipschitz-free space norms, 3-Lipschitz witnesses and tree embeddings on finite metric spaces"};
  app.require_subcommand(1);
  Settings s;

  auto common = [&](CLI::App* cmd) {
    cmd->add_option("--input,-i", s.inputs, "Input JSON file (repeatable)");
    cmd->add_option("--output,-o", s.output, "Write the report here instead of stdout");
    cmd->add_option("--format", s.format, "Report format; csv is a lossy flattening")
        ->check(CLI::IsMember({"json", "csv"}));
    cmd->add_option("--jobs,-j", s.jobs, "Instances processed concurrently in batch mode")
        ->check(CLI::Range(1u, 256u));
  };

  auto* validate = app.add_subcommand("validate", "Check metric axioms");
  auto* classify = app.add_subcommand("classify", "Ultrametric, four-point and separation report");
  auto* norm = app.add_subcommand("norm", "Free-space norm with transport plan and dual potential");
  auto* witness = app.add_subcommand("witness", "Gliding hump, 3-Lipschitz witness and Schur report");
  auto* generate = app.add_subcommand("generate", "Seeded instance generator");
  auto* tree_embed = app.add_subcommand("tree-embed", "Realise a four-point metric as a weighted tree");
  auto* tree_norm = app.add_subcommand("tree-norm", "Edge-cut norm on a tree");
  auto* density = app.add_subcommand("density", "Density interval of a union of intervals");
  auto* distortion = app.add_subcommand("distortion", "Distortion pair of an ultrametric sample");
  auto* round = app.add_subcommand("round-metric", "Replace d by ceil(c d)");
  auto* snow = app.add_subcommand("snowflake", "Replace d by d^p");
  for (auto* cmd : {validate, classify, norm, witness, generate, tree_embed, tree_norm, density, distortion, round, snow}) {
    common(cmd);
  }

  norm->add_flag("--integer-certificate", s.integer_certificate, "Also return the integer-valued maximiser");
  witness->add_option("--epsilon", s.epsilon, "Gliding-hump tolerance")->check(CLI::PositiveNumber);
  witness->add_option("--seed", s.seed, "Recorded in the report; the construction itself is deterministic");
  density->add_option("--epsilon", s.epsilon, "Required density is 1 - epsilon")->required();
  distortion->add_option("--n", s.n, "Number of partition cells (overrides the file)");
  round->add_option("--scale,-c", s.scale, "Scale c > 0")->required();
  snow->add_option("--exponent,-p", s.exponent, "Exponent p in (0, 1]")->required();
  generate->add_option("--family", s.family, "uniform-discrete, integer-metric, tree, ultrametric, "
                                             "block-sequence or conflict-block")
      ->required();
  generate->add_option("--seed", s.seed, "Seed; equal seeds give identical files");
  generate->add_option("--points", s.points, "Point count for metric families");
  generate->add_option("--N", s.N, "Largest distance for integer families");
  generate->add_option("--blocks", s.blocks, "Block count for block families");
  generate->add_option("--support", s.support, "Largest block support");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  Outcome outcome;
  if (validate->parsed()) {
    outcome = per_input(s, lf_validate_json);
  } else if (classify->parsed()) {
    outcome = per_input(s, lf_classify_json);
  } else if (norm->parsed()) {
    const int flag = s.integer_certificate ? 1 : 0;
    outcome = paired(s, "space", "element", "dist", [flag](const char* a, const char* b, char** out) {
      return lf_norm_json(a, b, flag, out);
    });
  } else if (witness->parsed()) {
    const double eps = s.epsilon;
    const std::uint64_t seed = s.seed;
    outcome = per_input(s, [eps](const char* text, char** out) { return lf_witness_json(text, eps, out); });
    if (outcome.report && s.inputs.size() == 1) {
      Json j = Json::parse(*outcome.report);
      j["seed"] = seed;
      outcome.report = j.dump(2);
    }
  } else if (generate->parsed()) {
    Json params{{"points", s.points}, {"N", s.N}, {"blocks", s.blocks}, {"support", s.support}};
    const std::string p = params.dump();
    outcome = call([&](char** out) { return lf_generate_json(s.family.c_str(), p.c_str(), s.seed, out); });
  } else if (tree_embed->parsed()) {
    outcome = per_input(s, lf_tree_embed_json);
  } else if (tree_norm->parsed()) {
    outcome = paired(s, "tree", "element", "edges", lf_tree_norm_json);
  } else if (density->parsed()) {
    const double eps = s.epsilon;
    outcome = per_input(s, [eps](const char* text, char** out) { return lf_density_json(text, eps, out); });
  } else if (distortion->parsed()) {
    const std::size_t n = s.n;
    outcome = per_input(s, [n](const char* text, char** out) {
      if (n == 0) return lf_distortion_json(text, out);
      Json j = Json::parse(text, nullptr, false);
      if (j.is_discarded() || !j.is_object()) return lf_distortion_json(text, out);
      j["n"] = n;
      const std::string patched = j.dump();
      return lf_distortion_json(patched.c_str(), out);
    });
  } else if (round->parsed()) {
    const double c = s.scale;
    outcome = per_input(s, [c](const char* text, char** out) { return lf_round_metric_json(text, c, out); });
  } else if (snow->parsed()) {
    const double p = s.exponent;
    outcome = per_input(s, [p](const char* text, char** out) { return lf_snowflake_json(text, p, out); });
  }
  return finish(outcome, s);
}
