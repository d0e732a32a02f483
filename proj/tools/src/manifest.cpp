#include <algorithm>
#include <filesystem>
#include <map>
#include <ostream>
#include <set>

#include <json.hpp>

#include "cli.hpp"
#include "polymt/error.hpp"
#include "polymt/io.hpp"

namespace polymt::cli {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

struct Stage {
  std::string name;
  std::vector<std::string> args;  // subcommand first
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
};

std::vector<std::string> string_list(const json& stage, const char* key) {
  std::vector<std::string> out;
  if (!stage.contains(key)) return out;
  for (const json& v : stage.at(key)) out.push_back(v.get<std::string>());
  return out;
}

std::vector<Stage> parse_stages(const std::string& content) {
  std::vector<Stage> stages;
  try {
    const json doc = json::parse(content);
    if (!doc.contains("stages")) return stages;
    for (const json& s : doc.at("stages")) {
      Stage st;
      st.name = s.at("name").get<std::string>();
      st.args.push_back(s.at("command").get<std::string>());
      for (std::string& a : string_list(s, "args")) st.args.push_back(std::move(a));
      if (s.contains("seed")) {
        st.args.emplace_back("--seed");
        st.args.push_back(std::to_string(s.at("seed").get<unsigned long long>()));
      }
      st.inputs = string_list(s, "inputs");
      st.outputs = string_list(s, "outputs");
      stages.push_back(std::move(st));
    }
  } catch (const json::exception& e) {
    throw Error(Errc::parse_error, std::string("manifest: ") + e.what());
  }
  std::set<std::string> names, outputs;
  for (const Stage& s : stages) {
    if (!names.insert(s.name).second) throw Error(Errc::invalid_argument, "stage name '" + s.name + "' repeats");
    for (const std::string& o : s.outputs) {
      if (!outputs.insert(fs::path(o).lexically_normal().string()).second) {
        throw Error(Errc::invalid_argument, "output '" + o + "' is produced by two stages");
      }
    }
  }
  return stages;
}

// Kahn's algorithm; ties go to manifest order.
std::vector<std::size_t> topological_order(const std::vector<Stage>& stages) {
  std::map<std::string, std::size_t> producer;
  for (std::size_t i = 0; i < stages.size(); ++i) {
    for (const std::string& o : stages[i].outputs) producer[fs::path(o).lexically_normal().string()] = i;
  }
  std::vector<std::set<std::size_t>> next(stages.size());
  std::vector<std::size_t> indegree(stages.size(), 0);
  for (std::size_t i = 0; i < stages.size(); ++i) {
    for (const std::string& in : stages[i].inputs) {
      const auto it = producer.find(fs::path(in).lexically_normal().string());
      if (it == producer.end()) continue;
      if (it->second == i) throw Error(Errc::cycle_detected, "stage '" + stages[i].name + "' consumes its own output");
      if (next[it->second].insert(i).second) ++indegree[i];
    }
  }
  std::set<std::size_t> ready;
  for (std::size_t i = 0; i < stages.size(); ++i) {
    if (indegree[i] == 0) ready.insert(i);
  }
  std::vector<std::size_t> order;
  while (!ready.empty()) {
    const std::size_t i = *ready.begin();
    ready.erase(ready.begin());
    order.push_back(i);
    for (const std::size_t j : next[i]) {
      if (--indegree[j] == 0) ready.insert(j);
    }
  }
  if (order.size() != stages.size()) {
    std::string names;
    for (std::size_t i = 0; i < stages.size(); ++i) {
      if (indegree[i] > 0) names += (names.empty() ? "" : ", ") + stages[i].name;
    }
    throw Error(Errc::cycle_detected, "stages " + names);
  }
  return order;
}

std::uint64_t hash_path(const fs::path& p, std::uint64_t h) {
  h = io::fnv1a(p.lexically_normal().string(), h);
  if (fs::is_directory(p)) {
    std::vector<fs::path> children;
    for (const auto& e : fs::directory_iterator(p)) children.push_back(e.path());
    std::sort(children.begin(), children.end());
    for (const fs::path& c : children) h = hash_path(c, h);
    return h;
  }
  if (!fs::exists(p)) return io::fnv1a("<missing>", h);
  return io::fnv1a(io::read_file(p), h);
}

std::string stage_hash(const Stage& s) {
  std::uint64_t h = io::fnv1a("polymt-stage-v1");
  for (const std::string& a : s.args) h = io::fnv1a(a + '\0', h);
  for (const std::string& in : s.inputs) h = hash_path(in, h);
  h = io::fnv1a("->", h);
  for (const std::string& out : s.outputs) h = hash_path(out, h);
  return io::hex64(h);
}

}  // namespace

void run_manifest(const fs::path& manifest, bool force, const Streams& streams) {
  const std::vector<Stage> stages = parse_stages(io::read_file(manifest));
  const std::vector<std::size_t> order = topological_order(stages);

  fs::path state_path = manifest;
  state_path += ".state.json";
  json state = json::object();
  if (fs::exists(state_path)) {
    try {
      state = json::parse(io::read_file(state_path));
    } catch (const json::exception&) {
      state = json::object();
    }
  }

  std::ostream& err = *streams.err;
  for (const std::size_t i : order) {
    const Stage& s = stages[i];
    const bool outputs_present =
        std::all_of(s.outputs.begin(), s.outputs.end(), [](const std::string& o) { return fs::exists(o); });
    if (!force && outputs_present && state.contains(s.name) && state[s.name].get<std::string>() == stage_hash(s)) {
      err << "stage " << s.name << ": up to date\n";
      continue;
    }
    err << "stage " << s.name << ": running\n";
    const int code = dispatch(s.args, streams);
    if (code != kOk) {
      throw Error(Errc::stage_failed, "stage '" + s.name + "' exited with status " + std::to_string(code));
    }
    for (const std::string& o : s.outputs) {
      if (!fs::exists(o)) throw Error(Errc::stage_failed, "stage '" + s.name + "' did not produce " + o);
    }
    state[s.name] = stage_hash(s);
    io::write_file_atomic(state_path, state.dump(2) + '\n');
  }
}

}  // namespace polymt::cli
