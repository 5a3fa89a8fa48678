#include "stochmatch/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"

namespace stochmatch {

namespace {

using Json = nlohmann::ordered_json;

enum class Kind { kStochastic, kCorrelated, kBMatching, kAdwords };

[[noreturn]] void fail(const std::string& message) { throw FormatError(message); }

void allow_only(const Json& obj, std::initializer_list<std::string_view> allowed,
                const std::string& where) {
  if (!obj.is_object()) fail(where + " must be an object");
  for (const auto& item : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end()) {
      fail("unknown field '" + item.key() + "' in " + where);
    }
  }
}

const Json& require(const Json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) fail("missing field '" + std::string(key) + "' in " + where);
  return *it;
}

double number(const Json& v, const std::string& what) {
  if (!v.is_number()) fail(what + " must be a number");
  return v.get<double>();
}

std::string id_key(const Json& v, const std::string& what) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
  fail(what + " must be a string or an integer");
}

int lookup(const std::map<std::string, int>& ids, const std::string& key,
           const std::string& what) {
  auto it = ids.find(key);
  if (it == ids.end()) fail(what + " references unknown id '" + key + "'");
  return it->second;
}

void forbid(const Json& obj, const char* key, std::string_view kind,
            const std::string& where) {
  if (obj.contains(key)) {
    fail("field '" + std::string(key) + "' in " + where + " is not allowed for kind " +
         std::string(kind));
  }
}

}  // namespace

std::string_view kind_name(const AnyInstance& instance) {
  if (std::holds_alternative<StochasticInstance>(instance)) return "stochastic";
  if (std::holds_alternative<CorrelatedInstance>(instance)) return "correlated";
  return std::get<BudgetedInstance>(instance).kind == BudgetKind::kBMatching
             ? "bmatching"
             : "adwords";
}

AnyInstance parse_instance(std::string_view text) {
  Json root;
  try {
    root = Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    fail(std::string("malformed JSON: ") + e.what());
  }
  allow_only(root, {"format_version", "kind", "resources", "arrivals", "edges",
                    "correlated", "hidden_budgets"},
             "instance");

  const Json& version = require(root, "format_version", "instance");
  if (!version.is_number_integer() || version.get<int>() != kFormatVersion) {
    fail("unsupported format_version (expected " + std::to_string(kFormatVersion) + ")");
  }

  const Json& kind_json = require(root, "kind", "instance");
  if (!kind_json.is_string()) fail("kind must be a string");
  const std::string kind_text = kind_json.get<std::string>();
  Kind kind;
  if (kind_text == "stochastic") kind = Kind::kStochastic;
  else if (kind_text == "correlated") kind = Kind::kCorrelated;
  else if (kind_text == "bmatching") kind = Kind::kBMatching;
  else if (kind_text == "adwords") kind = Kind::kAdwords;
  else fail("unknown kind '" + kind_text + "'");
  const bool budgeted = kind == Kind::kBMatching || kind == Kind::kAdwords;

  // Resources.
  const Json& resources = require(root, "resources", "instance");
  if (!resources.is_array()) fail("resources must be an array");
  std::map<std::string, int> resource_ids;
  std::vector<double> weights, budgets;
  for (std::size_t k = 0; k < resources.size(); ++k) {
    const std::string where = "resource " + std::to_string(k);
    const Json& r = resources[k];
    allow_only(r, {"id", "weight", "budget"}, where);
    const std::string key = id_key(require(r, "id", where), where + " id");
    if (!resource_ids.emplace(key, static_cast<int>(k)).second) {
      fail("duplicate resource id '" + key + "'");
    }
    weights.push_back(number(require(r, "weight", where), where + " weight"));
    if (budgeted) {
      budgets.push_back(number(require(r, "budget", where), where + " budget"));
    } else {
      forbid(r, "budget", kind_text, where);
    }
  }

  // Arrivals.
  const Json& arrivals = require(root, "arrivals", "instance");
  if (!arrivals.is_array()) fail("arrivals must be an array");
  std::map<std::string, int> arrival_ids;
  for (std::size_t k = 0; k < arrivals.size(); ++k) {
    const std::string key = id_key(arrivals[k], "arrival " + std::to_string(k));
    if (!arrival_ids.emplace(key, static_cast<int>(k)).second) {
      fail("duplicate arrival id '" + key + "'");
    }
  }
  const int m = static_cast<int>(arrivals.size());

  // Edges.
  const Json& edges = require(root, "edges", "instance");
  if (!edges.is_array()) fail("edges must be an array");
  std::vector<EdgeSpec> specs;
  std::vector<std::vector<Bid>> bids(m);
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const std::string where = "edge " + std::to_string(k);
    const Json& e = edges[k];
    allow_only(e, {"resource", "arrival", "p", "bid"}, where);
    const int i = lookup(resource_ids, id_key(require(e, "resource", where), where),
                         where);
    const int t = lookup(arrival_ids, id_key(require(e, "arrival", where), where), where);
    switch (kind) {
      case Kind::kStochastic: {
        forbid(e, "bid", kind_text, where);
        const double p = e.contains("p") ? number(e["p"], where + " p") : 1.0;
        specs.push_back({i, t, p});
        break;
      }
      case Kind::kCorrelated:
        forbid(e, "bid", kind_text, where);
        forbid(e, "p", kind_text, where);
        specs.push_back({i, t, 1.0});
        break;
      case Kind::kBMatching:
      case Kind::kAdwords: {
        forbid(e, "p", kind_text, where);
        double bid = weights[i];
        if (kind == Kind::kAdwords) {
          bid = number(require(e, "bid", where), where + " bid");
        } else if (e.contains("bid")) {
          bid = number(e["bid"], where + " bid");
        }
        bids[t].push_back({i, bid});
        break;
      }
    }
  }

  if (!budgeted) forbid(root, "hidden_budgets", kind_text, "instance");
  if (kind != Kind::kCorrelated) forbid(root, "correlated", kind_text, "instance");

  AnyInstance out;
  if (kind == Kind::kStochastic) {
    out = make_instance(weights, m, specs);
  } else if (kind == Kind::kCorrelated) {
    const Json& block = require(root, "correlated", "instance");
    allow_only(block, {"resource_probs", "support"}, "correlated");
    const Json& probs = require(block, "resource_probs", "correlated");
    if (!probs.is_array() || probs.size() != weights.size()) {
      fail("correlated resource_probs must list one number per resource");
    }
    std::vector<double> rp;
    for (std::size_t k = 0; k < probs.size(); ++k) {
      rp.push_back(number(probs[k], "resource_probs " + std::to_string(k)));
    }
    const Json& support_json = require(block, "support", "correlated");
    if (!support_json.is_array()) fail("correlated support must be an array");
    std::vector<ArrivalAtom> support;
    for (std::size_t k = 0; k < support_json.size(); ++k) {
      const std::string where = "support atom " + std::to_string(k);
      const Json& a = support_json[k];
      allow_only(a, {"bits", "prob"}, where);
      const Json& bits_json = require(a, "bits", where);
      if (!bits_json.is_string()) fail(where + " bits must be a string");
      const std::string bits = bits_json.get<std::string>();
      if (static_cast<int>(bits.size()) != m) {
        fail(where + " bits must have one character per arrival");
      }
      ArrivalAtom atom;
      for (char c : bits) {
        if (c != '0' && c != '1') fail(where + " bits must be 0/1 characters");
        atom.bits.push_back(c == '1' ? 1 : 0);
      }
      atom.prob = number(require(a, "prob", where), where + " prob");
      support.push_back(std::move(atom));
    }
    out = make_correlated(make_instance(weights, m, specs), std::move(rp),
                          std::move(support));
  } else {
    BudgetedInstance b;
    b.kind = kind == Kind::kBMatching ? BudgetKind::kBMatching : BudgetKind::kAdwords;
    b.weights = weights;
    b.budgets = budgets;
    for (auto& adj : bids) {
      std::stable_sort(adj.begin(), adj.end(),
                       [](const Bid& x, const Bid& y) { return x.resource < y.resource; });
    }
    b.arrivals = std::move(bids);
    if (root.contains("hidden_budgets")) {
      if (!root["hidden_budgets"].is_boolean()) fail("hidden_budgets must be a boolean");
      b.budgets_hidden = root["hidden_budgets"].get<bool>();
    }
    out = std::move(b);
  }

  const auto problems = validate(out);
  if (!problems.empty()) {
    std::string message = "invalid instance:";
    for (const auto& p : problems) message += " " + p + ";";
    fail(message);
  }
  return out;
}

AnyInstance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open instance file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_instance(buffer.str());
}

std::string dump_instance(const AnyInstance& instance) {
  Json root;
  root["format_version"] = kFormatVersion;
  root["kind"] = std::string(kind_name(instance));

  const auto rid = [](int i) { return "r" + std::to_string(i); };
  const auto tid = [](int t) { return "t" + std::to_string(t); };

  const auto* budgeted = std::get_if<BudgetedInstance>(&instance);
  const StochasticInstance* graph = nullptr;
  if (const auto* s = std::get_if<StochasticInstance>(&instance)) graph = s;
  if (const auto* c = std::get_if<CorrelatedInstance>(&instance)) graph = &c->graph;

  const std::vector<double>& weights = graph ? graph->weights : budgeted->weights;
  const int m = graph ? graph->num_arrivals() : budgeted->num_arrivals();

  Json resources = Json::array();
  for (std::size_t i = 0; i < weights.size(); ++i) {
    Json r;
    r["id"] = rid(static_cast<int>(i));
    r["weight"] = weights[i];
    if (budgeted) r["budget"] = budgeted->budgets[i];
    resources.push_back(std::move(r));
  }
  root["resources"] = std::move(resources);

  Json arrivals = Json::array();
  for (int t = 0; t < m; ++t) arrivals.push_back(tid(t));
  root["arrivals"] = std::move(arrivals);

  Json edges = Json::array();
  for (int t = 0; t < m; ++t) {
    if (graph) {
      for (const Edge& e : graph->arrivals[t]) {
        Json j;
        j["resource"] = rid(e.resource);
        j["arrival"] = tid(t);
        if (std::holds_alternative<StochasticInstance>(instance)) j["p"] = e.prob;
        edges.push_back(std::move(j));
      }
    } else {
      for (const Bid& b : budgeted->arrivals[t]) {
        Json j;
        j["resource"] = rid(b.resource);
        j["arrival"] = tid(t);
        j["bid"] = b.amount;
        edges.push_back(std::move(j));
      }
    }
  }
  root["edges"] = std::move(edges);

  if (const auto* c = std::get_if<CorrelatedInstance>(&instance)) {
    Json block;
    block["resource_probs"] = c->resource_probs;
    Json support = Json::array();
    for (const ArrivalAtom& atom : c->support) {
      std::string bits;
      for (auto b : atom.bits) bits.push_back(b ? '1' : '0');
      support.push_back(Json{{"bits", bits}, {"prob", atom.prob}});
    }
    block["support"] = std::move(support);
    root["correlated"] = std::move(block);
  }
  if (budgeted) root["hidden_budgets"] = budgeted->budgets_hidden;
  return root.dump(2) + "\n";
}

void save_instance(const std::string& path, const AnyInstance& instance) {
  std::ofstream out(path);
  if (!out) fail("cannot write instance file '" + path + "'");
  out << dump_instance(instance);
  if (!out) fail("failed writing instance file '" + path + "'");
}

std::string format_number(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string optional_number(const std::optional<double>& v) {
  return v ? format_number(*v) : std::string();
}

}  // namespace

std::string csv_header() {
  return "experiment,instance_id,algorithm,n,m,R,seed,mode,mean,stderr,ci_lo,ci_hi,"
         "opt,ratio,ratio_conservative";
}

std::string csv_line(const ResultRow& row) {
  std::string out;
  out += csv_field(row.experiment) + ",";
  out += csv_field(row.instance_id) + ",";
  out += csv_field(row.algorithm) + ",";
  out += std::to_string(row.n) + ",";
  out += std::to_string(row.m) + ",";
  out += std::to_string(row.replications) + ",";
  out += std::to_string(row.seed) + ",";
  out += csv_field(row.mode) + ",";
  out += format_number(row.mean) + ",";
  out += format_number(row.std_error) + ",";
  out += format_number(row.ci_lo) + ",";
  out += format_number(row.ci_hi) + ",";
  out += optional_number(row.opt) + ",";
  out += optional_number(row.ratio) + ",";
  out += optional_number(row.ratio_conservative);
  return out;
}

std::string csv_table(const std::vector<ResultRow>& rows) {
  std::string out = csv_header() + "\n";
  for (const ResultRow& row : rows) out += csv_line(row) + "\n";
  return out;
}

std::string hardness_header() {
  return "n,p,R,seed,alg_stoch_mean,alg_stoch_stderr,alg_adwords_mean,"
         "alg_adwords_stderr,opt_star,ratio_stoch,ratio_adwords";
}

std::string hardness_line(const HardnessRow& r) {
  return std::to_string(r.n) + "," + format_number(r.p) + "," +
         std::to_string(r.stoch.replications) + "," + std::to_string(r.seed) + "," +
         format_number(r.stoch.mean) + "," + format_number(r.stoch.std_error) + "," +
         format_number(r.adwords.mean) + "," + format_number(r.adwords.std_error) + "," +
         format_number(r.opt_star) + "," + format_number(r.ratio_stoch) + "," +
         format_number(r.ratio_adwords);
}

}  // namespace stochmatch
