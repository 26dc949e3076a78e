// Command-line front end: inspect, transform and compose machines stored as
// .tdx files or pulled from the built-in catalog, plus the batch experiment
// runner. Exit codes: 0 success, 1 failed check or impossible operation,
// 2 usage error.

#include <cstdio>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "synchro/algebra.hpp"
#include "synchro/catalog.hpp"
#include "synchro/errors.hpp"
#include "synchro/growth.hpp"
#include "synchro/oracles.hpp"
#include "synchro/periodic_word.hpp"
#include "synchro/sync.hpp"
#include "synchro/transducer.hpp"
#include "synchro/verify.hpp"
#include "synchro/word.hpp"

namespace {

using nlohmann::json;

// Bad references, unreadable files and malformed inputs; reported as exit 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// MACHINE arguments are either a .tdx path or catalog:NAME /
// catalog:family:I references.
synchro::Transducer load_machine(const std::string& ref) {
  try {
    if (ref.rfind("catalog:", 0) == 0) {
      const std::string rest = ref.substr(8);
      if (rest.rfind("family:", 0) == 0) return synchro::bisync_family(std::stoi(rest.substr(7))).machine;
      return synchro::builtin(rest).machine;
    }
    return synchro::parse(read_file(ref));
  } catch (const UsageError&) {
    throw;
  } catch (const std::exception& e) {
    throw UsageError("cannot load machine '" + ref + "': " + e.what());
  }
}

void write_output(const std::string& out_path, std::string content) {
  if (content.empty() || content.back() != '\n') content += '\n';
  if (out_path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream f(out_path);
  if (!f) throw UsageError("cannot write '" + out_path + "'");
  f << content;
}

json to_json(const synchro::SyncProfile& p, const synchro::Transducer& t) {
  json j;
  j["synchronizing"] = p.is_synchronizing;
  j["level"] = p.level ? json(*p.level) : json(nullptr);
  json core = json::array();
  for (int q : p.core_states) core.push_back(t.label(q));
  j["core_states"] = core;
  j["core_dist"] = p.distance ? json(*p.distance) : json(nullptr);
  j["bisync_level"] = p.bisync ? json(*p.bisync) : json(nullptr);
  j["one_way"] = p.one_way;
  return j;
}

std::int64_t power_cap() {
  if (const char* env = std::getenv("SYNCHRO_MAX_STATES")) {
    char* end = nullptr;
    const long long v = std::strtoll(env, &end, 10);
    if (end && *end == '\0' && v > 0) return v;
    throw UsageError("SYNCHRO_MAX_STATES must be a positive integer");
  }
  return synchro::kDefaultPowerCap;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

std::string growth_csv(const synchro::GrowthSeries& series) {
  std::ostringstream csv;
  csv << "m,core_size,min_core_size,sync_level,core_dist,conjecture_ok\n";
  for (const auto& rec : series.records) {
    csv << rec.m << ',';
    if (rec.core_size) csv << *rec.core_size;
    csv << ',' << rec.min_core_size << ',' << rec.sync_level_m << ',' << rec.core_dist_m << ','
        << (rec.conjecture_ok ? "true" : "false") << '\n';
  }
  if (series.records.size() >= 4)
    csv << "# classification: " << synchro::to_string(series.classification) << " (slope "
        << format_double(series.fit.slope) << ", residual " << format_double(series.fit.residual)
        << ")\n";
  return csv.str();
}

std::string sigma_states_json(const std::vector<synchro::SigmaState>& states) {
  json arr = json::array();
  for (const auto& s : states) arr.push_back("s" + std::to_string(s.sub) + "^" + std::to_string(s.exp));
  return arr.dump();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"machine workbench for letter-to-letter transducers"};
  app.require_subcommand(1);
  int code = 0;

  std::string machine_ref, other_ref, out_path, bits, target, cycle, cat_name;
  int power_m = 1, level_k = -1, sigma_i = 1, family_i = 1, max_power = 8, gadget_k = 12;
  std::int64_t sigma_j = 0;
  std::int64_t raw_limit = 4096;
  bool reduce = false, verbose = false;
  std::uint64_t seed = 1;
  std::string suite = "all";

  auto* c_validate = app.add_subcommand("validate", "check that a .tdx file is well formed");
  c_validate->add_option("machine", machine_ref, "path or catalog reference")->required();
  c_validate->callback([&] {
    json j;
    try {
      const auto t = load_machine(machine_ref);
      j["valid"] = true;
      j["alphabet"] = t.alphabet_size();
      j["states"] = t.num_states();
    } catch (const std::exception& e) {
      j["valid"] = false;
      j["error"] = e.what();
      code = 1;
    }
    write_output(out_path, j.dump(2));
  });
  c_validate->add_option("--out,-o", out_path, "write result here instead of stdout");

  auto* c_info = app.add_subcommand("info", "basic facts about a machine");
  c_info->add_option("machine", machine_ref)->required();
  c_info->add_option("--out,-o", out_path);
  c_info->callback([&] {
    const auto t = load_machine(machine_ref);
    json j;
    j["alphabet"] = t.alphabet_size();
    j["states"] = t.num_states();
    j["labels"] = t.labels();
    j["invertible"] = synchro::is_invertible(t);
    j["digest"] = synchro::digest(t);
    write_output(out_path, j.dump(2));
  });

  auto* c_sync = app.add_subcommand("sync", "synchronization profile as JSON");
  c_sync->add_option("machine", machine_ref)->required();
  c_sync->add_option("--out,-o", out_path);
  c_sync->callback([&] {
    const auto t = load_machine(machine_ref);
    write_output(out_path, to_json(synchro::profile(t), t).dump(2));
  });

  auto* c_bisync = app.add_subcommand("bisync", "levels of the machine and its inverse");
  c_bisync->add_option("machine", machine_ref)->required();
  c_bisync->add_option("--out,-o", out_path);
  c_bisync->callback([&] {
    const auto t = load_machine(machine_ref);
    json j;
    const bool inv = synchro::is_invertible(t);
    j["invertible"] = inv;
    const auto fwd = synchro::sync_level(t);
    j["forward_level"] = fwd ? json(*fwd) : json(nullptr);
    if (inv) {
      const auto back = synchro::sync_level(synchro::invert(t));
      j["inverse_level"] = back ? json(*back) : json(nullptr);
    } else {
      j["inverse_level"] = nullptr;
    }
    const auto bi = synchro::bisync_level(t);
    j["bisync_level"] = bi ? json(*bi) : json(nullptr);
    write_output(out_path, j.dump(2));
  });

  auto* c_core = app.add_subcommand("core", "restrict to the stable core");
  c_core->add_option("machine", machine_ref)->required();
  c_core->add_option("--out,-o", out_path);
  c_core->callback([&] {
    write_output(out_path, synchro::serialize(synchro::core(load_machine(machine_ref))));
  });

  auto* c_min_core = app.add_subcommand("min-core", "normal form: minimized core");
  c_min_core->add_option("machine", machine_ref)->required();
  c_min_core->add_option("--out,-o", out_path);
  c_min_core->callback([&] {
    write_output(out_path,
                 synchro::serialize(synchro::min_core(load_machine(machine_ref)).machine));
  });

  auto* c_minimize = app.add_subcommand("minimize", "merge behaviorally equal states");
  c_minimize->add_option("machine", machine_ref)->required();
  c_minimize->add_option("--out,-o", out_path);
  c_minimize->callback([&] {
    write_output(out_path, synchro::serialize(synchro::minimize(load_machine(machine_ref))));
  });

  auto* c_coredist = app.add_subcommand("coredist", "steps until the forward image stabilizes");
  c_coredist->add_option("machine", machine_ref)->required();
  c_coredist->add_option("--out,-o", out_path);
  c_coredist->callback([&] {
    json j;
    j["core_dist"] = synchro::core_dist(load_machine(machine_ref));
    write_output(out_path, j.dump(2));
  });

  auto* c_compose = app.add_subcommand("compose", "feed the first machine's output to the second");
  c_compose->add_option("first", machine_ref)->required();
  c_compose->add_option("second", other_ref)->required();
  c_compose->add_option("--out,-o", out_path);
  c_compose->callback([&] {
    const auto a = load_machine(machine_ref);
    const auto b = load_machine(other_ref);
    write_output(out_path, synchro::serialize(synchro::product(a, b)));
  });

  auto* c_power = app.add_subcommand("power", "m-fold self-composition");
  c_power->add_option("machine", machine_ref)->required();
  c_power->add_option("-m,--exponent", power_m, "power to raise to")->required();
  c_power->add_flag("--reduce", reduce, "return the normal form of the power");
  c_power->add_option("--out,-o", out_path);
  c_power->callback([&] {
    const auto t = load_machine(machine_ref);
    if (reduce)
      write_output(out_path, synchro::serialize(synchro::nf_power(t, power_m).machine));
    else
      write_output(out_path, synchro::serialize(synchro::power(t, power_m, power_cap())));
  });

  auto* c_invert = app.add_subcommand("invert", "swap inputs and outputs");
  c_invert->add_option("machine", machine_ref)->required();
  c_invert->add_option("--out,-o", out_path);
  c_invert->callback([&] {
    write_output(out_path, synchro::serialize(synchro::invert(load_machine(machine_ref))));
  });

  auto* c_dual = app.add_subcommand("dual", "swap states and letters");
  c_dual->add_option("machine", machine_ref)->required();
  c_dual->add_option("--out,-o", out_path);
  c_dual->callback([&] {
    write_output(out_path, synchro::serialize(synchro::dual(load_machine(machine_ref))));
  });

  auto* c_level_map = app.add_subcommand("level-map", "induced map on length-k words");
  c_level_map->add_option("machine", machine_ref)->required();
  c_level_map->add_option("-k,--level", level_k, "word length (default: minimal level)");
  c_level_map->add_option("--out,-o", out_path);
  c_level_map->callback([&] {
    const auto t = load_machine(machine_ref);
    int k = level_k;
    if (k < 0) {
      const auto lvl = synchro::sync_level(t);
      if (!lvl) throw synchro::NotSynchronizing("level-map: machine never synchronizes");
      k = *lvl;
    }
    if (synchro::word_count(t.alphabet_size(), k) > (std::int64_t(1) << 16))
      throw synchro::CapExceeded("level-map: more than 2^16 words, pick a smaller k");
    const auto lt = synchro::level_transformation(t, k);
    json map = json::object();
    for (std::int64_t r = 0; r < static_cast<std::int64_t>(lt.image.size()); ++r)
      map[synchro::word_to_string(synchro::word_unrank(r, k, t.alphabet_size()), t.alphabet_size())] =
          synchro::word_to_string(synchro::word_unrank(lt(r), k, t.alphabet_size()),
                                  t.alphabet_size());
    json j;
    j["alphabet"] = t.alphabet_size();
    j["level"] = k;
    j["map"] = map;
    write_output(out_path, j.dump(2));
  });

  auto* c_act = app.add_subcommand("act", "apply the machine to a periodic word");
  c_act->add_option("machine", machine_ref)->required();
  c_act->add_option("cycle", cycle, "one period as digits, e.g. 011")->required();
  c_act->add_option("--out,-o", out_path);
  c_act->callback([&] {
    const auto t = load_machine(machine_ref);
    const synchro::PeriodicWord w(synchro::word_from_digits(cycle));
    const auto result = synchro::act_periodic(t, w);
    json j;
    j["input"] = w.to_string(t.alphabet_size());
    j["output"] = result.to_string(t.alphabet_size());
    j["period"] = result.period();
    write_output(out_path, j.dump(2));
  });

  auto* c_conj = app.add_subcommand("conjugate", "normal form of c^-1 * a * c");
  c_conj->add_option("machine", machine_ref)->required();
  c_conj->add_option("conjugator", other_ref)->required();
  c_conj->add_option("--out,-o", out_path);
  c_conj->callback([&] {
    const auto a = synchro::min_core(load_machine(machine_ref));
    const auto c = load_machine(other_ref);
    write_output(out_path, synchro::serialize(synchro::conjugate(a, c).machine));
  });

  auto* c_growth = app.add_subcommand("growth", "reduced power sizes as CSV");
  c_growth->add_option("machine", machine_ref)->required();
  c_growth->add_option("--max-power,-m", max_power, "largest power to measure")
      ->check(CLI::Range(1, 1000));
  c_growth->add_option("--raw-limit", raw_limit, "measure raw cores while state count fits");
  c_growth->add_option("--out,-o", out_path);
  c_growth->callback([&] {
    synchro::GrowthOptions opt;
    opt.raw_state_limit = raw_limit;
    write_output(out_path, growth_csv(synchro::growth_series(load_machine(machine_ref), max_power, opt)));
  });

  auto* c_sigma = app.add_subcommand("sigma", "nested-sum value");
  c_sigma->add_option("-i", sigma_i, "nesting depth, at least 1")->required();
  c_sigma->add_option("-j", sigma_j, "upper summation bound")->required();
  c_sigma->add_option("--out,-o", out_path);
  c_sigma->callback([&] { write_output(out_path, std::to_string(synchro::sigma(sigma_i, sigma_j))); });

  auto* c_dummy = app.add_subcommand("dummy", "counting gadget active states");
  c_dummy->add_option("--bits", bits, "input bits, e.g. 0110 (default empty)");
  c_dummy->add_option("-k,--components", gadget_k, "number of product components")
      ->check(CLI::Range(1, 62));
  c_dummy->add_option("--out,-o", out_path);
  c_dummy->callback([&] {
    const synchro::Word w = synchro::word_from_digits(bits);
    const auto sim = synchro::dummy_active_state(w, gadget_k);
    const auto closed = synchro::dummy_active_state_closed_form(w, gadget_k);
    json j;
    j["bits"] = bits;
    j["k"] = gadget_k;
    j["simulated"] = json::parse(sigma_states_json(sim));
    j["closed_form"] = json::parse(sigma_states_json(closed));
    const bool match = sim == closed;
    j["match"] = match;
    if (!match) code = 1;
    write_output(out_path, j.dump(2));
  });

  auto* c_solve = app.add_subcommand("solve-prefix", "input bits realizing target exponents");
  c_solve->add_option("target", target, "desired exponent bits, e.g. 101")->required();
  c_solve->add_option("--out,-o", out_path);
  c_solve->callback([&] {
    const synchro::Word y = synchro::word_from_digits(target);
    const synchro::Word x = synchro::solve_exponent_prefix(y);
    json j;
    j["target"] = target;
    j["bits"] = synchro::word_to_string(x, 2);
    write_output(out_path, j.dump(2));
  });

  auto* c_catalog = app.add_subcommand("catalog", "built-in machines");
  c_catalog->require_subcommand(1);
  auto* c_list = c_catalog->add_subcommand("list", "names and headline facts");
  c_list->callback([&] {
    std::ostringstream os;
    for (const auto& name : synchro::builtin_names()) {
      const auto e = synchro::builtin(name);
      os << name << "  alphabet=" << e.machine.alphabet_size()
         << " states=" << e.machine.num_states() << " class=" << synchro::to_string(e.expected.cls)
         << "\n";
    }
    os << "family:I  alphabet=3 states=I+1 class=bisync (via `catalog family -i I`)\n";
    write_output(out_path, os.str());
  });
  auto* c_get = c_catalog->add_subcommand("get", "export one machine as .tdx");
  c_get->add_option("name", cat_name)->required();
  c_get->add_option("--out,-o", out_path);
  c_get->callback([&] {
    try {
      write_output(out_path, synchro::serialize(synchro::builtin(cat_name).machine));
    } catch (const synchro::UnknownName& e) {
      throw UsageError(e.what());
    }
  });
  auto* c_family = c_catalog->add_subcommand("family", "parametric machine, level exactly i");
  c_family->add_option("-i,--level", family_i, "target level")->required()->check(CLI::Range(1, 64));
  c_family->add_option("--out,-o", out_path);
  c_family->callback(
      [&] { write_output(out_path, synchro::serialize(synchro::bisync_family(family_i).machine)); });

  auto* c_verify = app.add_subcommand("verify", "run the acceptance experiments");
  c_verify->add_option("--suite", suite, "all, or a single experiment id 1-12");
  c_verify->add_option("--seed", seed, "seed for the randomized experiments");
  c_verify->add_flag("-v,--verbose", verbose, "print every check and input digest");
  c_verify->callback([&] {
    std::vector<synchro::ExperimentReport> reports;
    if (suite == "all") {
      reports = synchro::run_all(seed);
    } else {
      int id = 0;
      try {
        id = std::stoi(suite);
      } catch (const std::exception&) {
        throw UsageError("--suite expects 'all' or an id between 1 and 12");
      }
      if (id < 1 || id > 12) throw UsageError("--suite expects 'all' or an id between 1 and 12");
      reports.push_back(synchro::run_criterion(id, seed));
    }
    synchro::print_report(std::cout, reports, verbose);
    code = synchro::all_passed(reports) ? 0 : 1;
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const synchro::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return code;
}
