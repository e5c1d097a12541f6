#include "fairsim/cli.hpp"

#include <openssl/evp.h>

#include <CLI11.hpp>
#include <algorithm>
#include <array>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "fairsim/bandit.hpp"
#include "fairsim/csv.hpp"
#include "fairsim/experiments.hpp"
#include "fairsim/metrics.hpp"
#include "fairsim/parallel.hpp"
#include "fairsim/serialize.hpp"
#include "fairsim/version.hpp"
#include "fairsim/world.hpp"

namespace fairsim::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kFastTicks = 1000;
constexpr int kFastReplicates = 30;

struct Flags {
    std::string config_path;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    int workers = default_workers();
    bool fast = false;
    std::optional<int> measure_every;
};

// What a config file resolves to: the subcommand's own document plus any
// options carried by a manifest.
struct Loaded {
    json config = json::object();
    json options = json::object();
};

json read_json(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(path, "cannot open config");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("<config>", std::string("invalid JSON: ") + e.what());
    }
}

// A manifest from an earlier run is accepted as a config: its resolved
// config and options are reused.
Loaded load(const Flags& flags, const std::string& subcommand) {
    Loaded out;
    if (flags.config_path.empty()) return out;
    json doc = read_json(flags.config_path);
    if (doc.is_object() && doc.contains("subcommand") && doc.contains("config")) {
        if (doc["subcommand"] != subcommand) {
            throw ConfigError("subcommand", "manifest was written by '" + doc["subcommand"].dump() +
                                                "', not '" + subcommand + "'");
        }
        out.config = doc["config"];
        if (auto it = doc.find("options"); it != doc.end() && it->is_object()) out.options = *it;
    } else {
        out.config = std::move(doc);
    }
    return out;
}

std::string hex(const unsigned char* data, std::size_t n) {
    static constexpr char digits[] = "0123456789abcdef";
    std::string s;
    s.reserve(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        s += digits[data[i] >> 4];
        s += digits[data[i] & 0xf];
    }
    return s;
}

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw IoError(dir, "cannot create output directory");
}

void write_manifest(const fs::path& dir, const std::string& subcommand, const json& config,
                    std::uint64_t master_seed, const json& options, const std::vector<std::string>& files) {
    json outputs = json::array();
    for (const std::string& f : files) outputs.push_back({{"file", f}, {"sha256", sha256_file(dir / f)}});
    const json manifest = {{"subcommand", subcommand}, {"version", kVersion},  {"master_seed", master_seed},
                           {"options", options},       {"config", config},     {"outputs", outputs}};
    const fs::path path = dir / "manifest.json";
    std::ofstream out = open_output(path);
    out << manifest.dump(2) << '\n';
    out.flush();
    if (!out) throw IoError(path, "write failed");
}

std::function<void(std::size_t, std::size_t)> progress_printer(std::ostream& err, const char* what) {
    return [&err, what, last = std::size_t{0}](std::size_t done, std::size_t total) mutable {
        const std::size_t step = std::max<std::size_t>(1, total / 10);
        if (done == total || done >= last + step) {
            last = done;
            err << what << ": " << done << "/" << total << '\n';
        }
    };
}

int cmd_simulate(const Flags& flags, std::ostream& out) {
    const Loaded loaded = load(flags, "simulate");
    SimConfig config = sim_config_from_json(loaded.config);
    if (flags.seed) config.seed = *flags.seed;
    if (flags.fast) config.max_ticks = kFastTicks;
    int every = 50;
    if (auto it = loaded.options.find("measure_every"); it != loaded.options.end() && it->is_number_integer()) {
        every = it->get<int>();
    }
    if (flags.measure_every) every = *flags.measure_every;
    if (every < 1) throw ConfigError("measure_every", "must be at least 1");
    config.validate();

    const fs::path dir = flags.out_dir;
    ensure_dir(dir);

    // Metrics rows are built from a running tabulation so each row costs
    // only the events added since the previous one.
    std::ostringstream series;
    CsvWriter csv(series);
    {
        std::vector<std::string> header{"tick"};
        for (std::string& c : metrics_columns()) header.push_back(std::move(c));
        csv.row(header);
    }
    std::optional<Tabulator> tab;
    std::size_t consumed = 0;
    int last_row = -1;
    auto emit = [&](int tick) {
        csv.field(tick);
        write_metrics_fields(csv, make_report(tab->table(Group::g1), tab->table(Group::g2)));
        csv.end_row();
        last_row = tick;
    };
    auto observer = [&](const SimState& state, const EventLog& log) {
        if (!tab) tab.emplace(state.civilians);
        tab->add(std::span(log).subspan(consumed));
        consumed = log.size();
        if (state.tick % every == 0 || state.tick == config.max_ticks) emit(state.tick);
    };
    const SimResult result = run_sim(config, observer);
    if (last_row < 0) {
        tab.emplace(result.final_state.civilians);
        emit(result.final_state.tick);
    }
    const auto [g1, g2] = tabulate(result.events, result.final_state.civilians);
    const MetricsReport report = make_report(g1, g2);

    auto save = [&](const char* name, auto&& write) {
        const fs::path path = dir / name;
        std::ofstream f = open_output(path);
        write(f);
        f.flush();
        if (!f) throw IoError(path, "write failed");
    };
    save("events.csv", [&](std::ostream& f) { write_events_csv(result.events, f); });
    save("events.jsonl", [&](std::ostream& f) { write_events_jsonl(result.events, f); });
    save("metrics.csv", [&](std::ostream& f) { f << series.str(); });
    save("report.json", [&](std::ostream& f) { f << to_json(report).dump(2) << '\n'; });

    write_manifest(dir, "simulate", to_json(config), config.seed,
                   {{"measure_every", every}, {"fast", flags.fast}},
                   {"events.csv", "events.jsonl", "metrics.csv", "report.json"});
    out << "simulate: " << result.events.size() << " arrests over " << result.final_state.tick
        << " ticks -> " << dir.string() << '\n';
    return kOk;
}

int cmd_sweep(const Flags& flags, std::ostream& out, std::ostream& err) {
    const Loaded loaded = load(flags, "sweep");
    SweepConfig config = sweep_config_from_json(loaded.config);
    if (flags.seed) config.master_seed = *flags.seed;
    if (flags.fast) {
        config.replicates = kFastReplicates;
        config.base.max_ticks = kFastTicks;
    }
    config.validate();

    const fs::path dir = flags.out_dir;
    ensure_dir(dir);
    RunOptions options{flags.workers, progress_printer(err, "sweep")};
    const std::vector<SweepRecord> records = run_sweep(config, options);
    export_outcomes(records, config.eps_tols, dir / "outcomes.csv");
    export_summary(summarize(records, config.eps_tols), dir / "summary.csv");
    write_manifest(dir, "sweep", to_json(config), config.master_seed, {{"fast", flags.fast}},
                   {"outcomes.csv", "summary.csv"});
    out << "sweep: " << records.size() << " runs -> " << dir.string() << '\n';
    return kOk;
}

int cmd_bandit(const Flags& flags, std::ostream& out, std::ostream& err) {
    const Loaded loaded = load(flags, "bandit");
    BanditConfig config = bandit_config_from_json(loaded.config);
    if (flags.seed) config.master_seed = *flags.seed;
    if (flags.fast) config.episode.max_ticks = kFastTicks;
    config.validate();

    const fs::path dir = flags.out_dir;
    ensure_dir(dir);
    RunOptions options{flags.workers, progress_printer(err, "bandit")};
    const BanditResult result = run_bandit(config, options);
    export_reward(result, dir / "bandit_reward.csv");
    export_actions(config, result, dir / "bandit_actions.csv");
    write_manifest(dir, "bandit", to_json(config), config.master_seed, {{"fast", flags.fast}},
                   {"bandit_reward.csv", "bandit_actions.csv"});
    out << "bandit: " << config.runs << " runs x " << config.pulls << " pulls -> " << dir.string() << '\n';
    return kOk;
}

}  // namespace

std::string sha256_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(path, "cannot open for hashing");
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) throw std::runtime_error("sha256 init failed");
    std::array<char, 1 << 16> buf{};
    while (in) {
        in.read(buf.data(), buf.size());
        if (in.gcount() > 0) EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount()));
    }
    if (in.bad()) throw IoError(path, "read failed");
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx.get(), md.data(), &len);
    return hex(md.data(), len);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Two-group predictive-policing fairness simulator", "fairsim"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    Flags flags;
    auto common = [&](CLI::App* sub, bool config_required) {
        auto* opt = sub->add_option("--config", flags.config_path, "JSON config or a manifest.json from an earlier run");
        if (config_required) opt->required();
        sub->add_option("--out", flags.out_dir, "Output directory")->required();
        sub->add_option("--seed", flags.seed, "Override the (master) seed");
        sub->add_option("--workers", flags.workers, "Worker threads")->check(CLI::PositiveNumber);
        sub->add_flag("--fast", flags.fast, "Short profile: 1000 ticks (and 30 replicates for sweeps)");
    };
    auto* simulate = app.add_subcommand("simulate", "Run one simulation and write its event log and metric series");
    common(simulate, false);
    simulate->add_option("--measure-every", flags.measure_every, "Ticks between metric rows (default 50)");
    auto* sweep = app.add_subcommand("sweep", "Replicated runs over a (theta, q0) grid");
    common(sweep, true);
    auto* bandit = app.add_subcommand("bandit", "Epsilon-greedy search over theta");
    common(bandit, false);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::CallForVersion&) {
        out << kVersion << '\n';
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kConfigError;
    }

    try {
        if (simulate->parsed()) return cmd_simulate(flags, out);
        if (sweep->parsed()) return cmd_sweep(flags, out, err);
        return cmd_bandit(flags, out, err);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const IoError& e) {
        err << "i/o error: " << e.what() << '\n';
        return kIoError;
    } catch (const fs::filesystem_error& e) {
        err << "i/o error: " << e.what() << '\n';
        return kIoError;
    }
}

}  // namespace fairsim::cli
