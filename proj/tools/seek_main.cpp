// seek: train, evaluate and probe segmented knowledge-graph embeddings.
//
// Subcommands: train, evaluate, case-study, bench-k. Exit codes are stable
// for scripting: 0 success, 1 runtime failure, 2 usage or config error.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "seek/bench.hpp"
#include "seek/dataset.hpp"
#include "seek/evaluator.hpp"
#include "seek/model.hpp"
#include "seek/trainer.hpp"

#ifndef SEEK_BUILD_ID
#define SEEK_BUILD_ID "unknown"
#endif

namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    std::chrono::duration<double> d = Clock::now() - start;
    return d.count();
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

using ManifestRows = std::vector<std::pair<std::string, std::string>>;

void write_manifest(const fs::path& path, const ManifestRows& rows) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    for (const auto& [key, value] : rows) out << key << '=' << value << '\n';
}

std::map<std::string, std::string> read_manifest(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read manifest " + path.string());
    std::map<std::string, std::string> entries;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error(path.string() + ":" + std::to_string(lineno) +
                                     ": expected key=value");
        entries[line.substr(0, eq)] = line.substr(eq + 1);
    }
    return entries;
}

seek::ScoreFn parse_fn(const std::string& name) {
    if (name == "f1") return seek::ScoreFn::f1;
    if (name == "f2") return seek::ScoreFn::f2;
    if (name == "f4") return seek::ScoreFn::f4;
    throw std::invalid_argument("unknown scoring function '" + name +
                                "' (expected f1, f2 or f4)");
}

// ---------------------------------------------------------------- train ---

struct TrainArgs {
    std::string data;
    std::string out;
    std::string from_manifest;
    seek::TrainConfig cfg;
    int checkpoint_every = 0;

    // Option handles, to tell explicit flags from defaults when a manifest
    // supplies values. Precedence: flag > environment > manifest > default.
    CLI::Option* o_data = nullptr;
    CLI::Option* o_k = nullptr;
    CLI::Option* o_dim = nullptr;
    CLI::Option* o_lambda = nullptr;
    CLI::Option* o_neg = nullptr;
    CLI::Option* o_lr = nullptr;
    CLI::Option* o_epochs = nullptr;
    CLI::Option* o_seed = nullptr;
    CLI::Option* o_workers = nullptr;
    CLI::Option* o_filter_neg = nullptr;
    CLI::Option* o_ckpt_every = nullptr;
};

void apply_manifest_defaults(TrainArgs& a) {
    auto entries = read_manifest(a.from_manifest);
    auto lookup = [&](const CLI::Option* opt,
                      const char* key) -> const std::string* {
        auto it = entries.find(key);
        return opt->count() == 0 && it != entries.end() ? &it->second : nullptr;
    };
    if (const auto* v = lookup(a.o_data, "data")) a.data = *v;
    if (const auto* v = lookup(a.o_k, "k")) a.cfg.k = std::stoi(*v);
    if (const auto* v = lookup(a.o_dim, "dim")) a.cfg.d = std::stoi(*v);
    if (const auto* v = lookup(a.o_lambda, "lambda")) a.cfg.lambda = std::stod(*v);
    if (const auto* v = lookup(a.o_neg, "neg")) a.cfg.eta = std::stoi(*v);
    if (const auto* v = lookup(a.o_lr, "lr")) a.cfg.lr = std::stod(*v);
    if (const auto* v = lookup(a.o_epochs, "epochs")) a.cfg.epochs = std::stoi(*v);
    if (const auto* v = lookup(a.o_seed, "seed")) a.cfg.seed = std::stoull(*v);
    if (const auto* v = lookup(a.o_workers, "workers")) a.cfg.workers = std::stoi(*v);
    if (const auto* v = lookup(a.o_filter_neg, "filter_negatives"))
        a.cfg.filter_negatives = *v == "1" || *v == "true";
    if (const auto* v = lookup(a.o_ckpt_every, "checkpoint_every"))
        a.checkpoint_every = std::stoi(*v);
}

int cmd_train(TrainArgs& a) {
    if (!a.from_manifest.empty()) apply_manifest_defaults(a);
    if (a.data.empty())
        throw std::invalid_argument("no dataset directory: pass --data or set SEEK_DATA_ROOT");
    if (a.checkpoint_every < 0)
        throw std::invalid_argument("--checkpoint-every must be >= 0");
    a.cfg.validate();

    auto t0 = Clock::now();
    seek::Dataset ds = seek::load_dataset(a.data);
    double load_seconds = seconds_since(t0);
    std::printf("loaded %s: %zu entities, %zu relations, %zu/%zu/%zu train/valid/test\n",
                a.data.c_str(), ds.vocab.num_entities(), ds.vocab.num_relations(),
                ds.train.size(), ds.valid.size(), ds.test.size());

    fs::create_directories(a.out);
    fs::path out_dir(a.out);
    seek::ModelConfig mc = a.cfg.model_config();

    seek::EpochCallback on_epoch = [&](const seek::EpochStats& s,
                                       const seek::EmbeddingTable& table) {
        std::printf("epoch %d/%d  mean loss %.6f  %.2f s\n", s.epoch, a.cfg.epochs,
                    s.mean_loss, s.seconds);
        std::fflush(stdout);
        if (a.checkpoint_every > 0 && s.epoch % a.checkpoint_every == 0 &&
            s.epoch < a.cfg.epochs) {
            seek::save_checkpoint(
                out_dir / ("checkpoint-epoch-" + std::to_string(s.epoch) + ".txt"),
                table, ds.vocab, mc);
        }
    };

    auto t1 = Clock::now();
    seek::TrainResult result =
        seek::train(ds.train, ds.vocab.num_entities(), ds.vocab.num_relations(),
                    a.cfg, &ds.filter, on_epoch);
    double train_seconds = seconds_since(t1);

    fs::path ckpt_path = out_dir / "checkpoint.txt";
    seek::save_checkpoint(ckpt_path, result.table, ds.vocab, mc);

    fs::path loss_path = out_dir / "loss.csv";
    {
        std::ofstream loss(loss_path);
        if (!loss) throw std::runtime_error("cannot write " + loss_path.string());
        loss << "epoch,mean_loss,seconds\n";
        for (const auto& s : result.trace)
            loss << s.epoch << ',' << fmt(s.mean_loss) << ',' << fmt(s.seconds) << '\n';
    }

    write_manifest(out_dir / "manifest.txt",
                   {{"command", "train"},
                    {"data", a.data},
                    {"out", a.out},
                    {"k", std::to_string(a.cfg.k)},
                    {"dim", std::to_string(a.cfg.d)},
                    {"lambda", fmt(a.cfg.lambda)},
                    {"neg", std::to_string(a.cfg.eta)},
                    {"lr", fmt(a.cfg.lr)},
                    {"epochs", std::to_string(a.cfg.epochs)},
                    {"seed", std::to_string(a.cfg.seed)},
                    {"workers", std::to_string(a.cfg.workers)},
                    {"filter_negatives", a.cfg.filter_negatives ? "1" : "0"},
                    {"checkpoint_every", std::to_string(a.checkpoint_every)},
                    {"checkpoint", ckpt_path.string()},
                    {"loss_csv", loss_path.string()},
                    {"build", SEEK_BUILD_ID},
                    {"load_seconds", fmt(load_seconds)},
                    {"train_seconds", fmt(train_seconds)}});

    std::printf("wrote %s (%.2f s total)\n", ckpt_path.string().c_str(),
                seconds_since(t0));
    return 0;
}

// ------------------------------------------------------------- evaluate ---

struct EvalArgs {
    std::string checkpoint;
    std::string data;
    std::string split = "test";
    std::string fn = "f4";
    std::string csv;
    bool raw = false;
    int workers = 1;
};

int cmd_evaluate(EvalArgs& a) {
    if (a.data.empty())
        throw std::invalid_argument("no dataset directory: pass --data or set SEEK_DATA_ROOT");
    if (a.split != "valid" && a.split != "test")
        throw std::invalid_argument("--split must be valid or test");
    if (a.workers < 1) throw std::invalid_argument("--workers must be >= 1");
    seek::ScoreFn fn = parse_fn(a.fn);

    auto t0 = Clock::now();
    seek::Checkpoint ckpt = seek::load_checkpoint(a.checkpoint);

    // Encode the dataset through the checkpoint's vocabulary so candidate ids
    // line up with embedding rows. Any string the checkpoint has never seen
    // grows the vocabulary past the table, which is a hard mismatch.
    seek::Vocabulary vocab = ckpt.vocab;
    fs::path dir(a.data);
    seek::TripleSet train = seek::load_triples(dir / "train.txt", vocab, "train");
    seek::TripleSet valid = seek::load_triples(dir / "valid.txt", vocab, "valid");
    seek::TripleSet test = seek::load_triples(dir / "test.txt", vocab, "test");
    if (vocab.num_entities() != ckpt.vocab.num_entities() ||
        vocab.num_relations() != ckpt.vocab.num_relations()) {
        throw std::runtime_error(
            "checkpoint does not cover the dataset: checkpoint has " +
            std::to_string(ckpt.vocab.num_entities()) + " entities and " +
            std::to_string(ckpt.vocab.num_relations()) + " relations, dataset needs " +
            std::to_string(vocab.num_entities()) + " and " +
            std::to_string(vocab.num_relations()));
    }

    seek::FilterIndex filter = seek::build_filter_index(train, valid, test);
    const seek::TripleSet& target = a.split == "valid" ? valid : test;
    seek::EvalReport report = seek::evaluate(target, ckpt.table, ckpt.config,
                                             a.raw ? nullptr : &filter, fn, a.workers);
    double eval_seconds = seconds_since(t0);

    std::printf("fn=%s split=%s filter=%s rankings=%zu\n", seek::score_fn_name(fn),
                a.split.c_str(), a.raw ? "off" : "on", report.both.count);
    std::printf("%-5s %8s %8s %8s %8s\n", "side", "MRR", "Hits@1", "Hits@3", "Hits@10");
    for (const seek::RankingReport* r : {&report.head, &report.tail, &report.both})
        std::printf("%-5s %8.4f %8.2f %8.2f %8.2f\n", r->side.c_str(), r->mrr,
                    r->hits1, r->hits3, r->hits10);

    if (!a.csv.empty()) {
        std::ofstream out(a.csv);
        if (!out) throw std::runtime_error("cannot write " + a.csv);
        out << "side,mrr,hits1,hits3,hits10,count\n";
        for (const seek::RankingReport* r : {&report.head, &report.tail, &report.both})
            out << r->side << ',' << fmt(r->mrr) << ',' << fmt(r->hits1) << ','
                << fmt(r->hits3) << ',' << fmt(r->hits10) << ',' << r->count << '\n';
        write_manifest(a.csv + ".manifest",
                       {{"command", "evaluate"},
                        {"checkpoint", a.checkpoint},
                        {"data", a.data},
                        {"split", a.split},
                        {"fn", a.fn},
                        {"raw", a.raw ? "1" : "0"},
                        {"workers", std::to_string(a.workers)},
                        {"report_csv", a.csv},
                        {"build", SEEK_BUILD_ID},
                        {"eval_seconds", fmt(eval_seconds)}});
    }
    return 0;
}

// ----------------------------------------------------------- case-study ---

struct CaseArgs {
    std::string checkpoint;
    std::string triples;
    std::string fn;  // empty = all three
    std::string csv;
};

std::vector<seek::Triple> load_probe_triples(const fs::path& path,
                                             const seek::Vocabulary& vocab) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::vector<seek::Triple> triples;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        auto where = path.string() + ":" + std::to_string(lineno);
        auto tab1 = line.find('\t');
        auto tab2 = tab1 == std::string::npos ? tab1 : line.find('\t', tab1 + 1);
        if (tab2 == std::string::npos || line.find('\t', tab2 + 1) != std::string::npos)
            throw std::runtime_error(where + ": expected head<TAB>relation<TAB>tail");
        std::string hs = line.substr(0, tab1);
        std::string rs = line.substr(tab1 + 1, tab2 - tab1 - 1);
        std::string ts = line.substr(tab2 + 1);
        auto h = vocab.entity_id(hs);
        if (!h) throw std::runtime_error(where + ": unknown entity '" + hs + "'");
        auto r = vocab.relation_id(rs);
        if (!r) throw std::runtime_error(where + ": unknown relation '" + rs + "'");
        auto t = vocab.entity_id(ts);
        if (!t) throw std::runtime_error(where + ": unknown entity '" + ts + "'");
        triples.push_back({*h, *r, *t});
    }
    return triples;
}

int cmd_case_study(CaseArgs& a) {
    std::vector<seek::ScoreFn> fns;
    if (a.fn.empty())
        fns = {seek::ScoreFn::f1, seek::ScoreFn::f2, seek::ScoreFn::f4};
    else
        fns = {parse_fn(a.fn)};

    auto t0 = Clock::now();
    seek::Checkpoint ckpt = seek::load_checkpoint(a.checkpoint);
    std::vector<seek::Triple> probes = load_probe_triples(a.triples, ckpt.vocab);

    std::string csv_text = "triple,fn,p_forward,p_reverse\n";
    for (seek::ScoreFn fn : fns) {
        for (const seek::CaseStudyRow& row :
             seek::case_study(probes, ckpt.table, ckpt.config, fn, ckpt.vocab)) {
            csv_text += row.triple;
            csv_text += ',';
            csv_text += seek::score_fn_name(row.fn);
            csv_text += ',';
            csv_text += fmt(row.p_forward);
            csv_text += ',';
            csv_text += fmt(row.p_reverse);
            csv_text += '\n';
        }
    }
    std::fputs(csv_text.c_str(), stdout);

    if (!a.csv.empty()) {
        std::ofstream out(a.csv);
        if (!out) throw std::runtime_error("cannot write " + a.csv);
        out << csv_text;
        write_manifest(a.csv + ".manifest",
                       {{"command", "case-study"},
                        {"checkpoint", a.checkpoint},
                        {"triples", a.triples},
                        {"fn", a.fn.empty() ? "f1,f2,f4" : a.fn},
                        {"report_csv", a.csv},
                        {"build", SEEK_BUILD_ID},
                        {"case_seconds", fmt(seconds_since(t0))}});
    }
    return 0;
}

// -------------------------------------------------------------- bench-k ---

struct BenchArgs {
    std::vector<int> ks{1, 4, 8, 16};
    int dim = 400;
    std::size_t ops = 20000;
    std::uint64_t seed = 1;
    int repeats = 3;
    std::string csv;
};

int cmd_bench_k(BenchArgs& a) {
    auto t0 = Clock::now();
    std::vector<seek::BenchResult> results =
        seek::bench_scoring(a.ks, a.dim, a.ops, a.seed, 1000, 32, a.repeats);

    std::string csv_text = "k,seconds\n";
    for (const seek::BenchResult& r : results)
        csv_text += std::to_string(r.k) + "," + fmt(r.seconds) + "\n";
    std::fputs(csv_text.c_str(), stdout);

    if (!a.csv.empty()) {
        std::ofstream out(a.csv);
        if (!out) throw std::runtime_error("cannot write " + a.csv);
        out << csv_text;
        std::string klist;
        for (std::size_t i = 0; i < a.ks.size(); ++i)
            klist += (i ? "," : "") + std::to_string(a.ks[i]);
        write_manifest(a.csv + ".manifest",
                       {{"command", "bench-k"},
                        {"k_list", klist},
                        {"dim", std::to_string(a.dim)},
                        {"ops", std::to_string(a.ops)},
                        {"seed", std::to_string(a.seed)},
                        {"repeats", std::to_string(a.repeats)},
                        {"report_csv", a.csv},
                        {"build", SEEK_BUILD_ID},
                        {"bench_seconds", fmt(seconds_since(t0))}});
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"segmented knowledge-graph embeddings: train, evaluate, probe"};
    app.require_subcommand(1);

    TrainArgs targs;
    CLI::App* train = app.add_subcommand("train", "train embeddings on a dataset directory");
    targs.o_data = train->add_option("--data", targs.data, "dataset directory with train/valid/test.txt")
                       ->envname("SEEK_DATA_ROOT");
    train->add_option("--out", targs.out, "output directory for checkpoint, loss CSV and manifest")
        ->required();
    targs.o_k = train->add_option("--k", targs.cfg.k, "number of segments");
    targs.o_dim = train->add_option("--dim", targs.cfg.d, "embedding dimension");
    targs.o_lambda = train->add_option("--lambda", targs.cfg.lambda, "L2 coefficient");
    targs.o_neg = train->add_option("--neg", targs.cfg.eta, "negatives per positive");
    targs.o_lr = train->add_option("--lr", targs.cfg.lr, "initial learning rate");
    targs.o_epochs = train->add_option("--epochs", targs.cfg.epochs, "training epochs");
    targs.o_seed = train->add_option("--seed", targs.cfg.seed, "random seed");
    targs.o_workers = train->add_option("--workers", targs.cfg.workers,
                                        "worker threads (only 1 is deterministic)");
    targs.o_filter_neg = train->add_flag("--filter-negatives", targs.cfg.filter_negatives,
                                         "resample corrupted triples that are known true");
    targs.o_ckpt_every = train->add_option("--checkpoint-every", targs.checkpoint_every,
                                           "also checkpoint every N epochs");
    train->add_option("--from-manifest", targs.from_manifest,
                      "read defaults from a previous run's manifest");

    EvalArgs eargs;
    CLI::App* ev = app.add_subcommand("evaluate", "filtered link-prediction metrics");
    ev->add_option("--checkpoint", eargs.checkpoint, "checkpoint file")->required();
    ev->add_option("--data", eargs.data, "dataset directory")->envname("SEEK_DATA_ROOT");
    ev->add_option("--split", eargs.split, "valid or test (default test)");
    ev->add_option("--fn", eargs.fn, "scoring function: f1, f2 or f4");
    ev->add_flag("--raw", eargs.raw, "disable filtering (debug mode)");
    ev->add_option("--csv", eargs.csv, "also write the report as CSV");
    ev->add_option("--workers", eargs.workers, "ranking threads");

    CaseArgs cargs;
    CLI::App* cs = app.add_subcommand("case-study",
                                      "forward/reverse probabilities for probe triples");
    cs->add_option("--checkpoint", cargs.checkpoint, "checkpoint file")->required();
    cs->add_option("--triples", cargs.triples, "probe triples, same TSV format")->required();
    cs->add_option("--fn", cargs.fn, "restrict to one scoring function");
    cs->add_option("--csv", cargs.csv, "also write the rows as CSV");

    BenchArgs bargs;
    CLI::App* bench = app.add_subcommand("bench-k", "scoring+gradient throughput per k");
    bench->add_option("--k-list", bargs.ks, "k values to time");
    bench->add_option("--dim", bargs.dim, "embedding dimension");
    bench->add_option("--ops", bargs.ops, "operations per measurement");
    bench->add_option("--seed", bargs.seed, "random seed");
    bench->add_option("--repeats", bargs.repeats, "measurements per k (median wins)");
    bench->add_option("--csv", bargs.csv, "also write k,seconds CSV");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (train->parsed()) return cmd_train(targs);
        if (ev->parsed()) return cmd_evaluate(eargs);
        if (cs->parsed()) return cmd_case_study(cargs);
        if (bench->parsed()) return cmd_bench_k(bargs);
        std::fprintf(stderr, "no subcommand\n");
        return 2;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
