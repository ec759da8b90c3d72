#include "CLI11.hpp"

#include "ri/dataset.hpp"
#include "ri/eval.hpp"
#include "ri/graph.hpp"
#include "ri/model.hpp"
#include "ri/optimizer.hpp"
#include "ri/synth.hpp"

#include <omp.h>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <unordered_map>

namespace {

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

/// key=value provenance string echoed into every output artifact.
class ConfigHeader {
public:
    explicit ConfigHeader(std::string command) : out_("ri " + std::move(command)) {}
    ConfigHeader& add(const std::string& key, const std::string& v) {
        out_ += " " + key + "=" + v;
        return *this;
    }
    ConfigHeader& add(const std::string& key, double v) { return add(key, fmt_double(v)); }
    ConfigHeader& add(const std::string& key, std::uint64_t v) { return add(key, std::to_string(v)); }
    ConfigHeader& add(const std::string& key, long long v) { return add(key, std::to_string(v)); }
    ConfigHeader& add(const std::string& key, bool v) { return add(key, std::string(v ? "true" : "false")); }
    const std::string& str() const { return out_; }

private:
    std::string out_;
};

struct HyperFlags {
    double lambda1 = 0.002;
    double lambda2 = 0.1;
    double lambda3 = 0.2;
    long long r = 50;
    double tau_word = 0.9;
    double tau_tweet = 0.6;

    ri::Hyper to_hyper() const {
        ri::Hyper h;
        h.lambda1 = lambda1;
        h.lambda2 = lambda2;
        h.lambda3 = lambda3;
        h.r = static_cast<Eigen::Index>(r);
        h.tau_word = tau_word;
        h.tau_tweet = tau_tweet;
        return h;
    }
};

void add_hyper_flags(CLI::App* cmd, HyperFlags& hf) {
    cmd->add_option("--lambda1", hf.lambda1, "l2 weight on beta");
    cmd->add_option("--lambda2", hf.lambda2, "l1 weight on beta");
    cmd->add_option("--lambda3", hf.lambda3, "network smoothing weight");
    cmd->add_option("--r", hf.r, "max nonzero instance weights per tweet");
    cmd->add_option("--tau-word", hf.tau_word, "word relevance threshold");
    cmd->add_option("--tau-tweet", hf.tau_tweet, "relevant-word proportion threshold");
}

ri::LaplacianKind parse_kind(const std::string& name) {
    if (name == "da") return ri::LaplacianKind::UndirectedDA;
    if (name == "theta") return ri::LaplacianKind::DirectedTheta;
    throw ri::io_error("unknown laplacian kind: " + name);
}

int run_synth(const std::string& data_path, const std::string& graph_path,
              const std::string& truth_path, const ri::SynthSpec& spec,
              const ConfigHeader& header) {
    ri::SynthResult res = ri::synth(spec);
    ri::save_dataset(res.data, data_path, header.str());
    ri::save_user_graph(res.behavior, graph_path, header.str());
    if (!truth_path.empty()) {
        ri::PlantedData pd;
        pd.data = res.data;
        pd.signal_flags = res.signal_flags;
        ri::save_flags(pd, truth_path, header.str());
    }
    const double ratio = static_cast<double>(res.data.count_label(+1)) /
                         static_cast<double>(res.data.size());
    std::cout << "tweets=" << res.data.size() << " positive_ratio=" << fmt_double(ratio);
    try {
        const ri::TweetGraph h = ri::line_graph_convert(res.behavior, [&] {
            std::vector<std::string> ids;
            for (const auto& t : res.data.tweets) ids.push_back(t.id);
            return ids;
        }());
        std::cout << " assortativity=" << fmt_double(ri::assortativity(h, res.data.labels()));
    } catch (const ri::numeric_error&) {
        std::cout << " assortativity=degenerate";
    }
    std::cout << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"r-instance learning: instance-selecting logistic classifier with graph smoothing"};
    app.require_subcommand(1);

    int threads = 0;
    app.add_option("--threads", threads, "OpenMP threads (0 = runtime default)");

    // ---- synth ----
    auto* synth_cmd = app.add_subcommand("synth", "generate a planted dataset, behavior graph, and truth flags");
    std::string sy_data, sy_graph, sy_truth;
    ri::SynthSpec sy_spec;
    long long sy_m = 200, sy_k = 16, sy_nmin = 6, sy_nmax = 14, sy_hubs = 0;
    std::uint64_t sy_seed = 1;
    synth_cmd->add_option("--data", sy_data, "output dataset path")->required();
    synth_cmd->add_option("--graph", sy_graph, "output behavior-graph path")->required();
    synth_cmd->add_option("--truth", sy_truth, "output signal-flags path");
    synth_cmd->add_option("--m", sy_m, "number of tweets");
    synth_cmd->add_option("--k", sy_k, "embedding dimension");
    synth_cmd->add_option("--n-min", sy_nmin, "min words per tweet");
    synth_cmd->add_option("--n-max", sy_nmax, "max words per tweet");
    synth_cmd->add_option("--pos-ratio", sy_spec.planted.positive_ratio, "positive tweet fraction");
    synth_cmd->add_option("--signal-fraction", sy_spec.planted.signal_words_fraction,
                          "signal-word fraction inside positive tweets");
    synth_cmd->add_option("--noise-scale", sy_spec.planted.noise_scale, "per-coordinate noise scale");
    synth_cmd->add_option("--homophily", sy_spec.homophily, "same-label hub preference in [0,1]");
    synth_cmd->add_option("--edges-per-tweet", sy_spec.edges_per_tweet, "mean behavior edges per tweet");
    synth_cmd->add_option("--hubs", sy_hubs, "number of retweeting hub users (0 = auto)");
    synth_cmd->add_option("--seed", sy_seed, "random seed");

    // ---- train ----
    auto* train_cmd = app.add_subcommand("train", "fit the model with block coordinate descent");
    std::string tr_data, tr_graph, tr_model, tr_trace, tr_laplacian = "theta";
    HyperFlags tr_hyper;
    long long tr_max_iter = 150;
    double tr_tol = 1e-6, tr_xi = 1.0, tr_teleport = 0.01, tr_undersample = 0.5;
    std::string tr_eta_mode = "nesterov";
    std::uint64_t tr_seed = 1;
    bool tr_no_bias = false, tr_no_graph = false, tr_freeze_u = false, tr_timings = false,
         tr_no_save_u = false, tr_normalize = false;
    train_cmd->add_option("--data", tr_data, "training dataset path")->required();
    train_cmd->add_option("--graph", tr_graph, "behavior-graph path");
    train_cmd->add_flag("--no-graph", tr_no_graph, "train without network information");
    train_cmd->add_option("--model", tr_model, "output model path")->required();
    train_cmd->add_option("--trace", tr_trace, "output convergence trace path (CSV)");
    add_hyper_flags(train_cmd, tr_hyper);
    train_cmd->add_option("--max-iter", tr_max_iter, "iteration cap");
    train_cmd->add_option("--tol", tr_tol, "relative objective-change tolerance");
    train_cmd->add_option("--xi", tr_xi, "step scale alpha = xi / L");
    train_cmd->add_option("--eta-mode", tr_eta_mode, "extrapolation schedule: nesterov|zero");
    train_cmd->add_option("--seed", tr_seed, "random seed");
    train_cmd->add_flag("--no-bias", tr_no_bias, "skip the constant-1 bias coordinate");
    train_cmd->add_flag("--normalize", tr_normalize, "scale each word vector to unit l2 norm");
    train_cmd->add_option("--teleport", tr_teleport, "teleport weight for the directed walk");
    train_cmd->add_option("--laplacian", tr_laplacian, "laplacian kind: auto|da|theta");
    train_cmd->add_option("--undersample", tr_undersample,
                          "undersample negatives to this positive ratio before training (0 = off)");
    train_cmd->add_flag("--freeze-u", tr_freeze_u, "keep instance weights at their initial value");
    train_cmd->add_flag("--timings", tr_timings, "write real per-iteration millis into the trace");
    train_cmd->add_flag("--no-save-u", tr_no_save_u, "omit instance weights from the model file");

    // ---- predict / eval ----
    auto* predict_cmd = app.add_subcommand("predict", "score tweets with a trained model");
    auto* eval_cmd = app.add_subcommand("eval", "score tweets and report precision/recall/F1");
    struct PredictFlags {
        std::string data, model, scores, report;
        double tau_word = -1.0, tau_tweet = -1.0;  // negative = use the model file's value
        bool no_bias = false;
    } pr, ev;
    for (auto [cmd, fl] : {std::pair{predict_cmd, &pr}, std::pair{eval_cmd, &ev}}) {
        cmd->add_option("--data", fl->data, "dataset path")->required();
        cmd->add_option("--model", fl->model, "trained model path")->required();
        cmd->add_option("--scores", fl->scores, "output score table path (CSV)");
        cmd->add_option("--tau-word", fl->tau_word, "word relevance threshold override");
        cmd->add_option("--tau-tweet", fl->tau_tweet, "proportion threshold override");
        cmd->add_flag("--no-bias", fl->no_bias, "skip the constant-1 bias coordinate");
    }
    eval_cmd->add_option("--report", ev.report, "output metrics report path");

    // ---- graph ----
    auto* graph_cmd = app.add_subcommand("graph", "tweet-graph utilities");
    graph_cmd->require_subcommand(1);
    std::string g_graph, g_out, g_data, g_partition, g_kind = "auto";
    double g_teleport = 0.01;
    auto* g_convert = graph_cmd->add_subcommand("convert", "user edges -> tweet-tweet adjacency");
    auto* g_stats = graph_cmd->add_subcommand("stats", "degree histogram and mean");
    auto* g_assort = graph_cmd->add_subcommand("assortativity", "label assortativity coefficient");
    auto* g_modularity = graph_cmd->add_subcommand("modularity", "modularity of a supplied partition");
    auto* g_laplacian = graph_cmd->add_subcommand("laplacian", "export the smoothing operator (COO)");
    for (auto* c : {g_convert, g_stats, g_assort, g_modularity, g_laplacian}) {
        c->add_option("--graph", g_graph, "behavior-graph path")->required();
    }
    g_convert->add_option("--out", g_out, "output adjacency path (COO)");
    g_stats->add_option("--out", g_out, "output histogram path (CSV)");
    g_assort->add_option("--data", g_data, "dataset supplying labels")->required();
    g_modularity->add_option("--partition", g_partition, "CSV tweet_id,community")->required();
    g_laplacian->add_option("--out", g_out, "output path")->required();
    g_laplacian->add_option("--kind", g_kind, "laplacian kind: auto|da|theta");
    g_laplacian->add_option("--teleport", g_teleport, "teleport weight");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (threads > 0) omp_set_num_threads(threads);

    try {
        if (synth_cmd->parsed()) {
            sy_spec.planted.m = sy_m;
            sy_spec.planted.k = sy_k;
            sy_spec.planted.n_min = sy_nmin;
            sy_spec.planted.n_max = sy_nmax;
            sy_spec.planted.seed = sy_seed;
            sy_spec.hubs = sy_hubs;
            ConfigHeader header("synth");
            header.add("m", static_cast<long long>(sy_m))
                .add("k", static_cast<long long>(sy_k))
                .add("n_min", static_cast<long long>(sy_nmin))
                .add("n_max", static_cast<long long>(sy_nmax))
                .add("pos_ratio", sy_spec.planted.positive_ratio)
                .add("signal_fraction", sy_spec.planted.signal_words_fraction)
                .add("noise_scale", sy_spec.planted.noise_scale)
                .add("homophily", sy_spec.homophily)
                .add("edges_per_tweet", sy_spec.edges_per_tweet)
                .add("hubs", static_cast<long long>(sy_hubs))
                .add("seed", sy_seed);
            return run_synth(sy_data, sy_graph, sy_truth, sy_spec, header);
        }

        if (train_cmd->parsed()) {
            if (!tr_graph.empty() && tr_no_graph) {
                throw ri::io_error("--graph and --no-graph are contradictory");
            }
            ri::Hyper h = tr_hyper.to_hyper();
            if (h.lambda3 > 0.0 && tr_graph.empty() && !tr_no_graph) {
                throw ri::io_error("lambda3 > 0 needs --graph (or pass --no-graph / --lambda3 0)");
            }
            ri::Dataset d = ri::load_dataset(tr_data, !tr_no_bias, tr_normalize);
            std::unordered_map<std::string, bool> full_ids;
            for (const auto& t : d.tweets) full_ids[t.id] = true;
            bool undersample_notice = false;
            if (tr_undersample > 0.0) {
                ri::UndersampleResult ur = ri::undersample(d, tr_undersample, tr_seed);
                undersample_notice = ur.already_at_target;
                d = std::move(ur.data);
            }

            ri::LaplacianOperator lap;
            bool have_lap = false;
            if (!tr_graph.empty() && h.lambda3 > 0.0) {
                ri::UserGraph ug = ri::load_user_graph(tr_graph);
                for (const auto& e : ug.edges) {
                    if (!full_ids.count(e.tweet)) {
                        throw ri::io_error("graph edge references unknown tweet id '" + e.tweet + "'");
                    }
                }
                std::vector<std::string> ids;
                std::unordered_map<std::string, bool> kept;
                for (const auto& t : d.tweets) {
                    ids.push_back(t.id);
                    kept[t.id] = true;
                }
                // Edges naming undersampled-away tweets no longer smooth anything.
                std::erase_if(ug.edges, [&](const ri::UserGraph::Edge& e) { return !kept.count(e.tweet); });
                const ri::TweetGraph tg = ri::line_graph_convert(ug, ids);
                if (tr_laplacian == "auto") {
                    lap = ri::laplacian(tg, tr_teleport);
                } else {
                    const ri::LaplacianKind kind = parse_kind(tr_laplacian);
                    lap = ri::laplacian(tg, tr_teleport, 1e-12, &kind);
                }
                have_lap = true;
            }

            ri::BCDConfig cfg;
            cfg.max_iter = static_cast<int>(tr_max_iter);
            cfg.tol = tr_tol;
            cfg.xi = tr_xi;
            cfg.seed = tr_seed;
            cfg.freeze_u = tr_freeze_u;
            if (tr_eta_mode == "nesterov") cfg.eta_mode = ri::BCDConfig::EtaMode::Nesterov;
            else if (tr_eta_mode == "zero") cfg.eta_mode = ri::BCDConfig::EtaMode::Zero;
            else throw ri::io_error("unknown eta mode: " + tr_eta_mode);

            ConfigHeader header("train");
            header.add("data", tr_data)
                .add("graph", tr_no_graph || tr_graph.empty() ? std::string("none") : tr_graph)
                .add("lambda1", h.lambda1)
                .add("lambda2", h.lambda2)
                .add("lambda3", h.lambda3)
                .add("r", static_cast<long long>(h.r))
                .add("tau_word", h.tau_word)
                .add("tau_tweet", h.tau_tweet)
                .add("max_iter", static_cast<long long>(cfg.max_iter))
                .add("tol", cfg.tol)
                .add("xi", cfg.xi)
                .add("eta_mode", tr_eta_mode)
                .add("seed", cfg.seed)
                .add("bias", !tr_no_bias)
                .add("normalize", tr_normalize)
                .add("teleport", tr_teleport)
                .add("laplacian", tr_laplacian)
                .add("undersample", tr_undersample)
                .add("freeze_u", tr_freeze_u);

            auto [params, trace] = ri::fit(d, have_lap ? &lap : nullptr, h, cfg);
            ri::save_model(params, h, !tr_no_bias, tr_normalize, tr_model, header.str(), !tr_no_save_u);
            if (!tr_trace.empty()) ri::save_trace_csv(trace, tr_trace, header.str(), tr_timings);

            if (undersample_notice) {
                std::cout << "undersample: positive ratio already at target, dataset unchanged\n";
            }
            std::cout << "iterations=" << trace.iterations.size()
                      << " converged=" << (trace.converged ? "true" : "false")
                      << " initial_objective=" << fmt_double(trace.initial_objective)
                      << " final_objective="
                      << fmt_double(trace.iterations.empty() ? trace.initial_objective
                                                             : trace.iterations.back().objective)
                      << "\n";
            if (!trace.converged) {
                std::cout << "note: tolerance not reached within max_iter\n";
            }
            return 0;
        }

        if (predict_cmd->parsed() || eval_cmd->parsed()) {
            const PredictFlags& fl = predict_cmd->parsed() ? pr : ev;
            const ri::LoadedModel lm = ri::load_model(fl.model);
            ri::Hyper h = lm.hyper;
            if (fl.tau_word >= 0.0) h.tau_word = fl.tau_word;
            if (fl.tau_tweet >= 0.0) h.tau_tweet = fl.tau_tweet;
            const bool bias = fl.no_bias ? false : lm.bias;
            const ri::Dataset d = ri::load_dataset(fl.data, bias, lm.normalize);
            const ri::EvalRun run = ri::evaluate_run(lm.params, h, d);

            ConfigHeader header(predict_cmd->parsed() ? "predict" : "eval");
            header.add("data", fl.data)
                .add("model", fl.model)
                .add("tau_word", h.tau_word)
                .add("tau_tweet", h.tau_tweet)
                .add("bias", bias);
            if (!fl.scores.empty()) ri::save_scores_csv(run, fl.scores, header.str());
            if (eval_cmd->parsed() && !ev.report.empty()) ri::save_report(run, ev.report, header.str());
            if (eval_cmd->parsed()) {
                if (!run.has_report) {
                    std::cout << "no ground-truth labels; report suppressed, scores only\n";
                } else {
                    std::cout << "tp=" << run.report.tp << " fp=" << run.report.fp
                              << " fn=" << run.report.fn << " tn=" << run.report.tn
                              << " precision=" << fmt_double(run.report.precision)
                              << " recall=" << fmt_double(run.report.recall)
                              << " f1=" << fmt_double(run.report.f1) << "\n";
                }
            } else {
                std::cout << "scored=" << run.scores.size() << "\n";
            }
            return 0;
        }

        if (graph_cmd->parsed()) {
            const ri::UserGraph ug = ri::load_user_graph(g_graph);
            const ri::TweetGraph tg = ri::line_graph_convert(ug);
            ConfigHeader header("graph");
            header.add("graph", g_graph);

            if (g_convert->parsed()) {
                Eigen::Index isolated = 0;
                for (Eigen::Index i = 0; i < tg.size(); ++i) {
                    if (ri::SpMat::InnerIterator(tg.adjacency, i)) continue;
                    ++isolated;
                }
                std::cout << "vertices=" << tg.size() << " links=" << tg.adjacency.nonZeros()
                          << " isolated=" << isolated << "\n";
                if (!g_out.empty()) {
                    std::ofstream out(g_out);
                    if (!out) throw ri::io_error("cannot write " + g_out);
                    out << "# " << header.str() << "\n";
                    out << "tweet_i,tweet_j,weight\n";
                    for (Eigen::Index i = 0; i < tg.size(); ++i) {
                        for (ri::SpMat::InnerIterator it(tg.adjacency, i); it; ++it) {
                            out << tg.ids[static_cast<std::size_t>(it.row())] << ','
                                << tg.ids[static_cast<std::size_t>(it.col())] << ','
                                << fmt_double(it.value()) << '\n';
                        }
                    }
                }
            } else if (g_stats->parsed()) {
                const ri::DegreeStats st = ri::degree_stats(tg);
                std::cout << "vertices=" << tg.size() << " mean_degree=" << fmt_double(st.mean)
                          << " zero_degree=" << st.zero_degree << "\n";
                std::ostream* outp = &std::cout;
                std::ofstream file;
                if (!g_out.empty()) {
                    file.open(g_out);
                    if (!file) throw ri::io_error("cannot write " + g_out);
                    file << "# " << header.str() << "\n";
                    outp = &file;
                }
                *outp << "degree,count\n";
                for (const auto& [deg, count] : st.histogram) {
                    if (deg == 0) continue;  // zero-degree vertices are on the summary line
                    *outp << deg << ',' << count << '\n';
                }
            } else if (g_assort->parsed()) {
                const ri::Dataset d = ri::load_dataset(g_data, false);
                std::unordered_map<std::string, int> label_of;
                for (const auto& t : d.tweets) label_of[t.id] = t.label;
                std::vector<int> labels;
                for (const auto& id : tg.ids) {
                    auto it = label_of.find(id);
                    if (it == label_of.end()) throw ri::io_error("no label for tweet '" + id + "'");
                    labels.push_back(it->second);
                }
                std::cout << "assortativity=" << fmt_double(ri::assortativity(tg, labels)) << "\n";
            } else if (g_modularity->parsed()) {
                std::ifstream in(g_partition);
                if (!in) throw ri::io_error("cannot open partition file: " + g_partition);
                std::unordered_map<std::string, int> community;
                std::string line;
                std::size_t line_no = 0;
                while (std::getline(in, line)) {
                    ++line_no;
                    if (line.empty() || line[0] == '#' || line == "tweet_id,community") continue;
                    const auto comma = line.find(',');
                    if (comma == std::string::npos) {
                        throw ri::io_error(g_partition + ":" + std::to_string(line_no) +
                                           ": expected tweet_id,community");
                    }
                    community[line.substr(0, comma)] = std::stoi(line.substr(comma + 1));
                }
                std::vector<int> partition;
                for (const auto& id : tg.ids) {
                    auto it = community.find(id);
                    if (it == community.end()) throw ri::io_error("no community for tweet '" + id + "'");
                    partition.push_back(it->second);
                }
                std::cout << "modularity=" << fmt_double(ri::modularity(tg, partition)) << "\n";
            } else if (g_laplacian->parsed()) {
                header.add("kind", g_kind).add("teleport", g_teleport);
                ri::LaplacianOperator lap;
                if (g_kind == "auto") {
                    lap = ri::laplacian(tg, g_teleport);
                } else {
                    const ri::LaplacianKind kind = parse_kind(g_kind);
                    lap = ri::laplacian(tg, g_teleport, 1e-12, &kind);
                }
                ri::save_laplacian_coo(lap, g_out, header.str());
                std::cout << "vertices=" << lap.size() << " nonzeros=" << lap.matrix.nonZeros() << "\n";
            }
            return 0;
        }
    } catch (const ri::numeric_error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 1;
    } catch (const ri::io_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
