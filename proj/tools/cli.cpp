#include "cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "gridshape/descriptor.hpp"
#include "gridshape/error.hpp"
#include "gridshape/evalkit.hpp"
#include "gridshape/image_io.hpp"
#include "gridshape/shape_index.hpp"

namespace gridshape::cli {

namespace {

namespace fs = std::filesystem;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Error raised while running one named pipeline stage.
struct StageError : std::runtime_error {
  StageError(const std::string& stage, const Error& e)
      : std::runtime_error(stage + ": " + e.what()), kind(e.kind()) {}
  ErrorKind kind;
};

template <typename Fn>
auto stage(const std::string& name, Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    throw StageError(name, e);
  }
}

WeightVector parse_weights(const std::string& text) {
  std::vector<double> parts;
  std::stringstream ss(text);
  std::string token;
  while (std::getline(ss, token, ',')) {
    try {
      std::size_t used = 0;
      parts.push_back(std::stod(token, &used));
      if (used != token.size()) throw std::invalid_argument(token);
    } catch (const std::exception&) {
      throw UsageError("--weights expects three numbers a,b,c, got '" + text + "'");
    }
  }
  if (parts.size() != 3) {
    throw UsageError("--weights expects three numbers a,b,c, got '" + text + "'");
  }
  try {
    return WeightVector(parts[0], parts[1], parts[2]);
  } catch (const Error& e) {
    throw UsageError(std::string("--weights: ") + e.what());
  }
}

std::ostream& open_output(const std::string& path, std::ofstream& file, std::ostream& fallback) {
  if (path.empty()) return fallback;
  file.open(path, std::ios::binary);
  if (!file) throw Error(ErrorKind::kIo, "cannot write " + path);
  return file;
}

ExtractOptions extract_options(const RunConfig& rc) {
  ExtractOptions o;
  o.grid.n = rc.grid_size;
  o.grid.interior_threshold = rc.interior_threshold;
  o.grid.exclude_center = rc.exclude_center;
  o.cdf_bins = rc.cdf_bins;
  try {
    o.grid.validate();
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  if (rc.cdf_bins < 8) throw UsageError("cdf bins must be >= 8");
  if (!(rc.threshold >= 0.0 && rc.threshold <= 1.0)) {
    throw UsageError("threshold must lie in [0, 1]");
  }
  return o;
}

CompositeDescriptor extract_file(const fs::path& path, const RunConfig& rc,
                                 const ExtractOptions& opts) {
  const GrayImage gray = stage("load", [&] { return decode_image(path); });
  const BinaryImage bin = stage("binarize", [&] {
    return binarize(gray, BinarizeOptions{rc.threshold, rc.invert});
  });
  const BinaryImage shape = stage("component", [&] { return largest_component(bin); });
  return stage("extract", [&] {
    return extract(shape, opts, path.stem().string(),
                   class_from_filename(path.filename().string()));
  });
}

void apply_index_settings(RunConfig& rc, const IndexSettings& s) {
  rc.grid_size = s.fingerprint.n;
  rc.interior_threshold = s.fingerprint.tau;
  rc.cdf_bins = s.fingerprint.m;
  rc.exclude_center = s.exclude_center;
}

}  // namespace

std::string RunConfig::header_line() const {
  std::string s = "# gridshape run-config";
  s += " grid_size=" + std::to_string(grid_size);
  s += " interior_threshold=" + format_value(interior_threshold);
  s += " cdf_bins=" + std::to_string(cdf_bins);
  s += " weights=" + weights.to_string();
  s += " top_k=" + std::to_string(top_k);
  s += " threshold=" + format_value(threshold);
  s += " invert=" + std::string(invert ? "1" : "0");
  s += " exclude_center=" + std::string(exclude_center ? "1" : "0");
  s += " exclude_self=" + std::string(exclude_self ? "1" : "0");
  return s;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Labeled-grid shape descriptors: extraction, retrieval and evaluation",
               "gridshape"};
  app.require_subcommand(1);

  RunConfig rc;
  std::string weights_text = "0.5,0.3,0.2";
  std::string out_path;

  auto add_extraction_flags = [&](CLI::App* cmd) {
    cmd->add_option("--grid-size", rc.grid_size, "Cells per grid side (odd, >= 3)");
    cmd->add_option("--interior-threshold", rc.interior_threshold,
                    "Coverage fraction for Interior cells");
    cmd->add_option("--cdf-bins", rc.cdf_bins, "Angle bins of the distance signature");
    cmd->add_flag("--exclude-center", rc.exclude_center,
                  "Leave the central cell out of the track statistics");
  };
  auto add_binarize_flags = [&](CLI::App* cmd) {
    cmd->add_option("--threshold", rc.threshold, "Binarization luminance threshold");
    cmd->add_flag("--invert", rc.invert, "Shapes are dark on a light background");
  };

  std::string image;
  auto* extract_cmd = app.add_subcommand("extract", "Write the descriptor of one image");
  extract_cmd->add_option("image", image, "Input image (PNG, PGM, BMP)")->required();
  add_extraction_flags(extract_cmd);
  add_binarize_flags(extract_cmd);
  extract_cmd->add_option("--out", out_path, "Descriptor path (default <stem>.gsd)");

  std::string directory;
  unsigned threads = 0;
  auto* index_cmd = app.add_subcommand("index", "Build an index from a directory of images");
  index_cmd->add_option("directory", directory, "Directory of images")->required();
  add_extraction_flags(index_cmd);
  add_binarize_flags(index_cmd);
  index_cmd->add_option("--out", out_path, "Index path (default index.gsx)");
  index_cmd->add_option("--threads", threads, "Worker threads (0 = all cores)");

  std::string index_path;
  auto* query_cmd = app.add_subcommand("query", "Rank an index against a query image");
  query_cmd->add_option("index", index_path, "Index file (.gsx)")->required();
  query_cmd->add_option("image", image, "Query image")->required();
  add_extraction_flags(query_cmd);
  add_binarize_flags(query_cmd);
  query_cmd->add_option("--weights", weights_text, "Fusion weights grid,cdf,global");
  query_cmd->add_option("--top-k", rc.top_k, "Number of results");
  query_cmd->add_option("--out", out_path, "Write the CSV here instead of stdout");

  std::string mode;
  std::size_t max_k = 40;
  std::size_t cutoff = 40;
  double step = 0.05;
  bool include_self = false;
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate retrieval over an index");
  eval_cmd->add_option("index", index_path, "Index file (.gsx)")->required();
  eval_cmd->add_option("--mode", mode, "pr | bullseye | tune")
      ->required()
      ->check(CLI::IsMember({"pr", "bullseye", "tune"}));
  eval_cmd->add_option("--weights", weights_text, "Fusion weights grid,cdf,global");
  eval_cmd->add_option("--max-k", max_k, "Deepest cutoff of the PR curves");
  eval_cmd->add_option("--cutoff", cutoff, "Bull's-eye retrieval depth");
  eval_cmd->add_option("--step", step, "Weight lattice granularity for tune");
  eval_cmd->add_flag("--exclude-self", rc.exclude_self,
                     "Bull's-eye: drop each query from its own ranking");
  eval_cmd->add_flag("--include-self", include_self,
                     "PR: keep each query in its own ranking");
  eval_cmd->add_option("--out", out_path, "Write the CSV here instead of stdout");
  eval_cmd->add_option("--threads", threads, "Worker threads (0 = all cores)");

  std::vector<const char*> argv;
  argv.push_back("gridshape");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    rc.weights = parse_weights(weights_text);

    if (extract_cmd->parsed()) {
      const auto opts = extract_options(rc);
      const fs::path path(image);
      const auto d = extract_file(path, rc, opts);
      const fs::path target = out_path.empty() ? fs::path(path).replace_extension(".gsd")
                                               : fs::path(out_path);
      std::ofstream file(target, std::ios::binary);
      if (!file) throw Error(ErrorKind::kIo, "cannot write " + target.string());
      file << rc.header_line() << '\n' << serialize(d);
      if (!file) throw Error(ErrorKind::kIo, "write failed for " + target.string());
      out << target.string() << '\n';
      return kExitOk;
    }

    if (index_cmd->parsed()) {
      BuildOptions opts;
      opts.extract = extract_options(rc);
      opts.binarize = {rc.threshold, rc.invert};
      opts.threads = threads;
      opts.warn = [&](const std::string& msg) { err << "warning: " << msg << '\n'; };
      const auto ix = build_index(directory, opts);
      const fs::path target = out_path.empty() ? fs::path("index.gsx") : fs::path(out_path);
      std::ofstream file(target, std::ios::binary);
      if (!file) throw Error(ErrorKind::kIo, "cannot write " + target.string());
      file << rc.header_line() << '\n' << serialize_index(ix);
      if (!file) throw Error(ErrorKind::kIo, "write failed for " + target.string());
      const auto failed = ix.failures();
      out << rc.header_line() << '\n';
      out << "entries," << ix.size() << '\n';
      out << "failures," << failed.size() << '\n';
      for (const auto& f : failed) out << "failed," << f.source << ',' << f.error << '\n';
      return kExitOk;
    }

    const auto ix = load_index(index_path);
    RunConfig requested = rc;
    apply_index_settings(rc, ix.settings());

    if (query_cmd->parsed()) {
      std::string diff;
      auto compare = [&](const char* flag, const char* name, auto index_value, auto query_value) {
        if (query_cmd->count(flag) && index_value != query_value) {
          std::ostringstream line;
          line << "\n  " << name << ": index=" << index_value << " query=" << query_value;
          diff += line.str();
        }
      };
      compare("--grid-size", "grid_size", rc.grid_size, requested.grid_size);
      compare("--interior-threshold", "interior_threshold", rc.interior_threshold,
              requested.interior_threshold);
      compare("--cdf-bins", "cdf_bins", rc.cdf_bins, requested.cdf_bins);
      compare("--exclude-center", "exclude_center", rc.exclude_center, requested.exclude_center);
      if (!diff.empty()) {
        throw Error(ErrorKind::kComparability, "config mismatch with index:" + diff);
      }
      if (rc.top_k == 0) throw UsageError("--top-k must be >= 1");
      const auto d = extract_file(image, rc, ix.settings().extract_options());
      const auto results = rank(d, ix.entries(), rc.weights, rc.top_k);
      std::ofstream file;
      auto& sink = open_output(out_path, file, out);
      sink << rc.header_line() << '\n' << "rank,shape_id,class,score\n";
      for (const auto& r : results) {
        sink << r.rank << ',' << r.shape_id << ',' << r.class_label.value_or("") << ','
             << format_value(r.score) << '\n';
      }
      return kExitOk;
    }

    // eval
    std::ofstream file;
    auto& sink = open_output(out_path, file, out);
    if (mode == "pr") {
      if (max_k == 0) throw UsageError("--max-k must be >= 1");
      require_labels(ix);
      sink << rc.header_line() << '\n' << "query_id,k,precision,recall\n";
      std::vector<PrCurve> curves;
      for (const auto& q : ix.entries()) {
        curves.push_back(precision_recall(q, ix, rc.weights, PrOptions{max_k, include_self}));
        for (const auto& p : curves.back().points) {
          sink << q.shape_id << ',' << p.k << ',' << format_value(p.precision) << ','
               << format_value(p.recall) << '\n';
        }
      }
      const auto bands = summarize_bands(curves);
      sink << "# low_recall_mean_precision=" << format_value(bands.low_recall_precision)
           << " high_recall_mean_precision=" << format_value(bands.high_recall_precision)
           << '\n';
      return kExitOk;
    }

    if (cutoff == 0) throw UsageError("--cutoff must be >= 1");
    const BullseyeOptions bopts{cutoff, rc.exclude_self};
    if (mode == "bullseye") {
      const SimilarityTable table(ix, threads);
      const auto report = bullseye(ix, table, rc.weights, bopts);
      sink << rc.header_line() << '\n' << "shape_id,hits\n";
      for (const auto& h : report.per_query) sink << h.shape_id << ',' << h.hits << '\n';
      sink << "overall," << format_value(report.overall) << '\n';
      return kExitOk;
    }

    if (!(step > 0.0 && step <= 0.5)) throw UsageError("--step must lie in (0, 0.5]");
    const auto tuned = tune_weights(ix, step, bopts, threads);
    sink << rc.header_line() << '\n' << "w_grid,w_cdf,w_global,score\n";
    for (const auto& c : tuned.candidates) {
      sink << format_value(c.weights.grid()) << ',' << format_value(c.weights.cdf()) << ','
           << format_value(c.weights.global()) << ',' << format_value(c.score) << '\n';
    }
    sink << "best," << tuned.best.to_string() << ',' << format_value(tuned.best_score) << '\n';
    return kExitOk;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const StageError& e) {
    err << "error: " << e.what() << '\n';
    return e.kind == ErrorKind::kInvalidArgument ? kExitUsage : kExitData;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.kind() == ErrorKind::kInvalidArgument ? kExitUsage : kExitData;
  }
}

}  // namespace gridshape::cli
