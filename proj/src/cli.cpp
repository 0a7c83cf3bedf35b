#include "peacock/cli.hpp"

#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "peacock/baseline.hpp"
#include "peacock/error.hpp"
#include "peacock/fixtures.hpp"
#include "peacock/pipeline.hpp"
#include "peacock/render.hpp"

namespace peacock {
namespace {

// A failure with the stage it belongs to; becomes exit code 1.
struct StageFailure {
  std::string stage;
  std::string message;
};

template <typename Fn>
auto in_stage(const std::string& stage, Fn&& fn) {
  try {
    return fn();
  } catch (const StageError& e) {
    throw StageFailure{e.stage(), std::string(e.what()).substr(e.stage().size() + 2)};
  } catch (const std::exception& e) {
    throw StageFailure{stage, e.what()};
  }
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << text;
  if (!out) throw Error("failed writing '" + path + "'");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

CLI::Validator closed_range(const std::string& what, double lo, double hi, bool open_low = false) {
  return CLI::Validator(
      [=](std::string& value) -> std::string {
        double v = 0.0;
        try {
          std::size_t used = 0;
          v = std::stod(value, &used);
          if (used != value.size()) throw std::invalid_argument(value);
        } catch (const std::exception&) {
          return what + " must be a number, got '" + value + "'";
        }
        const bool ok = (open_low ? v > lo : v >= lo) && v <= hi;
        if (!ok) {
          std::ostringstream msg;
          msg << what << " must be in " << (open_low ? "(" : "[") << lo << "," << hi << "], got "
              << value;
          return msg.str();
        }
        return {};
      },
      std::string(open_low ? "(" : "[") + std::to_string(lo) + "," + std::to_string(hi) + "]");
}

struct ThresholdFlags {
  double t_frac = 0.03;
  std::optional<double> t_abs;
  double k_min = 0.4;
};

void add_threshold_flags(CLI::App& cmd, ThresholdFlags& flags) {
  auto* frac = cmd.add_option("--t-frac", flags.t_frac,
                              "Distance threshold as a fraction of max(width, height)")
                   ->check(closed_range("value", 0.0, 1.0, true))
                   ->capture_default_str();
  auto* abs = cmd.add_option("--t-abs", flags.t_abs, "Absolute distance threshold (layout units)")
                  ->check(CLI::PositiveNumber);
  frac->excludes(abs);
  cmd.add_option("--kmin", flags.k_min, "Required fraction of consecutive close control points")
      ->check(closed_range("value", 0.0, 1.0, true))
      ->capture_default_str();
}

DetectionParams detection_params(const ThresholdFlags& flags, double epsilon) {
  DetectionParams params;
  if (flags.t_abs) {
    params.threshold = AbsoluteThreshold{*flags.t_abs};
  } else {
    params.threshold = RelativeThreshold{flags.t_frac};
  }
  params.k_min = flags.k_min;
  params.epsilon = epsilon;
  return params;
}

struct GenArgs {
  std::string style = "ordered";
  std::size_t groups = 6;
  std::size_t bundles = 3;
  std::size_t edges = 6;
  bool reverse_last = false;
  std::uint64_t seed = 0;
  std::string out;
  std::string truth;
};

void run_gen(const GenArgs& args, std::ostream& out) {
  const Fixture fixture = in_stage("gen", [&] {
    return args.style == "ordered"
               ? make_ordered_bundles(args.groups, args.edges, args.reverse_last, args.seed)
               : make_crossing_bundles(args.bundles, args.edges, args.seed);
  });
  std::string truth_path = args.truth;
  if (truth_path.empty()) {
    std::filesystem::path p(args.out);
    truth_path = (p.parent_path() / (p.stem().string() + ".truth.json")).string();
  }
  in_stage("write", [&] {
    save_layout(fixture.layout, args.out);
    write_file(truth_path, ground_truth_to_json(fixture.truth));
    return 0;
  });
  out << "wrote " << fixture.layout.size() << " edges to " << args.out << " (truth: " << truth_path
      << ", T=" << fixture.threshold << ")\n";
}

struct ColorArgs {
  std::string input;
  double epsilon = 0.001;
  ThresholdFlags threshold;
  std::size_t dims = 1;
  std::uint64_t seed = 0;
  std::size_t max_iters = 500;
  double rel_tol = 1e-6;
  std::string method = "peacock";
  std::string init = "endpoint";
  std::string out_colors;
  std::string out_svg;
  bool fans_only = false;
  std::string dump_bundles;
  unsigned threads = 0;
};

void run_color(const ColorArgs& args, std::ostream& out) {
  const GraphLayout layout = in_stage("load", [&] { return load_layout(args.input); });
  const DetectionParams params = detection_params(args.threshold, args.epsilon);

  OptimizerConfig cfg;
  cfg.dims = args.dims;
  cfg.max_iters = args.max_iters;
  cfg.rel_tol = args.rel_tol;
  cfg.seed = args.seed;
  cfg.init = args.init == "random" ? InitMethod::kSeededRandom : InitMethod::kEndpointProjection;
  cfg.threads = args.threads;

  std::optional<BundleWeightMatrix> weights;
  Eigen::MatrixXd colors;
  std::vector<Rgb> rgb;
  double final_stress = 0.0;
  std::size_t iterations = 0;
  double threshold = 0.0;

  if (args.method == "baseline") {
    const DetectionOptions detection{DetectionMethod::kGrid, args.threads};
    threshold = in_stage("detect", [&] { return params.resolve_threshold(layout); });
    weights.emplace(in_stage("detect", [&] { return build_weight_matrix(layout, params, detection); }));
    const BaselineColorTable table = in_stage("baseline", [&] { return baseline_colors(layout); });
    const DissimilarityMatrix d =
        in_stage("dissimilarity", [&] { return build_dissimilarity_matrix(layout, args.threads); });
    colors = table.values();
    final_stress = stress(ColorEmbedding(colors), *weights, d, args.threads);
    for (Eigen::Index i = 0; i < colors.rows(); ++i) rgb.push_back({colors(i, 0), colors(i, 1), colors(i, 2)});
  } else {
    PeacockResult result = in_stage("color", [&] { return run_peacock(layout, params, cfg); });
    threshold = result.diagnostics.threshold;
    final_stress = result.diagnostics.final_stress;
    iterations = result.diagnostics.iterations;
    colors = result.colors.values();
    rgb = colors_to_display(result.colors);
    weights.emplace(std::move(result.weights));
  }

  in_stage("write", [&] {
    if (!args.dump_bundles.empty()) write_file(args.dump_bundles, bundle_dump_json(*weights));
    if (!args.out_colors.empty()) {
      write_file(args.out_colors, color_dump_json(colors, rgb, final_stress, iterations));
    }
    return 0;
  });
  if (!args.out_svg.empty()) {
    const std::string svg = in_stage("render", [&] {
      RenderOptions opts;
      if (args.fans_only) {
        opts.fan_segments = collect_fan_segments(layout, weights->flags(), threshold, params.k_min);
      }
      return render_svg(layout, rgb, opts);
    });
    in_stage("write", [&] {
      write_file(args.out_svg, svg);
      return 0;
    });
  }
  out << "edges=" << layout.size() << " bundled_pairs=" << weights->bundled_pair_count()
      << " T=" << threshold << " stress=" << final_stress << " iters=" << iterations << "\n";
}

struct RenderArgs {
  std::string layout;
  std::string colors;
  std::string out;
  bool fans_only = false;
  ThresholdFlags threshold;
  std::optional<double> stroke_width;
  double opacity = 0.85;
  bool no_nodes = false;
};

void run_render(const RenderArgs& args, std::ostream& out) {
  const GraphLayout layout = in_stage("load", [&] { return load_layout(args.layout); });
  const ColorDump dump = in_stage("load", [&] { return parse_color_dump(read_file(args.colors)); });
  const std::string svg = in_stage("render", [&] {
    RenderOptions opts;
    opts.stroke_width = args.stroke_width;
    opts.opacity = args.opacity;
    opts.draw_nodes = !args.no_nodes;
    if (args.fans_only) {
      const DetectionParams params = detection_params(args.threshold, 0.0);
      const double t = params.resolve_threshold(layout);
      const FlagMatrix flags = detect_bundles(layout, t, params.k_min);
      opts.fan_segments = collect_fan_segments(layout, flags, t, params.k_min);
    }
    return render_svg(layout, dump.rgb, opts);
  });
  in_stage("write", [&] {
    write_file(args.out, svg);
    return 0;
  });
  out << "wrote " << args.out << "\n";
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bundle-aware edge coloring for edge-bundled graph layouts", "peacock"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a synthetic bundled layout and its ground truth");
  gen_cmd->add_option("--style", gen.style, "Fixture family")
      ->check(CLI::IsMember({"ordered", "crossing"}))
      ->capture_default_str();
  gen_cmd->add_option("--groups", gen.groups, "Node groups (ordered style, even)")->capture_default_str();
  gen_cmd->add_option("--bundles", gen.bundles, "Bundles (crossing style)")->capture_default_str();
  gen_cmd->add_option("--edges", gen.edges, "Edges per bundle")->capture_default_str();
  gen_cmd->add_flag("--reverse-last", gen.reverse_last, "Connect the last bundle in reverse order");
  gen_cmd->add_option("--seed", gen.seed, "Jitter seed")->capture_default_str();
  gen_cmd->add_option("--out", gen.out, "Layout JSON to write")->required();
  gen_cmd->add_option("--truth", gen.truth, "Ground-truth JSON (default: <out>.truth.json)");

  ColorArgs color;
  auto* color_cmd = app.add_subcommand("color", "Color the edges of a bundled layout");
  color_cmd->add_option("--input", color.input, "Layout JSON")->required();
  color_cmd->add_option("--epsilon", color.epsilon, "Weight of non-bundled pairs")
      ->check(closed_range("value", 0.0, 1.0))
      ->capture_default_str();
  add_threshold_flags(*color_cmd, color.threshold);
  color_cmd->add_option("--dims", color.dims, "Color space dimensionality")
      ->check(CLI::IsMember({1, 2, 3}))
      ->capture_default_str();
  color_cmd->add_option("--seed", color.seed, "Initialization seed")->capture_default_str();
  color_cmd->add_option("--max-iters", color.max_iters, "SMACOF iteration cap")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  color_cmd->add_option("--rel-tol", color.rel_tol, "Relative stress-decrease stopping threshold")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  color_cmd->add_option("--method", color.method, "Coloring method")
      ->check(CLI::IsMember({"peacock", "baseline"}))
      ->capture_default_str();
  color_cmd->add_option("--init", color.init, "Optimizer start")
      ->check(CLI::IsMember({"endpoint", "random"}))
      ->capture_default_str();
  color_cmd->add_option("--out-colors", color.out_colors, "Color dump JSON to write");
  color_cmd->add_option("--out-svg", color.out_svg, "SVG to write");
  color_cmd->add_flag("--fans-only", color.fans_only, "Color only fan-in/fan-out segments");
  color_cmd->add_option("--dump-bundles", color.dump_bundles, "Write flagged ordered pairs as JSON");
  color_cmd->add_option("--threads", color.threads, "Worker threads (0 = all cores)")->capture_default_str();

  RenderArgs render;
  auto* render_cmd = app.add_subcommand("render", "Render a layout with a color dump to SVG");
  render_cmd->add_option("--layout", render.layout, "Layout JSON")->required();
  render_cmd->add_option("--colors", render.colors, "Color dump JSON")->required();
  render_cmd->add_option("--out", render.out, "SVG to write")->required();
  render_cmd->add_flag("--fans-only", render.fans_only, "Color only fan-in/fan-out segments");
  add_threshold_flags(*render_cmd, render.threshold);
  render_cmd->add_option("--stroke-width", render.stroke_width, "Stroke width in layout units")
      ->check(CLI::PositiveNumber);
  render_cmd->add_option("--opacity", render.opacity, "Stroke opacity")
      ->check(closed_range("value", 0.0, 1.0))
      ->capture_default_str();
  render_cmd->add_flag("--no-nodes", render.no_nodes, "Do not draw node markers");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    const CLI::App* target = &app;
    for (const CLI::App* sub : app.get_subcommands()) target = sub;
    out << target->help();
    return 0;
  } catch (const CLI::ParseError& e) {
    std::string msg = e.what();
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    err << "peacock: usage: " << msg << "\n";
    return 2;
  }

  try {
    if (gen_cmd->parsed()) {
      run_gen(gen, out);
    } else if (color_cmd->parsed()) {
      run_color(color, out);
    } else {
      run_render(render, out);
    }
  } catch (const StageFailure& f) {
    err << "peacock: " << f.stage << ": " << f.message << "\n";
    return 1;
  }
  return 0;
}

}  // namespace peacock
