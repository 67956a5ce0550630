// SPDX-License-Identifier: Apache-2.0
//
// Copyright 2026 The hiris Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <memory>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "hiris/config.hpp"
#include "hiris/error.hpp"
#include "hiris/imaging.hpp"
#include "hiris/io.hpp"
#include "hiris/pdm.hpp"
#include "hiris/sampling.hpp"
#include "hiris/synth.hpp"

namespace hiris::cli {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

struct Invocation {
  std::string config_path;
  bool json = false;
  std::vector<std::pair<std::string, std::string>> overrides;
  std::string in;
  std::vector<std::string> nodes;
  std::string layout;
  std::size_t bench_channels = 1024;
  std::size_t bench_ticks = 315000;
  std::map<const CLI::Option*, std::function<void(const std::string&)>> setters;
};

std::string flag_name(const std::string& key) {
  std::string dashed = key;
  std::replace(dashed.begin(), dashed.end(), '.', '-');
  std::string names = "--" + dashed;
  if (dashed.find('_') != std::string::npos) {
    std::replace(dashed.begin(), dashed.end(), '_', '-');
    names += ",--" + dashed;
  }
  return names;
}

std::string number(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

// Key options are applied after parsing, in command-line order.
void add_common(CLI::App* sub, Invocation& inv) {
  sub->add_option("--config", inv.config_path, "INI configuration file")->check(CLI::ExistingFile);
  sub->add_flag("--json", inv.json, "Print a JSON summary on stdout");
  auto keyed = [&](const std::string& names, const std::string& key, double scale,
                   const std::string& help, const std::string& group) {
    CLI::Option* opt = sub->add_option(names, help)
                           ->type_name("VALUE")
                           ->expected(1)
                           ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll)
                           ->group(group);
    inv.setters[opt] = [&inv, key, scale](const std::string& v) {
      if (scale == 1.0) {
        inv.overrides.emplace_back(key, v);
        return;
      }
      config::RunConfig probe;
      config::set_value(probe, key, v);
      inv.overrides.emplace_back(key, number(std::stod(config::get_value(probe, key)) * scale));
    };
  };
  for (const auto& key : config::keys())
    keyed(flag_name(key), key, 1.0, "Override " + key, "Configuration keys");
  keyed("--pitch-mm", "array.pitch_m", 1e-3, "Element pitch in millimetres", "Shortcuts");
  keyed("--speed", "medium.speed_of_sound", 1.0, "Speed of sound in m/s", "Shortcuts");
  keyed("--n", "beamform.n_directions", 1.0, "Number of sphere regions", "Shortcuts");
  keyed("--kind", "beamform.kind", 1.0, "mvdr or bartlett", "Shortcuts");
  keyed("--loading", "beamform.loading", 1.0, "Relative diagonal loading", "Shortcuts");
  keyed("--az", "scene.azimuth", 1.0, "Source azimuth in degrees", "Shortcuts");
  keyed("--el", "scene.elevation", 1.0, "Source elevation in degrees", "Shortcuts");
  keyed("--snr", "scene.snr_db", 1.0, "Per-channel SNR in dB", "Shortcuts");
  keyed("--seed", "scene.seed", 1.0, "Random seed", "Shortcuts");
  keyed("--frequency", "stft.f_target", 1.0, "Imaging frequency in Hz", "Shortcuts");
  keyed("--out", "output.path", 1.0, "Output path", "Shortcuts");
}

void collect_overrides(const CLI::App* sub, Invocation& inv) {
  std::map<const CLI::Option*, std::size_t> seen;
  for (const CLI::Option* opt : sub->parse_order()) {
    const auto it = inv.setters.find(opt);
    if (it == inv.setters.end()) continue;
    const std::size_t k = seen[opt]++;
    it->second(opt->results().at(k));
  }
}

config::RunConfig resolve(const Invocation& inv) {
  config::RunConfig cfg = inv.config_path.empty() ? config::RunConfig{} : config::load(inv.config_path);
  for (const auto& [key, value] : inv.overrides) config::set_value(cfg, key, value);
  config::validate(cfg);
  return cfg;
}

fs::path primary_path(const std::string& path, const std::string& ext) {
  fs::path p(path);
  if (!p.has_extension()) p += ext;
  return p;
}

fs::path stem_path(const std::string& path) {
  fs::path p(path);
  return p.has_extension() ? p.replace_extension() : p;
}

fs::path with_suffix(const fs::path& stem, const std::string& suffix) {
  fs::path p = stem;
  p += suffix;
  return p;
}

json direction_json(const geometry::Direction& d) {
  return {{"azimuth_deg", d.azimuth_deg}, {"elevation_deg", d.elevation_deg}};
}

pdm::FirFilter demod_filter(const config::RunConfig& c) {
  return pdm::design_lowpass(c.pdm.rate, c.pdm.cutoff, c.pdm.transition, c.pdm.stopband_db);
}

WaveformSet synthesize_scene(const config::RunConfig& c) {
  const auto g = c.geometry();
  const synth::NoiseSpec noise{c.scene.snr_db, c.scene.seed};
  if (c.scene.mode == "active") {
    const auto reflectors = c.reflectors();
    return synth::echo_scene(g, c.medium, reflectors, c.waveform(), c.scene.sample_rate,
                             c.scene.duration, noise);
  }
  const auto sources = c.sources();
  return synth::synthesize_array_signals(g, c.medium, sources, c.scene.sample_rate,
                                         c.scene.duration, noise);
}

// PCM or capture file, detected by magic; captures are demodulated with the
// configured filter chain. Without an input file the configured scene is
// synthesised directly at scene.sample_rate.
WaveformSet load_waveforms(const Invocation& inv, const config::RunConfig& c, json& summary) {
  if (inv.in.empty()) {
    summary["input"] = "scene";
    summary["seed"] = c.scene.seed;
    summary["snr_db"] = c.scene.snr_db;
    return synthesize_scene(c);
  }
  summary["input"] = inv.in;
  std::ifstream probe(inv.in, std::ios::binary);
  require(static_cast<bool>(probe), "cannot open " + inv.in);
  char magic[4] = {};
  probe.read(magic, 4);
  probe.close();
  if (std::string(magic, 4) == "HAC1") {
    const auto cap = io::read_capture(fs::path(inv.in));
    require(cap.rows == c.array.rows && cap.cols == c.array.cols,
            "capture geometry does not match the configured array");
    return pdm::pdm_demodulate(cap.stream, demod_filter(c), c.pdm.decimation);
  }
  auto w = io::read_pcm(fs::path(inv.in));
  require(w.channels == c.geometry().size(), "PCM channel count does not match the array");
  return w;
}

imaging::PipelineParams pipeline(const config::RunConfig& c) {
  imaging::PipelineParams p;
  p.window_length = c.stft.window_length;
  p.hop = c.stft.hop;
  p.f_target = c.stft.f_target;
  p.filter = c.filter();
  if (c.stft.frame >= 0) p.frame = static_cast<std::size_t>(c.stft.frame);
  return p;
}

// CSV (dB), 16-bit raster and sidecar for one image.
void write_image(const imaging::AcousticImage& img, const config::RunConfig& c, json& summary) {
  const auto db = imaging::to_db(img, c.output.floor_db);
  const auto csv = primary_path(c.output.path, ".csv");
  std::ofstream os(csv);
  if (!os) throw ProcessingError("cannot open " + csv.string() + " for writing");
  io::write_image_csv(db, os);
  const auto stem = stem_path(c.output.path);
  io::write_raster(stem, db.power, io::raster_header(db));
  summary["outputs"] = {csv.string(), with_suffix(stem, ".raw").string(),
                        with_suffix(stem, ".hdr").string()};
}

int cmd_maxfreq(const Invocation& inv, const config::RunConfig& c, std::ostream& out) {
  const double f = geometry::max_unaliased_frequency(c.geometry(), c.medium);
  if (inv.json) {
    out << json{{"command", "maxfreq"},
                {"pitch_m", c.array.pitch_m},
                {"speed_of_sound", c.medium.speed_of_sound},
                {"max_unaliased_frequency_hz", f}}
               .dump()
        << '\n';
  } else {
    out << std::fixed << std::setprecision(2) << f << '\n';
  }
  return 0;
}

int cmd_eqgrid(const Invocation& inv, const config::RunConfig& c, std::ostream& out) {
  const auto ds = sampling::eq_sphere_partition(c.beamform.n_directions, c.beamform.hemisphere);
  const auto path = primary_path(c.output.path, ".csv");
  std::ofstream os(path);
  if (!os) throw ProcessingError("cannot open " + path.string() + " for writing");
  sampling::write_csv(ds, os);
  if (inv.json) {
    out << json{{"command", "eqgrid"},
                {"n", c.beamform.n_directions},
                {"hemisphere", c.beamform.hemisphere},
                {"directions", ds.size()},
                {"outputs", {path.string()}}}
               .dump()
        << '\n';
  } else {
    out << "wrote " << ds.size() << " directions to " << path.string() << '\n';
  }
  return 0;
}

int cmd_synth(const Invocation& inv, const config::RunConfig& c, std::ostream& out) {
  WaveformSet w = synthesize_scene(c);
  json s{{"command", "synth"},   {"mode", c.scene.mode},     {"seed", c.scene.seed},
         {"snr_db", c.scene.snr_db}, {"channels", w.channels}, {"length", w.length},
         {"sample_rate", w.sample_rate}, {"format", c.output.format}};
  if (c.output.format == "pcm") {
    const auto path = primary_path(c.output.path, ".hpw");
    io::write_pcm(path, w);
    s["outputs"] = {path.string()};
  } else {
    double peak = 0.0;
    for (double v : w.samples) peak = std::max(peak, std::abs(v));
    const double gain = peak > 0.0 ? c.pdm.input_peak / peak : 1.0;
    for (double& v : w.samples) v *= gain;
    synth::PdmOptions opt{c.pdm.order, c.pdm.dither, c.scene.seed};
    const PdmStream p = synth::pdm_modulate(w, c.pdm.rate, opt);
    const auto path = primary_path(c.output.path, ".hac");
    io::write_capture(path, p, c.geometry());
    s["gain"] = gain;
    s["pdm_rate"] = p.pdm_rate();
    s["ticks"] = p.ticks();
    s["payload_bytes"] = io::capture_payload_bytes(p.channels(), p.ticks());
    s["outputs"] = {path.string()};
  }
  if (inv.json) out << s.dump() << '\n';
  else out << "wrote " << s["outputs"][0].get<std::string>() << '\n';
  return 0;
}

int cmd_demod(const Invocation& inv, const config::RunConfig& c, std::ostream& out) {
  require(!inv.in.empty(), "demod needs --in <capture>");
  const auto t0 = std::chrono::steady_clock::now();
  const auto cap = io::read_capture(fs::path(inv.in));
  const auto filter = demod_filter(c);
  require(std::abs(cap.stream.pdm_rate() - c.pdm.rate) <= 1e-9 * c.pdm.rate,
          "capture PDM rate differs from pdm.rate");
  const auto w = pdm::pdm_demodulate(cap.stream, filter, c.pdm.decimation);
  const auto path = primary_path(c.output.path, ".hpw");
  io::write_pcm(path, w);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  json s{{"command", "demod"},      {"input", inv.in},
         {"channels", w.channels},  {"length", w.length},
         {"sample_rate", w.sample_rate}, {"taps", filter.taps.size()},
         {"group_delay_s", w.compensated_delay_s}, {"seconds", seconds},
         {"outputs", {path.string()}}};
  if (inv.json) out << s.dump() << '\n';
  else out << "wrote " << path.string() << '\n';
  return 0;
}

sampling::DirectionSet psf_grid(const config::RunConfig& c) {
  const auto& b = c.beamform;
  if (b.grid == "eq") return sampling::eq_sphere_partition(b.n_directions, true);
  if (b.grid == "scan") return sampling::azimuth_scan(b.scan_start, b.scan_end, b.scan_step, 0.0);
  return sampling::az_el_grid(b.scan_start, b.scan_end, b.el_start, b.el_end, b.scan_step);
}

int cmd_psf(const Invocation& inv, const config::RunConfig& c, std::ostream& out) {
  imaging::PsfParams p;
  p.source = {c.scene.azimuth, c.scene.elevation};
  p.frequency = c.stft.f_target;
  p.snr_db = c.scene.snr_db;
  p.filter = c.filter();
  p.seed = c.scene.seed;
  p.exclusion_deg = c.beamform.exclusion_deg;
  const auto report = imaging::simulate_psf(c.geometry(), c.medium, psf_grid(c), p);

  json s{{"command", "psf"},
         {"kind", config::get_value(c, "beamform.kind")},
         {"seed", c.scene.seed},
         {"snr_db", c.scene.snr_db},
         {"frequency_hz", report.frequency},
         {"true_direction", direction_json(report.true_direction)},
         {"peak_direction", direction_json(report.peak_direction)},
         {"peak_error_deg", report.peak_error_deg},
         {"pslr_db", report.pslr_db},
         {"mainlobe_exclusion_deg", report.mainlobe_exclusion_deg},
         {"above_alias_limit", report.above_alias_limit},
         {"directions", report.image.pixel_count()}};
  write_image(report.image, c, s);
  const auto report_path = with_suffix(stem_path(c.output.path), ".psf.txt");
  std::ofstream os(report_path);
  if (!os) throw ProcessingError("cannot open " + report_path.string() + " for writing");
  io::write_psf_report(report, os);
  s["outputs"].push_back(report_path.string());
  if (inv.json) {
    out << s.dump() << '\n';
  } else {
    out << "peak (" << report.peak_direction.azimuth_deg << ", "
        << report.peak_direction.elevation_deg << ") error " << report.peak_error_deg
        << " deg, PSLR " << report.pslr_db << " dB\n";
  }
  return 0;
}

int cmd_image(const Invocation& inv, const config::RunConfig& c, std::ostream& out, bool three_d) {
  json s{{"command", three_d ? "image3d" : "image2d"}};
  const auto w = load_waveforms(inv, c, s);
  const auto pp = pipeline(c);
  const std::size_t frame =
      pp.frame.value_or(spectral::strongest_frame(w, pp.window_length, pp.hop, pp.f_target));
  auto fixed = pp;
  fixed.frame = frame;
  const auto img =
      three_d ? imaging::image_3d(w, c.geometry(), c.medium, fixed, c.beamform.n_directions)
              : imaging::image_2d(w, c.geometry(), c.medium, fixed,
                                  {c.beamform.scan_start, c.beamform.scan_end, c.beamform.scan_step});
  const auto peak = img.directions().directions[imaging::peak_index(img)];
  s["kind"] = config::get_value(c, "beamform.kind");
  s["frame"] = frame;
  s["frame_time_s"] = spectral::frame_time(frame, pp.window_length, pp.hop, w.sample_rate);
  s["frequency_hz"] =
      static_cast<double>(spectral::nearest_bin(pp.f_target, w.sample_rate, pp.window_length)) *
      w.sample_rate / static_cast<double>(pp.window_length);
  s["directions"] = img.pixel_count();
  s["peak_direction"] = direction_json(peak);
  write_image(img, c, s);
  if (inv.json) out << s.dump() << '\n';
  else out << "peak (" << peak.azimuth_deg << ", " << peak.elevation_deg << ")\n";
  return 0;
}

int cmd_bmode(const Invocation& inv, const config::RunConfig& c, std::ostream& out) {
  json s{{"command", "bmode"}};
  const auto w = load_waveforms(inv, c, s);
  const auto base = synth::generate_waveform(c.waveform(), w.sample_rate);
  imaging::BmodeParams p;
  p.pipeline = pipeline(c);
  p.range_min_m = c.output.range_min_m;
  p.range_max_m = c.output.range_max_m;
  p.pixel_pitch_m = c.output.pixel_pitch_m;
  const auto ds = sampling::azimuth_scan(c.beamform.scan_start, c.beamform.scan_end,
                                         c.beamform.scan_step, 0.0);
  const auto img = imaging::bmode(w, base, c.geometry(), c.medium, p, ds);
  const auto& ax = img.polar.polar();
  const std::size_t peak = imaging::peak_index(img.polar);
  s["kind"] = config::get_value(c, "beamform.kind");
  s["ranges"] = ax.ranges_m.size();
  s["azimuths"] = ax.azimuths_deg.size();
  s["peak_range_m"] = ax.ranges_m[peak / ax.azimuths_deg.size()];
  s["peak_azimuth_deg"] = ax.azimuths_deg[peak % ax.azimuths_deg.size()];
  s["range_bin_m"] = ax.ranges_m.size() > 1 ? ax.ranges_m[1] - ax.ranges_m[0] : 0.0;
  write_image(img.polar, c, s);

  const auto db = imaging::to_db(img.polar, c.output.floor_db);
  const auto cart = imaging::to_cartesian(db, c.output.pixel_pitch_m);
  io::RasterHeader h{cart.width, cart.height, "db", c.output.floor_db, c.output.floor_db, 0.0};
  const auto cart_stem = with_suffix(stem_path(c.output.path), ".cartesian");
  io::write_raster(cart_stem, cart.values, h);
  s["outputs"].push_back(with_suffix(cart_stem, ".raw").string());
  s["outputs"].push_back(with_suffix(cart_stem, ".hdr").string());
  s["cartesian"] = {{"width", cart.width}, {"height", cart.height},
                    {"pixel_pitch_m", cart.pixel_pitch_m}};
  if (inv.json) out << s.dump() << '\n';
  else out << "peak at " << s["peak_range_m"].get<double>() << " m, "
           << s["peak_azimuth_deg"].get<double>() << " deg\n";
  return 0;
}

int cmd_convert(const Invocation& inv, const config::RunConfig& c, std::ostream& out) {
  require(!inv.nodes.empty(), "convert needs --nodes <dump files>");
  io::NodeLayout layout = io::identity_layout(inv.nodes.size());
  if (!inv.layout.empty()) {
    std::ifstream is(inv.layout);
    require(static_cast<bool>(is), "cannot open layout " + inv.layout);
    layout = io::read_layout_csv(is);
  }
  const auto g = c.geometry();
  require(g.size() == layout.nodes() * io::kMicsPerNode,
          "array size does not match 32 microphones per node dump");
  std::vector<fs::path> paths(inv.nodes.begin(), inv.nodes.end());
  const auto p = io::convert_node_dumps(paths, layout, c.pdm.rate);
  const auto path = primary_path(c.output.path, ".hac");
  io::write_capture(path, p, g);
  json s{{"command", "convert"},
         {"nodes", paths.size()},
         {"channels", p.channels()},
         {"ticks", p.ticks()},
         {"payload_bytes", io::capture_payload_bytes(p.channels(), p.ticks())},
         {"outputs", {path.string()}}};
  if (inv.json) out << s.dump() << '\n';
  else out << "wrote " << path.string() << '\n';
  return 0;
}

int cmd_bench(const Invocation& inv, std::ostream& out) {
  const auto r = pdm::filter_throughput_bench(inv.bench_channels, inv.bench_ticks);
  const json s{{"command", "bench"},
               {"channels", r.channels},
               {"ticks", r.ticks},
               {"seconds", r.seconds},
               {"ticks_per_second", r.ticks_per_second},
               {"payload_bytes", io::capture_payload_bytes(r.channels, r.ticks)},
               {"checksum", r.checksum}};
  if (inv.json) out << s.dump() << '\n';
  else out << r.channels << " x " << r.ticks << " ticks in " << r.seconds << " s\n";
  return 0;
}

void build_app(CLI::App& app, Invocation& inv) {
  app.require_subcommand(1, 1);
  app.set_help_all_flag("--help-all", "Show help for all subcommands");
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"synth", "Synthesise a scene to a capture or PCM file"},
      {"demod", "Demodulate a capture to PCM"},
      {"psf", "Simulate a point spread function"},
      {"image2d", "Horizontal-plane image from a recording"},
      {"image3d", "Front-hemisphere image from a recording"},
      {"bmode", "Range-azimuth image from an active recording"},
      {"eqgrid", "Write an equal-area direction grid as CSV"},
      {"convert", "Convert node dumps to a capture"},
      {"maxfreq", "Print the spatial-aliasing frequency limit"},
      {"bench", "Time the demodulation filter"}};
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    add_common(sub, inv);
    if (name == "demod" || name == "image2d" || name == "image3d" || name == "bmode")
      sub->add_option("--in", inv.in, "Input capture or PCM file")->check(CLI::ExistingFile);
    if (name == "convert") {
      sub->add_option("--nodes", inv.nodes, "Node dump files in node order")
          ->required()
          ->check(CLI::ExistingFile);
      sub->add_option("--layout", inv.layout, "node,local,global CSV (identity if omitted)")
          ->check(CLI::ExistingFile);
    }
    if (name == "bench") {
      sub->add_option("--channels", inv.bench_channels, "Channels")->check(CLI::PositiveNumber);
      sub->add_option("--ticks", inv.bench_ticks, "PDM ticks per channel")
          ->check(CLI::PositiveNumber);
    }
  }
}

}  // namespace

config::RunConfig resolve_args(const std::vector<std::string>& args) {
  CLI::App app{"HiRIS ultrasound array imaging pipeline", "hiris"};
  Invocation inv;
  build_app(app, inv);
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
    collect_overrides(app.get_subcommands().front(), inv);
  } catch (const CLI::ParseError& e) {
    throw ValidationError(e.what());
  }
  return resolve(inv);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"HiRIS ultrasound array imaging pipeline", "hiris"};
  Invocation inv;
  build_app(app, inv);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
    collect_overrides(app.get_subcommands().front(), inv);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  try {
    const config::RunConfig cfg = resolve(inv);
    if (name == "maxfreq") return cmd_maxfreq(inv, cfg, out);
    if (name == "eqgrid") return cmd_eqgrid(inv, cfg, out);
    if (name == "synth") return cmd_synth(inv, cfg, out);
    if (name == "demod") return cmd_demod(inv, cfg, out);
    if (name == "psf") return cmd_psf(inv, cfg, out);
    if (name == "image2d") return cmd_image(inv, cfg, out, false);
    if (name == "image3d") return cmd_image(inv, cfg, out, true);
    if (name == "bmode") return cmd_bmode(inv, cfg, out);
    if (name == "convert") return cmd_convert(inv, cfg, out);
    if (name == "bench") return cmd_bench(inv, out);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const ProcessingError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}

}  // namespace hiris::cli
