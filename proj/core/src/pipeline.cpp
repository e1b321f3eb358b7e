// SPDX-License-Identifier: Apache-2.0
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

#include "hbf/pipeline.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <sstream>
#include <thread>

#include "binary_io.hpp"
#include "hbf/baselines.hpp"
#include "hbf/channel.hpp"
#include "hbf/dataset.hpp"
#include "hbf/model_io.hpp"
#include "hbf/subnet.hpp"

namespace hbf {

namespace {

std::string fmt(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void ensure_parent(const std::filesystem::path& p) {
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  ensure_parent(path);
  detail::write_file(path.string(), text);
}

std::vector<ChannelTensor> load_set(const std::filesystem::path& path, const SystemDims& dims) {
  ChannelShape shape;
  auto set = dataset_read(path, &shape);
  if (shape.n_tx != dims.n_tx || shape.n_rx != dims.n_rx ||
      shape.n_subcarriers != dims.n_subcarriers) {
    throw DimensionError("dataset " + path.string() + " does not match the configured dimensions");
  }
  if (set.empty()) throw DimensionError("dataset " + path.string() + " is empty");
  return set;
}

bool needs_mannet(const RunConfig& c) {
  return c.wants(Scheme::ManNetFc) || c.wants(Scheme::HeuristicSc) || c.wants(Scheme::FixedSc) ||
         c.wants(Scheme::KstarSc);
}

ComplexityParams params_for(const SystemDims& dims, int layers, int i_net) {
  ComplexityParams p;
  p.n_tx = dims.n_tx;
  p.n_rx = dims.n_rx;
  p.n_rf = dims.n_rf;
  p.n_streams = dims.n_streams;
  p.n_subcarriers = dims.n_subcarriers;
  p.n_paths = dims.n_paths;
  p.layers = layers;
  p.i_net = i_net;
  p.n_candidates = static_cast<double>(odd_subcarriers(dims.n_subcarriers).size());
  return p;
}

// Runs fn(i) for i in [0, n) on `threads` workers; results land by index.
template <class Fn>
void parallel_for(int n, unsigned threads, Fn fn) {
  if (threads <= 1 || n <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(threads);
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < threads; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (int i = static_cast<int>(w); i < n; i += static_cast<int>(threads)) fn(i);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace

GeneratedData cmd_generate_data(const RunConfig& config) {
  config.validate();
  GeneratedData out{config.train_path(), config.test_path()};
  const auto train = generate_channels(config.dims, config.seed, Stream::TrainChannels,
                                       config.train_size, 0, config.threads);
  const auto test = generate_channels(config.dims, config.seed, Stream::TestChannels,
                                      config.test_size, 0, config.threads);
  ensure_parent(out.train);
  ensure_parent(out.test);
  dataset_write(out.train, train);
  dataset_write(out.test, test);
  return out;
}

TrainedModels cmd_train(const RunConfig& config) {
  config.validate();
  const auto data = load_set(config.train_path(), config.dims);
  TrainConfig tc = config.train;
  tc.seed = config.seed;

  TrainedModels out;
  auto run = [&](const MaskProvider& masks, const std::filesystem::path& model,
                 const std::string& loss_name) {
    TrainConfig local = tc;
    if (config.auto_t) {
      // Last fifth of the training set is held out for the selection.
      const std::size_t n_val = std::max<std::size_t>(1, data.size() / 5);
      if (data.size() <= n_val) throw TrainingError("auto t needs at least two training realizations");
      const std::vector<ChannelTensor> fit(data.begin(), data.end() - static_cast<long>(n_val));
      const std::vector<ChannelTensor> val(data.end() - static_cast<long>(n_val), data.end());
      local.t = select_activation_parameter(fit, val, config.dims, local, config.t_candidates, masks);
    }
    const TrainResult r = train_unfolded(data, config.dims, local, masks);
    ensure_parent(model);
    model_write(model, r.net);
    const auto loss_path = config.out_dir / loss_name;
    write_loss_csv(loss_path, r.history);
    out.models.push_back(model);
    out.loss_csvs.push_back(loss_path);
  };

  if (needs_mannet(config)) run({}, config.mannet_path(), "mannet_loss.csv");
  if (config.wants(Scheme::SubManNetSc)) {
    const int n_rf = config.dims.n_rf;
    run([n_rf](const ChannelTensor& h) { return best_subcarrier_mapping(h, n_rf); },
        config.submannet_path(), "submannet_loss.csv");
  }
  return out;
}

std::vector<ResultRow> cmd_evaluate(const RunConfig& config) {
  config.validate();
  const auto& dims = config.dims;
  const auto test = load_set(config.test_path(), dims);
  const ModelExpectation expect{dims.n_tx, dims.n_rf};
  std::optional<UnfoldedNet> mannet;
  std::optional<UnfoldedNet> submannet;
  if (needs_mannet(config)) mannet = model_read(config.mannet_path(), expect);
  if (config.wants(Scheme::SubManNetSc)) submannet = model_read(config.submannet_path(), expect);
  const auto candidates = odd_subcarriers(dims.n_subcarriers);
  const int n = static_cast<int>(test.size());

  std::vector<ResultRow> rows;
  for (double snr : config.snr_db) {
    const double noise_var = 1.0;
    const double rho = std::pow(10.0, snr / 10.0) * noise_var;
    const std::size_t n_schemes = config.schemes.size();
    std::vector<std::vector<double>> se(n_schemes, std::vector<double>(n));
    std::vector<std::vector<double>> secs(n_schemes, std::vector<double>(n));

    parallel_for(n, config.threads, [&](int i) {
      const ChannelTensor& h = test[static_cast<std::size_t>(i)];
      const DigitalOptimal opt = optimal_digital_precoder(h, rho, noise_var, dims.n_streams);
      for (std::size_t s = 0; s < n_schemes; ++s) {
        Rng rng = make_rng(config.seed, Stream::Design, static_cast<std::uint64_t>(i));
        const auto t0 = std::chrono::steady_clock::now();
        double value = 0.0;
        switch (config.schemes[s]) {
          case Scheme::Dbf:
            value = dbf_se(h, opt);
            break;
          case Scheme::ManNetFc:
            value = fc_hbf_design(*mannet, h, opt, config.i_net, rng).se;
            break;
          case Scheme::Omp:
            value = omp_hbf(h, opt, genie_codebook(h, dims.n_tx_h, dims.n_tx_v), dims.n_rf).se;
            break;
          case Scheme::SubManNetSc:
            value = sc_hbf_design(*submannet, h, opt, config.i_net, rng).se;
            break;
          case Scheme::HeuristicSc:
            value = heuristic_sc_hbf(*mannet, h, opt, config.i_net, candidates, rng).se;
            break;
          case Scheme::FixedSc:
            value = fixed_sc_hbf(*mannet, h, opt, config.i_net, rng).se;
            break;
          case Scheme::KstarSc:
            value = heuristic_sc_hbf(*mannet, h, opt, config.i_net, {select_best_subcarrier(h)}, rng).se;
            break;
        }
        const auto t1 = std::chrono::steady_clock::now();
        se[s][static_cast<std::size_t>(i)] = value;
        secs[s][static_cast<std::size_t>(i)] = std::chrono::duration<double>(t1 - t0).count();
      }
    });

    for (std::size_t s = 0; s < n_schemes; ++s) {
      ResultRow row;
      row.scheme = std::string(scheme_name(config.schemes[s]));
      row.n_tx = dims.n_tx;
      row.n_rf = dims.n_rf;
      row.n_streams = dims.n_streams;
      row.k_subcarriers = dims.n_subcarriers;
      row.snr_db = snr;
      row.n_channels = n;
      double sum = 0.0;
      for (double v : se[s]) sum += v;
      row.se_mean = sum / n;
      double var = 0.0;
      for (double v : se[s]) var += (v - row.se_mean) * (v - row.se_mean);
      row.se_std = n > 1 ? std::sqrt(var / (n - 1)) : 0.0;
      row.op_count = complexity_estimate(config.schemes[s],
                                         params_for(dims, config.train.layers, config.i_net));
      if (config.record_timing) {
        double total = 0.0;
        for (double v : secs[s]) total += v;
        // Microsecond resolution.
        row.wall_time_s = std::round(total / n * 1e6) / 1e6;
      }
      rows.push_back(std::move(row));
    }
  }
  write_results_csv(config.out_dir / "results.csv", rows);
  return rows;
}

std::vector<ComplexityRow> cmd_complexity_report(const RunConfig& config) {
  config.validate();
  std::vector<ComplexityRow> rows;
  for (std::size_t i = 0; i < config.complexity_n_tx.size(); ++i) {
    SystemDims d = config.dims;
    d.n_tx = config.complexity_n_tx[i];
    d.n_subcarriers = config.complexity_subcarriers;
    const int layers = config.complexity_layers.size() == 1 ? config.complexity_layers.front()
                                                             : config.complexity_layers[i];
    const ComplexityParams p = params_for(d, layers, config.i_net);
    for (Scheme s : all_schemes()) {
      ComplexityRow row;
      row.scheme = std::string(scheme_name(s));
      row.n_tx = d.n_tx;
      row.n_rf = d.n_rf;
      row.n_streams = d.n_streams;
      row.k_subcarriers = d.n_subcarriers;
      row.layers = layers;
      row.i_net = config.i_net;
      row.op_count = complexity_estimate(s, p);
      if (s == Scheme::SubManNetSc) {
        row.layer_cost = submannet_layer_cost(p);
      } else if (s != Scheme::Dbf && s != Scheme::Omp) {
        row.layer_cost = mannet_layer_cost(p);
      }
      rows.push_back(std::move(row));
    }
  }
  write_complexity_csv(config.out_dir / "complexity.csv", rows);
  return rows;
}

void write_results_csv(const std::filesystem::path& path, const std::vector<ResultRow>& rows) {
  std::ostringstream out;
  out << kResultsSchema << '\n'
      << "scheme,n_tx,n_rf,n_streams,k_subcarriers,snr_db,se_mean,se_std,n_channels,op_count,"
         "wall_time_s\n";
  for (const auto& r : rows) {
    out << r.scheme << ',' << r.n_tx << ',' << r.n_rf << ',' << r.n_streams << ','
        << r.k_subcarriers << ',' << fmt(r.snr_db) << ',' << fmt(r.se_mean) << ','
        << fmt(r.se_std) << ',' << r.n_channels << ',' << fmt(r.op_count) << ','
        << fmt(r.wall_time_s) << '\n';
  }
  write_text(path, out.str());
}

void write_loss_csv(const std::filesystem::path& path, const std::vector<BatchLoss>& history) {
  std::ostringstream out;
  out << kLossSchema << '\n' << "epoch,batch,inner_iter,loss\n";
  for (const auto& r : history) {
    out << r.epoch << ',' << r.batch << ',' << r.inner_iters << ',' << fmt(r.loss) << '\n';
  }
  write_text(path, out.str());
}

void write_complexity_csv(const std::filesystem::path& path,
                          const std::vector<ComplexityRow>& rows) {
  std::ostringstream out;
  out << kComplexitySchema << '\n'
      << "scheme,n_tx,n_rf,n_streams,k_subcarriers,layers,i_net,op_count,layer_cost\n";
  for (const auto& r : rows) {
    out << r.scheme << ',' << r.n_tx << ',' << r.n_rf << ',' << r.n_streams << ','
        << r.k_subcarriers << ',' << r.layers << ',' << r.i_net << ',' << fmt(r.op_count) << ','
        << fmt(r.layer_cost) << '\n';
  }
  write_text(path, out.str());
}

}  // namespace hbf
