// Copyright 2026 The distlqr Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "dlqr/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"distributional policy evaluation for discounted LQR/LQG"};
  app.require_subcommand(1);

  dlqr::CommandOptions opts;
  std::uint64_t seed_value = 0;

  auto add_common = [&](CLI::App* sub, bool needs_config) {
    auto* cfg = sub->add_option("--config", opts.config_path, "scenario JSON file");
    if (needs_config) cfg->required();
    sub->add_option("--seed", seed_value, "master seed (overrides the config)")
        ->each([&](const std::string&) { opts.seed = seed_value; });
    sub->add_option("--threads", opts.threads, "worker cap, 0 = hardware")->capture_default_str();
    sub->add_option("--out", opts.out_dir, "output directory (overrides the config)");
    sub->add_flag("--strict", opts.strict, "inapplicable bounds become exit code 3");
    sub->add_flag("--dry-run", opts.dry_run, "print the plan without writing anything");
    sub->add_flag("--stamp", opts.stamp, "include a wall-clock timestamp in JSON reports");
  };

  auto* riccati = app.add_subcommand("riccati", "solve the discounted Riccati equation");
  add_common(riccati, true);
  auto* evaluate = app.add_subcommand("evaluate", "estimate the return distribution per config");
  add_common(evaluate, true);
  auto* modelfree = app.add_subcommand("modelfree", "trajectory-sampling evaluation");
  add_common(modelfree, true);
  auto* perturb = app.add_subcommand("perturb", "compare original vs perturbed distributions");
  add_common(perturb, true);
  auto* lqg = app.add_subcommand("lqg", "output-feedback (observer loop) evaluation");
  add_common(lqg, true);
  auto* tables = app.add_subcommand("tables", "recompute the reproduction tables");
  tables->add_option("which", opts.which, "table1 | table2 | table3 | all")
      ->default_val("all");
  add_common(tables, false);
  auto* figures = app.add_subcommand("figures", "emit figure data as CSV");
  figures->add_option("which", opts.which, "fig1 | fig2 | fig3 | fig4 | all")
      ->default_val("all");
  add_common(figures, false);

  CLI11_PARSE(app, argc, argv);

  if (riccati->parsed()) return dlqr::cmd_riccati(opts, std::cout);
  if (evaluate->parsed()) return dlqr::cmd_evaluate(opts, std::cout);
  if (modelfree->parsed()) return dlqr::cmd_modelfree(opts, std::cout);
  if (perturb->parsed()) return dlqr::cmd_perturb(opts, std::cout);
  if (lqg->parsed()) return dlqr::cmd_lqg(opts, std::cout);
  if (tables->parsed()) return dlqr::cmd_tables(opts, std::cout);
  if (figures->parsed()) return dlqr::cmd_figures(opts, std::cout);
  return 1;
}
