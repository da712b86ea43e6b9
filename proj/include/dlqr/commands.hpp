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

#ifndef DLQR_COMMANDS_HPP_
#define DLQR_COMMANDS_HPP_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace dlqr {

// Options shared by every subcommand. Flags override the config file.
struct CommandOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  unsigned threads = 1;  // 0 = hardware concurrency
  std::optional<std::string> out_dir;
  bool strict = false;   // bound-not-applicable becomes exit code 3
  bool dry_run = false;  // print the plan, write nothing
  bool stamp = false;    // include a wall-clock timestamp in JSON reports
                         // (off by default: reports stay byte-reproducible)
  std::string which;     // selector for tables/figures
};

// Exit codes: 0 success, 1 config/validation error, 2 numerical failure,
// 3 bound not applicable (only under --strict).
int cmd_riccati(const CommandOptions& opts, std::ostream& out);
int cmd_evaluate(const CommandOptions& opts, std::ostream& out);
int cmd_modelfree(const CommandOptions& opts, std::ostream& out);
int cmd_perturb(const CommandOptions& opts, std::ostream& out);
int cmd_lqg(const CommandOptions& opts, std::ostream& out);
// which: table1 | table2 | table3 | all
int cmd_tables(const CommandOptions& opts, std::ostream& out);
// which: fig1 | fig2 | fig3 | fig4 | all
int cmd_figures(const CommandOptions& opts, std::ostream& out);

}  // namespace dlqr

#endif  // DLQR_COMMANDS_HPP_
