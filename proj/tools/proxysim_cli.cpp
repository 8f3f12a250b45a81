/*
 * Copyright 2026 The proxysim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
// proxysim command-line front end. Talks to the engine only through the C API.

#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "proxysim/proxysim.h"

namespace {

int report_failure(const char* what, psim_status status) {
  std::fprintf(stderr, "%s failed: %s\n%s\n", what, psim_status_string(status), psim_last_error());
  return 1;
}

void print_and_free(char* text, std::FILE* stream) {
  if (text == nullptr) return;
  std::fputs(text, stream);
  psim_string_free(text);
}

int cmd_benchmark(const std::string& manifest_path, const std::string& out_dir) {
  psim_manifest* manifest = nullptr;
  psim_status st = psim_manifest_load(manifest_path.c_str(), &manifest);
  if (st != PSIM_OK) return report_failure("reading manifest", st);
  char* summary = nullptr;
  st = psim_benchmark(manifest, out_dir.c_str(), &summary);
  psim_manifest_destroy(manifest);
  print_and_free(summary, stdout);
  if (st != PSIM_OK) return report_failure("benchmark", st);
  return 0;
}

int cmd_validate(const std::string& a_path, const std::string& b_path, const std::string& out_dir) {
  psim_manifest* a = nullptr;
  psim_manifest* b = nullptr;
  psim_status st = psim_manifest_load(a_path.c_str(), &a);
  if (st != PSIM_OK) return report_failure("reading manifest A", st);
  st = psim_manifest_load(b_path.c_str(), &b);
  if (st != PSIM_OK) {
    psim_manifest_destroy(a);
    return report_failure("reading manifest B", st);
  }
  int compatible = 0;
  st = psim_validate(a, b, out_dir.c_str(), &compatible, nullptr);
  psim_manifest_destroy(a);
  psim_manifest_destroy(b);
  if (st != PSIM_OK) return report_failure("validate", st);
  std::printf("verdict: %s (details in %s/comparison.json)\n",
              compatible ? "compatible" : "incompatible", out_dir.c_str());
  return 0;
}

int cmd_pack(const std::string& csv_path, int bins, const std::string& out_path) {
  char* report = nullptr;
  const psim_status st = psim_pack(csv_path.c_str(), bins, out_path.c_str(), &report);
  if (st != PSIM_OK) return report_failure("pack", st);
  print_and_free(report, stdout);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"proxysim: multi-rank spiking network construction and simulation benchmarks"};
  app.require_subcommand(1);
  app.set_version_flag("--version", psim_version());

  std::string manifest;
  std::string out_dir;
  auto* bench = app.add_subcommand("benchmark", "Run every (seed, mode, level) of a manifest");
  bench->add_option("--manifest", manifest, "Run manifest (JSON)")->required();
  bench->add_option("--out", out_dir, "Output directory for reports")->required();

  std::string a_path;
  std::string b_path;
  std::string validate_out;
  auto* validate = app.add_subcommand("validate", "Compare spike statistics of two code paths");
  validate->add_option("--a", a_path, "Manifest of set A")->required();
  validate->add_option("--b", b_path, "Manifest of set B")->required();
  validate->add_option("--out", validate_out, "Output directory")->required();

  std::string csv_path;
  int bins = 0;
  std::string pack_out;
  auto* pack = app.add_subcommand("pack", "Distribute areas over ranks");
  pack->add_option("--areas", csv_path, "CSV with area_id,neurons,in_connections")->required();
  pack->add_option("--bins", bins, "Number of bins (ranks)")->required();
  pack->add_option("--out", pack_out, "Assignment JSON path")->required();

  CLI11_PARSE(app, argc, argv);

  if (bench->parsed()) return cmd_benchmark(manifest, out_dir);
  if (validate->parsed()) return cmd_validate(a_path, b_path, validate_out);
  if (pack->parsed()) return cmd_pack(csv_path, bins, pack_out);
  return 1;
}
