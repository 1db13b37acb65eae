// Copyright 2026 The rotcool Authors
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

#include "rotcool/sweep.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <deque>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "rotcool/error.hpp"

namespace rotcool {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

double to_double(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double x = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw ValidationError("'" + std::string(s) + "' is not a number");
  }
  if (!std::isfinite(x)) throw ValidationError("axis values must be finite");
  return x;
}

std::vector<std::string_view> split(std::string_view s) {
  std::vector<std::string_view> out;
  while (true) {
    const auto comma = s.find(',');
    out.push_back(trim(s.substr(0, comma)));
    if (comma == std::string_view::npos) return out;
    s.remove_prefix(comma + 1);
  }
}

// "a, b, c" or "linspace(start, stop, count)".
std::vector<double> parse_values(std::string_view text) {
  text = trim(text);
  if (text.empty()) throw ValidationError("axis needs at least one value");
  std::vector<double> values;
  constexpr std::string_view kLin = "linspace(";
  if (text.starts_with(kLin)) {
    if (text.back() != ')') throw ValidationError("linspace(...) is missing ')'");
    const auto args = split(text.substr(kLin.size(), text.size() - kLin.size() - 1));
    if (args.size() != 3) throw ValidationError("linspace takes start, stop, count");
    const double a = to_double(args[0]);
    const double b = to_double(args[1]);
    const double n = to_double(args[2]);
    if (n < 1 || n != std::floor(n) || n > 1e6) throw ValidationError("linspace count must be a positive integer");
    const auto count = static_cast<std::size_t>(n);
    for (std::size_t i = 0; i < count; ++i) {
      values.push_back(count == 1 ? a : a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1));
    }
    return values;
  }
  for (auto item : split(text)) values.push_back(to_double(item));
  return values;
}

void check_axis(const SweepAxis& axis, const char* name) {
  if (!is_numeric_field(axis.path)) {
    throw ValidationError(std::string(name) + ": '" + axis.path + "' is not a numeric parameter");
  }
  if (axis.values.empty()) throw ValidationError(std::string(name) + " has no values");
  for (double v : axis.values) {
    if (!std::isfinite(v)) throw ValidationError(std::string(name) + " values must be finite");
  }
}

std::string join(const std::vector<double>& values) {
  std::string s;
  for (double v : values) {
    if (!s.empty()) s += ", ";
    s += format_number(v);
  }
  return s;
}

// Per-worker deques: a worker takes from the front of its own deque and,
// once that is empty, steals from the back of another's.
class WorkPool {
 public:
  WorkPool(std::size_t tasks, unsigned workers) : queues_(workers) {
    for (std::size_t i = 0; i < tasks; ++i) queues_[i % workers].items.push_back(i);
  }

  std::optional<std::size_t> next(unsigned self) {
    if (auto i = take(queues_[self], true)) return i;
    for (std::size_t k = 1; k < queues_.size(); ++k) {
      if (auto i = take(queues_[(self + k) % queues_.size()], false)) return i;
    }
    return std::nullopt;
  }

 private:
  struct Queue {
    std::mutex mutex;
    std::deque<std::size_t> items;
  };

  static std::optional<std::size_t> take(Queue& q, bool front) {
    std::lock_guard lock(q.mutex);
    if (q.items.empty()) return std::nullopt;
    std::size_t i;
    if (front) {
      i = q.items.front();
      q.items.pop_front();
    } else {
      i = q.items.back();
      q.items.pop_back();
    }
    return i;
  }

  std::vector<Queue> queues_;
};

}  // namespace

std::size_t SweepPlan::size() const {
  return axis1.values.size() * (axis2 ? axis2->values.size() : 1);
}

RunConfig SweepPlan::point(std::size_t i) const {
  if (i >= size()) throw ValidationError("grid point out of range");
  const std::size_t n2 = axis2 ? axis2->values.size() : 1;
  RunConfig cfg = base;
  set_field(cfg, axis1.path, format_number(axis1.values[i / n2]));
  if (axis2) set_field(cfg, axis2->path, format_number(axis2->values[i % n2]));
  return cfg;
}

void SweepPlan::validate() const {
  check_axis(axis1, "axis1");
  if (axis2) check_axis(*axis2, "axis2");
  for (std::size_t i = 0; i < size(); ++i) {
    try {
      point(i).validate();
    } catch (const ValidationError& e) {
      const std::size_t n2 = axis2 ? axis2->values.size() : 1;
      std::string where = axis1.path + "=" + format_number(axis1.values[i / n2]);
      if (axis2) where += ", " + axis2->path + "=" + format_number(axis2->values[i % n2]);
      throw ValidationError("grid point (" + where + "): " + e.what());
    }
  }
}

std::vector<SweepRow> run_sweep(const SweepPlan& plan, unsigned workers, const std::atomic<bool>* cancel,
                                const SweepProgress& progress) {
  plan.validate();
  const std::size_t total = plan.size();
  const std::size_t n2 = plan.axis2 ? plan.axis2->values.size() : 1;

  std::vector<SweepRow> rows(total);
  for (std::size_t i = 0; i < total; ++i) {
    rows[i].axis1 = plan.axis1.values[i / n2];
    if (plan.axis2) rows[i].axis2 = plan.axis2->values[i % n2];
    rows[i].error = "interrupted";
  }

  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, total));

  WorkPool pool(total, workers);
  std::mutex progress_mutex;

  // Each task writes only its own row.
  const auto work = [&](unsigned self) {
    while (const auto task = pool.next(self)) {
      if (cancel && cancel->load()) break;
      SweepRow& row = rows[*task];
      try {
        const SimResult r = simulate(plan.point(*task), cancel);
        row.efficiency = r.efficiency;
        row.loss_u = r.loss_u;
        row.truncation_flag = r.truncation_flag;
        row.steps = r.step_count;
        row.wall_time = r.wall_time;
        row.error.clear();
      } catch (const std::exception& e) {
        row.error = e.what();
      }
      if (progress) {
        std::lock_guard lock(progress_mutex);
        progress(*task, row);
      }
    }
  };

  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::jthread> threads;
    threads.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) threads.emplace_back(work, w);
  }
  return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out = "axis1,axis2,efficiency,loss,flag\n";
  for (const auto& r : rows) {
    out += format_number(r.axis1) + ",";
    if (r.axis2) out += format_number(*r.axis2);
    out += ",";
    if (r.ok()) {
      out += format_number(r.efficiency) + "," + format_number(r.loss_u) + ",";
      out += r.truncation_flag ? "truncation" : "ok";
    } else {
      out += "nan,nan,error";
    }
    out += "\n";
  }
  return out;
}

SweepPlan parse_plan(std::string_view text, const std::string& source) {
  const auto tokens = tokenize_config(text, source);
  for (const auto& [name, line] : tokens.sections) {
    if (name != "run" && name != "system" && name != "pulses" && name != "integrator" && name != "initial" &&
        name != "sweep") {
      throw ConfigError(source, line, "unknown section [" + name + "]");
    }
  }

  SweepPlan plan;
  apply_config(plan.base, tokens, source);

  int sweep_line = 0;
  for (const auto& [name, line] : tokens.sections) {
    if (name == "sweep") sweep_line = line;
  }
  if (sweep_line == 0) throw ConfigError(source, 0, "a plan needs a [sweep] section");

  std::optional<std::string> path2;
  std::optional<std::vector<double>> values2;
  int line1 = sweep_line, line2 = sweep_line;
  bool have_path1 = false, have_values1 = false;
  for (const auto& e : tokens.entries) {
    if (e.section != "sweep") continue;
    try {
      if (e.key == "axis1") {
        plan.axis1.path = e.value;
        have_path1 = true;
        line1 = e.line;
        if (!is_numeric_field(e.value)) throw ValidationError("'" + e.value + "' is not a numeric parameter");
      } else if (e.key == "values1") {
        plan.axis1.values = parse_values(e.value);
        have_values1 = true;
      } else if (e.key == "axis2") {
        path2 = e.value;
        line2 = e.line;
        if (!is_numeric_field(e.value)) throw ValidationError("'" + e.value + "' is not a numeric parameter");
      } else if (e.key == "values2") {
        values2 = parse_values(e.value);
      } else {
        throw ValidationError("unknown key '" + e.key + "' in [sweep]");
      }
    } catch (const ConfigError&) {
      throw;
    } catch (const ValidationError& err) {
      throw ConfigError(source, e.line, err.what());
    }
  }
  if (!have_path1 || !have_values1) throw ConfigError(source, line1, "[sweep] needs axis1 and values1");
  if (path2.has_value() != values2.has_value()) {
    throw ConfigError(source, line2, "[sweep] axis2 and values2 must be given together");
  }
  if (path2) plan.axis2 = SweepAxis{*path2, *values2};

  try {
    plan.validate();
  } catch (const ValidationError& err) {
    throw ConfigError(source, sweep_line, err.what());
  }
  return plan;
}

SweepPlan load_plan(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read plan '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_plan(ss.str(), path);
}

std::string format_plan(const SweepPlan& plan) {
  std::string out = format_config(plan.base);
  out += "\n[sweep]\naxis1 = " + plan.axis1.path + "\nvalues1 = " + join(plan.axis1.values) + "\n";
  if (plan.axis2) out += "axis2 = " + plan.axis2->path + "\nvalues2 = " + join(plan.axis2->values) + "\n";
  return out;
}

}  // namespace rotcool
