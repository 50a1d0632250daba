// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 when any
// criterion fails. Usage: acceptance [--threads N] [criterion ...]

#include <cstdio>
#include <cstdlib>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "levyenv/verify.hpp"

namespace {

using levyenv::RunConfig;
using levyenv::verify::McReport;
using levyenv::verify::acceptance_preset;

unsigned g_threads = 1;

RunConfig preset(const std::string& id) {
  RunConfig c = acceptance_preset(id);
  c.threads = g_threads;
  return c;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

bool check_named(const McReport& r, const std::string& name) {
  for (const auto& [n, ok] : r.checks) {
    if (n == name) return ok;
  }
  return false;
}

struct Line {
  int id;
  std::string title;
  bool pass;
  std::string detail;
};

std::vector<Line> g_lines;

void emit(int id, const std::string& title, bool pass, const std::string& detail) {
  g_lines.push_back({id, title, pass, detail});
  std::printf("[%s] criterion %d %s: %s\n", pass ? "PASS" : "FAIL", id, title.c_str(),
              detail.c_str());
  std::fflush(stdout);
}

std::string failures(const McReport& r) {
  return "aborted " + std::to_string(r.n_failures) + "/" + std::to_string(r.n_replications);
}

bool timed(const McReport& r, double limit_s, std::string& detail) {
  detail += ", runtime " + num(r.runtime_s) + " s";
  if (limit_s <= 0.0) return true;
  detail += " (limit " + num(limit_s) + " s)";
  return r.runtime_s < limit_s;
}

void criterion_1() {
  const McReport r = levyenv::verify::occupation_experiment(preset("occupation"));
  std::string d = "max |h sum L - t| / t = " + num(r.get("max_relative_error")) + " (< 1e-2), " +
                  failures(r);
  const bool in_time = timed(r, 300, d);
  emit(1, "occupation identity", r.pass && in_time, d);
}

void criterion_2() {
  const McReport r = levyenv::verify::brownian_experiment(preset("brownian"));
  std::string d = "KS p chain = " + num(r.get("p_value_chain")) +
                  ", brox = " + num(r.get("p_value_brox")) + " (> 0.01), " + failures(r);
  const bool in_time = timed(r, 120, d);
  emit(2, "Brownian null case", r.pass && in_time, d);
}

void criterion_3() {
  const McReport r = levyenv::verify::bessel_experiment(preset("bessel"));
  std::string d = "KS p direct = " + num(r.get("p_value_direct")) +
                  ", Tanaka = " + num(r.get("p_value_tanaka")) + " (> 0.01), " + failures(r);
  const bool in_time = timed(r, 120, d);
  emit(3, "Bessel(3) anchor", r.pass && in_time, d);
}

void criterion_4() {
  const McReport r = levyenv::verify::transforms_experiment(preset("transforms"));
  std::string d = "KS p at t = 0.5, 1, 2: " + num(r.get("p_value_t0.5")) + ", " +
                  num(r.get("p_value_t1")) + ", " + num(r.get("p_value_t2")) +
                  " (> 0.01 / 3), " + failures(r);
  const bool in_time = timed(r, 300, d);
  emit(4, "transform cross-validation", r.pass && in_time, d);
}

void criteria_5_6() {
  const McReport a = levyenv::verify::post_infimum_experiment(preset("post_infimum"));
  const McReport b = levyenv::verify::post_infimum_experiment(preset("post_infimum_weighted"));
  std::string d = "spectrally negative KS p = " + num(a.get("p_value")) + ", f1-weighted KS p = " +
                  num(b.get("p_value")) + " (> 0.01, n_eff " + num(b.get("n_eff")) +
                  ", weight mean " + num(b.get("weight_mean")) + "), " + failures(a) + " and " +
                  failures(b);
  McReport both = a;
  both.runtime_s = a.runtime_s + b.runtime_s;
  const bool in_time = timed(both, 600, d);
  emit(5, "post-infimum law", a.pass && b.pass && in_time, d);

  const McReport c = levyenv::verify::independence_experiment(preset("independence"));
  std::string e = "|corr(pre(1), post(1))| = " + num(c.get("abs_correlation")) + " (< 3/sqrt(N) = " +
                  num(c.get("bound")) + "), " + failures(c);
  timed(c, 0, e);
  emit(6, "independence of slopes", c.pass, e);
}

void criterion_7() {
  const McReport r = levyenv::verify::regeneration_experiment(preset("regeneration"));
  std::string d = "KS p = " + num(r.get("p_value")) + " (> 0.01), " + failures(r);
  timed(r, 0, d);
  emit(7, "regeneration at sigma_eps", r.pass, d);
}

void criterion_8() {
  const McReport r = levyenv::verify::scaling_experiment(preset("scaling"));
  std::string d = "KS p position = " + num(r.get("p_value_position")) + ", L* = " +
                  num(r.get("p_value_lstar")) + " (> 0.01 / 2), wrong exponent p = " +
                  num(r.get("p_value_wrong_exponent")) + " (< 0.01), " + failures(r);
  const bool in_time = timed(r, 600, d);
  emit(8, "scaling lemma", r.pass && in_time, d);
}

void criteria_9_10_11(const std::set<int>& want) {
  const auto reports = levyenv::verify::localization_experiments(preset("cvptfav"), preset("limsup"),
                                                                 preset("cvloi"));
  const McReport& fav = reports[0];
  const McReport& sup = reports[1];
  const McReport& loi = reports[2];
  const double abort_ok = 0.05;
  if (want.contains(9)) {
    std::string d = "coverage c = 4, 8, 12: " + num(fav.get("coverage_c4")) + ", " +
                    num(fav.get("coverage_c8")) + ", " + num(fav.get("coverage_c12")) +
                    " (non-decreasing, last >= 0.8), " + failures(fav);
    const bool in_time = timed(fav, 1800, d);
    emit(9, "favorite point localization", fav.pass && in_time, d);
  }
  if (want.contains(10)) {
    std::string d = "KS distance c = 4, 8, 12: " + num(sup.get("ks_distance_c4")) + ", " +
                    num(sup.get("ks_distance_c8")) + ", " + num(sup.get("ks_distance_c12")) +
                    " (strictly decreasing), p at c = 12: " + num(sup.get("p_value_c12")) +
                    " (> 0.01), " + failures(sup);
    const bool in_time = timed(sup, 2700, d);
    emit(10, "L*(t)/t limit", sup.pass && in_time, d);
  }
  if (want.contains(11)) {
    std::string d;
    for (const char* x : {"-1", "0", "1"}) {
      d += std::string(d.empty() ? "" : "; ") + "x = " + x + ": ";
      for (const char* c : {"4", "8", "12"}) {
        d += num(loi.get(std::string("ks_distance_x") + x + "_c" + c)) + (std::string(c) == "12" ? "" : ", ");
      }
      d += std::string(" (p at c = 12: ") + num(loi.get(std::string("p_value_x") + x + "_c12")) + ")";
    }
    d += " (non-increasing in c), " + failures(loi);
    const bool trend = check_named(loi, "distances_non_increasing") &&
                       loi.get("abort_rate") <= abort_ok;
    const bool in_time = timed(loi, 2700, d);
    emit(11, "local time profile limit", trend && in_time, d);
  }
}

void criterion_12() {
  const McReport r = levyenv::verify::laplace_experiment(preset("laplace"));
  std::string d = "max |ratio - 1| at c = 100: " + num(r.get("max_final_excess")) +
                  " (< 1e-6), monotone in c: " +
                  (check_named(r, "ratio_non_increasing_in_c") ? "yes" : "no") + ", " + failures(r);
  const bool in_time = timed(r, 60, d);
  emit(12, "Laplace lemma", r.pass && in_time, d);
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> want;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--threads" && i + 1 < argc) {
      g_threads = static_cast<unsigned>(std::stoul(argv[++i]));
    } else {
      want.insert(std::stoi(a));
    }
  }
  if (want.empty()) {
    for (int k = 1; k <= 12; ++k) want.insert(k);
  }
  try {
    if (want.contains(1)) criterion_1();
    if (want.contains(2)) criterion_2();
    if (want.contains(3)) criterion_3();
    if (want.contains(4)) criterion_4();
    if (want.contains(5) || want.contains(6)) criteria_5_6();
    if (want.contains(7)) criterion_7();
    if (want.contains(8)) criterion_8();
    if (want.contains(9) || want.contains(10) || want.contains(11)) criteria_9_10_11(want);
    if (want.contains(12)) criterion_12();
  } catch (const std::exception& e) {
    std::printf("[FAIL] acceptance aborted: %s\n", e.what());
    return 1;
  }
  int failed = 0;
  for (const auto& l : g_lines) failed += l.pass ? 0 : 1;
  std::printf("acceptance: %zu criteria run, %d failed\n", g_lines.size(), failed);
  return failed == 0 ? 0 : 1;
}
