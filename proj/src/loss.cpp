// Copyright 2026 the ccdp authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "loss.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "json.hpp"

namespace ccdp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Absorbs float noise in pointwise curve comparisons.
constexpr double kCurveTol = 1e-12;

using nlohmann::json;

json number_or_inf(double v) {
  if (std::isinf(v)) return json("inf");
  return json(v);
}

double parse_number_or_inf(const json& j) {
  if (j.is_string() && j.get<std::string>() == "inf") return kInf;
  return j.get<double>();
}

}  // namespace

double TradeoffFunction::eval(double alpha) const {
  if (breakpoints.empty()) return 0.0;
  if (alpha <= breakpoints.front().first) return breakpoints.front().second;
  if (alpha >= breakpoints.back().first) return breakpoints.back().second;
  for (std::size_t i = 1; i < breakpoints.size(); ++i) {
    const auto& [x0, y0] = breakpoints[i - 1];
    const auto& [x1, y1] = breakpoints[i];
    if (alpha <= x1) {
      if (x1 == x0) return std::min(y0, y1);
      double t = (alpha - x0) / (x1 - x0);
      return y0 + t * (y1 - y0);
    }
  }
  return breakpoints.back().second;
}

void TradeoffFunction::validate() const {
  if (breakpoints.empty()) {
    throw InvalidParameterError("tradeoff function has no breakpoints");
  }
  double prev_x = -kCurveTol;
  double prev_y = 2.0;
  double prev_slope = -kInf;
  for (std::size_t i = 0; i < breakpoints.size(); ++i) {
    const auto& [x, y] = breakpoints[i];
    if (x < prev_x - kCurveTol || x > 1.0 + kCurveTol || y < -kCurveTol ||
        y > 1.0 - x + 1e-9) {
      throw InvalidParameterError("tradeoff breakpoint outside domain");
    }
    if (y > prev_y + kCurveTol) {
      throw InvalidParameterError("tradeoff function must be non-increasing");
    }
    if (i > 0 && x > prev_x + kCurveTol) {
      double slope = (y - prev_y) / (x - prev_x);
      if (slope < prev_slope - 1e-9) {
        throw InvalidParameterError("tradeoff function must be convex");
      }
      prev_slope = slope;
    }
    prev_x = x;
    prev_y = y;
  }
}

LossTag loss_tag(const LossValue& v) {
  return static_cast<LossTag>(v.index());
}

const char* loss_tag_name(LossTag t) {
  switch (t) {
    case LossTag::kApproxDP:
      return "approx";
    case LossTag::kRenyi:
      return "renyi";
    case LossTag::kZcdp:
      return "zcdp";
    case LossTag::kTradeoff:
      return "tradeoff";
  }
  return "unknown";
}

LossValue loss_zero_like(const LossValue& v) {
  switch (loss_tag(v)) {
    case LossTag::kApproxDP:
      return ApproxDP{0.0, 0.0};
    case LossTag::kRenyi:
      return Renyi{std::get<Renyi>(v).alpha, 0.0};
    case LossTag::kZcdp:
      return Zcdp{0.0};
    case LossTag::kTradeoff:
      return Tradeoff{fdp_curve(0.0, 0.0)};
  }
  throw InvalidParameterError("bad loss tag");
}

LossValue loss_infinity_like(const LossValue& v) {
  switch (loss_tag(v)) {
    case LossTag::kApproxDP:
      return ApproxDP{kInf, kInf};
    case LossTag::kRenyi:
      return Renyi{std::get<Renyi>(v).alpha, kInf};
    case LossTag::kZcdp:
      return Zcdp{kInf};
    case LossTag::kTradeoff:
      // Fully revealing: zero curve.
      return Tradeoff{TradeoffFunction{{{0.0, 0.0}, {1.0, 0.0}}}};
  }
  throw InvalidParameterError("bad loss tag");
}

bool loss_is_finite(const LossValue& v) {
  switch (loss_tag(v)) {
    case LossTag::kApproxDP: {
      const auto& a = std::get<ApproxDP>(v);
      return std::isfinite(a.eps) && std::isfinite(a.del);
    }
    case LossTag::kRenyi:
      return std::isfinite(std::get<Renyi>(v).eps);
    case LossTag::kZcdp:
      return std::isfinite(std::get<Zcdp>(v).rho);
    case LossTag::kTradeoff:
      return true;
  }
  return false;
}

bool loss_leq(const LossValue& a, const LossValue& b) {
  if (loss_tag(a) != loss_tag(b)) {
    throw IncomparableTagsError(std::string("cannot compare ") +
                                loss_tag_name(loss_tag(a)) + " with " +
                                loss_tag_name(loss_tag(b)));
  }
  switch (loss_tag(a)) {
    case LossTag::kApproxDP: {
      const auto& x = std::get<ApproxDP>(a);
      const auto& y = std::get<ApproxDP>(b);
      return x.eps <= y.eps && x.del <= y.del;
    }
    case LossTag::kRenyi: {
      const auto& x = std::get<Renyi>(a);
      const auto& y = std::get<Renyi>(b);
      if (x.alpha != y.alpha) {
        throw IncomparableTagsError("renyi values at different alpha");
      }
      return x.eps <= y.eps;
    }
    case LossTag::kZcdp:
      return std::get<Zcdp>(a).rho <= std::get<Zcdp>(b).rho;
    case LossTag::kTradeoff: {
      // f_a <= f_b in the loss order iff f_a(x) >= f_b(x) for all x; both
      // sides piecewise-linear, so the union of breakpoints is exact.
      const auto& fa = std::get<Tradeoff>(a).f;
      const auto& fb = std::get<Tradeoff>(b).f;
      std::set<double> xs{0.0, 1.0};
      for (const auto& [x, y] : fa.breakpoints) xs.insert(x);
      for (const auto& [x, y] : fb.breakpoints) xs.insert(x);
      for (double x : xs) {
        if (fa.eval(x) < fb.eval(x) - kCurveTol) return false;
      }
      return true;
    }
  }
  throw InvalidParameterError("bad loss tag");
}

TradeoffFunction fdp_curve(double eps, double del) {
  if (eps < 0.0 || del < 0.0 || del > 1.0) {
    throw InvalidParameterError("fdp_curve: eps < 0 or del outside [0,1]");
  }
  double e = std::exp(eps);
  // The two linear pieces 1 - del - e^eps * x and e^-eps * (1 - del - x)
  // cross at x = (1 - del) / (e^eps + 1); the curve hits zero at 1 - del.
  double cross = (1.0 - del) / (e + 1.0);
  TradeoffFunction f;
  f.breakpoints = {{0.0, 1.0 - del},
                   {cross, (1.0 - del) / (e + 1.0)},
                   {1.0 - del, 0.0},
                   {1.0, 0.0}};
  return f;
}

std::string loss_to_json(const LossValue& v) {
  json j;
  switch (loss_tag(v)) {
    case LossTag::kApproxDP: {
      const auto& a = std::get<ApproxDP>(v);
      j = {{"approx", {{"eps", number_or_inf(a.eps)}, {"del", number_or_inf(a.del)}}}};
      break;
    }
    case LossTag::kRenyi: {
      const auto& r = std::get<Renyi>(v);
      j = {{"renyi", {{"alpha", r.alpha}, {"eps", number_or_inf(r.eps)}}}};
      break;
    }
    case LossTag::kZcdp:
      j = {{"zcdp", {{"rho", number_or_inf(std::get<Zcdp>(v).rho)}}}};
      break;
    case LossTag::kTradeoff: {
      json pts = json::array();
      for (const auto& [x, y] : std::get<Tradeoff>(v).f.breakpoints) {
        pts.push_back({x, y});
      }
      j = {{"tradeoff", {{"pts", pts}}}};
      break;
    }
  }
  return j.dump();
}

LossValue loss_from_json(const std::string& text) {
  json j = json::parse(text);
  if (j.contains("approx")) {
    return ApproxDP{parse_number_or_inf(j["approx"]["eps"]),
                    parse_number_or_inf(j["approx"]["del"])};
  }
  if (j.contains("renyi")) {
    double alpha = j["renyi"]["alpha"].get<double>();
    if (alpha <= 1.0) throw InvalidParameterError("renyi alpha must be > 1");
    return Renyi{alpha, parse_number_or_inf(j["renyi"]["eps"])};
  }
  if (j.contains("zcdp")) {
    return Zcdp{parse_number_or_inf(j["zcdp"]["rho"])};
  }
  if (j.contains("tradeoff")) {
    TradeoffFunction f;
    for (const auto& p : j["tradeoff"]["pts"]) {
      f.breakpoints.emplace_back(p[0].get<double>(), p[1].get<double>());
    }
    f.validate();
    return Tradeoff{f};
  }
  throw InvalidParameterError("unknown loss value encoding: " + text);
}

}  // namespace ccdp
