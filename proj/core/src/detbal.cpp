#include "crn/detbal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include <Eigen/Dense>

#include "crn/error.hpp"

namespace crn {

namespace {

double monomial(const std::vector<double>& c, const Complex& y) {
  double v = 1.0;
  for (std::size_t i = 0; i < c.size(); ++i)
    for (int k = 0; k < y.coeffs[i]; ++k) v *= c[i];
  return v;
}

bool any_negative(const DetState& c) {
  return std::any_of(c.values.begin(), c.values.end(), [](double v) { return v < 0.0; });
}

void check_size(const MassActionSystem& sys, std::size_t n) {
  if (n != sys.network().num_species()) {
    throw Error(ErrorCode::InvalidArgument, "state length does not match species count");
  }
}

// Log-space comparison of two nonnegative products given as logs (-inf for
// an exact zero). Purely relative: the concentration factors of a cycle
// cancel, so the verdict must not depend on the scale of c.
bool log_products_close(double log_a, double log_b, double tol) {
  constexpr double ninf = -std::numeric_limits<double>::infinity();
  if (log_a == ninf && log_b == ninf) return true;
  double hi = std::max(log_a, log_b);
  double lo = std::min(log_a, log_b);
  return -std::expm1(lo - hi) <= tol;  // (a - b) / max(a, b), in [0, 1]
}

double safe_exp(double v) { return v == -std::numeric_limits<double>::infinity() ? 0.0 : std::exp(v); }

std::string cycle_label(const ReactionNetwork& net, const DirectedCycle& cyc) {
  std::string out = "cycle:";
  for (std::size_t i = 0; i < cyc.complexes.size(); ++i) {
    if (i) out += " > ";
    out += net.complex_string(cyc.complexes[i]);
  }
  return out;
}

std::string xi_label(const IntVector& xi) {
  std::string out = "xi:(";
  for (std::size_t i = 0; i < xi.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(xi[i]);
  }
  return out + ")";
}

}  // namespace

std::vector<double> det_rates(const MassActionSystem& sys, const DetState& c) {
  check_size(sys, c.size());
  const auto& net = sys.network();
  std::vector<double> rates(net.num_reactions(), 0.0);
  if (any_negative(c)) return rates;
  for (std::size_t r = 0; r < net.num_reactions(); ++r) {
    rates[r] = sys.kappa(r) * monomial(c.values, net.complexes()[net.reactions()[r].source]);
  }
  return rates;
}

std::vector<double> drift(const MassActionSystem& sys, const DetState& c) {
  const auto& net = sys.network();
  auto rates = det_rates(sys, c);
  std::vector<double> f(net.num_species(), 0.0);
  for (std::size_t r = 0; r < net.num_reactions(); ++r) {
    const auto& rx = net.reactions()[r];
    const auto& y = net.complexes()[rx.source].coeffs;
    const auto& yp = net.complexes()[rx.target].coeffs;
    for (std::size_t i = 0; i < f.size(); ++i) f[i] += (yp[i] - y[i]) * rates[r];
  }
  return f;
}

Verdict is_equilibrium(const MassActionSystem& sys, const DetState& c, double tol) {
  auto rates = det_rates(sys, c);
  auto f = drift(sys, c);
  double max_rate = rates.empty() ? 0.0 : *std::max_element(rates.begin(), rates.end());
  std::size_t worst = 0;
  double norm = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (std::abs(f[i]) > norm) {
      norm = std::abs(f[i]);
      worst = i;
    }
  }
  if (norm <= tol * (1.0 + max_rate)) return Verdict::holds();
  return Verdict::fails({c.values, "drift:" + sys.network().species().name(worst), f[worst], 0.0});
}

std::vector<ReactionVectorClass> reaction_vector_classes(const ReactionNetwork& net) {
  std::map<IntVector, ReactionVectorClass> by_xi;
  for (std::size_t r = 0; r < net.num_reactions(); ++r) {
    IntVector v = net.reaction_vector(r);
    auto first = std::find_if(v.begin(), v.end(), [](std::int64_t e) { return e != 0; });
    bool positive = first != v.end() && *first > 0;
    IntVector key = v;
    if (!positive)
      for (auto& e : key) e = -e;
    auto& cls = by_xi[key];
    cls.xi = key;
    (positive ? cls.forward : cls.backward).push_back(r);
  }
  std::vector<ReactionVectorClass> out;
  out.reserve(by_xi.size());
  for (auto& kv : by_xi) out.push_back(std::move(kv.second));
  return out;
}

BalanceStructure BalanceStructure::of(const ReactionNetwork& net, const CycleOptions& opts) {
  return {simple_cycles(net, opts), reaction_vector_classes(net)};
}

StateBalanceReport classify_state(const MassActionSystem& sys, const DetState& c, double tol) {
  return classify_state(sys, BalanceStructure::of(sys.network()), c, tol);
}

StateBalanceReport classify_state(const MassActionSystem& sys, const BalanceStructure& structure,
                                  const DetState& c, double tol) {
  const auto& net = sys.network();
  auto rates = det_rates(sys, c);
  StateBalanceReport rep;
  rep.rb = rep.cb = rep.rvb = rep.cyb = Verdict::holds();

  // (a) each unordered pair joined by at least one reaction
  for (std::size_t r = 0; r < net.num_reactions(); ++r) {
    const auto& rx = net.reactions()[r];
    auto back = net.find_reaction(rx.target, rx.source);
    if (back && rx.source > rx.target) continue;
    double lhs = rates[r];
    double rhs = back ? rates[*back] : 0.0;
    if (!balance_close(lhs, rhs, tol)) {
      rep.rb = Verdict::fails({c.values,
                               "pair:" + net.complex_string(rx.source) + " | " +
                                   net.complex_string(rx.target),
                               lhs, rhs});
      break;
    }
  }

  // (b) outflow equals inflow at every complex
  {
    std::vector<double> out(net.num_complexes(), 0.0), in(net.num_complexes(), 0.0);
    for (std::size_t r = 0; r < net.num_reactions(); ++r) {
      out[net.reactions()[r].source] += rates[r];
      in[net.reactions()[r].target] += rates[r];
    }
    for (std::size_t y = 0; y < net.num_complexes(); ++y) {
      if (!balance_close(out[y], in[y], tol)) {
        rep.cb = Verdict::fails({c.values, "complex:" + net.complex_string(y), out[y], in[y]});
        break;
      }
    }
  }

  // (c) per reaction-vector class; an empty side sums to 0
  for (const auto& cls : structure.rv_classes) {
    double lhs = 0.0, rhs = 0.0;
    for (auto r : cls.forward) lhs += rates[r];
    for (auto r : cls.backward) rhs += rates[r];
    if (!balance_close(lhs, rhs, tol)) {
      rep.rvb = Verdict::fails({c.values, xi_label(cls.xi), lhs, rhs});
      break;
    }
  }

  // (d) both orientations of every directed cycle
  constexpr double ninf = -std::numeric_limits<double>::infinity();
  for (const auto& cyc : structure.cycles) {
    const std::size_t j = cyc.complexes.size();
    double log_fwd = 0.0, log_bwd = 0.0;
    for (std::size_t i = 0; i < j; ++i) {
      std::size_t a = cyc.complexes[i];
      std::size_t b = cyc.complexes[(i + 1) % j];
      auto f = net.find_reaction(a, b);
      auto g = net.find_reaction(b, a);
      double rf = f ? rates[*f] : 0.0;
      double rg = g ? rates[*g] : 0.0;
      log_fwd = (log_fwd == ninf || rf == 0.0) ? ninf : log_fwd + std::log(rf);
      log_bwd = (log_bwd == ninf || rg == 0.0) ? ninf : log_bwd + std::log(rg);
    }
    if (!log_products_close(log_fwd, log_bwd, tol)) {
      rep.cyb = Verdict::fails({c.values, cycle_label(net, cyc), safe_exp(log_fwd), safe_exp(log_bwd)});
      break;
    }
  }

  rep.is_equilibrium = is_equilibrium(sys, c, tol);
  auto f = drift(sys, c);
  for (double v : f) rep.drift_norm = std::max(rep.drift_norm, std::abs(v));

  if (rep.rb.is_holds() && (!rep.cb.is_holds() || !rep.rvb.is_holds() || !rep.cyb.is_holds())) {
    throw Error(ErrorCode::InvariantViolation,
                "reaction balanced state failed a weaker balance condition");
  }
  return rep;
}

bool system_cycle_balanced(const MassActionSystem& sys, const CycleOptions& opts) {
  const auto& net = sys.network();
  for (const auto& cyc : simple_cycles(net, opts)) {
    const std::size_t j = cyc.complexes.size();
    double fwd = 0.0, bwd = 0.0;
    for (std::size_t i = 0; i < j; ++i) {
      std::size_t a = cyc.complexes[i];
      std::size_t b = cyc.complexes[(i + 1) % j];
      auto back = net.find_reaction(b, a);
      if (!back) return false;
      fwd += std::log(sys.kappa(*net.find_reaction(a, b)));
      bwd += std::log(sys.kappa(*back));
    }
    if (std::abs(fwd - bwd) > 1e-9) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Balanced-state solvers

std::optional<DetState> solve_reaction_balanced(const MassActionSystem& sys) {
  const auto& net = sys.network();
  if (!is_reversible(net)) {
    throw Error(ErrorCode::NotReversible, "reaction balance requires a reversible network");
  }
  const std::size_t n = net.num_species();
  if (net.empty()) return DetState{};

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t r = 0; r < net.num_reactions(); ++r) {
    const auto& rx = net.reactions()[r];
    if (rx.source < rx.target) pairs.emplace_back(r, *net.find_reaction(rx.target, rx.source));
  }
  Eigen::MatrixXd a(pairs.size(), n);
  Eigen::VectorXd b(pairs.size());
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    auto v = net.reaction_vector(pairs[p].first);
    for (std::size_t i = 0; i < n; ++i) a(p, i) = static_cast<double>(v[i]);
    b(p) = std::log(sys.kappa(pairs[p].first) / sys.kappa(pairs[p].second));
  }
  Eigen::VectorXd u = a.completeOrthogonalDecomposition().solve(b);
  if ((a * u - b).lpNorm<Eigen::Infinity>() > 1e-9) return std::nullopt;

  DetState c;
  for (std::size_t i = 0; i < n; ++i) c.values.push_back(std::exp(u(i)));
  if (!classify_state(sys, c).rb.is_holds()) return std::nullopt;
  return c;
}

std::optional<DetState> solve_complex_balanced(const MassActionSystem& sys) {
  const auto& net = sys.network();
  if (!is_weakly_reversible(net)) {
    throw Error(ErrorCode::NotWeaklyReversible, "complex balance requires weak reversibility");
  }
  const std::size_t n = net.num_species();
  const std::size_t m = net.num_complexes();
  if (net.empty()) return DetState{};
  auto part = linkage_classes(net);
  const std::size_t l = part.size();

  // Kernel of the transposed kappa-Laplacian on each linkage class.
  std::vector<double> log_k(m, 0.0);
  for (const auto& cls : part.classes) {
    const std::size_t k = cls.size();
    std::vector<std::size_t> local(m, 0);
    for (std::size_t i = 0; i < k; ++i) local[cls[i]] = i;
    Eigen::MatrixXd qt = Eigen::MatrixXd::Zero(k, k);
    for (std::size_t r = 0; r < net.num_reactions(); ++r) {
      const auto& rx = net.reactions()[r];
      if (part.class_of[rx.source] != part.class_of[cls.front()]) continue;
      std::size_t i = local[rx.source], j = local[rx.target];
      qt(j, i) += sys.kappa(r);
      qt(i, i) -= sys.kappa(r);
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(qt, Eigen::ComputeFullV);
    const auto& sigma = svd.singularValues();
    const double cutoff = 1e-10 * sigma(0);
    std::size_t nullity = 0;
    for (Eigen::Index i = 0; i < sigma.size(); ++i)
      if (sigma(i) <= cutoff) ++nullity;
    if (nullity != 1) {
      throw Error(ErrorCode::NumericalRankFailure,
                  "Laplacian kernel of a linkage class has dimension " + std::to_string(nullity));
    }
    Eigen::VectorXd kernel = svd.matrixV().col(static_cast<Eigen::Index>(k) - 1);
    if (kernel.sum() < 0) kernel = -kernel;
    const double top = kernel.maxCoeff();
    for (std::size_t i = 0; i < k; ++i) {
      if (!(kernel(i) > 1e-14 * top)) {
        throw Error(ErrorCode::NumericalRankFailure, "Laplacian kernel vector is not positive");
      }
      log_k[cls[i]] = std::log(kernel(i) / top);
    }
  }

  // y . log c - mu_class(y) = log K_y
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(m, n + l);
  Eigen::VectorXd b(m);
  for (std::size_t y = 0; y < m; ++y) {
    for (std::size_t i = 0; i < n; ++i) a(y, i) = net.complexes()[y].coeffs[i];
    a(y, n + part.class_of[y]) = -1.0;
    b(y) = log_k[y];
  }
  Eigen::VectorXd u = a.completeOrthogonalDecomposition().solve(b);
  if ((a * u - b).lpNorm<Eigen::Infinity>() > 1e-7) return std::nullopt;

  DetState c;
  for (std::size_t i = 0; i < n; ++i) c.values.push_back(std::exp(u(i)));
  if (!classify_state(sys, c).cb.is_holds()) return std::nullopt;
  return c;
}

std::vector<double> rvb_residuals(const MassActionSystem& sys,
                                  const std::vector<ReactionVectorClass>& classes,
                                  const DetState& c) {
  auto rates = det_rates(sys, c);
  std::vector<double> r;
  r.reserve(classes.size());
  for (const auto& cls : classes) {
    double f = 0.0, b = 0.0;
    for (auto k : cls.forward) f += rates[k];
    for (auto k : cls.backward) b += rates[k];
    r.push_back(f + b > 0.0 ? (f - b) / (f + b) : 0.0);
  }
  return r;
}

namespace {

// Radical-inverse (Halton) coordinate for index i in the given prime base.
double radical_inverse(std::size_t i, std::size_t base) {
  double inv = 1.0 / static_cast<double>(base);
  double f = inv, v = 0.0;
  while (i > 0) {
    v += f * static_cast<double>(i % base);
    i /= base;
    f *= inv;
  }
  return v;
}

std::size_t nth_prime(std::size_t k) {
  std::size_t count = 0;
  for (std::size_t p = 2;; ++p) {
    bool prime = true;
    for (std::size_t d = 2; d * d <= p; ++d)
      if (p % d == 0) {
        prime = false;
        break;
      }
    if (prime && count++ == k) return p;
  }
}

struct RvbProblem {
  const MassActionSystem& sys;
  const std::vector<ReactionVectorClass>& classes;

  // Residuals and Jacobian with respect to u = log c.
  void eval(const Eigen::VectorXd& u, Eigen::VectorXd& res, Eigen::MatrixXd& jac) const {
    const auto& net = sys.network();
    const std::size_t n = net.num_species();
    std::vector<double> rate(net.num_reactions());
    for (std::size_t r = 0; r < net.num_reactions(); ++r) {
      const auto& y = net.complexes()[net.reactions()[r].source].coeffs;
      double e = 0.0;
      for (std::size_t i = 0; i < n; ++i) e += y[i] * u(static_cast<Eigen::Index>(i));
      rate[r] = sys.kappa(r) * std::exp(e);
    }
    res.resize(static_cast<Eigen::Index>(classes.size()));
    jac.setZero(static_cast<Eigen::Index>(classes.size()), static_cast<Eigen::Index>(n));
    for (std::size_t k = 0; k < classes.size(); ++k) {
      double f = 0.0, b = 0.0;
      Eigen::VectorXd df = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
      Eigen::VectorXd db = df;
      auto accumulate = [&](std::size_t r, double& sum, Eigen::VectorXd& grad) {
        sum += rate[r];
        const auto& y = net.complexes()[net.reactions()[r].source].coeffs;
        for (std::size_t i = 0; i < n; ++i) grad(static_cast<Eigen::Index>(i)) += rate[r] * y[i];
      };
      for (auto r : classes[k].forward) accumulate(r, f, df);
      for (auto r : classes[k].backward) accumulate(r, b, db);
      const double d = f + b;
      const auto row = static_cast<Eigen::Index>(k);
      if (d <= 0.0) {
        res(row) = 0.0;
        continue;
      }
      res(row) = (f - b) / d;
      jac.row(row) = (((df - db) * d - (f - b) * (df + db)) / (d * d)).transpose();
    }
  }
};

}  // namespace

std::vector<DetState> solve_rvb(const MassActionSystem& sys, const RvbSearchOptions& opts) {
  const auto& net = sys.network();
  const std::size_t n = net.num_species();
  if (net.empty() || n == 0) return {};
  auto classes = reaction_vector_classes(net);
  auto structure = BalanceStructure::of(net);
  RvbProblem problem{sys, classes};

  const double lo = std::log(opts.lower), hi = std::log(opts.upper);
  std::vector<std::size_t> bases(n);
  for (std::size_t i = 0; i < n; ++i) bases[i] = nth_prime(i);

  std::vector<DetState> found;
  Eigen::VectorXd res, trial_res;
  Eigen::MatrixXd jac, trial_jac;
  for (std::size_t s = 1; s <= opts.starts; ++s) {
    Eigen::VectorXd u(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i)
      u(static_cast<Eigen::Index>(i)) = lo + (hi - lo) * radical_inverse(s, bases[i]);

    // Levenberg-Marquardt on the scaled residuals.
    double mu = 1e-3;
    problem.eval(u, res, jac);
    double cost = res.squaredNorm();
    bool ok = false;
    int polish = 0;
    for (std::size_t it = 0; it < opts.max_iter; ++it) {
      // Inside tolerance, a few more steps take the root to full precision.
      const double worst = res.lpNorm<Eigen::Infinity>();
      if (worst <= opts.residual_tol) {
        ok = true;
        if (worst <= 1e-15 || ++polish > 8) break;
      }
      Eigen::MatrixXd jtj = jac.transpose() * jac;
      Eigen::VectorXd g = jac.transpose() * res;
      bool improved = false;
      for (int tries = 0; tries < 30; ++tries) {
        Eigen::MatrixXd h = jtj;
        h.diagonal().array() += mu * (1.0 + jtj.diagonal().array());
        Eigen::VectorXd step = h.ldlt().solve(-g);
        Eigen::VectorXd trial = u + step;
        if (!trial.allFinite() || trial.cwiseAbs().maxCoeff() > 60.0) {
          mu *= 10.0;
          continue;
        }
        problem.eval(trial, trial_res, trial_jac);
        double trial_cost = trial_res.squaredNorm();
        if (trial_res.allFinite() && trial_cost < cost) {
          u = trial;
          res = trial_res;
          jac = trial_jac;
          cost = trial_cost;
          mu = std::max(mu * 0.1, 1e-15);
          improved = true;
          break;
        }
        mu *= 10.0;
      }
      if (!improved) break;
    }
    if (!ok && res.lpNorm<Eigen::Infinity>() <= opts.residual_tol) ok = true;
    if (!ok) continue;

    DetState c;
    for (std::size_t i = 0; i < n; ++i) c.values.push_back(std::exp(u(static_cast<Eigen::Index>(i))));
    if (!classify_state(sys, structure, c).rvb.is_holds()) continue;
    found.push_back(std::move(c));
  }

  std::sort(found.begin(), found.end(),
            [](const DetState& a, const DetState& b) { return a.values < b.values; });
  std::vector<DetState> out;
  for (auto& c : found) {
    bool dup = std::any_of(out.begin(), out.end(), [&](const DetState& d) {
      double dist = 0.0;
      for (std::size_t i = 0; i < n; ++i) dist += (c[i] - d[i]) * (c[i] - d[i]);
      return std::sqrt(dist) <= opts.dedup_distance;
    });
    if (!dup) out.push_back(std::move(c));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Integration and compatibility classes

std::vector<TrajectoryPoint> integrate(const MassActionSystem& sys, const DetState& c0,
                                       double t_end, double dt, std::size_t record_every) {
  if (!(dt > 0.0) || !(t_end >= 0.0) || !std::isfinite(t_end)) {
    throw Error(ErrorCode::InvalidArgument, "integrate requires dt > 0 and finite t_end >= 0");
  }
  check_size(sys, c0.size());
  if (record_every == 0) record_every = 1;
  std::vector<TrajectoryPoint> out{{0.0, c0}};
  if (t_end == 0.0) return out;

  const auto steps = static_cast<std::size_t>(std::ceil(t_end / dt - 1e-9));
  const double h = t_end / static_cast<double>(steps);
  const std::size_t n = c0.size();
  DetState z = c0, tmp;
  tmp.values.resize(n);
  auto axpy = [&](const std::vector<double>& k, double s) {
    for (std::size_t i = 0; i < n; ++i) tmp.values[i] = z.values[i] + s * k[i];
    return tmp;
  };
  for (std::size_t step = 1; step <= steps; ++step) {
    auto k1 = drift(sys, z);
    auto k2 = drift(sys, axpy(k1, h / 2));
    auto k3 = drift(sys, axpy(k2, h / 2));
    auto k4 = drift(sys, axpy(k3, h));
    for (std::size_t i = 0; i < n; ++i) {
      z.values[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
      if (!std::isfinite(z.values[i])) {
        throw Error(ErrorCode::NonFiniteState,
                    "trajectory diverged at t=" + std::to_string(h * static_cast<double>(step)));
      }
    }
    if (step % record_every == 0 || step == steps) {
      out.push_back({h * static_cast<double>(step), z});
    }
  }
  return out;
}

bool same_compatibility_class(const ReactionNetwork& net, const DetState& c1, const DetState& c2,
                              double tol) {
  for (const auto& w : stoichiometric_basis(net).conserved) {
    double d = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) d += static_cast<double>(w[i]) * (c1[i] - c2[i]);
    if (std::abs(d) > tol) return false;
  }
  return true;
}

}  // namespace crn
