#include "lp_core.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rcsn::milp::detail {

namespace {
constexpr double kPivotTol = 1e-9;
constexpr double kDualTol = 1e-9;
constexpr double kStepTol = 1e-10;
constexpr int kDegenStreakLimit = 60;
constexpr double kFeasCheck = 1e-6;
} // namespace

LpData build_lp_data(const Model &model, const std::vector<Row> &extra_rows) {
  LpData d;
  d.n = model.var_count();
  d.m = model.row_count() + static_cast<int>(extra_rows.size());
  d.cols.assign(d.n, {});
  d.obj = model.objective;
  d.rhs.reserve(d.m);
  d.sense.reserve(d.m);
  int r = 0;
  auto add = [&](const Row &row) {
    for (auto [v, c] : row.coeffs)
      if (c != 0.0) d.cols[v].push_back({r, c});
    d.rhs.push_back(row.rhs);
    d.sense.push_back(row.sense);
    ++r;
  };
  for (const Row &row : model.rows) add(row);
  for (const Row &row : extra_rows) add(row);
  return d;
}

void SimplexSolver::set_data(const LpData *data) {
  d_ = data;
  warm_ready_ = false;
}

double SimplexSolver::col_entry_sum(int j, const std::vector<double> &vec) const {
  if (j < n_) {
    double s = 0.0;
    for (auto [r, v] : d_->cols[j]) s += v * vec[r];
    return s;
  }
  if (j < n_ + m_) return vec[j - n_];
  return art_sign_[j - n_ - m_] * vec[art_row_[j - n_ - m_]];
}

void SimplexSolver::compute_w(int j) {
  std::fill(w_.begin(), w_.end(), 0.0);
  if (j < n_) {
    for (auto [r, v] : d_->cols[j])
      for (int i = 0; i < m_; ++i) w_[i] += v * binv_[i * m_ + r];
  } else if (j < n_ + m_) {
    int r = j - n_;
    for (int i = 0; i < m_; ++i) w_[i] = binv_[i * m_ + r];
  } else {
    int r = art_row_[j - n_ - m_];
    double s = art_sign_[j - n_ - m_];
    for (int i = 0; i < m_; ++i) w_[i] = s * binv_[i * m_ + r];
  }
}

double SimplexSolver::nb_value(int j) const {
  if (state_[j] == 1) return up_[j];
  return std::isfinite(lo_[j]) ? lo_[j] : 0.0;
}

double SimplexSolver::value_of(int j) const {
  if (state_[j] == 2) {
    for (int i = 0; i < m_; ++i)
      if (basic_[i] == j) return xb_[i];
    throw std::logic_error("basic var without row");
  }
  return nb_value(j);
}

void SimplexSolver::recompute_xb() {
  std::vector<double> t = d_->rhs;
  for (int j = 0; j < total_; ++j) {
    if (state_[j] == 2) continue;
    double v = nb_value(j);
    if (v == 0.0) continue;
    if (j < n_) {
      for (auto [r, c] : d_->cols[j]) t[r] -= c * v;
    } else if (j < n_ + m_) {
      t[j - n_] -= v;
    } else {
      t[art_row_[j - n_ - m_]] -= art_sign_[j - n_ - m_] * v;
    }
  }
  for (int i = 0; i < m_; ++i) {
    double s = 0.0;
    for (int r = 0; r < m_; ++r) s += binv_[i * m_ + r] * t[r];
    xb_[i] = s;
  }
}

bool SimplexSolver::refactor() {
  // Gauss-Jordan inversion of the basis matrix with partial pivoting.
  std::vector<double> b(m_ * m_, 0.0);
  for (int i = 0; i < m_; ++i) {
    int j = basic_[i];
    if (j < n_) {
      for (auto [r, v] : d_->cols[j]) b[r * m_ + i] = v;
    } else if (j < n_ + m_) {
      b[(j - n_) * m_ + i] = 1.0;
    } else {
      b[art_row_[j - n_ - m_] * m_ + i] = art_sign_[j - n_ - m_];
    }
  }
  std::vector<double> inv(m_ * m_, 0.0);
  for (int i = 0; i < m_; ++i) inv[i * m_ + i] = 1.0;
  for (int col = 0; col < m_; ++col) {
    int piv = -1;
    double best = kPivotTol;
    for (int r = col; r < m_; ++r) {
      double v = std::fabs(b[r * m_ + col]);
      if (v > best) {
        best = v;
        piv = r;
      }
    }
    if (piv < 0) return false;
    if (piv != col) {
      for (int c = 0; c < m_; ++c) {
        std::swap(b[piv * m_ + c], b[col * m_ + c]);
        std::swap(inv[piv * m_ + c], inv[col * m_ + c]);
      }
    }
    double p = b[col * m_ + col];
    for (int c = 0; c < m_; ++c) {
      b[col * m_ + c] /= p;
      inv[col * m_ + c] /= p;
    }
    for (int r = 0; r < m_; ++r) {
      if (r == col) continue;
      double f = b[r * m_ + col];
      if (f == 0.0) continue;
      for (int c = 0; c < m_; ++c) {
        b[r * m_ + c] -= f * b[col * m_ + c];
        inv[r * m_ + c] -= f * inv[col * m_ + c];
      }
    }
  }
  binv_ = std::move(inv);
  recompute_xb();
  return true;
}

double SimplexSolver::primal_row_violation() const {
  std::vector<double> act(m_, 0.0);
  for (int j = 0; j < total_; ++j) {
    double v = value_of(j);
    if (v == 0.0) continue;
    if (j < n_) {
      for (auto [r, c] : d_->cols[j]) act[r] += c * v;
    } else if (j < n_ + m_) {
      act[j - n_] += v;
    } else {
      act[art_row_[j - n_ - m_]] += art_sign_[j - n_ - m_] * v;
    }
  }
  double worst = 0.0;
  for (int r = 0; r < m_; ++r) worst = std::max(worst, std::fabs(act[r] - d_->rhs[r]));
  return worst;
}

void SimplexSolver::check_duality() const {
  std::vector<double> y(m_, 0.0);
  for (int i = 0; i < m_; ++i) {
    double cb = cost_[basic_[i]];
    if (cb == 0.0) continue;
    for (int r = 0; r < m_; ++r) y[r] += cb * binv_[i * m_ + r];
  }
  double dual = 0.0;
  for (int r = 0; r < m_; ++r) dual += y[r] * d_->rhs[r];
  double primal = 0.0;
  for (int j = 0; j < total_; ++j) {
    double v = value_of(j);
    if (cost_[j] != 0.0) primal += cost_[j] * v;
    if (state_[j] == 2) continue;
    double red = cost_[j] - col_entry_sum(j, y);
    dual += red * v;
  }
  if (std::fabs(primal - dual) > kFeasCheck * (1.0 + std::fabs(primal)))
    throw std::logic_error("weak duality violated on simplex exit");
}

// Dual simplex pivots restoring primal feasibility of the current basis after
// bound changes. The leaving variable is the most violated basic one; the
// entering column is picked by the dual ratio test so reduced-cost signs
// survive the pivot. Requires the dual feasible basis an optimal previous
// solve leaves behind. Throws on stall; Infeasible means a dual ray.
LpStatus SimplexSolver::dual_repair(int &iters) {
  cost_.assign(total_, 0.0);
  for (int j = 0; j < n_; ++j) cost_[j] = d_->obj[j];
  const int limit = 300 + m_;
  for (int round = 0; round < limit; ++round) {
    if (round % 32 == 31) recompute_xb();
    int leave_row = -1;
    double worst = 1e-7;
    bool over = false;
    for (int i = 0; i < m_; ++i) {
      int bj = basic_[i];
      double below = lo_[bj] - xb_[i];
      double above = xb_[i] - up_[bj];
      double v = std::max(below, above);
      if (v > worst) {
        worst = v;
        leave_row = i;
        over = above >= below;
      }
    }
    if (leave_row < 0) return LpStatus::Optimal;
    ++iters;

    for (int i = 0; i < m_; ++i) y_[i] = 0.0;
    for (int i = 0; i < m_; ++i) {
      double cb = cost_[basic_[i]];
      if (cb == 0.0) continue;
      for (int r = 0; r < m_; ++r) y_[r] += cb * binv_[i * m_ + r];
    }
    const double *brow = &binv_[static_cast<std::size_t>(leave_row) * m_];
    int enter = -1;
    double best_ratio = 0.0;
    double enter_alpha = 0.0;
    for (int j = 0; j < total_; ++j) {
      if (state_[j] == 2) continue;
      if (up_[j] - lo_[j] <= kPivotTol && std::isfinite(lo_[j])) continue;
      if (state_[j] == 0 && !std::isfinite(lo_[j])) continue;
      double alpha;
      if (j < n_) {
        alpha = 0.0;
        for (auto [r, v] : d_->cols[j]) alpha += v * brow[r];
      } else if (j < n_ + m_) {
        alpha = brow[j - n_];
      } else {
        alpha = art_sign_[j - n_ - m_] * brow[art_row_[j - n_ - m_]];
      }
      if (std::fabs(alpha) <= kPivotTol) continue;
      bool ok = over ? (state_[j] == 0 ? alpha > 0 : alpha < 0)
                     : (state_[j] == 0 ? alpha < 0 : alpha > 0);
      if (!ok) continue;
      double red = cost_[j] - col_entry_sum(j, y_);
      double ratio = std::fabs(red) / std::fabs(alpha);
      if (enter < 0 || ratio < best_ratio - 1e-12 ||
          (ratio < best_ratio + 1e-12 && j < enter)) {
        enter = j;
        best_ratio = ratio;
        enter_alpha = alpha;
      }
    }
    if (enter < 0) return LpStatus::Infeasible; // no column can mend the row

    int bj = basic_[leave_row];
    double target = over ? up_[bj] : lo_[bj];
    double delta = (xb_[leave_row] - target) / enter_alpha;
    double width = up_[enter] - lo_[enter];
    compute_w(enter);
    if (std::isfinite(width) && std::fabs(delta) > width + 1e-12) {
      // entering hits its own far bound first: flip it and retry the row
      double flipped = state_[enter] == 0 ? width : -width;
      for (int i = 0; i < m_; ++i) xb_[i] -= flipped * w_[i];
      state_[enter] = state_[enter] == 0 ? 1 : 0;
      continue;
    }
    double piv = w_[leave_row];
    if (std::fabs(piv) < kPivotTol) throw std::runtime_error("unstable dual pivot");
    double enter_val = nb_value(enter) + delta;
    for (int i = 0; i < m_; ++i) xb_[i] -= delta * w_[i];
    state_[bj] = over ? 1 : 0;
    basic_[leave_row] = enter;
    state_[enter] = 2;
    xb_[leave_row] = enter_val;
    double *pr = &binv_[static_cast<std::size_t>(leave_row) * m_];
    for (int i = 0; i < m_; ++i) {
      if (i == leave_row) continue;
      double f = w_[i] / piv;
      if (f == 0.0) continue;
      double *ri = &binv_[static_cast<std::size_t>(i) * m_];
      for (int r = 0; r < m_; ++r) ri[r] -= f * pr[r];
    }
    for (int r = 0; r < m_; ++r) pr[r] /= piv;
  }
  throw std::runtime_error("dual repair stalled");
}

LpStatus SimplexSolver::run_phase(bool phase1, int &iters) {
  const int iter_limit = 5000 + 60 * (m_ + n_);
  int degen_streak = 0;
  bool bland = false;
  int refactors = 0;

  for (;; ++iters) {
    if (iters > iter_limit) throw std::runtime_error("simplex iteration limit");
    if (iters % 64 == 63) recompute_xb();

    // y = c_B * Binv, then price nonbasic columns
    for (int i = 0; i < m_; ++i) y_[i] = 0.0;
    for (int i = 0; i < m_; ++i) {
      double cb = cost_[basic_[i]];
      if (cb == 0.0) continue;
      for (int r = 0; r < m_; ++r) y_[r] += cb * binv_[i * m_ + r];
    }

    int enter = -1;
    double enter_score = kDualTol;
    int enter_dir = 0;
    for (int j = 0; j < total_; ++j) {
      if (state_[j] == 2) continue;
      if (up_[j] - lo_[j] <= kPivotTol && std::isfinite(lo_[j])) continue; // fixed
      double red = cost_[j] - col_entry_sum(j, y_);
      int dir = 0;
      if (state_[j] == 0 && std::isfinite(lo_[j])) {
        if (red < -kDualTol) dir = +1;
      } else if (state_[j] == 1) {
        if (red > kDualTol) dir = -1;
      } else { // free at zero
        if (red < -kDualTol) dir = +1;
        else if (red > kDualTol) dir = -1;
      }
      if (dir == 0) continue;
      if (bland) {
        enter = j;
        enter_dir = dir;
        break;
      }
      if (std::fabs(red) > enter_score) {
        enter_score = std::fabs(red);
        enter = j;
        enter_dir = dir;
      }
    }
    if (enter < 0) return LpStatus::Optimal;

    compute_w(enter);
    const double sigma = enter_dir;

    double t_bound = (std::isfinite(lo_[enter]) && std::isfinite(up_[enter]))
                         ? up_[enter] - lo_[enter]
                         : std::numeric_limits<double>::infinity();
    double t_best = t_bound;
    int leave_row = -1;
    int leave_state = 0;
    for (int i = 0; i < m_; ++i) {
      double rate = sigma * w_[i];
      if (std::fabs(rate) <= kPivotTol) continue;
      int bj = basic_[i];
      double ti;
      int hit;
      if (rate > 0) {
        if (!std::isfinite(lo_[bj])) continue;
        ti = (xb_[i] - lo_[bj]) / rate;
        hit = 0;
      } else {
        if (!std::isfinite(up_[bj])) continue;
        ti = (up_[bj] - xb_[i]) / (-rate);
        hit = 1;
      }
      if (ti < 0) ti = 0;
      if (ti < t_best - 1e-9 ||
          (ti < t_best + 1e-9 && leave_row >= 0 && basic_[i] < basic_[leave_row])) {
        t_best = std::min(ti, t_best);
        leave_row = i;
        leave_state = hit;
      }
    }

    if (leave_row < 0 && !std::isfinite(t_bound)) {
      if (phase1) throw std::logic_error("phase-1 objective unbounded");
      return LpStatus::Unbounded;
    }

    double step;
    bool flip;
    if (leave_row < 0 || t_bound <= t_best + 1e-12) {
      step = t_bound;
      flip = true;
    } else {
      step = t_best;
      flip = false;
    }

    if (step <= kStepTol) {
      if (++degen_streak >= kDegenStreakLimit) bland = true;
    } else {
      degen_streak = 0;
      bland = false;
    }

    for (int i = 0; i < m_; ++i) xb_[i] -= sigma * step * w_[i];
    if (flip) {
      state_[enter] = state_[enter] == 0 ? 1 : 0;
      continue;
    }

    double piv = w_[leave_row];
    if (std::fabs(piv) < kPivotTol) { // ratio test filters these; pure safety
      if (refactors++ > 3) throw std::runtime_error("unstable pivot");
      refactor();
      continue;
    }
    double enter_val = nb_value(enter) + sigma * step;
    int leaving = basic_[leave_row];
    state_[leaving] = static_cast<unsigned char>(leave_state);
    basic_[leave_row] = enter;
    state_[enter] = 2;
    xb_[leave_row] = enter_val;

    double *pr = &binv_[leave_row * m_];
    for (int i = 0; i < m_; ++i) {
      if (i == leave_row) continue;
      double f = w_[i] / piv;
      if (f == 0.0) continue;
      double *ri = &binv_[i * m_];
      for (int r = 0; r < m_; ++r) ri[r] -= f * pr[r];
    }
    for (int r = 0; r < m_; ++r) pr[r] /= piv;
  }
}

LpResult SimplexSolver::finish_phase2(int iters) {
  LpResult out;
  cost_.assign(total_, 0.0);
  for (int j = 0; j < n_; ++j) cost_[j] = d_->obj[j];
  LpStatus st = run_phase(false, iters);
  out.iterations = iters;
  if (st == LpStatus::Unbounded) {
    out.status = st;
    return out;
  }

  if (primal_row_violation() > kFeasCheck) {
    if (!refactor()) throw std::runtime_error("singular basis on refactor");
    st = run_phase(false, iters);
    out.iterations = iters;
    if (st == LpStatus::Unbounded) {
      out.status = st;
      return out;
    }
    if (primal_row_violation() > kFeasCheck)
      throw std::runtime_error("simplex numerical failure");
  }
  check_duality();

  out.status = LpStatus::Optimal;
  out.x.resize(n_);
  for (int j = 0; j < n_; ++j) {
    out.x[j] = value_of(j);
    out.obj += d_->obj[j] * out.x[j];
  }
  return out;
}

LpResult SimplexSolver::solve(const std::vector<double> &lb, const std::vector<double> &ub,
                              bool warm) {
  if (warm && warm_ready_ && n_ == d_->n && m_ == d_->m && m_ > 0) {
    try {
      LpResult out;
      bool box_ok = true;
      for (int j = 0; j < n_; ++j) {
        lo_[j] = lb[j];
        up_[j] = ub[j];
        if (lo_[j] > up_[j] + 1e-12) box_ok = false;
      }
      if (!box_ok) {
        warm_ready_ = false;
        out.status = LpStatus::Infeasible;
        return out;
      }
      recompute_xb();
      int iters = 0;
      if (dual_repair(iters) == LpStatus::Optimal) {
        out = finish_phase2(iters);
        warm_ready_ = out.status == LpStatus::Optimal;
        return out;
      }
      // a dual ray claims infeasibility; fall through so the cold path confirms
    } catch (const std::exception &) {
      // numerical trouble on the warm path; the cold solve decides
    }
    warm_ready_ = false;
  }

  n_ = d_->n;
  m_ = d_->m;
  warm_ready_ = false;
  LpResult out;

  if (m_ == 0) { // pure box problem
    out.status = LpStatus::Optimal;
    out.x.resize(n_);
    for (int j = 0; j < n_; ++j) {
      double c = d_->obj[j];
      if (c > 0) out.x[j] = lb[j];
      else if (c < 0) out.x[j] = ub[j];
      else out.x[j] = std::isfinite(lb[j]) ? lb[j] : 0.0;
      if (!std::isfinite(out.x[j])) {
        out.status = LpStatus::Unbounded;
        return out;
      }
      out.obj += c * out.x[j];
    }
    return out;
  }

  lo_.assign(lb.begin(), lb.end());
  up_.assign(ub.begin(), ub.end());
  lo_.resize(n_ + m_);
  up_.resize(n_ + m_);
  for (int r = 0; r < m_; ++r) {
    switch (d_->sense[r]) {
      case RowSense::LE:
        lo_[n_ + r] = 0.0;
        up_[n_ + r] = std::numeric_limits<double>::infinity();
        break;
      case RowSense::GE:
        lo_[n_ + r] = -std::numeric_limits<double>::infinity();
        up_[n_ + r] = 0.0;
        break;
      case RowSense::EQ:
        lo_[n_ + r] = 0.0;
        up_[n_ + r] = 0.0;
        break;
    }
  }
  for (int j = 0; j < n_; ++j)
    if (lo_[j] > up_[j] + 1e-12) {
      out.status = LpStatus::Infeasible;
      return out;
    }

  state_.assign(n_ + m_, 0);
  for (int j = 0; j < n_ + m_; ++j) {
    if (!std::isfinite(lo_[j]) && std::isfinite(up_[j])) state_[j] = 1;
  }

  // residuals decide which rows need an artificial column
  std::vector<double> resid = d_->rhs;
  for (int j = 0; j < n_; ++j) {
    double v = nb_value(j);
    if (v == 0.0) continue;
    for (auto [r, c] : d_->cols[j]) resid[r] -= c * v;
  }

  art_row_.clear();
  art_sign_.clear();
  basic_.assign(m_, -1);
  std::vector<int> art_of_row(m_, -1);
  for (int r = 0; r < m_; ++r) {
    if (resid[r] >= lo_[n_ + r] - 1e-12 && resid[r] <= up_[n_ + r] + 1e-12) {
      basic_[r] = n_ + r;
      state_[n_ + r] = 2;
    } else {
      double clamp = std::clamp(resid[r], lo_[n_ + r], up_[n_ + r]);
      state_[n_ + r] = clamp == up_[n_ + r] && std::isfinite(up_[n_ + r]) &&
                               !(clamp == lo_[n_ + r])
                           ? 1
                           : 0;
      if (!std::isfinite(lo_[n_ + r])) state_[n_ + r] = 1; // at upper bound 0
      art_of_row[r] = static_cast<int>(art_row_.size());
      art_row_.push_back(r);
      art_sign_.push_back(resid[r] - clamp > 0 ? 1.0 : -1.0);
    }
  }
  total_ = n_ + m_ + static_cast<int>(art_row_.size());
  lo_.resize(total_, 0.0);
  up_.resize(total_, std::numeric_limits<double>::infinity());
  state_.resize(total_, 0);

  binv_.assign(static_cast<std::size_t>(m_) * m_, 0.0);
  for (int r = 0; r < m_; ++r) {
    if (basic_[r] >= 0) {
      binv_[r * m_ + r] = 1.0;
      continue;
    }
    int a = art_of_row[r];
    basic_[r] = n_ + m_ + a;
    state_[n_ + m_ + a] = 2;
    binv_[r * m_ + r] = art_sign_[a]; // inverse of a +-1 diagonal entry
  }

  xb_.assign(m_, 0.0);
  w_.assign(m_, 0.0);
  y_.assign(m_, 0.0);
  recompute_xb();

  int iters = 0;
  if (!art_row_.empty()) {
    cost_.assign(total_, 0.0);
    for (int a = 0; a < static_cast<int>(art_row_.size()); ++a) cost_[n_ + m_ + a] = 1.0;
    run_phase(true, iters);
    double infeas = 0.0;
    for (int j = n_ + m_; j < total_; ++j) infeas += value_of(j);
    if (infeas > 1e-7) {
      out.status = LpStatus::Infeasible;
      out.iterations = iters;
      return out;
    }
    for (int j = n_ + m_; j < total_; ++j) up_[j] = 0.0;
  }

  out = finish_phase2(iters);
  warm_ready_ = out.status == LpStatus::Optimal;
  return out;
}

} // namespace rcsn::milp::detail
