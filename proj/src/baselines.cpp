#include "vecgame/baselines.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cctype>
#include <cmath>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <thread>

namespace vecgame {

double hedge_eta(int k, double beta) {
  return std::sqrt(8.0 * std::log(static_cast<double>(k)) * (1.0 - beta * beta));
}

Vec hedge_distribution(const Vec& discounted_losses, double eta) {
  const double shift = discounted_losses.minCoeff();
  Vec w = (-eta * (discounted_losses.array() - shift)).exp();
  return w / w.sum();
}

double gps_xi(double beta) {
  if (beta <= 0.0 || beta >= 1.0) throw std::invalid_argument("gps_xi: beta must be in (0,1)");
  return (1.0 - std::sqrt(1.0 - beta * beta)) / beta;
}

Vec gps2_distribution(int gap, double beta) {
  if (gap < 0) throw std::invalid_argument("gps2_distribution: gap must be nonnegative");
  const double xi = gps_xi(beta);
  const double lag = 0.5 * std::pow(xi, gap);
  Vec p(2);
  p << 1.0 - lag, lag;
  return p;
}

Vec gps3_distribution(int d12, int d13, int d23, double beta) {
  if (d12 < 0 || d13 < 0 || d23 < 0)
    throw std::invalid_argument("gps3_distribution: gaps must be nonnegative");
  const double xi = gps_xi(beta);
  const double a = 0.5 * std::pow(xi, d12);
  const double c = std::pow(xi, d13 + d23) / 6.0;
  Vec p(3);
  p << 1.0 - a - c, a - c, 2.0 * c;
  if ((p.array() < -1e-12).any())
    throw NumericError("gps3_distribution: probabilities left [0,1]");
  return p.cwiseMax(0.0);
}

namespace {

// Rank expert indices by cumulative loss, ties by lower index.
template <std::size_t K>
std::array<int, K> rank_by_loss(const std::array<long, K>& cum) {
  std::array<int, K> order;
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return cum[a] < cum[b]; });
  return order;
}

class HedgeForecaster final : public Forecaster {
 public:
  HedgeForecaster(int experts, double beta, double eta)
      : experts_(experts), beta_(beta), eta_(eta) {}

  std::unique_ptr<Forecaster> clone() const override {
    return std::make_unique<HedgeForecaster>(*this);
  }
  void reset(Rng&) override { losses_ = Vec::Zero(experts_); }
  Vec distribution(int) override { return hedge_distribution(losses_, eta_); }
  void observe(const Vec& losses, int t, Rng&) override {
    losses_ += std::pow(beta_, t - 1) * losses;
  }

 private:
  int experts_;
  double beta_;
  double eta_;
  Vec losses_;
};

class Gps2Forecaster final : public Forecaster {
 public:
  explicit Gps2Forecaster(double beta) : beta_(beta) {}

  std::unique_ptr<Forecaster> clone() const override {
    return std::make_unique<Gps2Forecaster>(*this);
  }
  void reset(Rng&) override { cum_ = {0, 0}; }
  Vec distribution(int) override {
    const int leader = cum_[0] <= cum_[1] ? 0 : 1;
    const Vec ranked = gps2_distribution(static_cast<int>(std::labs(cum_[0] - cum_[1])), beta_);
    Vec p(2);
    p[leader] = ranked[0];
    p[1 - leader] = ranked[1];
    return p;
  }
  void observe(const Vec& losses, int, Rng&) override {
    cum_[0] += static_cast<long>(std::lround(losses[0]));
    cum_[1] += static_cast<long>(std::lround(losses[1]));
  }

 private:
  double beta_;
  std::array<long, 2> cum_{0, 0};
};

class Gps3Forecaster final : public Forecaster {
 public:
  explicit Gps3Forecaster(double beta) : beta_(beta) {}

  std::unique_ptr<Forecaster> clone() const override {
    return std::make_unique<Gps3Forecaster>(*this);
  }
  void reset(Rng&) override { cum_ = {0, 0, 0}; }
  Vec distribution(int) override {
    const auto order = rank_by_loss(cum_);
    const int d12 = static_cast<int>(cum_[order[1]] - cum_[order[0]]);
    const int d13 = static_cast<int>(cum_[order[2]] - cum_[order[0]]);
    const int d23 = static_cast<int>(cum_[order[2]] - cum_[order[1]]);
    const Vec ranked = gps3_distribution(d12, d13, d23, beta_);
    Vec p(3);
    for (int r = 0; r < 3; ++r) p[order[r]] = ranked[r];
    return p;
  }
  void observe(const Vec& losses, int, Rng&) override {
    for (int i = 0; i < 3; ++i) cum_[i] += static_cast<long>(std::lround(losses[i]));
  }

 private:
  double beta_;
  std::array<long, 3> cum_{0, 0, 0};
};

class AutomatonForecaster final : public Forecaster {
 public:
  AutomatonForecaster(const ModeStrategy& s, const ScalarGame& game,
                      std::vector<Transition> initial)
      : strategy_(&s), columns_(game.losses.transpose()), initial_(std::move(initial)) {
    if (game.m != s.m) throw std::invalid_argument("automaton forecaster: expert count mismatch");
    if (game.n != s.n) throw std::invalid_argument("automaton forecaster: outcome count mismatch");
    if (initial_.empty()) throw std::invalid_argument("automaton forecaster: empty initial modes");
  }

  std::unique_ptr<Forecaster> clone() const override {
    return std::make_unique<AutomatonForecaster>(*this);
  }
  void reset(Rng& rng) override {
    const double u = rng.next_double();
    double acc = 0.0;
    mode_ = initial_.back().mode;
    for (const auto& tr : initial_) {
      acc += tr.weight;
      if (u < acc) {
        mode_ = tr.mode;
        break;
      }
    }
  }
  Vec distribution(int) override { return strategy_->alpha.col(mode_); }
  void observe(const Vec& losses, int, Rng& rng) override {
    const double first = losses[0];
    if ((losses.array() == first).all()) return;  // constant outcome: hold the mode
    for (int b = 0; b < columns_.rows(); ++b) {
      if ((columns_.row(b).transpose() - losses).cwiseAbs().maxCoeff() < 1e-9) {
        mode_ = observe(*strategy_, mode_, b, rng);
        return;
      }
    }
    throw std::invalid_argument("automaton forecaster: loss vector matches no outcome column");
  }

 private:
  // vecgame::observe is shadowed by the member; pull it in explicitly.
  static int observe(const ModeStrategy& s, int mode, int b, Rng& rng) {
    return vecgame::observe(s, mode, b, rng);
  }

  const ModeStrategy* strategy_;
  Mat columns_;  // n x m: outcome rows over experts
  std::vector<Transition> initial_;
  int mode_ = 0;
};

}  // namespace

std::unique_ptr<Forecaster> make_hedge(int experts, double beta) {
  return std::make_unique<HedgeForecaster>(experts, beta, hedge_eta(experts, beta));
}

std::unique_ptr<Forecaster> make_hedge(int experts, double beta, double eta) {
  return std::make_unique<HedgeForecaster>(experts, beta, eta);
}

std::unique_ptr<Forecaster> make_gps(int experts, double beta) {
  if (experts == 2) return std::make_unique<Gps2Forecaster>(beta);
  if (experts == 3) return std::make_unique<Gps3Forecaster>(beta);
  throw std::invalid_argument("make_gps: only 2 or 3 experts supported");
}

std::unique_ptr<Forecaster> make_mode_strategy_forecaster(const ModeStrategy& s,
                                                          const ScalarGame& game,
                                                          std::vector<Transition> initial) {
  return std::make_unique<AutomatonForecaster>(s, game, std::move(initial));
}

// ---------------------------------------------------------------------------
// Adversaries.
// ---------------------------------------------------------------------------

double adversary_c_error_prob(int t) {
  if (t < 1) throw std::invalid_argument("adversary_c_error_prob: stages start at 1");
  return t % 2 == 1 ? std::pow(0.9, 1.0 / t) : std::pow(0.9, t);
}

AdversaryKind adversary_from_name(const std::string& name) {
  if (name.size() == 1) {
    const char c = static_cast<char>(std::toupper(name[0]));
    if (c >= 'A' && c <= 'F') return static_cast<AdversaryKind>(c - 'A');
  }
  throw std::invalid_argument("unknown adversary '" + name + "' (expected A-F)");
}

std::string adversary_name(AdversaryKind kind) {
  return std::string(1, static_cast<char>('A' + static_cast<int>(kind)));
}

namespace {

double bernoulli_gap_parameter(double beta, const char* who) {
  const double q = 0.5 - std::sqrt(1.0 - beta);
  if (q < 0.0)
    throw std::invalid_argument(std::string(who) +
                                " needs beta >= 0.75; 1/2 - sqrt(1-beta) is negative below that");
  return q;
}

class AdversaryA final : public Adversary {
 public:
  std::unique_ptr<Adversary> clone() const override { return std::make_unique<AdversaryA>(*this); }
  void reset() override {}
  int experts() const override { return 2; }
  Vec sample(int, Rng& rng) override {
    Vec v(2);
    if (rng.next_double() < 0.5) {
      v << 1, 0;
    } else {
      v << 0, 1;
    }
    return v;
  }
};

class AdversaryB final : public Adversary {
 public:
  explicit AdversaryB(double beta) : q1_(bernoulli_gap_parameter(beta, "adversary B")) {}
  std::unique_ptr<Adversary> clone() const override { return std::make_unique<AdversaryB>(*this); }
  void reset() override {}
  int experts() const override { return 2; }
  Vec sample(int, Rng& rng) override {
    Vec v(2);
    v << (rng.next_double() < q1_ ? 1.0 : 0.0), (rng.next_double() < 0.5 ? 1.0 : 0.0);
    return v;
  }

 private:
  double q1_;
};

class AdversaryC final : public Adversary {
 public:
  std::unique_ptr<Adversary> clone() const override { return std::make_unique<AdversaryC>(*this); }
  void reset() override {}
  int experts() const override { return 2; }
  Vec sample(int t, Rng& rng) override {
    Vec v(2);
    if (rng.next_double() < adversary_c_error_prob(t)) {
      v << 1, 0;
    } else {
      v << 0, 1;
    }
    return v;
  }
};

class AdversaryD final : public Adversary {
 public:
  std::unique_ptr<Adversary> clone() const override { return std::make_unique<AdversaryD>(*this); }
  void reset() override {}
  int experts() const override { return 3; }
  Vec sample(int, Rng& rng) override {
    static const double cols[6][3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1},
                                      {1, 1, 0}, {1, 0, 1}, {0, 1, 1}};
    const int c = static_cast<int>(rng.next_double() * 6.0);
    Vec v(3);
    v << cols[c][0], cols[c][1], cols[c][2];
    return v;
  }
};

class AdversaryE final : public Adversary {
 public:
  std::unique_ptr<Adversary> clone() const override { return std::make_unique<AdversaryE>(*this); }
  void reset() override { cum_ = {0, 0, 0}; }
  int experts() const override { return 3; }
  Vec sample(int, Rng& rng) override {
    const auto order = rank_by_loss(cum_);
    const long d12 = cum_[order[1]] - cum_[order[0]];
    const long d13 = cum_[order[2]] - cum_[order[0]];
    Vec v(3);
    if (d12 == 0 && d13 == 0) {
      const int spared = static_cast<int>(rng.next_double() * 3.0);
      v << 1, 1, 1;
      v[std::min(spared, 2)] = 0;
    } else if (rng.next_double() < 0.5) {
      v << 1, 1, 1;
      v[order[0]] = 0;  // leader spared
    } else {
      v << 0, 0, 0;
      v[order[0]] = 1;  // only the leader loses
    }
    for (int i = 0; i < 3; ++i) cum_[i] += static_cast<long>(std::lround(v[i]));
    return v;
  }

 private:
  std::array<long, 3> cum_{0, 0, 0};
};

class AdversaryF final : public Adversary {
 public:
  explicit AdversaryF(double beta) : q1_(bernoulli_gap_parameter(beta, "adversary F")) {}
  std::unique_ptr<Adversary> clone() const override { return std::make_unique<AdversaryF>(*this); }
  void reset() override {}
  int experts() const override { return 3; }
  Vec sample(int, Rng& rng) override {
    Vec v(3);
    v << (rng.next_double() < q1_ ? 1.0 : 0.0), (rng.next_double() < 0.5 ? 1.0 : 0.0),
        (rng.next_double() < 0.5 ? 1.0 : 0.0);
    return v;
  }

 private:
  double q1_;
};

}  // namespace

std::unique_ptr<Adversary> make_adversary(AdversaryKind kind, double beta) {
  switch (kind) {
    case AdversaryKind::A: return std::make_unique<AdversaryA>();
    case AdversaryKind::B: return std::make_unique<AdversaryB>(beta);
    case AdversaryKind::C: return std::make_unique<AdversaryC>();
    case AdversaryKind::D: return std::make_unique<AdversaryD>();
    case AdversaryKind::E: return std::make_unique<AdversaryE>();
    case AdversaryKind::F: return std::make_unique<AdversaryF>(beta);
  }
  throw std::invalid_argument("make_adversary: unknown kind");
}

RunStats simulate(const Forecaster& forecaster, const Adversary& adversary, double beta,
                  int horizon, int runs, std::uint64_t seed, int threads) {
  if (horizon < 1 || runs < 1) throw std::invalid_argument("simulate: need horizon, runs >= 1");
  RunStats stats;
  stats.runs = runs;
  stats.horizon = horizon;
  stats.per_run.assign(runs, 0.0);

  const int experts = adversary.experts();
  const int workers = std::max(1, std::min(threads, runs));
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&] {
    auto f = forecaster.clone();
    auto adv = adversary.clone();
    try {
      while (true) {
        const int run = next.fetch_add(1);
        if (run >= runs) return;
        Rng rng_adv(derive_seed(seed, run, 0));
        Rng rng_fore(derive_seed(seed, run, 1));
        adv->reset();
        f->reset(rng_fore);
        double player_loss = 0.0;
        Vec expert_loss = Vec::Zero(experts);
        double discount = 1.0;
        for (int t = 1; t <= horizon; ++t) {
          const Vec dist = f->distribution(t);
          const int a = rng_fore.sample(dist);
          const Vec losses = adv->sample(t, rng_adv);
          player_loss += discount * losses[a];
          expert_loss += discount * losses;
          f->observe(losses, t, rng_fore);
          discount *= beta;
        }
        stats.per_run[run] = player_loss - expert_loss.minCoeff();
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mutex);
      if (!error) error = std::current_exception();
      next.store(runs);
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);

  stats.mean = std::accumulate(stats.per_run.begin(), stats.per_run.end(), 0.0) / runs;
  double ss = 0.0;
  for (double r : stats.per_run) ss += (r - stats.mean) * (r - stats.mean);
  stats.std_error = runs > 1 ? std::sqrt(ss / (runs - 1)) / std::sqrt(static_cast<double>(runs)) : 0.0;
  stats.ci_half_width = 1.96 * stats.std_error;
  return stats;
}

}  // namespace vecgame
