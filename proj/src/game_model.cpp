#include "ipdx/game_model.hpp"

#include <cmath>
#include <map>
#include <sstream>
#include <tuple>

namespace ipdx {

const char* errc_name(Errc code) {
  switch (code) {
    case Errc::ordering_violation: return "OrderingViolation";
    case Errc::beta_out_of_range: return "BetaOutOfRange";
    case Errc::malformed_transition: return "MalformedTransition";
    case Errc::cycle_not_found: return "CycleNotFound";
    case Errc::dimension_mismatch: return "DimensionMismatch";
    case Errc::step_explosion: return "StepExplosion";
    case Errc::degenerate_denominator: return "DegenerateDenominator";
    case Errc::not_in_region_vi: return "NotInRegionVI";
    case Errc::singular_transform: return "SingularTransform";
    case Errc::on_separatrix: return "OnSeparatrix";
    case Errc::degenerate_exponent: return "DegenerateExponent";
    case Errc::unknown_signature: return "UnknownSignature";
    case Errc::bad_argument: return "BadArgument";
  }
  return "Error";
}

const char* to_string(ContextGame g) {
  switch (g) {
    case ContextGame::association: return "association";
    case ContextGame::dilemma: return "dilemma";
    case ContextGame::alone: return "alone";
  }
  return "?";
}

const char* to_string(Action a) {
  switch (a) {
    case Action::associate: return "associate";
    case Action::break_up: return "break_up";
    case Action::cooperate: return "cooperate";
    case Action::defect: return "defect";
    case Action::live_alone: return "live_alone";
  }
  return "?";
}

bool PdPayoffs::is_default() const {
  return t == 5.0 && r == 3.0 && p == 1.0 && s == 0.0;
}

void validate_params(const GameParams& p) {
  const auto& pd = p.pd;
  if (!(pd.t > pd.r && pd.r > pd.p && pd.p > pd.s && pd.s >= 0.0)) {
    std::ostringstream os;
    os << "need t > r > p > s >= 0, got t=" << pd.t << " r=" << pd.r << " p=" << pd.p
       << " s=" << pd.s;
    fail(Errc::ordering_violation, os.str());
  }
  if (!(p.beta >= 0.0 && p.beta < 1.0)) {
    fail(Errc::beta_out_of_range, "need 0 <= beta < 1, got beta=" + std::to_string(p.beta));
  }
  if (!std::isfinite(p.z)) {
    fail(Errc::bad_argument, "z must be finite");
  }
}

int StatePlay::action_index(Action a) const {
  for (std::size_t i = 0; i < actions.size(); ++i) {
    if (actions[i] == a) return static_cast<int>(i);
  }
  return -1;
}

StochasticGame StochasticGame::standard(const GameParams& p) {
  StochasticGame g;

  StatePlay& assoc = g.states[0];
  assoc.actions = {Action::associate, Action::break_up};
  assoc.payoffs.assign(4, {0.0, 0.0});
  assoc.transitions = {
      {0.0, 1.0, 0.0},  // (associate, associate) -> dilemma
      {0.0, 0.0, 1.0},  // (associate, break_up)  -> alone
      {0.0, 0.0, 1.0},  // (break_up, associate)  -> alone
      {0.0, 0.0, 1.0},  // (break_up, break_up)   -> alone
  };
  assoc.survival = 1.0;

  StatePlay& dilemma = g.states[1];
  dilemma.actions = {Action::cooperate, Action::defect};
  dilemma.payoffs = {
      {p.pd.r, p.pd.r},
      {p.pd.s, p.pd.t},
      {p.pd.t, p.pd.s},
      {p.pd.p, p.pd.p},
  };
  dilemma.transitions.assign(4, {1.0, 0.0, 0.0});  // always back to the association decision
  dilemma.survival = p.beta;

  StatePlay& alone = g.states[2];
  alone.actions = {Action::live_alone};
  alone.payoffs = {{p.z, p.z}};
  alone.transitions = {{0.0, 0.0, 1.0}};  // absorbing
  alone.survival = p.beta;

  return g;
}

const StochasticGame& validate_game(const StochasticGame& g, const GameParams& p) {
  validate_params(p);
  for (const StatePlay& st : g.states) {
    const std::size_t n = st.arity();
    if (st.payoffs.size() != n * n || st.transitions.size() != n * n) {
      fail(Errc::malformed_transition, "state tables do not match the action set size");
    }
    for (const auto& triple : st.transitions) {
      double sum = 0.0;
      for (double q : triple) {
        if (!(q >= 0.0)) fail(Errc::malformed_transition, "negative transition probability");
        sum += q;
      }
      if (std::abs(sum - 1.0) > 1e-12) {
        fail(Errc::malformed_transition,
             "transition triple sums to " + std::to_string(sum) + ", expected 1");
      }
    }
    if (!(st.survival >= 0.0 && st.survival <= 1.0)) {
      fail(Errc::malformed_transition, "survival probability outside [0, 1]");
    }
  }
  return g;
}

namespace {

StrategyAutomaton single_state(std::string name, Action association_move, Action dilemma_move) {
  StrategyAutomaton a;
  a.name = std::move(name);
  a.initial = 0;
  a.action = {{association_move, dilemma_move, Action::live_alone}};
  a.next.resize(1);
  for (auto& per_context : a.next[0]) per_context.fill(0);
  return a;
}

}  // namespace

StrategyAutomaton conditional_cooperator() {
  StrategyAutomaton a;
  a.name = "conditional";
  a.initial = 0;
  // state 0: willing partner; state 1: withdrawn for good
  a.action = {
      {Action::associate, Action::cooperate, Action::live_alone},
      {Action::break_up, Action::cooperate, Action::live_alone},
  };
  a.next.resize(2);
  for (auto& per_context : a.next[0]) per_context.fill(0);
  for (auto& per_context : a.next[1]) per_context.fill(1);
  // Withdraw after the opponent walks away or defects.
  a.next[0][0][static_cast<int>(Action::break_up)] = 1;
  a.next[0][1][static_cast<int>(Action::defect)] = 1;
  return a;
}

StrategyAutomaton defector() { return single_state("defector", Action::associate, Action::defect); }

StrategyAutomaton unconditional_cooperator() {
  return single_state("cooperator", Action::associate, Action::cooperate);
}

StrategyAutomaton loner(Action dilemma_move) {
  return single_state("loner", Action::break_up, dilemma_move);
}

std::vector<StrategyAutomaton> strategy_set(int count) {
  if (count == 3) return {conditional_cooperator(), defector(), loner()};
  if (count == 4) return {conditional_cooperator(), defector(), unconditional_cooperator(), loner()};
  fail(Errc::bad_argument, "strategy set size must be 3 or 4, got " + std::to_string(count));
}

namespace {

// Index of the single entry equal to 1 in a degenerate distribution, or -1.
int degenerate_target(const std::array<double, 3>& triple) {
  for (int i = 0; i < 3; ++i) {
    if (triple[i] == 1.0) return i;
  }
  return -1;
}

}  // namespace

PlaySequence play_sequence(const StrategyAutomaton& row, const StrategyAutomaton& col,
                           const StochasticGame& g) {
  // Joint configuration: (context, row internal state, col internal state).
  using Config = std::tuple<int, int, int>;
  std::map<Config, std::size_t> seen;
  std::vector<PlayStep> steps;

  int ctx = static_cast<int>(g.initial);
  int sr = row.initial;
  int sc = col.initial;

  const std::size_t bound =
      static_cast<std::size_t>(row.state_count()) * col.state_count() * kContextCount + 1;

  while (steps.size() <= bound) {
    const Config cfg{ctx, sr, sc};
    auto [it, fresh] = seen.emplace(cfg, steps.size());
    if (!fresh) {
      PlaySequence seq;
      seq.preperiod.assign(steps.begin(), steps.begin() + it->second);
      seq.cycle.assign(steps.begin() + it->second, steps.end());
      return seq;
    }

    const StatePlay& st = g.states[ctx];
    const Action ra = row.action[sr][ctx];
    const Action ca = col.action[sc][ctx];
    const int ri = st.action_index(ra);
    const int ci = st.action_index(ca);
    if (ri < 0 || ci < 0) {
      fail(Errc::cycle_not_found, std::string("automaton chose unavailable action '") +
                                      to_string(ri < 0 ? ra : ca) + "' in state " +
                                      to_string(static_cast<ContextGame>(ctx)));
    }
    const std::size_t cell = static_cast<std::size_t>(ri) * st.arity() + ci;
    const auto [pr, pc] = st.payoffs[cell];
    steps.push_back({static_cast<ContextGame>(ctx), ra, ca, pr, pc, st.survival});

    const int target = degenerate_target(st.transitions[cell]);
    if (target < 0) {
      fail(Errc::cycle_not_found, "transition distribution is not deterministic");
    }
    sr = row.next[sr][ctx][static_cast<int>(ca)];
    sc = col.next[sc][ctx][static_cast<int>(ra)];
    if (sr < 0 || sr >= row.state_count() || sc < 0 || sc >= col.state_count()) {
      fail(Errc::cycle_not_found, "automaton update left its state set");
    }
    ctx = target;
  }
  fail(Errc::cycle_not_found, "no repeated configuration within the pigeonhole bound");
}

std::pair<double, double> lifetime_payoff(const PlaySequence& seq, const GameParams& p) {
  if (!(p.beta < 1.0)) {
    fail(Errc::beta_out_of_range, "lifetime payoffs diverge at beta = 1");
  }
  if (seq.cycle.empty()) {
    fail(Errc::cycle_not_found, "play sequence has an empty cycle");
  }

  double row_total = 0.0;
  double col_total = 0.0;
  double weight = 1.0;  // probability of reaching the current round
  for (const PlayStep& step : seq.preperiod) {
    row_total += weight * step.row_payoff;
    col_total += weight * step.col_payoff;
    weight *= step.survival;
  }

  double cycle_row = 0.0;
  double cycle_col = 0.0;
  double within = 1.0;
  for (const PlayStep& step : seq.cycle) {
    cycle_row += within * step.row_payoff;
    cycle_col += within * step.col_payoff;
    within *= step.survival;
  }
  // `within` is now the survival probability across one full cycle pass; the
  // passes form a geometric series.  Every cycle of the standard game visits
  // the dilemma or the alone state, so `within` <= beta < 1; a hand-built
  // game can violate that.
  if (!(within < 1.0)) {
    fail(Errc::beta_out_of_range, "cycle survival probability is 1; lifetime payoffs diverge");
  }
  const double series = 1.0 / (1.0 - within);
  row_total += weight * cycle_row * series;
  col_total += weight * cycle_col * series;
  return {row_total, col_total};
}

PayoffMatrix compile_payoff_matrix(std::span<const StrategyAutomaton> strategies,
                                   const GameParams& p) {
  const StochasticGame game = StochasticGame::standard(p);
  validate_game(game, p);

  PayoffMatrix m;
  for (const auto& s : strategies) m.strategies.push_back(s.name);
  const std::size_t n = strategies.size();
  m.entries.assign(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const PlaySequence seq = play_sequence(strategies[i], strategies[j], game);
      m.at(i, j) = lifetime_payoff(seq, p).first;
    }
  }
  return m;
}

PayoffMatrix compile_payoff_matrix(int strategy_count, const GameParams& p) {
  const auto set = strategy_set(strategy_count);
  return compile_payoff_matrix(set, p);
}

PayoffMatrix closed_form_matrix3(const GameParams& p) {
  validate_params(p);
  const double g = p.gamma();
  const double z = p.z;
  const auto& pd = p.pd;
  PayoffMatrix m;
  m.strategies = {"conditional", "defector", "loner"};
  m.entries = {
      pd.r / g, (pd.s * g + p.beta * z) / g, z / g,
      (pd.t * g + p.beta * z) / g, pd.p / g, z / g,
      z / g, z / g, z / g,
  };
  return m;
}

PayoffMatrix closed_form_matrix4(const GameParams& p) {
  validate_params(p);
  const double g = p.gamma();
  const double z = p.z;
  const auto& pd = p.pd;
  PayoffMatrix m;
  m.strategies = {"conditional", "defector", "cooperator", "loner"};
  m.entries = {
      pd.r / g, (pd.s * g + p.beta * z) / g, pd.r / g, z / g,
      (pd.t * g + p.beta * z) / g, pd.p / g, pd.t / g, z / g,
      pd.r / g, pd.s / g, pd.r / g, z / g,
      z / g, z / g, z / g, z / g,
  };
  return m;
}

}  // namespace ipdx
