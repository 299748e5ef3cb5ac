#ifndef IPDX_GAME_MODEL_HPP
#define IPDX_GAME_MODEL_HPP

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ipdx/errors.hpp"

namespace ipdx {

// One-shot prisoner's dilemma payoffs.  Valid instances satisfy t > r > p > s >= 0.
struct PdPayoffs {
  double t = 5.0;  // temptation (defect against a cooperator)
  double r = 3.0;  // reward (mutual cooperation)
  double p = 1.0;  // punishment (mutual defection)
  double s = 0.0;  // sucker (cooperate against a defector)

  bool is_default() const;
};

struct GameParams {
  PdPayoffs pd;
  double z = 2.5;     // per-period payoff while living alone
  double beta = 0.75; // probability of surviving to the next round

  double gamma() const { return 1.0 - beta; }
};

// Throws on any violated parameter invariant.
void validate_params(const GameParams& p);

// The three interaction contexts.  Play always begins with the association
// decision; the dilemma is only reached by mutual consent; the alone state
// is absorbing.
enum class ContextGame : int { association = 0, dilemma = 1, alone = 2 };

enum class Action : int { associate = 0, break_up = 1, cooperate = 2, defect = 3, live_alone = 4 };

constexpr int kContextCount = 3;
constexpr int kActionCount = 5;

const char* to_string(ContextGame g);
const char* to_string(Action a);

// Per-state stage game: a symmetric action set, payoff pairs (row, col) and a
// transition distribution over the three contexts for every action pair.
struct StatePlay {
  std::vector<Action> actions;
  std::vector<std::pair<double, double>> payoffs;      // actions.size()^2, row-major
  std::vector<std::array<double, 3>> transitions;      // actions.size()^2, row-major
  double survival = 1.0;

  std::size_t arity() const { return actions.size(); }
  int action_index(Action a) const;  // -1 if the action is not available here
};

struct StochasticGame {
  std::array<StatePlay, kContextCount> states;
  ContextGame initial = ContextGame::association;

  // The three-context game: no payoff for the association decision, the
  // dilemma pays (t,r,p,s), living alone pays z forever.  Mutual consent
  // leads to the dilemma, any break-up leads (permanently) to living alone,
  // and the dilemma always returns to the association decision.
  static StochasticGame standard(const GameParams& p);
};

// Checks parameter invariants and that every transition triple is a
// probability distribution.  Returns the game unchanged on success.
const StochasticGame& validate_game(const StochasticGame& g, const GameParams& p);

// Deterministic finite-state behaviour rule.  `action` picks the move for
// each (internal state, context); `next` maps (internal state, context,
// opponent move) to the successor internal state.  Both tables are total.
struct StrategyAutomaton {
  std::string name;
  int initial = 0;
  std::vector<std::array<Action, kContextCount>> action;
  std::vector<std::array<std::array<int, kActionCount>, kContextCount>> next;

  int state_count() const { return static_cast<int>(action.size()); }
};

// Cooperates conditionally: associates and cooperates until the opponent
// defects or walks away, then breaks up for good.
StrategyAutomaton conditional_cooperator();
// Associates and then always defects.
StrategyAutomaton defector();
// Associates and cooperates no matter what.
StrategyAutomaton unconditional_cooperator();
// Breaks up immediately.  The dilemma move is unreachable in standard play;
// it is a constructor knob so tests can show payoffs do not depend on it.
StrategyAutomaton loner(Action dilemma_move = Action::cooperate);

// The canonical 3-strategy (conditional, defector, loner) or 4-strategy
// (conditional, defector, cooperator, loner) sets.
std::vector<StrategyAutomaton> strategy_set(int count);

struct PlayStep {
  ContextGame state;
  Action row_move;
  Action col_move;
  double row_payoff;
  double col_payoff;
  double survival;
};

// Joint play of two automata unrolled until the (context, state, state)
// triple repeats: a finite preperiod followed by a forever-repeating cycle.
struct PlaySequence {
  std::vector<PlayStep> preperiod;
  std::vector<PlayStep> cycle;
};

PlaySequence play_sequence(const StrategyAutomaton& row, const StrategyAutomaton& col,
                           const StochasticGame& g);

// Expected lifetime payoffs (row, col): sum of per-round payoffs weighted by
// the probability of reaching each round.  Closed form: preperiod sum plus a
// geometric series over the cycle.
std::pair<double, double> lifetime_payoff(const PlaySequence& seq, const GameParams& p);

struct PayoffMatrix {
  std::vector<std::string> strategies;
  std::vector<double> entries;  // n*n, row-major

  std::size_t size() const { return strategies.size(); }
  double at(std::size_t i, std::size_t j) const { return entries[i * size() + j]; }
  double& at(std::size_t i, std::size_t j) { return entries[i * size() + j]; }
};

// entry (i,j) = lifetime payoff of strategy i against strategy j.
PayoffMatrix compile_payoff_matrix(std::span<const StrategyAutomaton> strategies,
                                   const GameParams& p);
PayoffMatrix compile_payoff_matrix(int strategy_count, const GameParams& p);

// Closed forms of the repeated-game payoff matrices for the canonical sets.
PayoffMatrix closed_form_matrix3(const GameParams& p);
PayoffMatrix closed_form_matrix4(const GameParams& p);

}  // namespace ipdx

#endif  // IPDX_GAME_MODEL_HPP
