#pragma once

#include <array>
#include <vector>

#include "skylease/errors.hpp"
#include "skylease/rng.hpp"

namespace skylease {

// Movement actions within a region. Down increases the row.
enum class Action : int { Up = 0, Down = 1, Left = 2, Right = 3, Stay = 4 };
inline constexpr int kNumActions = 5;

// A region viewed as a standalone gridworld: width x height cells, local
// index = row * width + col.
struct RegionShape {
    int width = 0;
    int height = 0;

    int cells() const { return width * height; }
};

struct LearningParams {
    double alpha = 0.1;    // learning rate, (0, 1]
    double gamma = 0.3;    // discount, [0, 1)
    double epsilon = 0.1;  // exploration probability, [0, 1]
    double beta1 = 1.0;    // moved and improved
    double beta2 = 0.25;   // stayed
    double beta3 = -0.04;  // moved and did not improve

    // Throws ValidationError when a range or the beta ordering is violated.
    void validate() const;
    double max_abs_beta() const;
    // Sup bound on any reachable Q entry: max|beta| / (1 - gamma).
    double q_bound() const { return max_abs_beta() / (1.0 - gamma); }
};

// Dense state x action value table for one region, zero-initialized.
class QTable {
public:
    QTable() = default;
    explicit QTable(int states) : states_(states), v_(states * kNumActions, 0.0) {}

    int states() const { return states_; }
    double at(int s, int a) const { return v_[s * kNumActions + a]; }
    double& at(int s, int a) { return v_[s * kNumActions + a]; }
    const std::vector<double>& values() const { return v_; }
    std::vector<double>& values() { return v_; }

private:
    int states_ = 0;
    std::vector<double> v_;
};

struct AgentState {
    int cell = 0;            // local region cell
    double energy = 0.0;     // joules
    double last_rate = 0.0;  // bits/s/Hz from the previous transmission
    bool alive = true;
};

// Actions that keep the UAV inside its region; Stay is always legal.
std::array<Action, kNumActions> legal_actions(const RegionShape& shape, int cell,
                                              int* count);

// Deterministic successor of (cell, action). Throws ContractViolation for an
// action that would exit the region.
int step_transition(const RegionShape& shape, int cell, Action a);

// Three-case reward: beta1 for an improving move, beta2 for staying, beta3
// for a move that did not improve the rate. Rates compare with relative
// tolerance 1e-9.
double reward(bool moved, double rate_now, double rate_prev, const LearningParams& p);

// Epsilon-greedy draw. Consumes one value for the explore coin plus one for
// the selection whenever a uniform choice is needed (exploration, or a tie
// among greedy maximizers).
Action choose_action(const QTable& q, int cell, const RegionShape& shape,
                     const LearningParams& p, SplitMix64& rng);

// Greedy argmax over legal actions with ties to the lowest action index.
// Pure; used by replay-style consumers and tests.
Action greedy_action(const QTable& q, int cell, const RegionShape& shape);

// Follows greedy_action from `start` until a cell whose greedy action is
// Stay, or gives up after 4 * cells steps. Returns the absorbing cell or -1.
int greedy_absorbing_cell(const QTable& q, const RegionShape& shape, int start);

// One Bellman update: Q(s,a) <- (1-alpha) Q(s,a) + alpha (r + gamma max_a'
// Q(s',a')) with the max restricted to legal actions. Touches nothing else.
void q_update(QTable& q, const RegionShape& shape, int s, Action a, double r,
              int s_next, const LearningParams& p);

}  // namespace skylease
