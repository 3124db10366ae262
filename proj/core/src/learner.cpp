#include "skylease/learner.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace skylease {

void LearningParams::validate() const {
    if (!(alpha > 0.0 && alpha <= 1.0))
        throw ValidationError("learning.alpha: must be in (0, 1]");
    if (!(gamma >= 0.0 && gamma < 1.0))
        throw ValidationError("learning.gamma: must be in [0, 1)");
    if (!(epsilon >= 0.0 && epsilon <= 1.0))
        throw ValidationError("learning.epsilon: must be in [0, 1]");
    if (!(beta1 > beta2 && beta2 > 0.0 && beta3 < 0.0))
        throw ValidationError("learning.beta1/beta2/beta3: require beta1 > beta2 > 0 > beta3");
}

double LearningParams::max_abs_beta() const {
    return std::max({std::abs(beta1), std::abs(beta2), std::abs(beta3)});
}

std::array<Action, kNumActions> legal_actions(const RegionShape& shape, int cell,
                                              int* count) {
    const int row = cell / shape.width;
    const int col = cell % shape.width;
    std::array<Action, kNumActions> out{};
    int n = 0;
    if (row > 0) out[n++] = Action::Up;
    if (row < shape.height - 1) out[n++] = Action::Down;
    if (col > 0) out[n++] = Action::Left;
    if (col < shape.width - 1) out[n++] = Action::Right;
    out[n++] = Action::Stay;
    if (count) *count = n;
    return out;
}

int step_transition(const RegionShape& shape, int cell, Action a) {
    const int row = cell / shape.width;
    const int col = cell % shape.width;
    switch (a) {
        case Action::Up:
            if (row == 0) break;
            return cell - shape.width;
        case Action::Down:
            if (row == shape.height - 1) break;
            return cell + shape.width;
        case Action::Left:
            if (col == 0) break;
            return cell - 1;
        case Action::Right:
            if (col == shape.width - 1) break;
            return cell + 1;
        case Action::Stay:
            return cell;
    }
    throw ContractViolation("step_transition: action " +
                            std::to_string(static_cast<int>(a)) +
                            " leaves the region from cell " + std::to_string(cell));
}

static bool rates_equal(double a, double b) {
    return std::abs(a - b) <= 1e-9 * std::max(std::abs(a), std::abs(b));
}

double reward(bool moved, double rate_now, double rate_prev, const LearningParams& p) {
    if (!moved) return p.beta2;
    if (!rates_equal(rate_now, rate_prev) && rate_now > rate_prev) return p.beta1;
    return p.beta3;
}

static double max_q_legal(const QTable& q, int cell, const RegionShape& shape) {
    int n = 0;
    const auto acts = legal_actions(shape, cell, &n);
    double best = q.at(cell, static_cast<int>(acts[0]));
    for (int i = 1; i < n; ++i)
        best = std::max(best, q.at(cell, static_cast<int>(acts[i])));
    return best;
}

Action choose_action(const QTable& q, int cell, const RegionShape& shape,
                     const LearningParams& p, SplitMix64& rng) {
    int n = 0;
    const auto acts = legal_actions(shape, cell, &n);
    if (rng.next_double() < p.epsilon)
        return acts[rng.next_below(static_cast<std::uint32_t>(n))];

    double best = q.at(cell, static_cast<int>(acts[0]));
    std::array<Action, kNumActions> top{acts[0]};
    int ties = 1;
    for (int i = 1; i < n; ++i) {
        const double v = q.at(cell, static_cast<int>(acts[i]));
        if (v > best) {
            best = v;
            top[0] = acts[i];
            ties = 1;
        } else if (v == best) {
            top[ties++] = acts[i];
        }
    }
    if (ties == 1) return top[0];
    return top[rng.next_below(static_cast<std::uint32_t>(ties))];
}

Action greedy_action(const QTable& q, int cell, const RegionShape& shape) {
    int n = 0;
    const auto acts = legal_actions(shape, cell, &n);
    Action best_a = acts[0];
    double best = q.at(cell, static_cast<int>(acts[0]));
    for (int i = 1; i < n; ++i) {
        const double v = q.at(cell, static_cast<int>(acts[i]));
        if (v > best) {
            best = v;
            best_a = acts[i];
        }
    }
    return best_a;
}

int greedy_absorbing_cell(const QTable& q, const RegionShape& shape, int start) {
    int cell = start;
    for (int step = 0; step < 4 * shape.cells(); ++step) {
        const Action a = greedy_action(q, cell, shape);
        if (a == Action::Stay) return cell;
        cell = step_transition(shape, cell, a);
    }
    return -1;
}

void q_update(QTable& q, const RegionShape& shape, int s, Action a, double r,
              int s_next, const LearningParams& p) {
    const double target = r + p.gamma * max_q_legal(q, s_next, shape);
    double& entry = q.at(s, static_cast<int>(a));
    entry = (1.0 - p.alpha) * entry + p.alpha * target;
}

}  // namespace skylease
