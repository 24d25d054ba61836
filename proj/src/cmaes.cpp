#include "finview/cmaes.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace finview::cmaes {

Hyperparams default_hyperparams(int dim, std::optional<int> population) {
    if (dim < 1) {
        throw std::invalid_argument("default_hyperparams: dim must be >= 1");
    }
    const int pop = population.value_or(4 + static_cast<int>(std::floor(3.0 * std::log(dim))));
    return make_hyperparams(dim, pop, std::max(1, pop / 2));
}

Hyperparams make_hyperparams(int dim, int population, int parents) {
    if (dim < 1) {
        throw std::invalid_argument("make_hyperparams: dim must be >= 1");
    }
    if (population < 2) {
        throw std::invalid_argument("make_hyperparams: population must be >= 2");
    }
    if (parents < 1 || parents > population) {
        throw std::invalid_argument("make_hyperparams: parents must be in [1, population]");
    }
    Hyperparams hp;
    hp.population = population;
    hp.parents = parents;

    hp.weights.resize(hp.parents);
    const double base = std::log(hp.parents + 0.5);
    for (int i = 0; i < hp.parents; ++i) {
        hp.weights[i] = base - std::log(static_cast<double>(i + 1));
    }
    hp.weights /= hp.weights.sum();

    const double mu_eff = hp.mu_eff();
    const double n = static_cast<double>(dim);
    hp.c_sigma = (mu_eff + 2.0) / (n + mu_eff + 5.0);
    hp.d_sigma = 1.0 + 2.0 * std::max(0.0, std::sqrt((mu_eff - 1.0) / (n + 1.0)) - 1.0) + hp.c_sigma;
    hp.c_c = (4.0 + mu_eff / n) / (n + 4.0 + 2.0 * mu_eff / n);
    hp.c_1 = 2.0 / ((n + 1.3) * (n + 1.3) + mu_eff);
    hp.c_mu = std::min(1.0 - hp.c_1,
                       2.0 * (mu_eff - 2.0 + 1.0 / mu_eff) / ((n + 2.0) * (n + 2.0) + mu_eff));
    hp.c_l = 1.0;
    hp.chi_n = std::sqrt(n) * (1.0 - 1.0 / (4.0 * n) + 1.0 / (21.0 * n * n));
    return hp;
}

State make_state(const Eigen::VectorXd& mean0, double sigma0, std::uint64_t seed) {
    if (!(sigma0 > 0.0)) {
        throw std::invalid_argument("make_state: sigma0 must be > 0");
    }
    State st;
    st.mean = mean0;
    st.sigma = sigma0;
    st.cov = Eigen::MatrixXd::Identity(mean0.size(), mean0.size());
    st.path_sigma = Eigen::VectorXd::Zero(mean0.size());
    st.path_c = Eigen::VectorXd::Zero(mean0.size());
    st.generation = 0;
    st.rng_seed = seed;
    st.rng.seed(seed);
    return st;
}

Eigen::MatrixXd sqrt_cov(const Eigen::MatrixXd& cov) {
    const Eigen::MatrixXd sym = 0.5 * (cov + cov.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("sqrt_cov: eigendecomposition failed");
    }
    Eigen::VectorXd evals = solver.eigenvalues();
    const double trace = sym.trace();
    const double floor_val = 1e-14 * std::max(trace, 1e-300);
    if (evals.minCoeff() < -1e-8 * std::max(1.0, trace)) {
        throw std::runtime_error("sqrt_cov: covariance is not positive definite beyond repair");
    }
    for (int i = 0; i < evals.size(); ++i) {
        evals[i] = std::sqrt(std::max(evals[i], floor_val));
    }
    return solver.eigenvectors() * evals.asDiagonal() * solver.eigenvectors().transpose();
}

std::vector<Candidate> ask(State& state, const Hyperparams& hp) {
    const Eigen::MatrixXd root = sqrt_cov(state.cov);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<Candidate> out;
    out.reserve(hp.population);
    for (int i = 0; i < hp.population; ++i) {
        Candidate c;
        c.z.resize(state.mean.size());
        for (int d = 0; d < c.z.size(); ++d) {
            c.z[d] = gauss(state.rng);
        }
        c.x = state.mean + state.sigma * (root * c.z);
        out.push_back(std::move(c));
    }
    return out;
}

double csa_step_size(double sigma, double path_sigma_norm, const Hyperparams& hp) {
    return sigma * std::exp((hp.c_sigma / hp.d_sigma) * (path_sigma_norm / hp.chi_n - 1.0));
}

void tell(State& state, const std::vector<Candidate>& ranked, const Hyperparams& hp) {
    if (static_cast<int>(ranked.size()) != hp.population) {
        throw std::invalid_argument("tell: ranked size must equal population");
    }
    for (size_t i = 1; i < ranked.size(); ++i) {
        if (ranked[i].fitness > ranked[i - 1].fitness) {
            throw std::invalid_argument("tell: candidates must be sorted by fitness descending");
        }
    }

    const long dim = state.mean.size();
    const double mu_eff = hp.mu_eff();

    // Selected steps in sampling (z) and search (y = sqrt(C) z = (x - mean) / sigma)
    // coordinates, recombined with the selection weights.
    Eigen::MatrixXd ys(dim, hp.parents);
    Eigen::VectorXd delta_z = Eigen::VectorXd::Zero(dim);
    for (int i = 0; i < hp.parents; ++i) {
        ys.col(i) = (ranked[i].x - state.mean) / state.sigma;
        delta_z += hp.weights[i] * ranked[i].z;
    }
    const Eigen::VectorXd delta_y = ys * hp.weights;

    state.path_sigma = (1.0 - hp.c_sigma) * state.path_sigma +
                       std::sqrt(hp.c_sigma * (2.0 - hp.c_sigma) * mu_eff) * delta_z;

    const double ps_norm = state.path_sigma.norm();
    const double decay = 1.0 - std::pow(1.0 - hp.c_sigma, 2.0 * (state.generation + 1));
    const bool h_sigma = ps_norm / std::sqrt(decay) < (1.4 + 2.0 / (dim + 1.0)) * hp.chi_n;

    state.path_c = (1.0 - hp.c_c) * state.path_c +
                   (h_sigma ? std::sqrt(hp.c_c * (2.0 - hp.c_c) * mu_eff) : 0.0) * delta_y;

    state.mean += hp.c_l * state.sigma * delta_y;

    Eigen::MatrixXd rank_mu = Eigen::MatrixXd::Zero(dim, dim);
    for (int i = 0; i < hp.parents; ++i) {
        rank_mu.noalias() += hp.weights[i] * ys.col(i) * ys.col(i).transpose();
    }
    // The (1 - H_sigma) term compensates the variance the gated rank-one
    // update would otherwise drain from C.
    const double variance_loss = h_sigma ? 0.0 : hp.c_c * (2.0 - hp.c_c);
    state.cov = (1.0 - hp.c_1 - hp.c_mu + hp.c_1 * variance_loss) * state.cov +
                hp.c_1 * state.path_c * state.path_c.transpose() + hp.c_mu * rank_mu;
    state.cov = 0.5 * (state.cov + state.cov.transpose()).eval();

    state.sigma = csa_step_size(state.sigma, ps_norm, hp);
    ++state.generation;
}

RunOutcome run(const Objective& objective, const Eigen::VectorXd& x0, double sigma0,
               std::uint64_t seed, const Hyperparams& hp, const StopCriteria& stop) {
    State state = make_state(x0, sigma0, seed);
    RunOutcome outcome;
    outcome.best_fitness = -std::numeric_limits<double>::infinity();

    while (state.generation < stop.max_generations) {
        std::vector<Candidate> cands = ask(state, hp);
        for (size_t i = 0; i < cands.size(); ++i) {
            cands[i].fitness = objective(cands[i].x);
            ++outcome.evaluations;
            if (!std::isfinite(cands[i].fitness)) {
                std::ostringstream msg;
                msg << "run: non-finite objective value " << cands[i].fitness << " at generation "
                    << state.generation << ", candidate " << i << ", x = ["
                    << cands[i].x.transpose() << "]";
                throw std::runtime_error(msg.str());
            }
            if (cands[i].fitness > outcome.best_fitness) {
                outcome.best_fitness = cands[i].fitness;
                outcome.best_x = cands[i].x;
            }
        }

        std::vector<int> order(cands.size());
        for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
            return cands[a].fitness > cands[b].fitness;
        });
        std::vector<Candidate> ranked;
        ranked.reserve(cands.size());
        for (const int idx : order) ranked.push_back(std::move(cands[idx]));

        tell(state, ranked, hp);
        outcome.history.push_back({state.generation, outcome.best_fitness, state.sigma});

        if (stop.target_fitness && outcome.best_fitness >= *stop.target_fitness) {
            break;
        }
        if (state.sigma < stop.sigma_tol) {
            break;
        }
    }
    return outcome;
}

namespace benchmarks {

double sphere(const Eigen::VectorXd& x) { return x.squaredNorm(); }

double rosenbrock(const Eigen::VectorXd& x) {
    double sum = 0.0;
    for (int i = 0; i + 1 < x.size(); ++i) {
        const double a = x[i + 1] - x[i] * x[i];
        const double b = 1.0 - x[i];
        sum += 100.0 * a * a + b * b;
    }
    return sum;
}

}  // namespace benchmarks

}  // namespace finview::cmaes
