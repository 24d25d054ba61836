#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <vector>

namespace finview::cmaes {

/// Strategy parameters. Defaults follow the canonical CMA-ES settings for the
/// given dimension; all rates live in (0, 1].
struct Hyperparams {
    int population = 0;  ///< lambda, sampled candidates per generation
    int parents = 0;     ///< mu, candidates recombined into the mean
    Eigen::VectorXd weights;  ///< size `parents`, positive, non-increasing, sum 1
    double c_sigma = 0.0;     ///< step-size path cumulation rate
    double c_c = 0.0;         ///< covariance path cumulation rate
    double c_1 = 0.0;         ///< rank-one learning rate
    double c_mu = 0.0;        ///< rank-mu learning rate
    double c_l = 1.0;         ///< mean learning rate
    double d_sigma = 0.0;     ///< step-size damping
    double chi_n = 0.0;       ///< E||N(0, I)||

    /// Variance-effective selection mass, 1 / sum(w_i^2) for normalized weights.
    double mu_eff() const { return 1.0 / weights.squaredNorm(); }
};

/// population defaults to 4 + floor(3 ln dim); parents to population / 2;
/// weights to normalized log-rank.
Hyperparams default_hyperparams(int dim, std::optional<int> population = std::nullopt);

/// Canonical settings for an explicit population / parent count.
Hyperparams make_hyperparams(int dim, int population, int parents);

/// Search distribution N(mean, sigma^2 C) plus the two evolution paths.
struct State {
    Eigen::VectorXd mean;
    double sigma = 0.0;
    Eigen::MatrixXd cov;
    Eigen::VectorXd path_sigma;
    Eigen::VectorXd path_c;
    long generation = 0;
    std::uint64_t rng_seed = 0;
    std::mt19937_64 rng;
};

State make_state(const Eigen::VectorXd& mean0, double sigma0, std::uint64_t seed);

struct Candidate {
    Eigen::VectorXd x;  ///< mean + sigma * sqrt(C) * z
    Eigen::VectorXd z;  ///< the standard-normal draw behind x
    double fitness = 0.0;
};

/// Symmetric square root of C by eigendecomposition. Eigenvalues below
/// 1e-14 * trace are repaired to that floor; decisively negative spectra throw.
Eigen::MatrixXd sqrt_cov(const Eigen::MatrixXd& cov);

/// Samples `population` candidates from N(mean, sigma^2 C), advancing the
/// state's generator.
std::vector<Candidate> ask(State& state, const Hyperparams& hp);

/// The CSA rule: sigma * exp((c_sigma / d_sigma) (norm / chi_n - 1)).
double csa_step_size(double sigma, double path_sigma_norm, const Hyperparams& hp);

/// Distribution update from one generation, `ranked` sorted by fitness
/// descending (maximization). Updates both evolution paths (with the Heaviside
/// stall gate on the covariance path), recombines the mean over the top
/// `parents` candidates, applies the CSA step-size rule, and adapts C with the
/// rank-one and rank-mu terms. Throws on unsorted or wrongly sized input.
void tell(State& state, const std::vector<Candidate>& ranked, const Hyperparams& hp);

struct StopCriteria {
    long max_generations = 1000;
    std::optional<double> target_fitness;  ///< stop once best fitness reaches this
    double sigma_tol = 0.0;                ///< stop when sigma falls below
};

struct GenerationLog {
    long generation = 0;
    double best_fitness = 0.0;  ///< best ever, non-decreasing
    double sigma = 0.0;
};

struct RunOutcome {
    Eigen::VectorXd best_x;
    double best_fitness = 0.0;
    long evaluations = 0;
    std::vector<GenerationLog> history;
};

using Objective = std::function<double(const Eigen::VectorXd&)>;

/// Maximizes the objective with an ask/tell loop, tracking the best candidate
/// ever seen. Non-finite objective values abort with a diagnostic naming the
/// candidate. Candidates of equal fitness rank by sampling order.
RunOutcome run(const Objective& objective, const Eigen::VectorXd& x0, double sigma0,
               std::uint64_t seed, const Hyperparams& hp, const StopCriteria& stop);

namespace benchmarks {
double sphere(const Eigen::VectorXd& x);      ///< sum x_i^2
double rosenbrock(const Eigen::VectorXd& x);  ///< sum 100 (x_{i+1} - x_i^2)^2 + (1 - x_i)^2
}  // namespace benchmarks

}  // namespace finview::cmaes
