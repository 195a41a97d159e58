#include "parcel/connectivity.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "parcel/errors.hpp"

namespace parcel {

ConnectivityMatrix ConnectivityMatrix::zeros(std::size_t n_seeds, std::size_t n_targets,
                                             Space space) {
    ConnectivityMatrix m;
    m.n_seeds = n_seeds;
    m.n_targets = n_targets;
    m.space = space;
    m.values.assign(n_seeds * n_targets, 0.0);
    return m;
}

double logit(double p) { return std::log(p / (1.0 - p)); }

double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

ConnectivityMatrix estimate_tractogram(const StreamlineCounts& counts) {
    if (counts.trials_per_seed == 0)
        throw parameter_error("streamline counts have zero trials per seed");
    if (counts.successes.size() != counts.n_seeds * counts.n_targets)
        throw parameter_error("streamline count buffer does not match its shape");
    ConnectivityMatrix m = ConnectivityMatrix::zeros(counts.n_seeds, counts.n_targets,
                                                     Space::Probability);
    const double inv_n = 1.0 / static_cast<double>(counts.trials_per_seed);
    for (std::size_t i = 0; i < counts.successes.size(); ++i) {
        if (counts.successes[i] > counts.trials_per_seed)
            throw parameter_error("success count " + std::to_string(counts.successes[i]) +
                                  " exceeds trials per seed " +
                                  std::to_string(counts.trials_per_seed));
        m.values[i] = counts.successes[i] * inv_n;
    }
    return m;
}

ConnectivityMatrix logit_transform(const ConnectivityMatrix& m, double clamp_eps) {
    if (m.space != Space::Probability)
        throw format_error("logit_transform requires a probability-space matrix");
    if (!(clamp_eps > 0.0 && clamp_eps < 0.5))
        throw parameter_error("clamp_eps must be in (0, 0.5), got " +
                              std::to_string(clamp_eps));
    ConnectivityMatrix out = m;
    out.space = Space::Logit;
    for (double& v : out.values) {
        double p = std::clamp(v, clamp_eps, 1.0 - clamp_eps);
        v = logit(p);
    }
    return out;
}

ConnectivityMatrix inverse_logit(const ConnectivityMatrix& m) {
    if (m.space != Space::Logit)
        throw format_error("inverse_logit requires a logit-space matrix");
    ConnectivityMatrix out = m;
    out.space = Space::Probability;
    for (double& v : out.values) v = logistic(v);
    return out;
}

ConnectivityMatrix groupwise_average(const std::vector<ConnectivityMatrix>& per_subject) {
    if (per_subject.empty())
        throw parameter_error("groupwise_average needs at least one subject");
    const ConnectivityMatrix& first = per_subject.front();
    for (std::size_t s = 0; s < per_subject.size(); ++s) {
        const auto& m = per_subject[s];
        if (m.space != Space::Logit)
            throw format_error("subject " + std::to_string(s) +
                               " is not in logit space");
        if (m.n_seeds != first.n_seeds || m.n_targets != first.n_targets)
            throw parameter_error("subject " + std::to_string(s) + " has shape " +
                                  std::to_string(m.n_seeds) + "x" +
                                  std::to_string(m.n_targets) + ", expected " +
                                  std::to_string(first.n_seeds) + "x" +
                                  std::to_string(first.n_targets));
    }
    ConnectivityMatrix out =
        ConnectivityMatrix::zeros(first.n_seeds, first.n_targets, Space::Logit);
    const long double inv_s = 1.0L / static_cast<long double>(per_subject.size());
    for (std::size_t i = 0; i < out.values.size(); ++i) {
        long double acc = 0.0L;
        for (const auto& m : per_subject) acc += m.values[i];
        out.values[i] = static_cast<double>(acc * inv_s);
    }
    return out;
}

} // namespace parcel
