#include "hq/symfun.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "hq/errors.hpp"

namespace hq {

namespace {

void check_values(const std::vector<double>& v) {
    if (v.size() < 2) throw std::invalid_argument("Spectrum needs at least two entries");
    for (double x : v)
        if (!std::isfinite(x)) throw std::invalid_argument("Spectrum entries must be finite");
}

double sigma_from(const std::vector<double>& all, int j) {
    if (j < 0 || j >= static_cast<int>(all.size())) return 0.0;
    return all[static_cast<std::size_t>(j)];
}

void require_cone(const Spectrum& lambda, int k) {
    const auto report = in_gamma_k(lambda, k);
    if (!report.member)
        throw ConeViolation("spectrum outside Gamma_" + std::to_string(k) +
                            " (margin " + std::to_string(report.margin) + ")");
}

void require_dims(const Spectrum& lambda, const QuotientParams& p) {
    if (lambda.size() != p.n)
        throw std::invalid_argument("spectrum length does not match n");
}

// Common factor (1/m) Q^{1/m-1} / σ_l² of the first and second derivatives.
struct QuotientParts {
    double sigma_k;
    double sigma_l;
    double prefactor;
};

QuotientParts quotient_parts(const std::vector<double>& all, const QuotientParams& p) {
    const double sk = sigma_from(all, p.k);
    const double sl = sigma_from(all, p.l);
    const double m = p.order();
    const double q = sk / sl;
    return {sk, sl, std::pow(q, 1.0 / m - 1.0) / (m * sl * sl)};
}

// Uniform double in [0, 1) from the top 53 bits; independent of the standard
// library's distribution implementation.
double unit_draw(std::mt19937_64& gen) {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

}  // namespace

Spectrum::Spectrum(std::vector<double> values) : values_(std::move(values)) {
    check_values(values_);
}

Spectrum::Spectrum(std::initializer_list<double> values) : values_(values) {
    check_values(values_);
}

double Spectrum::scale() const {
    double s = 1e-300;
    for (double x : values_) s = std::max(s, std::abs(x));
    return s;
}

QuotientParams QuotientParams::make(int n, int k, int l) {
    if (n < 2) throw std::invalid_argument("n must be at least 2");
    if (k < 2 || k > n) throw std::invalid_argument("k must satisfy 2 <= k <= n");
    if (l < 0 || l > k - 2) throw std::invalid_argument("l must satisfy 0 <= l <= k-2");
    return {n, k, l};
}

double QuotientParams::binomial_ratio() const { return binomial(n, k) / binomial(n, l); }

double QuotientParams::unit_sphere_value() const {
    return binomial_ratio() * std::pow(static_cast<double>(n - 1), order());
}

double binomial(int n, int j) {
    if (j < 0 || j > n) return 0.0;
    double c = 1.0;
    for (int i = 1; i <= j; ++i) c = c * static_cast<double>(n - j + i) / static_cast<double>(i);
    return std::round(c);
}

std::vector<double> elementary_symmetric_all(std::span<const double> lambda) {
    const std::size_t n = lambda.size();
    std::vector<double> e(n + 1, 0.0);
    e[0] = 1.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j >= 1; --j) e[j] += lambda[i] * e[j - 1];
    return e;
}

double elementary_symmetric(const Spectrum& lambda, int j) {
    if (j < 0 || j > lambda.size()) return 0.0;
    if (j == 0) return 1.0;
    return elementary_symmetric_all(lambda.values())[static_cast<std::size_t>(j)];
}

double elementary_symmetric_excluding(const Spectrum& lambda, int j,
                                      std::initializer_list<int> excluded) {
    return elementary_symmetric_excluding(lambda, j,
                                          std::span<const int>(excluded.begin(), excluded.size()));
}

double elementary_symmetric_excluding(const Spectrum& lambda, int j,
                                      std::span<const int> excluded) {
    if (excluded.empty() || excluded.size() > 2)
        throw std::invalid_argument("exclusion set must have one or two indices");
    for (int idx : excluded)
        if (idx < 0 || idx >= lambda.size())
            throw std::out_of_range("excluded index " + std::to_string(idx) + " out of range");
    if (excluded.size() == 2 && excluded[0] == excluded[1])
        throw std::invalid_argument("excluded indices must be distinct");

    const int remaining = lambda.size() - static_cast<int>(excluded.size());
    if (j < 0 || j > remaining) return 0.0;
    if (j == 0) return 1.0;

    std::vector<double> rest;
    rest.reserve(static_cast<std::size_t>(remaining));
    for (int i = 0; i < lambda.size(); ++i)
        if (std::find(excluded.begin(), excluded.end(), i) == excluded.end()) rest.push_back(lambda[i]);
    return elementary_symmetric_all(rest)[static_cast<std::size_t>(j)];
}

ConeReport in_gamma_k(const Spectrum& lambda, int k) {
    if (k < 1 || k > lambda.size()) throw std::invalid_argument("cone order k must satisfy 1 <= k <= n");
    const auto all = elementary_symmetric_all(lambda.values());
    ConeReport report;
    report.sigmas.assign(all.begin() + 1, all.begin() + 1 + k);
    report.margin = *std::min_element(report.sigmas.begin(), report.sigmas.end());
    report.member = report.margin > 0.0;
    return report;
}

double quotient_G(const Spectrum& lambda, const QuotientParams& p) {
    require_dims(lambda, p);
    require_cone(lambda, p.k);
    const auto all = elementary_symmetric_all(lambda.values());
    return std::pow(sigma_from(all, p.k) / sigma_from(all, p.l), 1.0 / p.order());
}

std::vector<double> grad_G(const Spectrum& lambda, const QuotientParams& p) {
    require_dims(lambda, p);
    require_cone(lambda, p.k);
    const auto all = elementary_symmetric_all(lambda.values());
    const auto parts = quotient_parts(all, p);
    std::vector<double> g(static_cast<std::size_t>(p.n));
    for (int i = 0; i < p.n; ++i) {
        const double dk = elementary_symmetric_excluding(lambda, p.k - 1, {i});
        const double dl = elementary_symmetric_excluding(lambda, p.l - 1, {i});
        g[static_cast<std::size_t>(i)] = parts.prefactor * (dk * parts.sigma_l - parts.sigma_k * dl);
    }
    return g;
}

double offdiag_second_G(const Spectrum& lambda, const QuotientParams& p, int i) {
    require_dims(lambda, p);
    if (i < 1 || i >= p.n) throw std::out_of_range("partner index must satisfy 1 <= i < n");
    require_cone(lambda, p.k);
    const auto all = elementary_symmetric_all(lambda.values());
    const auto parts = quotient_parts(all, p);
    const double dk = elementary_symmetric_excluding(lambda, p.k - 2, {0, i});
    const double dl = elementary_symmetric_excluding(lambda, p.l - 2, {0, i});
    return -parts.prefactor * (dk * parts.sigma_l - dl * parts.sigma_k);
}

std::vector<double> f_tensor(const Spectrum& lambda, const QuotientParams& p) {
    auto g = grad_G(lambda, p);
    double total = 0.0;
    for (double x : g) total += x;
    for (double& x : g) x = total - x;
    return g;
}

Slack maclaurin_quotient_slack(const Spectrum& lambda, int k, int l, int r, int s) {
    const int n = lambda.size();
    if (!(0 <= l && l < k && k <= n && s >= 0 && r > s && k >= r && l >= s))
        throw std::invalid_argument("Maclaurin indices must satisfy r > s >= 0, k >= r, l >= s");
    require_cone(lambda, k);
    const auto all = elementary_symmetric_all(lambda.values());
    auto normalized = [&](int j) { return sigma_from(all, j) / binomial(n, j); };
    const double lhs = std::pow(normalized(k) / normalized(l), 1.0 / (k - l));
    const double rhs = std::pow(normalized(r) / normalized(s), 1.0 / (r - s));
    return {rhs - lhs, std::max(std::abs(lhs), std::abs(rhs))};
}

std::pair<Slack, Slack> newton_maclaurin_slack(const Spectrum& lambda, const QuotientParams& p) {
    require_dims(lambda, p);
    require_cone(lambda, p.k);
    const auto all = elementary_symmetric_all(lambda.values());
    const int n = p.n, k = p.k, l = p.l;
    const double lhs = k * (n - l + 1) * sigma_from(all, l - 1) * sigma_from(all, k);
    const double rhs = l * (n - k + 1) * sigma_from(all, l) * sigma_from(all, k - 1);
    const Slack first{rhs - lhs, std::max(std::abs(lhs), std::abs(rhs))};
    return {first, maclaurin_quotient_slack(lambda, k, l, k - 1, l)};
}

std::vector<Spectrum> sample_gamma_k(int n, int k, std::uint64_t seed, int count) {
    if (count < 1) throw std::invalid_argument("count must be at least 1");
    if (n < 2 || k < 1 || k > n) throw std::invalid_argument("sampling needs n >= 2, 1 <= k <= n");
    constexpr long kMaxDraws = 1'000'000;
    std::mt19937_64 gen(seed);
    std::vector<Spectrum> out;
    out.reserve(static_cast<std::size_t>(count));
    std::vector<double> draw(static_cast<std::size_t>(n));
    for (long attempt = 0; attempt < kMaxDraws; ++attempt) {
        for (double& x : draw) x = -1.0 + 3.0 * unit_draw(gen);
        Spectrum candidate(draw);
        if (in_gamma_k(candidate, k).member) {
            out.push_back(std::move(candidate));
            if (static_cast<int>(out.size()) == count) return out;
        }
    }
    throw SamplingExhausted("collected " + std::to_string(out.size()) + " of " +
                            std::to_string(count) + " cone samples within the draw cap");
}

std::vector<Spectrum> sample_gamma_k(const QuotientParams& p, std::uint64_t seed, int count) {
    return sample_gamma_k(p.n, p.k, seed, count);
}

}  // namespace hq
