#pragma once

// Elementary symmetric polynomials, Garding cones and the Hessian quotient
// operator G(λ) = (σ_k(λ)/σ_l(λ))^{1/(k-l)} with the derivatives the solver
// and the property suites need.
//
// Indices in this API are 0-based.  σ_0 = 1 and σ_j = 0 for j < 0 or j > n.

#include <cstdint>
#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

namespace hq {

/// Eigenvalue vector λ (n ≥ 2, finite entries).
class Spectrum {
public:
    explicit Spectrum(std::vector<double> values);
    Spectrum(std::initializer_list<double> values);

    [[nodiscard]] int size() const { return static_cast<int>(values_.size()); }
    [[nodiscard]] double operator[](int i) const { return values_[static_cast<std::size_t>(i)]; }
    [[nodiscard]] std::span<const double> values() const { return values_; }
    [[nodiscard]] double scale() const;  // max |λ_i|, at least 1e-300

private:
    std::vector<double> values_;
};

/// (n, k, l) with 2 ≤ k ≤ n and 0 ≤ l ≤ k-2.
struct QuotientParams {
    int n;
    int k;
    int l;

    /// Validating constructor; throws std::invalid_argument.
    static QuotientParams make(int n, int k, int l);
    [[nodiscard]] int order() const { return k - l; }
    /// C_n^k / C_n^l
    [[nodiscard]] double binomial_ratio() const;
    /// (C_n^k/C_n^l)(n-1)^{k-l}: the quotient on the round unit sphere.
    [[nodiscard]] double unit_sphere_value() const;
};

struct ConeReport {
    std::vector<double> sigmas;  // σ_1..σ_k
    bool member = false;
    double margin = 0.0;         // min_j σ_j
};

[[nodiscard]] double binomial(int n, int j);

/// σ_0..σ_n of λ by the one-entry-at-a-time recurrence.
[[nodiscard]] std::vector<double> elementary_symmetric_all(std::span<const double> lambda);

[[nodiscard]] double elementary_symmetric(const Spectrum& lambda, int j);

/// σ_j of λ with one or two entries removed, e.g. σ_j(λ|i), σ_j(λ|1i).
/// Throws std::out_of_range for a bad index, std::invalid_argument for
/// repeated indices or a set of size other than 1 or 2.
[[nodiscard]] double elementary_symmetric_excluding(const Spectrum& lambda, int j,
                                                    std::initializer_list<int> excluded);
[[nodiscard]] double elementary_symmetric_excluding(const Spectrum& lambda, int j,
                                                    std::span<const int> excluded);

[[nodiscard]] ConeReport in_gamma_k(const Spectrum& lambda, int k);

[[nodiscard]] double quotient_G(const Spectrum& lambda, const QuotientParams& p);

/// G^{ii} at η = diag(λ).
[[nodiscard]] std::vector<double> grad_G(const Spectrum& lambda, const QuotientParams& p);

/// G^{1i,i1} at η = diag(λ), from σ_{k-2}(λ|1i) and σ_{l-2}(λ|1i).  Here the
/// "1" slot is entry 0 and `i` ≥ 1 is the partner index.
[[nodiscard]] double offdiag_second_G(const Spectrum& lambda, const QuotientParams& p, int i);

/// F^{ii} = Σ_{j≠i} G^{jj}.
[[nodiscard]] std::vector<double> f_tensor(const Spectrum& lambda, const QuotientParams& p);

struct Slack {
    double value;  // rhs - lhs
    double scale;  // max(|lhs|, |rhs|)
};

/// Generalized Maclaurin inequality
///   [(σ_k/C_n^k)/(σ_l/C_n^l)]^{1/(k-l)} ≤ [(σ_r/C_n^r)/(σ_s/C_n^s)]^{1/(r-s)}
/// which holds on Γ_k for r > s ≥ 0, k ≥ r, l ≥ s.
[[nodiscard]] Slack maclaurin_quotient_slack(const Spectrum& lambda, int k, int l, int r, int s);

/// Slacks of the Newton-Maclaurin pair:
///   first:  k(n-l+1)σ_{l-1}σ_k ≤ l(n-k+1)σ_lσ_{k-1}
///   second: the quotient inequality with (r, s) = (k-1, l).
[[nodiscard]] std::pair<Slack, Slack> newton_maclaurin_slack(const Spectrum& lambda,
                                                             const QuotientParams& p);

/// Seeded rejection sampling of Γ_k from the cube [-1, 2]^n.  Throws
/// SamplingExhausted after 10^6 draws.
[[nodiscard]] std::vector<Spectrum> sample_gamma_k(int n, int k, std::uint64_t seed, int count);
[[nodiscard]] std::vector<Spectrum> sample_gamma_k(const QuotientParams& p, std::uint64_t seed,
                                                   int count);

}  // namespace hq
