#ifndef BILOC_BILOCAL_HPP
#define BILOC_BILOCAL_HPP

#include <array>
#include <map>
#include <string>
#include <utility>

#include "biloc/states.hpp"

namespace biloc {

// Six Hermitian contractions, two per party, each lying in its party's
// algebra. create() enforces Hermiticity (1e-12), spectrum in [-1,1]
// (1e-10) and algebra membership (1e-10).
struct ObservableSet {
    Mat A0, A1, B0, B1, C0, C1;
    ScenarioPtr scenario;

    static ObservableSet create(ScenarioPtr s, Mat a0, Mat a1, Mat b0, Mat b1, Mat c0, Mat c1);
    static ObservableSet identity(ScenarioPtr s);

    const Mat& at(int party, int setting) const;
};

// I, J, S together with the maximal-violation condition residuals, in both
// operator-norm form ("A0^2-I", "{A0,A1}", ...) and state-weighted form
// ("tau:A0", "tau:{A0,A1}", ...).
struct BilocalReport {
    double I = 0.0;
    double J = 0.0;
    double S = 0.0;
    std::map<std::string, double> residuals;
};

double expectation(const NetworkState& state, const Mat& x);

// I and J only; the hot path used inside the optimizer and the samplers.
struct IJValue {
    double I, J, S;
};
IJValue evaluate_ij(const NetworkState& state, const ObservableSet& obs);

BilocalReport evaluate(const NetworkState& state, const ObservableSet& obs);

// p(abc|xyz) over binary everything; validates nonnegativity (-1e-12) and
// per-setting normalization (1e-10).
struct ProbabilityTable {
    std::array<double, 64> p{};
    static int index(int x, int y, int z, int a, int b, int c) {
        return (((((x << 1) | y) << 1) | z) << 3) | (a << 2) | (b << 1) | c;
    }
    double at(int x, int y, int z, int a, int b, int c) const {
        return p[static_cast<size_t>(index(x, y, z, a, b, c))];
    }
};

ProbabilityTable probability_table(const NetworkState& state, const ObservableSet& obs);

// Max over a,c,x,z,y of |p(ac|xz) - p(a|x) p(c|z)|, including the spread of
// the A-C marginal across Bob's settings (a no-signaling witness).
double marginal_factorization_residual(const ProbabilityTable& t);

std::map<std::string, double> max_violation_residuals(const NetworkState& state,
                                                      const ObservableSet& obs,
                                                      const Scenario& s);

struct CanonicalTriple {
    ScenarioPtr scenario;
    NetworkState state;
    ObservableSet observables;
};

// Two-singlet witness on the (2,2,2,2) tensor scenario attaining S = 2√2:
// A and C measure (X±Z)/√2, Bob measures X⊗X and Z⊗Z.
CanonicalTriple canonical_max_violation();

// POVM conversions for binary outcomes: X = E_0 - E_1, E_a = (I + (-1)^a X)/2.
Mat observable_from_povm(const Mat& e0, const Mat& e1);
std::pair<Mat, Mat> povm_from_observable(const Mat& x);

// Restart/sample distribution shared by the see-saw and the random-search
// oracle: per observable, an ambient GUE matrix projected into the party
// algebra and passed through the spectral sign.
ObservableSet random_observable_set(ScenarioPtr s, Rng& rng);

}  // namespace biloc

#endif
