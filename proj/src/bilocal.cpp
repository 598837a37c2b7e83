#include "biloc/bilocal.hpp"

#include <cmath>

namespace biloc {

namespace {

void validate_observable(const Scenario& s, const Mat& x, int party, const std::string& name) {
    if (x.rows() != s.dim || x.cols() != s.dim)
        throw domain_error(name + ": dimension mismatch");
    if (hermiticity_residual(x) > tol_hermitian)
        throw domain_error(name + ": not Hermitian within 1e-12");
    if (max_abs_eigenvalue(herm_part(x)) > 1.0 + tol_spectrum)
        throw domain_error(name + ": spectrum outside [-1,1]");
    if (s.party(party).membership_residual(x) > tol_membership)
        throw domain_error(name + ": not in the party algebra");
}

}  // namespace

ObservableSet ObservableSet::create(ScenarioPtr s, Mat a0, Mat a1, Mat b0, Mat b1, Mat c0,
                                    Mat c1) {
    if (!s) throw domain_error("observables need a scenario");
    validate_observable(*s, a0, 0, "A0");
    validate_observable(*s, a1, 0, "A1");
    validate_observable(*s, b0, 1, "B0");
    validate_observable(*s, b1, 1, "B1");
    validate_observable(*s, c0, 2, "C0");
    validate_observable(*s, c1, 2, "C1");
    ObservableSet o;
    o.A0 = std::move(a0);
    o.A1 = std::move(a1);
    o.B0 = std::move(b0);
    o.B1 = std::move(b1);
    o.C0 = std::move(c0);
    o.C1 = std::move(c1);
    o.scenario = std::move(s);
    return o;
}

ObservableSet ObservableSet::identity(ScenarioPtr s) {
    Mat id = Mat::Identity(s->dim, s->dim);
    return create(std::move(s), id, id, id, id, id, id);
}

const Mat& ObservableSet::at(int party, int setting) const {
    switch (party * 2 + setting) {
        case 0: return A0;
        case 1: return A1;
        case 2: return B0;
        case 3: return B1;
        case 4: return C0;
        default: return C1;
    }
}

double expectation(const NetworkState& state, const Mat& x) {
    if (x.rows() != state.rho.rows()) throw domain_error("expectation: dimension mismatch");
    if (hermiticity_residual(x) > tol_hermitian)
        throw domain_error("expectation: observable not Hermitian");
    return real_trace(state.rho * x, 1e-12);
}

IJValue evaluate_ij(const NetworkState& state, const ObservableSet& obs) {
    const Mat& rho = state.rho;
    if (rho.rows() != obs.A0.rows())
        throw domain_error("evaluate: state/observable dimension mismatch");
    double I = real_trace(rho * (obs.A0 + obs.A1) * obs.B0 * (obs.C0 + obs.C1));
    double J = real_trace(rho * (obs.A0 - obs.A1) * obs.B1 * (obs.C0 - obs.C1));
    return {I, J, std::sqrt(std::abs(I)) + std::sqrt(std::abs(J))};
}

BilocalReport evaluate(const NetworkState& state, const ObservableSet& obs) {
    if (state.rho.rows() != obs.A0.rows())
        throw domain_error("evaluate: state/observable dimension mismatch");
    IJValue ij = evaluate_ij(state, obs);
    BilocalReport rep;
    rep.I = ij.I;
    rep.J = ij.J;
    rep.S = ij.S;
    if (obs.scenario) rep.residuals = max_violation_residuals(state, obs, *obs.scenario);
    return rep;
}

ProbabilityTable probability_table(const NetworkState& state, const ObservableSet& obs) {
    const int d = static_cast<int>(state.rho.rows());
    Mat id = Mat::Identity(d, d);
    auto effects = [&](const Mat& x) {
        return std::array<Mat, 2>{0.5 * (id + x), 0.5 * (id - x)};
    };
    std::array<std::array<Mat, 2>, 2> ea = {effects(obs.A0), effects(obs.A1)};
    std::array<std::array<Mat, 2>, 2> eb = {effects(obs.B0), effects(obs.B1)};
    std::array<std::array<Mat, 2>, 2> ec = {effects(obs.C0), effects(obs.C1)};

    ProbabilityTable t;
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
            for (int z = 0; z < 2; ++z) {
                double sum = 0.0;
                for (int a = 0; a < 2; ++a)
                    for (int b = 0; b < 2; ++b)
                        for (int c = 0; c < 2; ++c) {
                            double p =
                                real_trace(state.rho * ea[x][a] * eb[y][b] * ec[z][c]);
                            if (p < -1e-12)
                                throw domain_error(
                                    "negative probability: invalid POVM (spectrum outside "
                                    "[-1,1])");
                            t.p[static_cast<size_t>(ProbabilityTable::index(x, y, z, a, b, c))] =
                                p;
                            sum += p;
                        }
                if (std::abs(sum - 1.0) > 1e-10)
                    throw domain_error("probability slice does not sum to 1");
            }
    return t;
}

double marginal_factorization_residual(const ProbabilityTable& t) {
    double worst = 0.0;
    for (int x = 0; x < 2; ++x)
        for (int z = 0; z < 2; ++z) {
            // A-C joint after summing Bob out, one per Bob setting.
            double q[2][2][2];  // [y][a][c]
            for (int y = 0; y < 2; ++y)
                for (int a = 0; a < 2; ++a)
                    for (int c = 0; c < 2; ++c) {
                        double s = 0.0;
                        for (int b = 0; b < 2; ++b) s += t.at(x, y, z, a, b, c);
                        q[y][a][c] = s;
                    }
            for (int y = 0; y < 2; ++y)
                for (int a = 0; a < 2; ++a)
                    for (int c = 0; c < 2; ++c) {
                        double pa = q[y][a][0] + q[y][a][1];
                        double pc = q[y][0][c] + q[y][1][c];
                        worst = std::max(worst, std::abs(q[y][a][c] - pa * pc));
                        worst = std::max(worst, std::abs(q[y][a][c] - q[1 - y][a][c]));
                    }
        }
    return worst;
}

std::map<std::string, double> max_violation_residuals(const NetworkState& state,
                                                      const ObservableSet& obs,
                                                      const Scenario& s) {
    std::map<std::string, double> r;
    Mat id = Mat::Identity(s.dim, s.dim);

    const char* names[6] = {"A0", "A1", "B0", "B1", "C0", "C1"};
    for (int party = 0; party < 3; ++party)
        for (int k = 0; k < 2; ++k) {
            const Mat& x = obs.at(party, k);
            Mat sq = x * x;
            r[std::string(names[party * 2 + k]) + "^2-I"] = operator_norm(sq - id);
            // state-weighted form: sup over the party's normalized basis of
            // |τ(X² E) - τ(E)|
            double worst = 0.0;
            Mat lhs = state.rho * sq - state.rho;
            for (const Mat& e : s.party(party).basis)
                worst = std::max(worst, std::abs((lhs * e).trace()));
            r[std::string("tau:") + names[party * 2 + k]] = worst;
        }

    auto anti = [&](const Mat& x0, const Mat& x1, int party, const std::string& key) {
        Mat ac = x0 * x1 + x1 * x0;
        r["{" + key + "}"] = operator_norm(ac);
        double worst = 0.0;
        Mat lhs = state.rho * ac;
        for (const Mat& e : s.party(party).basis)
            worst = std::max(worst, std::abs((lhs * e).trace()));
        r["tau:{" + key + "}"] = worst;
    };
    anti(obs.A0, obs.A1, 0, "A0,A1");
    anti(obs.C0, obs.C1, 2, "C0,C1");
    return r;
}

CanonicalTriple canonical_max_violation() {
    ScenarioPtr sc = make_tensor_scenario(2, 2, 2, 2);
    NetworkState st = product_source_state(sc, singlet(), singlet());

    const double r2 = std::sqrt(2.0);
    std::vector<int> dims = {2, 2, 2, 2};
    Mat a0 = embed_contiguous((pauli(1) + pauli(3)) / r2, dims, 0, 1);
    Mat a1 = embed_contiguous((pauli(1) - pauli(3)) / r2, dims, 0, 1);
    Mat b0 = embed_contiguous(kron(pauli(1), pauli(1)), dims, 1, 2);
    Mat b1 = embed_contiguous(kron(pauli(3), pauli(3)), dims, 1, 2);
    Mat c0 = embed_contiguous((pauli(1) + pauli(3)) / r2, dims, 3, 1);
    Mat c1 = embed_contiguous((pauli(1) - pauli(3)) / r2, dims, 3, 1);

    ObservableSet obs = ObservableSet::create(sc, a0, a1, b0, b1, c0, c1);
    return {sc, std::move(st), std::move(obs)};
}

ObservableSet random_observable_set(ScenarioPtr s, Rng& rng) {
    ObservableSet o;
    o.A0 = s->alg_A.random_sign_element(rng);
    o.A1 = s->alg_A.random_sign_element(rng);
    o.B0 = s->alg_B.random_sign_element(rng);
    o.B1 = s->alg_B.random_sign_element(rng);
    o.C0 = s->alg_C.random_sign_element(rng);
    o.C1 = s->alg_C.random_sign_element(rng);
    o.scenario = std::move(s);
    return o;
}

Mat observable_from_povm(const Mat& e0, const Mat& e1) {
    if (e0.rows() != e1.rows()) throw domain_error("POVM effects dimension mismatch");
    if (min_eigenvalue(herm_part(e0)) < -tol_spectrum ||
        min_eigenvalue(herm_part(e1)) < -tol_spectrum)
        throw domain_error("POVM effect is not positive semidefinite");
    Mat id = Mat::Identity(e0.rows(), e0.cols());
    if (operator_norm(e0 + e1 - id) > tol_spectrum)
        throw domain_error("POVM effects do not sum to the identity");
    return e0 - e1;
}

std::pair<Mat, Mat> povm_from_observable(const Mat& x) {
    Mat id = Mat::Identity(x.rows(), x.cols());
    return {0.5 * (id + x), 0.5 * (id - x)};
}

}  // namespace biloc
