/**
 * Copyright 2026 Loopsampler Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "loopsampler/tomography.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <random>
#include <sstream>

#include "loopsampler/parallel.hpp"

namespace loopsampler {

namespace {

constexpr double kClassicalFloor = 1e-9; // guards 1/C during optimization

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

struct VisibilityParts {
    Complex w;  // U_ki U_lj + U_kj U_li
    double q;   // |w|^2
    double c;   // classical coincidence rate
};

VisibilityParts visibility_parts(const ComplexMatrix& u, const VisibilityRecord& r) {
    VisibilityParts p;
    const Complex a = u(r.out_k, r.in_i), b = u(r.out_l, r.in_j);
    const Complex c2 = u(r.out_k, r.in_j), d = u(r.out_l, r.in_i);
    p.w = a * b + c2 * d;
    p.q = std::norm(p.w);
    p.c = std::norm(a) * std::norm(b) + std::norm(c2) * std::norm(d);
    return p;
}

} // namespace

double hom_visibility(const ComplexMatrix& u, int i, int j, int k, int l) {
    if (i == j || k == l)
        throw DimensionError("hom_visibility: input and output pairs must be distinct modes");
    if (i < 0 || j < 0 || i >= u.cols() || j >= u.cols() || k < 0 || l < 0 || k >= u.rows() ||
        l >= u.rows())
        throw BoundsError("hom_visibility: mode index out of range");
    VisibilityParts p = visibility_parts(u, {i, j, k, l, 0.0});
    if (p.c < 1e-15)
        throw NumericalError("hom_visibility: degenerate pair, classical rate is zero");
    return 1.0 - p.q / p.c;
}

TomographyData synthesize_measurements(const ComplexMatrix& u_true,
                                       const std::vector<double>& input_loss,
                                       const std::vector<double>& output_loss, int pair_budget,
                                       double noise_sigma, std::uint64_t seed) {
    const int m = static_cast<int>(u_true.rows());
    if (u_true.cols() != m) throw DimensionError("synthesize_measurements: u_true must be square");
    auto eff = [](const std::vector<double>& v, int idx) {
        return v.empty() ? 1.0 : v[idx];
    };
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> noise(0.0, 1.0);

    TomographyData data;
    data.noise_level = noise_sigma;
    data.moduli.resize(m, m);
    for (int k = 0; k < m; ++k)
        for (int i = 0; i < m; ++i) {
            double v = eff(output_loss, k) * std::norm(u_true(k, i)) * eff(input_loss, i);
            if (noise_sigma > 0.0) v *= 1.0 + noise_sigma * noise(gen);
            data.moduli(k, i) = std::max(0.0, v);
        }

    // Input pairs drawn without replacement while the budget allows.
    std::vector<std::pair<int, int>> all_pairs;
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j) all_pairs.emplace_back(i, j);
    std::shuffle(all_pairs.begin(), all_pairs.end(), gen);
    const int n_pairs = std::min<int>(pair_budget, static_cast<int>(all_pairs.size()));

    for (int p = 0; p < n_pairs; ++p) {
        auto [i, j] = all_pairs[p];
        for (int k = 0; k < m; ++k)
            for (int l = k + 1; l < m; ++l) {
                VisibilityParts parts = visibility_parts(u_true, {i, j, k, l, 0.0});
                if (parts.c < 1e-15) continue;
                double v = 1.0 - parts.q / parts.c;
                if (noise_sigma > 0.0) v += noise_sigma * noise(gen);
                data.visibilities.push_back({i, j, k, l, v});
            }
    }
    return data;
}

MeshParameterization make_mesh(int dim) {
    if (dim < 1) throw DimensionError("make_mesh: dim must be >= 1");
    MeshParameterization mesh;
    mesh.dim = dim;
    const int target = dim * (dim - 1) / 2;
    int layer = 0;
    while (mesh.gate_count() < target) {
        for (int m = layer % 2; m + 1 < dim && mesh.gate_count() < target; m += 2)
            mesh.gates.emplace_back(m, m + 1);
        ++layer;
    }
    return mesh;
}

ComplexMatrix MeshParameterization::build(const Eigen::VectorXd& params) const {
    if (params.size() < parameter_count())
        throw DimensionError("mesh build: parameter vector too short");
    const int k = gate_count();
    ComplexMatrix u = ComplexMatrix::Identity(dim, dim);
    for (int g = 0; g < k; ++g) {
        const double th = params[g], ph = params[k + g];
        const Complex e = std::polar(1.0, ph);
        const auto [m, n] = gates[g];
        // rows m,n of the running product get mixed
        Eigen::RowVectorXcd rm = u.row(m), rn = u.row(n);
        u.row(m) = e * std::cos(th) * rm - std::sin(th) * rn;
        u.row(n) = e * std::sin(th) * rm + std::cos(th) * rn;
    }
    for (int r = 0; r < dim; ++r) u.row(r) *= std::polar(1.0, params[2 * k + r]);
    return u;
}

namespace {

/// Gradient of the objective with respect to the complex matrix entries, in
/// the convention G_ki = dO/dRe(U_ki) + i dO/dIm(U_ki). For f = |w|^2 with w
/// linear in U with coefficient a, the contribution is 2 w conj(a).
struct EntryGradient {
    ComplexMatrix gamma;
    std::vector<double> d_in;  // dO/ds for input loss params (sigmoid domain)
    std::vector<double> d_out;
};

double objective_entries(const TomographyData& data, const ComplexMatrix& u, double lambda,
                         const std::vector<double>& eta_in, const std::vector<double>& eta_out,
                         bool fit_losses, EntryGradient* grad) {
    const int m = static_cast<int>(u.rows());
    double obj = 0.0;
    if (grad) {
        grad->gamma = ComplexMatrix::Zero(m, m);
        grad->d_in.assign(fit_losses ? m : 0, 0.0);
        grad->d_out.assign(fit_losses ? m : 0, 0.0);
    }

    for (int k = 0; k < m; ++k)
        for (int i = 0; i < m; ++i) {
            const double amp2 = std::norm(u(k, i));
            const double pred = eta_out[k] * amp2 * eta_in[i];
            const double r = pred - data.moduli(k, i);
            obj += r * r;
            if (grad) {
                grad->gamma(k, i) += 4.0 * r * eta_out[k] * eta_in[i] * u(k, i);
                if (fit_losses) {
                    // d eta/ds = eta (1 - eta) for eta = sigmoid(s)
                    grad->d_in[i] += 2.0 * r * eta_out[k] * amp2 * eta_in[i] * (1.0 - eta_in[i]);
                    grad->d_out[k] += 2.0 * r * eta_in[i] * amp2 * eta_out[k] * (1.0 - eta_out[k]);
                }
            }
        }

    for (const VisibilityRecord& rec : data.visibilities) {
        VisibilityParts p = visibility_parts(u, rec);
        const bool clamped = p.c < kClassicalFloor;
        const double c = clamped ? kClassicalFloor : p.c;
        const double v = 1.0 - p.q / c;
        const double r = v - rec.value;
        obj += lambda * r * r;
        if (!grad) continue;

        const Complex a = u(rec.out_k, rec.in_i), b = u(rec.out_l, rec.in_j);
        const Complex c2 = u(rec.out_k, rec.in_j), d = u(rec.out_l, rec.in_i);
        const double fq = -2.0 * lambda * r / c;        // dO/dQ
        const double fc = clamped ? 0.0 : 2.0 * lambda * r * p.q / (c * c); // dO/dC
        // Q = |w|^2 contributions
        grad->gamma(rec.out_k, rec.in_i) += fq * 2.0 * p.w * std::conj(b);
        grad->gamma(rec.out_l, rec.in_j) += fq * 2.0 * p.w * std::conj(a);
        grad->gamma(rec.out_k, rec.in_j) += fq * 2.0 * p.w * std::conj(d);
        grad->gamma(rec.out_l, rec.in_i) += fq * 2.0 * p.w * std::conj(c2);
        // C contributions
        grad->gamma(rec.out_k, rec.in_i) += fc * 2.0 * std::norm(b) * a;
        grad->gamma(rec.out_l, rec.in_j) += fc * 2.0 * std::norm(a) * b;
        grad->gamma(rec.out_k, rec.in_j) += fc * 2.0 * std::norm(d) * c2;
        grad->gamma(rec.out_l, rec.in_i) += fc * 2.0 * std::norm(c2) * d;
    }
    return obj;
}

} // namespace

double tomography_objective(const TomographyData& data, const MeshParameterization& mesh,
                            const Eigen::VectorXd& params, double lambda, bool fit_losses,
                            Eigen::VectorXd* grad) {
    const int m = mesh.dim;
    const int k = mesh.gate_count();
    const int base = mesh.parameter_count();
    const int expect = base + (fit_losses ? 2 * m : 0);
    if (params.size() != expect)
        throw DimensionError("tomography_objective: expected " + std::to_string(expect) +
                             " parameters, got " + std::to_string(params.size()));

    std::vector<double> eta_in(m, 1.0), eta_out(m, 1.0);
    if (fit_losses) {
        for (int i = 0; i < m; ++i) {
            eta_in[i] = sigmoid(params[base + i]);
            eta_out[i] = sigmoid(params[base + m + i]);
        }
    }

    if (!grad) {
        ComplexMatrix u = mesh.build(params);
        return objective_entries(data, u, lambda, eta_in, eta_out, fit_losses, nullptr);
    }

    // Forward pass with stored prefixes: prefix[g] = G_g ... G_1.
    std::vector<ComplexMatrix> prefix(k + 1);
    prefix[0] = ComplexMatrix::Identity(m, m);
    for (int g = 0; g < k; ++g) {
        const double th = params[g], ph = params[k + g];
        const Complex e = std::polar(1.0, ph);
        const auto [a, b] = mesh.gates[g];
        prefix[g + 1] = prefix[g];
        Eigen::RowVectorXcd ra = prefix[g].row(a), rb = prefix[g].row(b);
        prefix[g + 1].row(a) = e * std::cos(th) * ra - std::sin(th) * rb;
        prefix[g + 1].row(b) = e * std::sin(th) * ra + std::cos(th) * rb;
    }
    ComplexMatrix u = prefix[k];
    Eigen::VectorXcd dphase(m);
    for (int r = 0; r < m; ++r) {
        dphase[r] = std::polar(1.0, params[2 * k + r]);
        u.row(r) *= dphase[r];
    }

    EntryGradient eg;
    double obj = objective_entries(data, u, lambda, eta_in, eta_out, fit_losses, &eg);

    grad->setZero(expect);
    // alpha gradient: dU_rs/dalpha_r = i U_rs
    for (int r = 0; r < m; ++r) {
        double acc = 0.0;
        for (int s = 0; s < m; ++s) acc += -std::imag(std::conj(eg.gamma(r, s)) * u(r, s));
        (*grad)[2 * k + r] = acc;
    }
    // Gate gradients via suffix products: suffix = D G_K ... G_{g+1}.
    ComplexMatrix suffix = ComplexMatrix::Identity(m, m);
    for (int r = 0; r < m; ++r) suffix.row(r) *= dphase[r];
    for (int g = k - 1; g >= 0; --g) {
        const double th = params[g], ph = params[k + g];
        const Complex e = std::polar(1.0, ph);
        const auto [a, b] = mesh.gates[g];
        // E = suffix^T conj(gamma) prefix^T restricted to the gate block;
        // dO/dp = Re sum_pq dg_pq E_pq.
        const ComplexMatrix& pre = prefix[g];
        ComplexMatrix gcol(m, 2), prow(2, m);
        gcol.col(0) = suffix.col(a);
        gcol.col(1) = suffix.col(b);
        prow.row(0) = pre.row(a);
        prow.row(1) = pre.row(b);
        ComplexMatrix e2 = gcol.transpose() * eg.gamma.conjugate() * prow.transpose();
        const double ct = std::cos(th), st = std::sin(th);
        // dg/dtheta and dg/dphi of [[e ct, -st],[e st, ct]]
        Complex dgt[2][2] = {{-e * st, Complex(-ct, 0.0)}, {e * ct, Complex(-st, 0.0)}};
        Complex dgp[2][2] = {{Complex(0, 1) * e * ct, Complex(0.0, 0.0)},
                             {Complex(0, 1) * e * st, Complex(0.0, 0.0)}};
        double dth = 0.0, dph = 0.0;
        for (int p = 0; p < 2; ++p)
            for (int q = 0; q < 2; ++q) {
                dth += std::real(dgt[p][q] * e2(p, q));
                dph += std::real(dgp[p][q] * e2(p, q));
            }
        (*grad)[g] = dth;
        (*grad)[k + g] = dph;
        // Fold G_g into the suffix for the next (earlier) gate.
        ComplexMatrix next = suffix;
        next.col(a) = e * ct * suffix.col(a) + e * st * suffix.col(b);
        next.col(b) = -st * suffix.col(a) + ct * suffix.col(b);
        suffix = std::move(next);
    }
    if (fit_losses) {
        for (int i = 0; i < m; ++i) {
            (*grad)[base + i] = eg.d_in[i];
            (*grad)[base + m + i] = eg.d_out[i];
        }
    }
    return obj;
}

ComplexMatrix gauge_fix(const ComplexMatrix& u) {
    ComplexMatrix out = u;
    const int m = static_cast<int>(u.rows());
    for (int j = 0; j < u.cols(); ++j) {
        Complex v = out(0, j);
        if (std::abs(v) > 0) out.col(j) *= std::conj(v) / std::abs(v);
    }
    for (int r = 1; r < m; ++r) {
        Complex v = out(r, 0);
        if (std::abs(v) > 0) out.row(r) *= std::conj(v) / std::abs(v);
    }
    return out;
}

ReconstructionResult reconstruct(const TomographyData& data, const ReconstructConfig& config) {
    const int m = static_cast<int>(data.moduli.rows());
    if (m == 0 || data.moduli.cols() != m)
        throw DimensionError("reconstruct: moduli matrix must be square and non-empty");
    MeshParameterization mesh = make_mesh(m);
    const int nparams = mesh.parameter_count() + (config.fit_losses ? 2 * m : 0);

    auto eval = [&](const Eigen::VectorXd& x, Eigen::VectorXd* g) {
        if (g && !config.analytic_gradient) {
            // central finite differences
            g->setZero(x.size());
            const double h = 1e-6;
            Eigen::VectorXd xp = x;
            for (Eigen::Index i = 0; i < x.size(); ++i) {
                xp[i] = x[i] + h;
                double fp = tomography_objective(data, mesh, xp, config.lambda, config.fit_losses,
                                                 nullptr);
                xp[i] = x[i] - h;
                double fm = tomography_objective(data, mesh, xp, config.lambda, config.fit_losses,
                                                 nullptr);
                xp[i] = x[i];
                (*g)[i] = (fp - fm) / (2.0 * h);
            }
            return tomography_objective(data, mesh, x, config.lambda, config.fit_losses, nullptr);
        }
        return tomography_objective(data, mesh, x, config.lambda, config.fit_losses, g);
    };

    struct Run {
        Eigen::VectorXd best_x;
        double best_obj;
        double grad_norm;
    };
    std::vector<Run> runs(config.restarts);

    parallel_for_chunks(config.restarts, [&](std::size_t begin, std::size_t end) {
        for (std::size_t rstart = begin; rstart < end; ++rstart) {
            std::mt19937_64 gen(config.seed * 7919 + rstart);
            std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
            std::uniform_real_distribution<double> half(0.0, std::numbers::pi / 2.0);
            Eigen::VectorXd x(nparams);
            const int k = mesh.gate_count();
            for (int g = 0; g < k; ++g) x[g] = half(gen);
            for (int g = 0; g < k; ++g) x[k + g] = angle(gen);
            for (int r = 0; r < m; ++r) x[2 * k + r] = angle(gen);
            for (int i = mesh.parameter_count(); i < nparams; ++i) x[i] = 2.0; // eta ~ 0.88

            // Adam with step decay
            Eigen::VectorXd mom = Eigen::VectorXd::Zero(nparams);
            Eigen::VectorXd vel = Eigen::VectorXd::Zero(nparams);
            Eigen::VectorXd grad(nparams);
            const double b1 = 0.9, b2 = 0.999, eps = 1e-8;
            double lr = config.learning_rate;
            double best_obj = std::numeric_limits<double>::infinity();
            Eigen::VectorXd best_x = x;
            double gnorm = 0.0;
            for (int it = 1; it <= config.max_iterations; ++it) {
                double obj = eval(x, &grad);
                if (obj < best_obj) {
                    best_obj = obj;
                    best_x = x;
                }
                if (it == config.max_iterations * 6 / 10 || it == config.max_iterations * 85 / 100)
                    lr *= 0.2;
                mom = b1 * mom + (1.0 - b1) * grad;
                vel = b2 * vel + (1.0 - b2) * grad.cwiseProduct(grad);
                double c1 = 1.0 - std::pow(b1, it), c2 = 1.0 - std::pow(b2, it);
                for (int i = 0; i < nparams; ++i)
                    x[i] -= lr * (mom[i] / c1) / (std::sqrt(vel[i] / c2) + eps);
                gnorm = grad.cwiseAbs().maxCoeff();
            }
            double obj = eval(best_x, &grad);
            runs[rstart] = {best_x, obj, grad.cwiseAbs().maxCoeff()};
            (void)gnorm;
        }
    });

    const Run* best = &runs[0];
    for (const Run& r : runs)
        if (r.best_obj < best->best_obj) best = &r;

    ReconstructionResult result;
    ComplexMatrix u = mesh.build(best->best_x);
    result.unitary_estimate = gauge_fix(u);
    result.objective = best->best_obj;
    result.converged = best->grad_norm < 1e-4 * (1.0 + best->best_obj);
    result.input_loss.assign(m, 1.0);
    result.output_loss.assign(m, 1.0);
    if (config.fit_losses) {
        const int base = mesh.parameter_count();
        for (int i = 0; i < m; ++i) {
            result.input_loss[i] = sigmoid(best->best_x[base + i]);
            result.output_loss[i] = sigmoid(best->best_x[base + m + i]);
        }
    }

    // Residual metrics on the fitted data
    double mae = 0.0;
    std::size_t nvis = 0;
    for (const VisibilityRecord& rec : data.visibilities) {
        VisibilityParts p = visibility_parts(u, rec);
        if (p.c < kClassicalFloor) continue;
        mae += std::abs(1.0 - p.q / p.c - rec.value);
        ++nvis;
    }
    result.visibility_mae = nvis ? mae / nvis : 0.0;

    RealMatrix mod_pred(m, m), mod_meas(m, m);
    for (int kk = 0; kk < m; ++kk)
        for (int i = 0; i < m; ++i) {
            mod_pred(kk, i) = std::sqrt(result.output_loss[kk] * std::norm(u(kk, i)) *
                                        result.input_loss[i]);
            mod_meas(kk, i) = std::sqrt(std::max(0.0, data.moduli(kk, i)));
        }
    result.moduli_fidelity =
        matrix_fidelity(mod_pred.cast<Complex>(), mod_meas.cast<Complex>());
    return result;
}

EvaluationMetrics evaluate_reconstruction(const ReconstructionResult& result,
                                          const ComplexMatrix& u_true,
                                          const std::vector<VisibilityRecord>& holdout) {
    const ComplexMatrix& u = result.unitary_estimate;
    if (u.rows() != u_true.rows() || u.cols() != u_true.cols())
        throw DimensionError("evaluate_reconstruction: shape mismatch");

    EvaluationMetrics metrics;
    metrics.moduli_fidelity =
        matrix_fidelity(u.cwiseAbs().cast<Complex>(), u_true.cwiseAbs().cast<Complex>());

    // Visibilities and moduli cannot distinguish U from conj(U); report the
    // better of the two after gauge fixing.
    ComplexMatrix gt = gauge_fix(u_true);
    double f1 = matrix_fidelity(gauge_fix(u), gt);
    double f2 = matrix_fidelity(gauge_fix(u.conjugate()), gt);
    metrics.complex_fidelity = std::max(f1, f2);

    double mae = 0.0;
    std::size_t n = 0;
    for (const VisibilityRecord& rec : holdout) {
        VisibilityParts p = visibility_parts(u, rec);
        if (p.c < kClassicalFloor) continue;
        mae += std::abs(1.0 - p.q / p.c - rec.value);
        ++n;
    }
    metrics.visibility_mae = n ? mae / n : 0.0;
    return metrics;
}

void write_visibilities(std::ostream& os, const std::vector<VisibilityRecord>& records) {
    os << std::setprecision(17);
    for (const VisibilityRecord& r : records)
        os << r.in_i << "," << r.in_j << "," << r.out_k << "," << r.out_l << "," << r.value << "\n";
}

void write_visibilities_file(const std::string& path,
                             const std::vector<VisibilityRecord>& records) {
    std::ofstream os(path);
    if (!os) throw ConfigError("cannot open for writing: " + path);
    write_visibilities(os, records);
}

std::vector<VisibilityRecord> read_visibilities(std::istream& is) {
    std::vector<VisibilityRecord> records;
    std::string line;
    while (std::getline(is, line)) {
        std::size_t pos = line.find_first_not_of(" \t\r");
        if (pos == std::string::npos || line[pos] == '#') continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream row(line);
        VisibilityRecord r;
        if (!(row >> r.in_i >> r.in_j >> r.out_k >> r.out_l >> r.value))
            throw ConfigError("visibility file: bad line: " + line);
        records.push_back(r);
    }
    return records;
}

std::vector<VisibilityRecord> read_visibilities_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open visibility file: " + path);
    return read_visibilities(is);
}

void write_reconstruction_file(const std::string& path, const ReconstructionResult& result,
                               const std::vector<std::string>& extra_headers) {
    std::ofstream os(path);
    if (!os) throw ConfigError("cannot open for writing: " + path);
    for (const std::string& h : extra_headers) os << "# " << h << "\n";
    os << std::setprecision(17);
    os << "# objective=" << result.objective << "\n";
    os << "# visibility_mae=" << result.visibility_mae << "\n";
    os << "# moduli_fidelity=" << result.moduli_fidelity << "\n";
    os << "# converged=" << (result.converged ? 1 : 0) << "\n";
    os << "# input_loss=";
    for (double v : result.input_loss) os << " " << v;
    os << "\n# output_loss=";
    for (double v : result.output_loss) os << " " << v;
    os << "\n";
    write_matrix(os, result.unitary_estimate);
}

} // namespace loopsampler
