#include "cvteleport.h"

#include <algorithm>
#include <cstring>
#include <memory>
#include <string>

#include "core/fock_oracle.hpp"
#include "core/ndps.hpp"
#include "core/numerics.hpp"
#include "core/resources.hpp"
#include "core/teleport.hpp"

namespace {

thread_local std::string g_last_error;

template <typename Fn>
cvt_status guarded(Fn&& fn) {
    try {
        fn();
        return CVT_OK;
    } catch (const std::invalid_argument& e) {
        g_last_error = e.what();
        return CVT_ERROR_INVALID_ARGUMENT;
    } catch (const cvt::ConvergenceError& e) {
        g_last_error = e.what();
        return CVT_ERROR_CONVERGENCE;
    } catch (const cvt::TruncationError& e) {
        g_last_error = e.what();
        return CVT_ERROR_TRUNCATION;
    } catch (const cvt::NonFiniteError& e) {
        g_last_error = e.what();
        return CVT_ERROR_NONFINITE;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return CVT_ERROR_INTERNAL;
    } catch (...) {
        g_last_error = "unknown error";
        return CVT_ERROR_INTERNAL;
    }
}

cvt_status require(bool ok, const char* message) {
    if (ok) return CVT_OK;
    g_last_error = message;
    return CVT_ERROR_INVALID_ARGUMENT;
}

cvt::ResourceKind to_kind(cvt_resource_kind kind) {
    switch (kind) {
        case CVT_RESOURCE_STANDARD: return cvt::ResourceKind::Standard;
        case CVT_RESOURCE_PHOTON_SUBTRACTED: return cvt::ResourceKind::PhotonSubtracted;
        case CVT_RESOURCE_PHOTON_ADDED: return cvt::ResourceKind::PhotonAdded;
    }
    throw std::invalid_argument("unknown resource kind");
}

cvt_resource_kind from_kind(cvt::ResourceKind kind) {
    switch (kind) {
        case cvt::ResourceKind::Standard: return CVT_RESOURCE_STANDARD;
        case cvt::ResourceKind::PhotonSubtracted: return CVT_RESOURCE_PHOTON_SUBTRACTED;
        case cvt::ResourceKind::PhotonAdded: return CVT_RESOURCE_PHOTON_ADDED;
    }
    return CVT_RESOURCE_STANDARD;
}

cvt::Amplitude to_amp(cvt_complex z) { return {z.re, z.im}; }

cvt::InputState to_input(const cvt_input_state& s) {
    if (s.type == CVT_INPUT_COHERENT) return cvt::Coherent{to_amp(s.alpha)};
    if (s.type == CVT_INPUT_CAT)
        return cvt::CatState{to_amp(s.alpha),
                             s.parity == CVT_PARITY_ODD ? cvt::Parity::Odd : cvt::Parity::Even};
    throw std::invalid_argument("unknown input state type");
}

cvt::QuadratureSpec resolve_quad(const cvt::SchmidtResource& res, const cvt::InputState& input,
                                 const cvt_quad_options* quad) {
    cvt::QuadratureSpec spec = cvt::default_quadrature(res, input);
    if (quad) {
        if (quad->order > 0) spec.order = quad->order;
        if (quad->width > 0.0) spec.width = quad->width;
        spec.refine = quad->refine != 0;
    }
    return spec;
}

}  // namespace

struct cvt_resource {
    cvt::SchmidtResource res;
    cvt::TruncationPolicy policy;
};

extern "C" {

const char* cvt_version(void) { return "1.0.0"; }

const char* cvt_last_error_message(void) { return g_last_error.c_str(); }

cvt_status cvt_resource_create(cvt_resource_kind kind, double lambda, double epsilon,
                               int hard_cap, cvt_resource** out) {
    if (cvt_status s = require(out != nullptr, "out handle is null")) return s;
    *out = nullptr;
    return guarded([&] {
        cvt::TruncationPolicy policy;
        if (epsilon > 0.0) policy.epsilon = epsilon;
        if (hard_cap > 0) policy.hard_cap = hard_cap;
        auto handle = std::make_unique<cvt_resource>();
        handle->policy = policy;
        handle->res = cvt::build_resource(to_kind(kind), lambda, policy);
        *out = handle.release();
    });
}

void cvt_resource_destroy(cvt_resource* res) { delete res; }

cvt_status cvt_resource_info(const cvt_resource* res, cvt_resource_kind* kind, double* lambda,
                             int* offset, size_t* n_coeffs, double* tail_mass) {
    if (cvt_status s = require(res != nullptr, "resource handle is null")) return s;
    if (kind) *kind = from_kind(res->res.kind);
    if (lambda) *lambda = res->res.lambda;
    if (offset) *offset = res->res.offset;
    if (n_coeffs) *n_coeffs = res->res.coeffs.size();
    if (tail_mass) *tail_mass = res->res.tail_mass;
    return CVT_OK;
}

cvt_status cvt_resource_coeffs(const cvt_resource* res, double* out, size_t capacity,
                               size_t* written) {
    if (cvt_status s = require(res && out, "null argument")) return s;
    const size_t n = std::min(capacity, res->res.coeffs.size());
    std::memcpy(out, res->res.coeffs.data(), n * sizeof(double));
    if (written) *written = n;
    return CVT_OK;
}

cvt_status cvt_resource_photon_distribution(const cvt_resource* res, double* out, size_t capacity,
                                            size_t* written) {
    if (cvt_status s = require(res && out, "null argument")) return s;
    return guarded([&] {
        const auto dist = cvt::photon_number_distribution(res->res);
        const size_t n = std::min(capacity, dist.size());
        for (size_t i = 0; i < n; ++i) out[i] = dist[i].second;
        if (written) *written = n;
    });
}

cvt_status cvt_resource_entropy(const cvt_resource* res, int base2, double* out) {
    if (cvt_status s = require(res && out, "null argument")) return s;
    return guarded([&] {
        *out = cvt::von_neumann_entropy(
            res->res, base2 ? cvt::EntropyBase::Bit : cvt::EntropyBase::Nat);
    });
}

cvt_status cvt_resource_phase_density(const cvt_resource* res, double phi, double* out) {
    if (cvt_status s = require(res && out, "null argument")) return s;
    return guarded([&] { *out = cvt::joint_phase_density(res->res, phi); });
}

cvt_status cvt_herald_probability(double theta, double lambda, double* out,
                                  int* perturbative_ok) {
    if (cvt_status s = require(out != nullptr, "null argument")) return s;
    return guarded([&] {
        const cvt::HeraldProbability p = cvt::herald_probability(theta, lambda);
        *out = p.value;
        if (perturbative_ok) *perturbative_ok = p.perturbative_ok ? 1 : 0;
    });
}

cvt_status cvt_teleport_point(const cvt_resource* res, const cvt_input_state* input,
                              cvt_complex beta, double gain, const cvt_input_state* comparison,
                              cvt_point* out) {
    if (cvt_status s = require(res && input && comparison && out, "null argument")) return s;
    return guarded([&] {
        cvt::TeleportConfig cfg;
        cfg.gain = gain;
        cfg.resource = res->res;
        cfg.policy = res->policy;
        cfg.comparison = to_input(*comparison);
        cvt::TeleportPoint pt;
        if (input->type == CVT_INPUT_COHERENT) {
            pt = cvt::coherent_point(cfg, to_amp(input->alpha), to_amp(beta));
        } else {
            pt = cvt::cat_point(cfg, to_amp(input->alpha),
                                input->parity == CVT_PARITY_ODD ? cvt::Parity::Odd
                                                                : cvt::Parity::Even,
                                to_amp(beta));
        }
        out->beta = beta;
        out->prob_density = pt.prob_density;
        out->fidelity = pt.fidelity;
        out->numeric_route = pt.method == cvt::PointMethod::Numeric ? 1 : 0;
    });
}

cvt_status cvt_average_fidelity(const cvt_resource* res, const cvt_input_state* input,
                                double gain, const cvt_input_state* comparison,
                                const cvt_quad_options* quad, double* fbar, double* err) {
    if (cvt_status s = require(res && input && comparison && fbar, "null argument")) return s;
    return guarded([&] {
        cvt::TeleportConfig cfg;
        cfg.gain = gain;
        cfg.resource = res->res;
        cfg.policy = res->policy;
        cfg.comparison = to_input(*comparison);
        const cvt::InputState in = to_input(*input);
        const auto spec = resolve_quad(res->res, in, quad);
        const cvt::AverageFidelity af = cvt::average_fidelity(cfg, in, spec);
        *fbar = af.fbar;
        if (err) *err = af.err;
    });
}

cvt_status cvt_gain_scan(const cvt_resource* res, const cvt_input_state* input,
                         const double* gains, size_t n_gains, const cvt_complex* gammas,
                         size_t n_gammas, const cvt_quad_options* quad, double* fbar, double* err,
                         size_t* argmax) {
    if (cvt_status s =
            require(res && input && gains && gammas && fbar && n_gains > 0 && n_gammas > 0,
                    "null or empty argument"))
        return s;
    return guarded([&] {
        const cvt::InputState in = to_input(*input);
        std::vector<double> gain_grid(gains, gains + n_gains);
        std::vector<cvt::Amplitude> gamma_grid;
        gamma_grid.reserve(n_gammas);
        for (size_t i = 0; i < n_gammas; ++i) gamma_grid.push_back(to_amp(gammas[i]));
        const auto spec = resolve_quad(res->res, in, quad);
        const cvt::GainScanResult scan =
            cvt::gain_gamma_scan(in, res->res, gain_grid, gamma_grid, spec);
        for (size_t i = 0; i < scan.rows.size(); ++i) {
            fbar[i] = scan.rows[i].fbar;
            if (err) err[i] = scan.rows[i].err;
        }
        if (argmax) *argmax = scan.argmax;
    });
}

cvt_status cvt_boundary_scan(cvt_complex alpha, const double* lambdas, size_t n,
                             const cvt_quad_options* quad, double* fbar_standard,
                             double* fbar_subtracted, cvt_boundary_summary* summary) {
    if (cvt_status s = require(lambdas && fbar_standard && fbar_subtracted && n > 0,
                               "null or empty argument"))
        return s;
    return guarded([&] {
        const std::vector<double> grid(lambdas, lambdas + n);
        const int order = (quad && quad->order > 0) ? quad->order : 48;
        const bool refine = quad ? quad->refine != 0 : true;
        const cvt::BoundaryScanResult scan = cvt::boundary_scan(to_amp(alpha), grid, order, refine);
        for (size_t i = 0; i < n; ++i) {
            fbar_standard[i] = scan.fbar_standard[i];
            fbar_subtracted[i] = scan.fbar_subtracted[i];
        }
        if (summary) {
            *summary = {};
            summary->has_crossings =
                scan.crossing_standard && scan.crossing_subtracted ? 1 : 0;
            if (scan.crossing_standard) summary->crossing_standard = *scan.crossing_standard;
            if (scan.crossing_subtracted) summary->crossing_subtracted = *scan.crossing_subtracted;
            summary->has_window = scan.quantum_window ? 1 : 0;
            if (scan.quantum_window) {
                summary->window_lo = scan.quantum_window->first;
                summary->window_hi = scan.quantum_window->second;
            }
            summary->gap_argmax_lambda = scan.gap_argmax_lambda;
            summary->gap_max = scan.gap_max;
            summary->gap_relative_improvement = scan.gap_relative_improvement;
        }
    });
}

cvt_status cvt_input_coeffs(const cvt_input_state* input, cvt_complex* out, size_t capacity) {
    if (cvt_status s = require(input && out && capacity > 0, "null or empty argument")) return s;
    return guarded([&] {
        const auto coeffs =
            cvt::fock_coefficients(to_input(*input), static_cast<int>(capacity));
        for (size_t i = 0; i < capacity; ++i) out[i] = {coeffs[i].real(), coeffs[i].imag()};
    });
}

cvt_status cvt_ndps_point(const cvt_resource* res, const cvt_input_state* input, int k,
                          cvt_ndps_result* out, cvt_complex* out_coeffs, size_t capacity,
                          size_t* written) {
    if (cvt_status s = require(res && input && out, "null argument")) return s;
    return guarded([&] {
        const cvt::InputState in = to_input(*input);
        const int levels =
            std::max(cvt::input_truncation(in, res->policy.epsilon),
                     static_cast<int>(res->res.coeffs.size()) + res->res.offset + std::max(k, 0));
        const auto c = cvt::input_coeffs(in, levels);
        const cvt::NdpsPoint pt = cvt::ndps_point(res->res, c, k);
        out->k = pt.k;
        out->prob = pt.prob;
        out->fidelity_defined = pt.fidelity.has_value() ? 1 : 0;
        out->fidelity = pt.fidelity.value_or(0.0);
        if (out_coeffs) {
            const size_t n = std::min(capacity, pt.out_coeffs.size());
            for (size_t i = 0; i < n; ++i)
                out_coeffs[i] = {pt.out_coeffs[i].real(), pt.out_coeffs[i].imag()};
            if (written) *written = n;
        } else if (written) {
            *written = 0;
        }
    });
}

cvt_status cvt_oracle_point(const cvt_resource* res, const cvt_input_state* input,
                            cvt_complex beta, double gain, const cvt_input_state* comparison,
                            cvt_point* out, int* fidelity_defined) {
    if (cvt_status s = require(res && input && comparison && out, "null argument")) return s;
    return guarded([&] {
        const cvt::OraclePoint pt = cvt::oracle_point(res->res, to_input(*input), to_amp(beta),
                                                      gain, to_input(*comparison));
        out->beta = beta;
        out->prob_density = pt.prob_density;
        out->fidelity = pt.fidelity.value_or(0.0);
        out->numeric_route = 1;
        if (fidelity_defined) *fidelity_defined = pt.fidelity.has_value() ? 1 : 0;
    });
}

cvt_status cvt_run_equivalence_suite(int n_cases, cvt_equivalence_summary* out) {
    if (cvt_status s = require(out != nullptr, "null argument")) return s;
    return guarded([&] {
        const cvt::EquivalenceReport report = cvt::run_equivalence_suite(n_cases);
        out->cases = static_cast<int>(report.cases.size());
        out->max_abs_dp = report.max_dp;
        out->max_abs_df = report.max_df;
    });
}

cvt_status cvt_run_equivalence_cases(int n_cases, cvt_equivalence_case_info* out,
                                     size_t capacity, size_t* written,
                                     cvt_equivalence_summary* summary) {
    if (cvt_status s = require(out != nullptr, "null argument")) return s;
    return guarded([&] {
        const cvt::EquivalenceReport report = cvt::run_equivalence_suite(n_cases);
        const size_t n = std::min(capacity, report.cases.size());
        for (size_t i = 0; i < n; ++i) {
            const cvt::EquivalenceCase& ec = report.cases[i];
            out[i].kind = from_kind(ec.kind);
            out[i].lambda = ec.lambda;
            out[i].gain = ec.gain;
            if (std::holds_alternative<cvt::Coherent>(ec.input)) {
                out[i].family = 0;
            } else {
                out[i].family =
                    std::get<cvt::CatState>(ec.input).parity == cvt::Parity::Even ? 1 : 2;
            }
            out[i].beta = {ec.beta.real(), ec.beta.imag()};
            out[i].dp = ec.dp;
            out[i].df = ec.df;
        }
        if (written) *written = n;
        if (summary) {
            summary->cases = static_cast<int>(report.cases.size());
            summary->max_abs_dp = report.max_dp;
            summary->max_abs_df = report.max_df;
        }
    });
}

}  // extern "C"
