#include "atmos/kernels.hpp"

#include <cmath>
#include <numbers>
#include <vector>

namespace atmos::kernels {
namespace {

using std::numbers::pi;

std::vector<double> cos_table(int n) {
    std::vector<double> table(2 * static_cast<std::size_t>(n));
    for (int m = 0; m < 2 * n; ++m) table[m] = std::cos(pi * m / n);
    return table;
}

}  // namespace

Eigen::VectorXcd forward_transform(const Eigen::Ref<const Eigen::VectorXcd>& samples) {
    const int n = static_cast<int>(samples.size()) - 1;
    const auto table = cos_table(n);
    Eigen::VectorXcd out(n + 1);
    const long period = 2L * n;

#pragma omp parallel for schedule(static)
    for (int k = 0; k <= n; ++k) {
        // Trapezoid in theta: end samples carry half weight.
        cplx acc = 0.5 * (samples[0] * table[(static_cast<long>(k) * n) % period] + samples[n]);
        for (int j = 1; j < n; ++j) {
            acc += samples[j] * table[(static_cast<long>(k) * (n - j)) % period];
        }
        const double scale = (k == 0 || k == n) ? 1.0 / n : 2.0 / n;
        out[k] = scale * acc;
    }
    return out;
}

Eigen::MatrixXcd tau_product_matrix(const Eigen::Ref<const Eigen::VectorXcd>& v) {
    const Eigen::Index n = v.size() - 1;
    Eigen::MatrixXcd c(n + 1, n + 1);

#pragma omp parallel for schedule(static)
    for (Eigen::Index m = 0; m <= n; ++m) {
        for (Eigen::Index k = 0; k <= n; ++k) {
            cplx s = 0.0;
            if (m <= k) s += v[k - m];
            if (m >= k) s += v[m - k];
            if (k >= 1 && m + k <= n) s += v[m + k];
            c(k, m) = 0.5 * s;
        }
    }
    return c;
}

Eigen::MatrixXcd tau_derivative_left(const Eigen::Ref<const Eigen::MatrixXcd>& x) {
    const Eigen::Index n = x.rows() - 1;
    Eigen::MatrixXcd out(x.rows(), x.cols());

#pragma omp parallel for schedule(static)
    for (Eigen::Index col = 0; col < x.cols(); ++col) {
        cplx suffix[2] = {0.0, 0.0};
        for (Eigen::Index k = n; k >= 0; --k) {
            const double ck = (k == 0) ? 2.0 : 1.0;
            out(k, col) = (2.0 / ck) * suffix[(k + 1) % 2];
            suffix[k % 2] += static_cast<double>(k) * x(k, col);
        }
    }
    return out;
}

Eigen::MatrixXcd tau_derivative_right(const Eigen::Ref<const Eigen::MatrixXcd>& x) {
    const Eigen::Index rows = x.rows();
    const Eigen::Index n = x.cols() - 1;
    Eigen::MatrixXcd out(rows, n + 1);
    constexpr Eigen::Index block = 64;
    const Eigen::Index nblocks = (rows + block - 1) / block;

#pragma omp parallel for schedule(static)
    for (Eigen::Index b = 0; b < nblocks; ++b) {
        const Eigen::Index r0 = b * block;
        const Eigen::Index r1 = std::min(rows, r0 + block);
        std::vector<cplx> prefix(2 * static_cast<std::size_t>(r1 - r0), 0.0);
        for (Eigen::Index k = 0; k <= n; ++k) {
            const double ck = (k == 0) ? 2.0 : 1.0;
            const auto par_other = static_cast<std::size_t>((k + 1) % 2);
            const auto par_self = static_cast<std::size_t>(k % 2);
            for (Eigen::Index i = r0; i < r1; ++i) {
                const auto li = static_cast<std::size_t>(i - r0);
                out(i, k) = static_cast<double>(k) * prefix[2 * li + par_other];
                prefix[2 * li + par_self] += (2.0 / ck) * x(i, k);
            }
        }
    }
    return out;
}

Eigen::MatrixXcd evaluate_series(const Eigen::Ref<const Eigen::MatrixXcd>& coeffs,
                                 std::span<const double> x) {
    const auto npts = static_cast<Eigen::Index>(x.size());
    const Eigen::Index nser = coeffs.cols();
    const Eigen::Index len = coeffs.rows();
    Eigen::MatrixXcd out(npts, nser);

#pragma omp parallel for schedule(static)
    for (Eigen::Index p = 0; p < npts; ++p) {
        const double two_x = 2.0 * x[p];
        for (Eigen::Index s = 0; s < nser; ++s) {
            cplx b1 = 0.0;
            cplx b2 = 0.0;
            for (Eigen::Index k = len - 1; k >= 1; --k) {
                const cplx b0 = coeffs(k, s) + two_x * b1 - b2;
                b2 = b1;
                b1 = b0;
            }
            out(p, s) = coeffs(0, s) + x[p] * b1 - b2;
        }
    }
    return out;
}

Eigen::MatrixXcd evaluate_nodal(const Eigen::Ref<const Eigen::MatrixXcd>& samples,
                                std::span<const double> x) {
    const Eigen::Index n = samples.rows() - 1;
    const auto npts = static_cast<Eigen::Index>(x.size());
    const Eigen::Index nser = samples.cols();
    const double half_step = pi / (2.0 * n);
    std::vector<double> nodes(static_cast<std::size_t>(n) + 1);
    std::vector<double> weights(nodes.size());
    for (Eigen::Index j = 0; j <= n; ++j) {
        nodes[j] = std::sin(static_cast<double>(2 * j - n) * half_step);
        weights[j] = ((j % 2 == 0) ? 1.0 : -1.0) * ((j == 0 || j == n) ? 0.5 : 1.0);
    }
    Eigen::MatrixXcd out(npts, nser);

#pragma omp parallel for schedule(static)
    for (Eigen::Index p = 0; p < npts; ++p) {
        std::vector<double> t(nodes.size());
        Eigen::Index exact = -1;
        double denom = 0.0;
        for (Eigen::Index j = 0; j <= n; ++j) {
            const double dx = x[p] - nodes[j];
            if (dx == 0.0) {
                exact = j;
                break;
            }
            t[j] = weights[j] / dx;
            denom += t[j];
        }
        for (Eigen::Index s = 0; s < nser; ++s) {
            if (exact >= 0) {
                out(p, s) = samples(exact, s);
                continue;
            }
            cplx numer = 0.0;
            for (Eigen::Index j = 0; j <= n; ++j) numer += t[j] * samples(j, s);
            out(p, s) = numer / denom;
        }
    }
    return out;
}

Eigen::MatrixXcd synthesize_field(const Eigen::Ref<const Eigen::VectorXcd>& kr,
                                  const Eigen::Ref<const Eigen::VectorXcd>& src,
                                  const Eigen::Ref<const Eigen::MatrixXcd>& recv,
                                  std::span<const double> ranges) {
    const Eigen::Index nmodes = kr.size();
    const Eigen::Index nz = recv.rows();
    const auto nr = static_cast<Eigen::Index>(ranges.size());
    const double prefactor = std::sqrt(2.0 * pi);
    const Eigen::MatrixXcd recv_t = recv.transpose();  // modes x heights, contiguous per height
    const cplx i_unit(0.0, 1.0);
    Eigen::MatrixXcd out(nr, nz);

#pragma omp parallel for schedule(static)
    for (Eigen::Index r = 0; r < nr; ++r) {
        Eigen::VectorXcd weight(nmodes);
        for (Eigen::Index m = 0; m < nmodes; ++m) {
            weight[m] = src[m] * std::exp(i_unit * kr[m] * ranges[r]) / std::sqrt(kr[m] * ranges[r]);
        }
        for (Eigen::Index z = 0; z < nz; ++z) {
            cplx acc = 0.0;
            for (Eigen::Index m = 0; m < nmodes; ++m) acc += weight[m] * recv_t(m, z);
            out(r, z) = prefactor * acc;
        }
    }
    return out;
}

namespace reference {

Eigen::VectorXcd forward_transform(const Eigen::Ref<const Eigen::VectorXcd>& samples) {
    const int n = static_cast<int>(samples.size()) - 1;
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(n + 1);
    for (int j = 0; j <= n; ++j) {
        const double x = -std::cos(pi * j / n);
        const double w = (j == 0 || j == n) ? pi / (2.0 * n) : pi / n;
        const double theta = std::acos(x);
        for (int k = 0; k <= n; ++k) {
            out[k] += samples[j] * std::cos(k * theta) * w;
        }
    }
    for (int k = 0; k <= n; ++k) {
        const double ck = (k == 0 || k == n) ? 2.0 : 1.0;
        out[k] *= 2.0 / (pi * ck);
    }
    return out;
}

Eigen::MatrixXcd tau_product_matrix(const Eigen::Ref<const Eigen::VectorXcd>& v) {
    // Scatter T_m T_n = (T_{m+n} + T_{|m-n|}) / 2 over every pair.
    const Eigen::Index n = v.size() - 1;
    Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(n + 1, n + 1);
    for (Eigen::Index m = 0; m <= n; ++m) {
        for (Eigen::Index q = 0; q <= n; ++q) {
            if (m + q <= n) c(m + q, m) += 0.5 * v[q];
            c(std::abs(m - q), m) += 0.5 * v[q];
        }
    }
    return c;
}

namespace {
Eigen::MatrixXcd dense_tau_derivative(Eigen::Index n) {
    Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(n + 1, n + 1);
    for (Eigen::Index k = 0; k <= n; ++k) {
        for (Eigen::Index j = k + 1; j <= n; j += 2) {
            d(k, j) = (k == 0 ? 1.0 : 2.0) * static_cast<double>(j);
        }
    }
    return d;
}
}  // namespace

Eigen::MatrixXcd tau_derivative_left(const Eigen::Ref<const Eigen::MatrixXcd>& x) {
    return dense_tau_derivative(x.rows() - 1) * x;
}

Eigen::MatrixXcd tau_derivative_right(const Eigen::Ref<const Eigen::MatrixXcd>& x) {
    return x * dense_tau_derivative(x.cols() - 1);
}

Eigen::MatrixXcd evaluate_series(const Eigen::Ref<const Eigen::MatrixXcd>& coeffs,
                                 std::span<const double> x) {
    const Eigen::Index len = coeffs.rows();
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(x.size()), coeffs.cols());
    for (std::size_t p = 0; p < x.size(); ++p) {
        double t_prev = 1.0;
        double t_cur = x[p];
        for (Eigen::Index k = 0; k < len; ++k) {
            double tk;
            if (k == 0) {
                tk = 1.0;
            } else if (k == 1) {
                tk = x[p];
            } else {
                tk = 2.0 * x[p] * t_cur - t_prev;
                t_prev = t_cur;
                t_cur = tk;
            }
            for (Eigen::Index s = 0; s < coeffs.cols(); ++s) out(p, s) += tk * coeffs(k, s);
        }
    }
    return out;
}

Eigen::MatrixXcd evaluate_nodal(const Eigen::Ref<const Eigen::MatrixXcd>& samples,
                                std::span<const double> x) {
    // Lagrange basis in product form.
    const Eigen::Index n = samples.rows() - 1;
    std::vector<double> nodes(static_cast<std::size_t>(n) + 1);
    for (Eigen::Index j = 0; j <= n; ++j) nodes[j] = -std::cos(pi * static_cast<double>(j) / n);
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(x.size()), samples.cols());
    for (std::size_t p = 0; p < x.size(); ++p) {
        for (Eigen::Index j = 0; j <= n; ++j) {
            double ell = 1.0;
            for (Eigen::Index i = 0; i <= n; ++i) {
                if (i != j) ell *= (x[p] - nodes[i]) / (nodes[j] - nodes[i]);
            }
            for (Eigen::Index s = 0; s < samples.cols(); ++s) out(p, s) += ell * samples(j, s);
        }
    }
    return out;
}

Eigen::MatrixXcd synthesize_field(const Eigen::Ref<const Eigen::VectorXcd>& kr,
                                  const Eigen::Ref<const Eigen::VectorXcd>& src,
                                  const Eigen::Ref<const Eigen::MatrixXcd>& recv,
                                  std::span<const double> ranges) {
    const cplx i_unit(0.0, 1.0);
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(ranges.size()), recv.rows());
    for (Eigen::Index m = 0; m < kr.size(); ++m) {
        for (std::size_t r = 0; r < ranges.size(); ++r) {
            const cplx phase = std::exp(i_unit * kr[m] * ranges[r]) / std::sqrt(kr[m] * ranges[r]);
            for (Eigen::Index z = 0; z < recv.rows(); ++z) {
                out(r, z) += std::sqrt(2.0 * pi) * src[m] * recv(z, m) * phase;
            }
        }
    }
    return out;
}

}  // namespace reference
}  // namespace atmos::kernels
